#pragma once

// Inverse zeta values ζ_X(s)^{-1} = ∏_{closed P} (1 - q^{-s deg P}) as exact
// rationals: truncated Euler products from point counts, and closed forms
// for P^n and A^n.

#include "bertini/geometry.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bertini::zeta {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using geometry::SubschemeSpec;

/// "num/den", always with a denominator.
std::string to_string(const Rational& r);
double to_double(const Rational& r);

struct ZetaApprox {
    unsigned s = 0;
    unsigned r = 0;                     // product over closed points of degree < r
    Rational value;
    std::vector<std::uint64_t> terms;   // a_1 .. a_{r-1}
    double stabilization = 0;           // max relative change over the last two increments of r
};

/// ∏_{e < r} (1 - q^{-se})^{a_e}; Divergent when s <= m.
ZetaApprox zeta_inv_truncated(const SubschemeSpec& x, unsigned s, unsigned r);

/// Same product for given closed-point counts a_1, a_2, ... (values for r = 1 .. a.size()+1).
std::vector<Rational> euler_prefixes(std::span<const std::uint64_t> a, std::uint64_t q, unsigned s);

/// ζ_{P^n}(s)^{-1} = ∏_{i=0}^n (1 - q^{i-s}); Divergent when s <= n.
Rational zeta_inv_projective(unsigned n, std::uint64_t q, unsigned s);
/// ζ_{A^n}(s)^{-1} = 1 - q^{n-s}; Divergent when s <= n.
Rational zeta_inv_affine(unsigned n, std::uint64_t q, unsigned s);
/// Closed form for a named space; UnsupportedX otherwise.
Rational zeta_inv_closed_form(const SubschemeSpec& x, unsigned s);

struct DensityPrediction {
    enum class Provenance { ClosedForm, Truncated };
    Provenance provenance = Provenance::ClosedForm;
    Rational value;
    unsigned r = 0;                        // Truncated
    double stabilization = 0;              // Truncated
    std::optional<Rational> jet_factor;    // #T / #H^0(Z, O_Z)
    std::string note;
};

const char* to_string(DensityPrediction::Provenance p);

inline constexpr unsigned default_truncation = 6;

/// ζ_X(m+1)^{-1}: closed form for named spaces, else truncated at r.
DensityPrediction predict_density(const SubschemeSpec& x, unsigned r = default_truncation);

/// (#T / #H^0) · ζ_U(m+1)^{-1} where U is X minus closed points of the given degrees.
DensityPrediction predict_density_with_jets(const SubschemeSpec& x, const std::vector<unsigned>& removed_degrees,
                                            const Integer& t_size, const Integer& h0_size,
                                            unsigned r = default_truncation);

struct TailReport {
    std::vector<ZetaApprox> values;   // r = 2 .. r_max
    std::vector<Rational> deltas;     // values[i] - values[i+1]
    std::vector<double> ratios;       // deltas[i+1] / deltas[i]
};

TailReport tail_report(const SubschemeSpec& x, unsigned s, unsigned r_max);

struct SquarefreeReport {
    std::uint64_t limit = 0;
    std::uint64_t squarefree = 0;
    Rational fraction;
    double target = 0;       // 6 / pi^2
    double difference = 0;   // |fraction - target|
};

SquarefreeReport squarefree_integer_density(std::uint64_t limit);

}  // namespace bertini::zeta
