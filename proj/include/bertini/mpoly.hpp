#pragma once

// Dense homogeneous polynomials over F_q.
//
// A form of degree d in x_0..x_n is a coefficient vector indexed by a
// MonomialTable: every exponent vector of total degree d, in graded-colex
// order (compare exponents of x_n first, then x_{n-1}, ...). For d = 1 the
// order is x_0, x_1, ..., x_n.

#include "bertini/gf.hpp"
#include "bertini/rng.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bertini::mpoly {

using gf::Elem;
using gf::FieldPtr;
using gf::WorkingField;

std::uint64_t binomial(unsigned n, unsigned k);

class MonomialTable {
public:
    MonomialTable(unsigned n, unsigned d);

    unsigned n() const noexcept { return n_; }
    unsigned d() const noexcept { return d_; }
    std::size_t size() const noexcept { return count_; }

    std::span<const std::uint16_t> exponents(std::size_t k) const {
        return {exps_.data() + k * (n_ + 1), n_ + 1};
    }
    std::uint16_t exponent(std::size_t k, unsigned var) const { return exps_[k * (n_ + 1) + var]; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(std::span<const std::uint16_t> exps) const;

private:
    unsigned n_, d_;
    std::size_t count_;
    std::vector<std::uint16_t> exps_;
    std::map<std::vector<std::uint16_t>, std::size_t> index_;
};

/// Shared, cached table for (n, d).
std::shared_ptr<const MonomialTable> monomials(unsigned n, unsigned d);

/// A form of degree d in n+1 variables with coefficients in `field`.
///
/// Elements of S_d live over the base field (field().degree() == 1); forms over
/// an extension field appear only as factorisation witnesses.
class HomogPoly {
public:
    HomogPoly(FieldPtr field, unsigned n, unsigned d);
    HomogPoly(FieldPtr field, unsigned n, unsigned d, std::vector<Elem> coeffs);

    const WorkingField& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    unsigned n() const noexcept { return n_; }
    unsigned d() const noexcept { return d_; }
    const MonomialTable& table() const noexcept { return *table_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    std::span<const Elem> coeffs() const noexcept { return coeffs_; }
    Elem coeff(std::size_t k) const { return coeffs_[k]; }
    void set_coeff(std::size_t k, Elem c) { coeffs_[k] = c; }
    Elem coeff_of(std::span<const std::uint16_t> exps) const;
    void add_term(std::span<const std::uint16_t> exps, Elem c);

    bool is_zero() const;
    std::size_t term_count() const;

    /// Prints in the parse grammar, monomials in table order, e.g. "x0*x1^2 + x2^3".
    std::string to_string() const;

    friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
        return a.n_ == b.n_ && a.d_ == b.d_ && a.field_->same_field(*b.field_) && a.coeffs_ == b.coeffs_;
    }

private:
    FieldPtr field_;
    unsigned n_, d_;
    std::shared_ptr<const MonomialTable> table_;
    std::vector<Elem> coeffs_;
};

/// Parses `poly := term (('+'|'-') term)*` with `x<i>` variables and INT or `[gfpoly]` coefficients.
/// The degree is inferred from the terms; a text with no variables is a constant (degree 0).
HomogPoly poly_parse(std::string_view text, const FieldPtr& field, unsigned n);

// ---- S_d enumeration -------------------------------------------------------

/// |S_d| = q^binomial(n+d, n); throws Overflow past 2^63.
std::uint64_t s_d_size(std::uint64_t q, unsigned n, unsigned d);

/// Canonical stream over S_d: form number i has coefficient k equal to digit k of i in base q.
class FormSpace {
public:
    /// Throws BudgetExceeded when |S_d| exceeds `budget`.
    FormSpace(FieldPtr field, unsigned n, unsigned d, std::uint64_t budget);

    std::uint64_t size() const noexcept { return size_; }
    std::size_t dimension() const noexcept { return dim_; }
    const FieldPtr& field() const noexcept { return field_; }
    unsigned n() const noexcept { return n_; }
    unsigned d() const noexcept { return d_; }

    void decode(std::uint64_t index, std::span<Elem> coeffs) const;
    HomogPoly form(std::uint64_t index) const;

    struct Slice {
        std::uint64_t begin, end;
    };
    /// k-th of K contiguous, disjoint slices covering [0, size).
    Slice shard(std::uint64_t k, std::uint64_t shards) const;

private:
    FieldPtr field_;
    unsigned n_, d_;
    std::size_t dim_;
    std::uint64_t q_;
    std::uint64_t size_;
};

/// Each coefficient independently uniform over F_q.
HomogPoly poly_sample(const FieldPtr& field, unsigned n, unsigned d, CounterRng& rng);
void sample_coeffs(std::uint64_t q, std::span<Elem> coeffs, CounterRng& rng);

// ---- algebra ----------------------------------------------------------------

/// Formal partial derivative with respect to x_i (degree d-1; the zero form when d = 0).
HomogPoly poly_derive(const HomogPoly& f, unsigned i);

HomogPoly poly_mul(const HomogPoly& f, const HomogPoly& g);
HomogPoly poly_scale(const HomogPoly& f, Elem c);
HomogPoly poly_add(const HomogPoly& f, const HomogPoly& g);

/// f with every coefficient mapped into a working field over the same base.
HomogPoly poly_embed(const HomogPoly& f, const FieldPtr& target);

/// Dehomogenisation at x_j = 1. Dense over the monomials of degree <= d in the
/// remaining n variables, stored through the degree-d table of those variables
/// plus a slack slot that records the missing degree.
class AffinePoly {
public:
    AffinePoly(FieldPtr field, std::vector<unsigned> vars, unsigned d, std::vector<Elem> coeffs);

    const WorkingField& field() const noexcept { return *field_; }
    /// Original homogeneous indices of the affine variables, in order.
    const std::vector<unsigned>& vars() const noexcept { return vars_; }
    unsigned nvars() const noexcept { return static_cast<unsigned>(vars_.size()); }
    unsigned degree_bound() const noexcept { return d_; }
    /// Actual total degree (0 for the zero polynomial).
    unsigned degree() const;
    bool is_constant() const;
    std::span<const Elem> coeffs() const noexcept { return coeffs_; }
    const MonomialTable& table() const noexcept { return *table_; }

    Elem eval(std::span<const Elem> values, const WorkingField& w) const;

    /// Homogenise back with x_chart carrying degree `d` (>= degree()).
    HomogPoly homogenize(unsigned chart, unsigned d) const;

    /// Prints in the variables of vars(), e.g. "x1^2 + x2^3".
    std::string to_string() const;

private:
    FieldPtr field_;
    std::vector<unsigned> vars_;
    unsigned d_;
    std::shared_ptr<const MonomialTable> table_;  // (nvars, d); last slot is slack
    std::vector<Elem> coeffs_;
};

AffinePoly poly_dehomogenize(const HomogPoly& f, unsigned chart);

// ---- evaluation -------------------------------------------------------------

/// f at a point with coordinates in w. The coefficient field of f must be w
/// itself or its base field F_q; otherwise FieldMismatch.
Elem poly_eval(const HomogPoly& f, std::span<const Elem> point, const WorkingField& w);

/// Order-2 Taylor data of x_j^{-d} f at a normalised point (coordinate j = 1,
/// earlier coordinates 0), in the chart's local coordinates u_i = x_i - P_i, i != j.
struct Jet2 {
    Elem value;
    std::vector<Elem> gradient;  // n entries
    std::vector<Elem> quad;      // n(n+1)/2 entries: (0,0),(0,1),...,(0,n-1),(1,1),...

    /// Position of the u_a*u_b coefficient (a <= b) in `quad`.
    static std::size_t quad_index(unsigned n, unsigned a, unsigned b);
};

/// Truncated shift-substitution x -> P + u, dropping total degree > 2.
Jet2 poly_jet2(const HomogPoly& f, std::span<const Elem> point, unsigned lead, const WorkingField& w);

/// Repeated evaluation of a fixed form at many points of one working field.
///
/// Terms with zero coefficient are dropped; the point's coordinate powers are
/// supplied through PowerTable to amortise them across several forms.
class PowerTable {
public:
    PowerTable(unsigned n, unsigned max_degree) : stride_(max_degree + 1), pw_((n + 1) * (max_degree + 1)) {}

    void fill(std::span<const Elem> point, const WorkingField& w);
    Elem get(unsigned var, unsigned exp) const { return pw_[var * stride_ + exp]; }
    const Elem* data() const noexcept { return pw_.data(); }
    unsigned stride() const noexcept { return stride_; }

private:
    unsigned stride_;
    std::vector<Elem> pw_;
};

class CompiledPoly {
public:
    CompiledPoly() = default;
    /// `stride` must match the PowerTable used with eval().
    CompiledPoly(const HomogPoly& f, const WorkingField& w, unsigned stride);

    Elem eval(const PowerTable& pw, const WorkingField& w) const;
    bool is_zero() const noexcept { return terms_.empty(); }

private:
    struct Term {
        Elem coeff;
        std::uint32_t first, count;  // range in offsets_
    };
    std::vector<Term> terms_;
    std::vector<std::uint32_t> offsets_;
};

}  // namespace bertini::mpoly
