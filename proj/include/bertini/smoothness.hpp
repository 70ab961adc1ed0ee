#pragma once

// Smoothness of H_f ∩ X via the Jacobian criterion at closed points.
//
// H_f ∩ X is singular at P ∈ X exactly when f(P) = 0 and the chart-affine
// Jacobian of (closed generators of X, f) at P has rank below n - m + 1.
// Closed points of degree <= B are covered by scanning P^n(F_{q^e}) for e in
// a set E with every k <= B dividing some member of E.

#include "bertini/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bertini::smooth {

using geometry::ClosedPoint;
using geometry::ProjPoint;
using geometry::SubschemeSpec;
using gf::Elem;
using gf::FieldPtr;
using gf::WorkingField;
using mpoly::HomogPoly;

/// d(d-1)^{n-1} when X is an open subset of P^n (no closed generators, m = n); nullopt otherwise.
std::optional<std::uint64_t> certified_bound(unsigned d, const SubschemeSpec& x);

/// {floor(B/2)+1, ..., B}: every k <= B divides one of these.
std::vector<unsigned> cover_set(unsigned B);

/// Largest B' <= B whose scan (P^n over F_{q^e}, e <= B') fits the field and scan guards.
unsigned feasible_bound(const SubschemeSpec& x, unsigned B);

/// Bound used when the caller gives none for a general X.
inline constexpr unsigned default_general_bound = 4;

struct Verdict {
    enum class Kind { Smooth, SingularAt, IsWholeSpace };
    Kind kind = Kind::Smooth;
    unsigned bound = 0;                    // checked degree bound (Smooth)
    bool exact = false;                    // bound >= certified bound
    std::optional<std::uint64_t> certified;
    std::optional<ClosedPoint> witness;    // SingularAt

    bool smooth() const { return kind == Kind::Smooth; }
};

const char* to_string(Verdict::Kind k);

/// Checks H_f ∩ X for many forms f against one X.
///
/// Construction validates X (Jacobian rank n - m at every point of degree
/// <= the largest bound used) unless X is a named P^n / A^n.
class Checker {
public:
    /// requested = nullopt: the certified bound where it exists, else default_general_bound.
    Checker(SubschemeSpec x, std::optional<unsigned> requested = std::nullopt);

    const SubschemeSpec& x() const noexcept { return x_; }

    /// Effective bound and exactness for degree-d forms.
    struct Plan {
        unsigned bound;
        bool exact;
        std::optional<std::uint64_t> certified;
    };
    Plan plan(unsigned d) const;

    /// Least-degree, lexicographically least singular point with deg <= bound, if any.
    std::optional<ClosedPoint> first_singular(const HomogPoly& f, unsigned bound) const;
    Verdict verdict(const HomogPoly& f) const;

    /// Is P (a point over its own working field) a singular point of H_f ∩ X?
    bool singular_at(const HomogPoly& f, const ProjPoint& p) const;

private:
    void ensure_validated(unsigned bound) const;

    SubschemeSpec x_;
    std::optional<unsigned> requested_;
    mutable unsigned validated_ = 0;
};

/// All closed points of degree <= B where H_f ∩ X is singular, by degree then canonical order.
std::vector<ClosedPoint> singular_points(const HomogPoly& f, const SubschemeSpec& x, unsigned B);
std::vector<ClosedPoint> singular_points_serial(const HomogPoly& f, const SubschemeSpec& x, unsigned B);

Verdict is_smooth_intersection(const HomogPoly& f, const SubschemeSpec& x, std::optional<unsigned> B = std::nullopt);

// ---- node classification --------------------------------------------------

struct SingularityClass {
    bool node = false;
    bool degenerate_quadratic_part = false;  // NonNode only: quadratic part nonzero but degenerate
};

/// au^2 + buv + cv^2 nondegenerate: b != 0 in characteristic 2, b^2 - 4ac != 0 otherwise.
bool nondegenerate_binary_quadratic(Elem a, Elem b, Elem c, const WorkingField& w);

/// X must be the projective plane.
SingularityClass classify_singularity(const HomogPoly& f, const SubschemeSpec& x, const ClosedPoint& p);

// ---- positive-dimensional singular locus -----------------------------------

struct LocusReport {
    bool positive_dim = false;
    unsigned witness_e = 0;                 // PositiveDim
    unsigned bound = 0;                     // FiniteUpTo
    std::uint64_t cap = 0;
    std::vector<std::uint64_t> counts;      // singular F_{q^e}-points, e = 1..
};

/// Zero-dimensional singular loci have at most this many geometric points.
std::uint64_t finite_locus_cap(unsigned d, const SubschemeSpec& x);

LocusReport positive_dim_singular_locus(const HomogPoly& f, const SubschemeSpec& x, unsigned B);

// ---- geometric integrality --------------------------------------------------

struct Integrality {
    enum class Kind { GeometricallyIntegral, ReducibleOver, Unknown };
    Kind kind = Kind::Unknown;
    unsigned e = 0;                          // ReducibleOver
    std::vector<unsigned> factor_degrees;    // ReducibleOver
    std::string factor, cofactor;            // ReducibleOver, printed over F_{q^e}
    std::uint64_t candidates = 0;            // factor candidates tried
    std::string note;                        // Unknown
};

const char* to_string(Integrality::Kind k);

inline constexpr std::uint64_t default_integrality_budget = 1u << 20;

/// Searches f = g h with deg g in [1, d/2] over F_{q^e}, e <= d / deg g.
Integrality geometrically_integral(const HomogPoly& f, std::uint64_t budget = default_integrality_budget);

}  // namespace bertini::smooth

namespace bertini::smooth {

/// Density kernel: the points of X over F_{q^e} for a fixed list of e, with
/// the degree-d monomials evaluated at every point when memory allows, so
/// that f(P) for a coefficient vector is a short sum.
class PreparedScan {
public:
    /// `degrees` are scanned in the given order.
    PreparedScan(const SubschemeSpec& x, unsigned d, std::vector<unsigned> degrees);

    unsigned d() const noexcept { return d_; }
    const SubschemeSpec& x() const noexcept { return x_; }
    std::uint64_t point_count() const noexcept { return total_points_; }
    bool tabulated() const noexcept { return tabulated_; }

    struct Scratch;
    Scratch make_scratch() const;

    /// Calls visit(point, working field) at each singular point of H_f ∩ X in
    /// scan order until it returns true; returns whether it stopped early.
    template <class Visit>
    bool visit_singular(std::span<const Elem> coeffs, Scratch& s, Visit&& visit) const;

    bool any_singular(std::span<const Elem> coeffs, Scratch& s) const {
        return visit_singular(coeffs, s, [](const ProjPoint&, const WorkingField&) { return true; });
    }

    struct Level {
        FieldPtr w;
        unsigned e;
        std::vector<Elem> coords;      // points of X, n+1 coordinates each
        std::vector<unsigned> leads;
        std::vector<Elem> monomials;   // point-major, dim S_d values per point (tabulated mode)
        std::size_t size() const { return leads.size(); }
    };

private:
    void begin_level(std::span<const Elem> coeffs, Scratch& s, std::size_t level_index) const;
    // f(P) at point idx of level l; falls back to the compiled form
    Elem value(const Level& l, std::size_t idx, Scratch& s, std::size_t level_index) const;
    bool singular_here(const Level& l, std::size_t idx, Scratch& s, std::size_t level_index) const;

    SubschemeSpec x_;
    unsigned d_;
    std::size_t dim_;
    std::uint64_t total_points_ = 0;
    bool tabulated_ = true;
    bool plain_ = false;  // X has no closed generators
    std::vector<Level> levels_;
    // derivative structure: for monomial k and variable i with e_{k,i} != 0 mod p,
    // the factor e_{k,i} and the exponent vector minus 1_i
    struct DerivTerm {
        std::uint32_t k;
        std::uint16_t var;
        std::uint32_t factor;
    };
    std::vector<DerivTerm> deriv_;
    std::shared_ptr<const mpoly::MonomialTable> table_;

public:
    struct Scratch {
        std::vector<Elem> embedded;            // coefficients in the current level's field
        std::vector<std::uint32_t> nonzero;    // indices of nonzero coefficients
        std::vector<Elem> grad;
        mpoly::PowerTable pw{0, 0};
        std::vector<geometry::LocalSystem> systems;  // X's generators per level
        std::vector<mpoly::CompiledPoly> compiled;   // untabulated mode, per level
        std::vector<std::vector<Elem>> x_rows;
    };
};

template <class Visit>
bool PreparedScan::visit_singular(std::span<const Elem> coeffs, Scratch& s, Visit&& visit) const {
    s.nonzero.clear();
    for (std::size_t k = 0; k < dim_; ++k)
        if (coeffs[k].v != 0) s.nonzero.push_back(static_cast<std::uint32_t>(k));
    if (s.nonzero.empty()) {
        // f = 0: every point of X is singular on H_f ∩ X
        const std::size_t stride = x_.n + 1;
        for (const auto& l : levels_)
            for (std::size_t idx = 0; idx < l.size(); ++idx) {
                ProjPoint p{l.e, {l.coords.begin() + idx * stride, l.coords.begin() + (idx + 1) * stride},
                            l.leads[idx]};
                if (visit(p, *l.w)) return true;
            }
        return false;
    }
    for (std::size_t li = 0; li < levels_.size(); ++li) {
        const Level& l = levels_[li];
        const WorkingField& w = *l.w;
        begin_level(coeffs, s, li);
        for (std::size_t idx = 0; idx < l.size(); ++idx) {
            if (value(l, idx, s, li).v != 0) continue;
            if (!singular_here(l, idx, s, li)) continue;
            const std::size_t stride = x_.n + 1;
            ProjPoint p{l.e, {l.coords.begin() + idx * stride, l.coords.begin() + (idx + 1) * stride}, l.leads[idx]};
            if (visit(p, w)) return true;
        }
    }
    return false;
}

}  // namespace bertini::smooth
