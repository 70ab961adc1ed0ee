#pragma once

// Quasiprojective X in P^n, rational points over F_{q^e}, closed points and
// the Jacobian check of X itself.
//
// A point of P^n over F_{q^e} is stored normalised: its first nonzero
// coordinate (index `lead`) equals 1. Points are ordered lexicographically by
// coordinates in the field's enumeration order, so (0:...:0:1) comes first
// and the points with lead 0 come last.

#include "bertini/gf.hpp"
#include "bertini/linalg.hpp"
#include "bertini/mpoly.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bertini::geometry {

using gf::Elem;
using gf::FieldDesc;
using gf::FieldPtr;
using gf::WorkingField;
using mpoly::HomogPoly;

enum class SpaceKind { General, Projective, Affine };

/// X = V(closed) minus V(open_nonvanishing), with claimed dimension m.
/// An empty open list imposes nothing; otherwise some listed form must be nonzero.
struct SubschemeSpec {
    std::string name;
    FieldDesc field;
    unsigned n = 0;
    unsigned m = 0;
    std::vector<HomogPoly> closed;
    std::vector<HomogPoly> open_nonvanishing;
    SpaceKind kind = SpaceKind::General;

    FieldPtr base() const { return gf::base_field(field); }
    std::uint64_t q() const { return field.q(); }
};

/// Checks shared field and n, m <= n.
SubschemeSpec make_spec(std::string name, FieldDesc field, unsigned n, unsigned m, std::vector<HomogPoly> closed,
                        std::vector<HomogPoly> open_nonvanishing);

SubschemeSpec projective_space(const FieldDesc& field, unsigned n);
/// A^n as {x0 != 0} in P^n.
SubschemeSpec affine_space(const FieldDesc& field, unsigned n);
/// V(f) in P^n with m = n - 1.
SubschemeSpec hypersurface(const HomogPoly& f, std::string name = {});

/// sum_{i=1}^{n+1} (X_i Y_i^q - X_i^q Y_i) with X_i = x_{i-1}, Y_i = x_{n+i}, a form of degree q+1 on P^{2n+1}.
HomogPoly katz_form(std::uint64_t q, unsigned n);

SubschemeSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SubschemeSpec& x);

/// Built-in names first ("P^n", "Pn", "A^n", "An", "katz(n,q)"), then a JSON file path.
/// Built-in P/A names need q.
SubschemeSpec resolve_space(std::string_view name, std::optional<std::uint64_t> q);

// ---- points -----------------------------------------------------------------

struct ProjPoint {
    unsigned e = 1;
    std::vector<Elem> coords;
    unsigned lead = 0;

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords < b.coords; }
};

struct ClosedPoint {
    unsigned degree = 1;
    ProjPoint rep;

    friend bool operator==(const ClosedPoint&, const ClosedPoint&) = default;
};

/// "(1:g:0)" with coordinates printed in the working field.
std::string format_point(const ProjPoint& p, const WorkingField& w);

/// Normalises arbitrary homogeneous coordinates (not all zero).
ProjPoint normalize(std::vector<Elem> coords, unsigned e, const WorkingField& w);

/// Index <-> point bijection for P^n(F_Q) in canonical order.
class ProjectiveEnumerator {
public:
    ProjectiveEnumerator(unsigned n, std::uint64_t Q);

    std::uint64_t count() const noexcept { return total_; }
    /// Writes the point's coordinates and returns its lead index.
    unsigned decode(std::uint64_t index, std::span<Elem> coords) const;

private:
    unsigned n_;
    std::uint64_t Q_;
    std::vector<std::uint64_t> block_start_;  // by lead, from n down to 0
    std::uint64_t total_;
};

/// #P^n(F_Q), throwing BudgetExceeded above the configured scan limit.
std::uint64_t checked_scan_size(unsigned n, std::uint64_t Q);

ProjPoint frobenius(const ProjPoint& p, const WorkingField& w);
/// Size of the Frobenius orbit (the degree of the closed point through p).
unsigned orbit_size(const ProjPoint& p, const WorkingField& w);
/// Lexicographically least point of the orbit.
ProjPoint orbit_min(const ProjPoint& p, const WorkingField& w);
ClosedPoint closed_point_of(const ProjPoint& p, const WorkingField& w);

/// The generators of X (and optionally extra forms) compiled for one working
/// field. Holds scratch state, so each thread needs its own copy.
class LocalSystem {
public:
    LocalSystem(const SubschemeSpec& x, FieldPtr w, std::span<const HomogPoly> extra = {});

    const WorkingField& field() const noexcept { return *w_; }
    unsigned n() const noexcept { return n_; }

    void load(std::span<const Elem> point);
    bool in_x() const;
    Elem extra_value(std::size_t i) const;

    /// Rank of the chart-affine Jacobian at the loaded point: rows are the
    /// closed generators (then the first `extra_rows` extra forms), columns are
    /// the partials in every coordinate except `lead`.
    std::size_t jacobian_rank(unsigned lead, std::size_t extra_rows, std::size_t stop_at) const;
    /// Same with one explicit extra row given as all n+1 homogeneous partials.
    std::size_t jacobian_rank_with(unsigned lead, std::span<const Elem> gradient, std::size_t stop_at) const;

private:
    FieldPtr w_;
    unsigned n_;
    mpoly::PowerTable pw_;
    std::vector<mpoly::CompiledPoly> closed_, open_, extra_;
    std::vector<std::vector<mpoly::CompiledPoly>> closed_partials_, extra_partials_;
};

/// All F_{q^e}-points of X in canonical order (parallel over fixed chunks).
std::vector<ProjPoint> points_over(const SubschemeSpec& x, unsigned e);
std::vector<ProjPoint> points_over_serial(const SubschemeSpec& x, unsigned e);

std::uint64_t count_points(const SubschemeSpec& x, unsigned e);
std::uint64_t count_points_serial(const SubschemeSpec& x, unsigned e);

/// N[r-1] = #X(F_{q^r}) for r = 1..r_max; closed form for named P^n and A^n.
std::vector<std::uint64_t> count_sequence(const SubschemeSpec& x, unsigned r_max);

/// a[e-1] = (1/e) sum_{d | e} mu(e/d) N[d-1]; InconsistentCounts when not a nonnegative integer.
std::vector<std::uint64_t> closed_counts(std::span<const std::uint64_t> N);

/// One representative (orbit minimum) per closed point of exact degree e, in canonical order.
std::vector<ClosedPoint> closed_points(const SubschemeSpec& x, unsigned e);

int mobius(unsigned n);

// ---- smoothness of X ----------------------------------------------------------

struct SmoothValidation {
    enum class Status { ValidUpTo, NotSmoothAt, WrongRankAt };
    Status status = Status::ValidUpTo;
    unsigned bound = 0;
    std::optional<ClosedPoint> witness;
    std::size_t rank = 0;  // Jacobian rank at the witness
};

const char* to_string(SmoothValidation::Status s);

/// Jacobian rank n - m at every point of X over F_{q^e}, e <= B; first failure in scan order.
SmoothValidation validate_smooth(const SubschemeSpec& x, unsigned B);

}  // namespace bertini::geometry
