#pragma once

// Densities of predicates on S_d, measured exhaustively or by Monte Carlo,
// and the jet map f -> f|_Z for finite fat-point schemes Z.

#include "bertini/geometry.hpp"
#include "bertini/smoothness.hpp"
#include "bertini/zeta.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bertini::sieve {

using geometry::ClosedPoint;
using geometry::SubschemeSpec;
using gf::Elem;
using gf::FieldDesc;
using gf::FieldPtr;
using gf::WorkingField;
using mpoly::HomogPoly;
using zeta::Integer;
using zeta::Rational;

// ---- jets -------------------------------------------------------------------

/// A closed point with jet order 1 (value) or 2 (value and chart gradient).
struct JetPoint {
    ClosedPoint point;
    unsigned order = 1;
};

/// Z: distinct closed points of P^n with jet orders. A jet vector lists, per
/// point in order, the value of x_lead^{-d} f and (order 2) its partials in the
/// chart coordinates, each an element of the point's residue field.
class JetScheme {
public:
    /// Throws PointsNotDistinct, InvalidArgument (empty, bad order or point).
    JetScheme(FieldDesc field, unsigned n, std::vector<JetPoint> points);

    /// Every closed point of X of degree e, with the given order.
    static JetScheme closed_points_of(const SubschemeSpec& x, unsigned e, unsigned order);

    const FieldDesc& field() const noexcept { return field_; }
    unsigned n() const noexcept { return n_; }
    const std::vector<JetPoint>& points() const noexcept { return points_; }

    std::size_t entries() const noexcept { return entry_field_.size(); }
    std::size_t offset(std::size_t point) const { return offsets_[point]; }
    std::size_t width(std::size_t point) const { return points_[point].order == 2 ? n_ + 1 : 1; }
    const WorkingField& entry_field(std::size_t j) const { return *fields_[entry_field_[j]]; }
    const FieldPtr& point_field(std::size_t point) const { return fields_[point]; }

    /// Dimension of H^0(Z, O_Z) over F_q.
    unsigned length() const noexcept { return length_; }
    Integer h0_size() const;

    /// Jet vector number `index` in the canonical order of H^0 (index < h0_size()).
    void decode(std::uint64_t index, std::vector<Elem>& out) const;

    std::string describe() const;

private:
    FieldDesc field_;
    unsigned n_;
    std::vector<JetPoint> points_;
    std::vector<FieldPtr> fields_;            // per point
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> entry_field_;  // per entry: point index
    unsigned length_ = 0;
};

/// f -> jets of f on Z for forms of degree d, tabulated per monomial.
class JetMap {
public:
    JetMap(const JetScheme& z, unsigned d);

    const JetScheme& scheme() const noexcept { return z_; }
    unsigned d() const noexcept { return d_; }
    std::size_t dimension() const noexcept { return dim_; }

    void apply(std::span<const Elem> coeffs, std::vector<Elem>& out) const;
    /// Jet vector of the k-th monomial.
    std::span<const Elem> monomial_jet(std::size_t k) const {
        return {table_.data() + k * z_.entries(), z_.entries()};
    }

    /// Matrix over F_p: one row per F_p-coordinate of S_d (monomial k, digit j
    /// at row k*a + j), one column per F_p-digit of the jet vector.
    linalg::Matrix prime_matrix() const;
    /// Jet vector -> its F_p digits, in prime_matrix() column order.
    std::vector<Elem> prime_digits(std::span<const Elem> jet) const;

private:
    JetScheme z_;
    unsigned d_;
    std::size_t dim_;
    std::vector<Elem> table_;  // dim x entries
};

/// Matrix over F_p of an F_q-linear map S_d -> ⊕_j fields[j], given by the
/// images of the monomials (table: dim rows of fields.size() values). Row
/// k*a + j is the image of g^j x^k expanded into F_p digits.
linalg::Matrix prime_matrix(const FieldDesc& base, std::size_t dim, std::span<const Elem> table,
                            const std::vector<const WorkingField*>& fields);
/// Rank over F_q of a map given by prime_matrix().
std::size_t rank_over_base(const FieldDesc& base, const linalg::Matrix& m);

struct JetRank {
    std::size_t rows = 0;      // F_q-length of Z
    std::size_t cols = 0;      // dim S_d
    std::size_t rank = 0;      // over F_q
    bool surjective = false;
    unsigned threshold = 0;    // length - 1: surjective whenever d >= threshold
};

/// Rank of S_d -> H^0(Z, O_Z); InvariantBreach if not surjective at d >= threshold.
JetRank jet_map_rank(const JetScheme& z, unsigned d);

/// T ⊆ H^0(Z, O_Z): a membership test with a known size; the member list is
/// materialised in canonical order when H^0 is small.
class JetSet {
public:
    using Member = std::function<bool(const JetScheme&, std::span<const Elem>)>;

    static constexpr std::uint64_t max_explicit = std::uint64_t{1} << 16;

    static JetSet all(const JetScheme& z);
    /// Value zero at every point.
    static JetSet vanishing(const JetScheme& z);
    /// Value zero and nonzero gradient at every point (all points of order 2).
    static JetSet smooth_through(const JetScheme& z);
    static JetSet listed(const JetScheme& z, std::vector<std::vector<Elem>> members, std::string description);
    /// Counted by enumerating H^0; InvalidArgument when #H^0 > max_explicit.
    static JetSet where(const JetScheme& z, Member member, std::string description);

    const Integer& size() const noexcept { return size_; }
    bool contains(std::span<const Elem> jet) const;
    const std::string& description() const noexcept { return description_; }
    /// Members in canonical order, when materialised.
    const std::optional<std::vector<std::vector<Elem>>>& members() const noexcept { return members_; }

    /// A uniform member: from the list, or by rejection from H^0.
    void sample(CounterRng& rng, std::vector<Elem>& out) const;

private:
    JetSet(std::shared_ptr<const JetScheme> z, Member member, Integer size, std::string description);
    void materialise();

    std::shared_ptr<const JetScheme> z_;
    Member member_;
    Integer size_;
    std::string description_;
    std::optional<std::vector<std::vector<Elem>>> members_;
};

// ---- predicates -------------------------------------------------------------

struct Predicate;

/// H_f ∩ X smooth at every closed point of degree <= bound (nullopt: the
/// certified bound where it exists).
struct SmoothIntersection {
    SubschemeSpec x;
    std::optional<unsigned> bound;
};
/// H_f ∩ X smooth at every closed point of degree < r.
struct SmoothAtPointsBelow {
    SubschemeSpec x;
    unsigned r = 1;
};
/// Plane curve whose singular points of degree <= bound are all nodes.
struct AtWorstNodes {
    std::optional<unsigned> bound;
};
/// geometrically_integral(f) returns GeometricallyIntegral.
struct GeomIntegral {
    std::uint64_t budget = smooth::default_integrality_budget;
};
struct JetInSet {
    JetScheme z;
    JetSet t;
};
struct And {
    std::vector<Predicate> parts;
};
struct Not {
    std::shared_ptr<const Predicate> inner;
};
struct Always {};

struct Predicate {
    std::variant<SmoothIntersection, SmoothAtPointsBelow, AtWorstNodes, GeomIntegral, JetInSet, And, Not, Always> v;
};

Predicate negate(Predicate p);
std::string describe(const Predicate& p);

/// A predicate prepared for forms of one degree over one field. Thread-safe;
/// each thread needs its own State.
class Evaluator {
public:
    Evaluator(const Predicate& p, const FieldDesc& field, unsigned n, unsigned d);
    ~Evaluator();

    struct NodeState;
    class State {
    public:
        State();
        State(State&&) noexcept;
        State& operator=(State&&) noexcept;
        ~State();

    private:
        friend class Evaluator;
        std::unique_ptr<NodeState> root_;
    };

    State make_state() const;
    bool test(std::span<const Elem> coeffs, State& s) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

// ---- densities --------------------------------------------------------------

struct Interval {
    double lo = 0, hi = 0;
};

/// Wilson score interval at 95%.
Interval wilson95(std::uint64_t hits, std::uint64_t trials);

struct DensityEstimate {
    enum class Mode { Exhaustive, MonteCarlo };
    Mode mode = Mode::Exhaustive;
    unsigned d = 0;
    std::uint64_t hits = 0;
    std::uint64_t total = 0;             // forms examined
    Rational fraction;                   // hits / total (exact in both modes)
    Interval ci95;                       // degenerate in exhaustive mode
    std::optional<std::uint64_t> seed;   // MonteCarlo
    std::string predicate;
    // conditioned densities: fraction is the share of S_d with f|_Z in T and
    // the predicate, i.e. weight * conditional
    std::optional<Rational> weight;      // #T / #H^0
    std::optional<Rational> conditional;

    double value() const { return zeta::to_double(fraction); }
};

const char* to_string(DensityEstimate::Mode m);

/// Exact fraction of S_d satisfying pred; BudgetExceeded above config::exhaustive_budget().
DensityEstimate exhaustive_density(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred);
DensityEstimate exhaustive_density_serial(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred);

/// Trial i draws its form from CounterRng(seed, i).
DensityEstimate mc_density(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred,
                           std::uint64_t trials, std::uint64_t seed);
DensityEstimate mc_density_serial(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred,
                                  std::uint64_t trials, std::uint64_t seed);

/// Density of pred among f with f|_Z in T, enumerating (or sampling) the affine
/// solution spaces of the jet map. NotSurjective, EmptyT.
struct ConditionOptions {
    DensityEstimate::Mode mode = DensityEstimate::Mode::Exhaustive;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};
DensityEstimate conditioned_density(const JetSet& t, const JetScheme& z, unsigned d, const Predicate& pred,
                                    const ConditionOptions& opt = {});

struct PointFraction {
    Rational fraction;        // q^{-codim}
    std::size_t codim = 0;    // rank of f -> (f(P), df|T_P X) over F_q
    Rational closed_form;     // q^{-(m+1)e}
    bool hypothesis = false;  // e <= d / (m+1)
    std::string warning;
};

/// Share of f in S_d with H_f ∩ X singular at P (X smooth at P, P in X).
PointFraction singular_fraction_at_point(const SubschemeSpec& x, const ClosedPoint& p, unsigned d);

// ---- sweeps -----------------------------------------------------------------

std::vector<DensityEstimate> density_sweep(const FieldDesc& field, unsigned n, const std::vector<unsigned>& degrees,
                                           const Predicate& pred, DensityEstimate::Mode mode, std::uint64_t trials,
                                           std::uint64_t seed);

/// Columns d, mode, trials, hits, total, fraction, ci_lo, ci_hi, predicate, seed.
std::string sweep_csv(const std::vector<DensityEstimate>& rows);

}  // namespace bertini::sieve
