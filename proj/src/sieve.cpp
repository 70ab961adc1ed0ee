#include "bertini/sieve.hpp"

#include "bertini/config.hpp"
#include "bertini/error.hpp"
#include "bertini/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace bertini::sieve {

using smooth::PreparedScan;

namespace {

constexpr std::uint64_t kMaxJetCells = std::uint64_t{1} << 26;

bool same_field(const FieldDesc& a, const FieldDesc& b) { return a.p == b.p && a.a == b.a; }

FieldPtr prime_field(const FieldDesc& f) { return gf::base_field(gf::field_make(f.p, 1)); }

Integer ipow(std::uint64_t b, std::uint64_t e) { return boost::multiprecision::pow(Integer(b), static_cast<unsigned>(e)); }

// Monomial x^alpha and its partials at a normalised point, over w.
struct MonomialJet {
    Elem value;
    std::vector<Elem> partials;  // n+1 entries
};

MonomialJet jet_of_monomial(std::span<const std::uint16_t> alpha, std::span<const Elem> c, const WorkingField& w) {
    const std::size_t n1 = alpha.size();
    MonomialJet out{WorkingField::one(), std::vector<Elem>(n1, Elem{0})};
    for (std::size_t i = 0; i < n1; ++i)
        if (alpha[i]) out.value = w.mul(out.value, w.pow(c[i], alpha[i]));
    for (std::size_t v = 0; v < n1; ++v) {
        if (alpha[v] == 0 || alpha[v] % w.characteristic() == 0) continue;
        Elem t = w.from_int(alpha[v]);
        for (std::size_t i = 0; i < n1; ++i) {
            const unsigned ex = alpha[i] - (i == v ? 1 : 0);
            if (ex) t = w.mul(t, w.pow(c[i], ex));
        }
        out.partials[v] = t;
    }
    return out;
}

}  // namespace

linalg::Matrix prime_matrix(const FieldDesc& base, std::size_t dim, std::span<const Elem> table,
                            const std::vector<const WorkingField*>& fields) {
    const std::size_t entries = fields.size();
    std::size_t cols = 0;
    for (auto* w : fields) cols += w->prime_degree();
    const unsigned a = base.a;
    linalg::Matrix m(dim * a, cols);
    std::uint64_t pj = 1;
    for (unsigned j = 0; j < a; ++j, pj *= base.p) {
        const Elem c{static_cast<std::uint32_t>(pj)};
        for (std::size_t k = 0; k < dim; ++k) {
            auto row = m.row(k * a + j);
            std::size_t col = 0;
            for (std::size_t e = 0; e < entries; ++e) {
                const WorkingField& w = *fields[e];
                const Elem v = w.mul(w.embed(c), table[k * entries + e]);
                for (unsigned i = 0; i < w.prime_degree(); ++i) row[col++] = Elem{w.digit(v, i)};
            }
        }
    }
    return m;
}

std::size_t rank_over_base(const FieldDesc& base, const linalg::Matrix& m) {
    const std::size_t r = linalg::rank(m, *prime_field(base));
    require(r % base.a == 0, ErrorKind::InvariantBreach, "F_p-rank of an F_q-linear map not divisible by [F_q:F_p]");
    return r / base.a;
}

namespace {

linalg::Matrix transpose(const linalg::Matrix& m) {
    linalg::Matrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
    return t;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// JetScheme

JetScheme::JetScheme(FieldDesc field, unsigned n, std::vector<JetPoint> points)
    : field_(std::move(field)), n_(n), points_(std::move(points)) {
    require(!points_.empty(), ErrorKind::InvalidArgument, "Z has no points");
    std::set<std::pair<unsigned, std::vector<Elem>>> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        auto& jp = points_[i];
        require(jp.order == 1 || jp.order == 2, ErrorKind::InvalidArgument, "jet order must be 1 or 2");
        require(jp.point.rep.coords.size() == n_ + 1, ErrorKind::InvalidArgument, "point has the wrong dimension");
        require(jp.point.degree >= 1 && jp.point.rep.e == jp.point.degree, ErrorKind::InvalidArgument,
                "point representative must live over its residue field");
        auto w = gf::field_extend(field_, jp.point.degree);
        for (Elem c : jp.point.rep.coords) require(w->contains(c), ErrorKind::CoefficientNotInField, "bad coordinate");
        auto p = geometry::normalize(jp.point.rep.coords, jp.point.degree, *w);
        require(geometry::orbit_size(p, *w) == jp.point.degree, ErrorKind::InvalidArgument,
                "point " + geometry::format_point(p, *w) + " is not of degree " + std::to_string(jp.point.degree));
        p = geometry::orbit_min(p, *w);
        jp.point.rep = p;
        if (!seen.emplace(jp.point.degree, p.coords).second)
            fail(ErrorKind::PointsNotDistinct, "closed point " + geometry::format_point(p, *w) + " listed twice");
        fields_.push_back(w);
        offsets_.push_back(entry_field_.size());
        for (std::size_t k = 0; k < width(i); ++k) entry_field_.push_back(static_cast<std::uint32_t>(i));
        length_ += static_cast<unsigned>(width(i)) * jp.point.degree;
    }
}

JetScheme JetScheme::closed_points_of(const SubschemeSpec& x, unsigned e, unsigned order) {
    std::vector<JetPoint> pts;
    for (auto& p : geometry::closed_points(x, e)) pts.push_back(JetPoint{std::move(p), order});
    return JetScheme(x.field, x.n, std::move(pts));
}

Integer JetScheme::h0_size() const { return ipow(field_.q(), length_); }

void JetScheme::decode(std::uint64_t index, std::vector<Elem>& out) const {
    out.resize(entries());
    for (std::size_t j = 0; j < entries(); ++j) {
        const std::uint64_t Q = entry_field(j).size();
        out[j] = Elem{static_cast<std::uint32_t>(index % Q)};
        index /= Q;
    }
}

std::string JetScheme::describe() const {
    std::ostringstream s;
    s << "{";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) s << ", ";
        s << geometry::format_point(points_[i].point.rep, *fields_[i]) << "^" << points_[i].order;
    }
    s << "}";
    return s.str();
}

// ---------------------------------------------------------------------------
// JetMap

JetMap::JetMap(const JetScheme& z, unsigned d) : z_(z), d_(d), dim_(mpoly::binomial(z.n() + d, z.n())) {
    const std::size_t E = z_.entries();
    require(dim_ * E <= kMaxJetCells, ErrorKind::BudgetExceeded, "jet table too large");
    table_.resize(dim_ * E);
    const auto& tab = *mpoly::monomials(z_.n(), d);
    for (std::size_t i = 0; i < z_.points().size(); ++i) {
        const auto& rep = z_.points()[i].point.rep;
        const WorkingField& w = *z_.point_field(i);
        const std::size_t off = z_.offset(i);
        for (std::size_t k = 0; k < dim_; ++k) {
            auto mj = jet_of_monomial(tab.exponents(k), rep.coords, w);
            Elem* row = table_.data() + k * E + off;
            row[0] = mj.value;
            if (z_.width(i) > 1) {
                std::size_t c = 1;
                for (unsigned v = 0; v <= z_.n(); ++v)
                    if (v != rep.lead) row[c++] = mj.partials[v];
            }
        }
    }
}

void JetMap::apply(std::span<const Elem> coeffs, std::vector<Elem>& out) const {
    const std::size_t E = z_.entries();
    out.assign(E, Elem{0});
    for (std::size_t k = 0; k < dim_; ++k) {
        if (coeffs[k].v == 0) continue;
        const Elem* row = table_.data() + k * E;
        for (std::size_t i = 0; i < z_.points().size(); ++i) {
            const WorkingField& w = *z_.point_field(i);
            const Elem c = w.embed(coeffs[k]);
            for (std::size_t j = z_.offset(i); j < z_.offset(i) + z_.width(i); ++j)
                out[j] = w.add(out[j], w.mul(c, row[j]));
        }
    }
}

linalg::Matrix JetMap::prime_matrix() const {
    std::vector<const WorkingField*> fields;
    for (std::size_t j = 0; j < z_.entries(); ++j) fields.push_back(&z_.entry_field(j));
    return sieve::prime_matrix(z_.field(), dim_, table_, fields);
}

std::vector<Elem> JetMap::prime_digits(std::span<const Elem> jet) const {
    std::vector<Elem> out;
    for (std::size_t j = 0; j < z_.entries(); ++j) {
        const WorkingField& w = z_.entry_field(j);
        for (unsigned i = 0; i < w.prime_degree(); ++i) out.push_back(Elem{w.digit(jet[j], i)});
    }
    return out;
}

JetRank jet_map_rank(const JetScheme& z, unsigned d) {
    JetMap jm(z, d);
    JetRank r;
    r.rows = z.length();
    r.cols = jm.dimension();
    r.rank = rank_over_base(z.field(), jm.prime_matrix());
    r.surjective = r.rank == r.rows;
    r.threshold = z.length() - 1;
    require(r.surjective || d < r.threshold, ErrorKind::InvariantBreach,
            "jet map not surjective at d = " + std::to_string(d) + " >= length - 1");
    return r;
}

// ---------------------------------------------------------------------------
// JetSet

JetSet::JetSet(std::shared_ptr<const JetScheme> z, Member member, Integer size, std::string description)
    : z_(std::move(z)), member_(std::move(member)), size_(std::move(size)), description_(std::move(description)) {}

void JetSet::materialise() {
    if (z_->h0_size() > max_explicit) return;
    const auto h0 = z_->h0_size().convert_to<std::uint64_t>();
    std::vector<std::vector<Elem>> list;
    std::vector<Elem> jet;
    for (std::uint64_t i = 0; i < h0; ++i) {
        z_->decode(i, jet);
        if (member_(*z_, jet)) list.push_back(jet);
    }
    require(Integer(list.size()) == size_, ErrorKind::InvariantBreach, "jet set size disagrees with its count");
    members_ = std::move(list);
}

JetSet JetSet::all(const JetScheme& z) {
    JetSet t(std::make_shared<const JetScheme>(z), [](const JetScheme&, std::span<const Elem>) { return true; },
             z.h0_size(), "all");
    t.materialise();
    return t;
}

JetSet JetSet::vanishing(const JetScheme& z) {
    unsigned free_len = 0;
    for (std::size_t i = 0; i < z.points().size(); ++i)
        free_len += static_cast<unsigned>(z.width(i) - 1) * z.points()[i].point.degree;
    JetSet t(
        std::make_shared<const JetScheme>(z),
        [](const JetScheme& s, std::span<const Elem> jet) {
            for (std::size_t i = 0; i < s.points().size(); ++i)
                if (jet[s.offset(i)].v != 0) return false;
            return true;
        },
        ipow(z.field().q(), free_len), "vanishing");
    t.materialise();
    return t;
}

JetSet JetSet::smooth_through(const JetScheme& z) {
    Integer size = 1;
    for (std::size_t i = 0; i < z.points().size(); ++i) {
        require(z.points()[i].order == 2, ErrorKind::InvalidArgument, "smooth_through needs order-2 points");
        size *= ipow(z.point_field(i)->size(), z.n()) - 1;
    }
    JetSet t(
        std::make_shared<const JetScheme>(z),
        [](const JetScheme& s, std::span<const Elem> jet) {
            for (std::size_t i = 0; i < s.points().size(); ++i) {
                const std::size_t o = s.offset(i);
                if (jet[o].v != 0) return false;
                bool nonzero = false;
                for (std::size_t j = o + 1; j < o + s.width(i); ++j) nonzero |= jet[j].v != 0;
                if (!nonzero) return false;
            }
            return true;
        },
        std::move(size), "smooth_through");
    t.materialise();
    return t;
}

JetSet JetSet::listed(const JetScheme& z, std::vector<std::vector<Elem>> members, std::string description) {
    auto key = [](const std::vector<Elem>& v) { return std::vector<Elem>(v.rbegin(), v.rend()); };
    for (const auto& m : members) {
        require(m.size() == z.entries(), ErrorKind::InvalidArgument, "jet vector has the wrong length");
        for (std::size_t j = 0; j < m.size(); ++j)
            require(z.entry_field(j).contains(m[j]), ErrorKind::CoefficientNotInField, "jet entry not in its field");
    }
    std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    members.erase(std::unique(members.begin(), members.end()), members.end());
    auto shared = std::make_shared<const std::set<std::vector<Elem>>>(members.begin(), members.end());
    JetSet t(
        std::make_shared<const JetScheme>(z),
        [shared](const JetScheme&, std::span<const Elem> jet) {
            return shared->count(std::vector<Elem>(jet.begin(), jet.end())) > 0;
        },
        Integer(members.size()), std::move(description));
    t.members_ = std::move(members);
    return t;
}

JetSet JetSet::where(const JetScheme& z, Member member, std::string description) {
    require(z.h0_size() <= max_explicit, ErrorKind::InvalidArgument, "H^0 too large to count T by enumeration");
    const auto h0 = z.h0_size().convert_to<std::uint64_t>();
    std::uint64_t count = 0;
    std::vector<Elem> jet;
    for (std::uint64_t i = 0; i < h0; ++i) {
        z.decode(i, jet);
        count += member(z, jet) ? 1 : 0;
    }
    JetSet t(std::make_shared<const JetScheme>(z), std::move(member), Integer(count), std::move(description));
    t.materialise();
    return t;
}

bool JetSet::contains(std::span<const Elem> jet) const { return member_(*z_, jet); }

void JetSet::sample(CounterRng& rng, std::vector<Elem>& out) const {
    require(size_ > 0, ErrorKind::EmptyT, "T is empty");
    if (members_) {
        out = (*members_)[rng.below(members_->size())];
        return;
    }
    out.resize(z_->entries());
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = Elem{static_cast<std::uint32_t>(rng.below(z_->entry_field(j).size()))};
        if (member_(*z_, out)) return;
    }
    fail(ErrorKind::BudgetExceeded, "rejection sampling from T did not succeed");
}

// ---------------------------------------------------------------------------
// predicates

Predicate negate(Predicate p) { return Predicate{Not{std::make_shared<const Predicate>(std::move(p))}}; }

namespace {

std::string bound_text(const std::optional<unsigned>& b) { return b ? std::to_string(*b) : "auto"; }

}  // namespace

std::string describe(const Predicate& p) {
    struct V {
        std::string operator()(const SmoothIntersection& s) const {
            return "smooth(X=" + s.x.name + ",B=" + bound_text(s.bound) + ")";
        }
        std::string operator()(const SmoothAtPointsBelow& s) const {
            return "smooth_below(X=" + s.x.name + ",r=" + std::to_string(s.r) + ")";
        }
        std::string operator()(const AtWorstNodes& s) const { return "nodes(B=" + bound_text(s.bound) + ")"; }
        std::string operator()(const GeomIntegral& s) const {
            return "integral(budget=" + std::to_string(s.budget) + ")";
        }
        std::string operator()(const JetInSet& s) const {
            return "jets(Z=" + s.z.describe() + ",T=" + s.t.description() + ")";
        }
        std::string operator()(const And& s) const {
            std::string out = "and(";
            for (std::size_t i = 0; i < s.parts.size(); ++i) out += (i ? "," : "") + describe(s.parts[i]);
            return out + ")";
        }
        std::string operator()(const Not& s) const { return "not(" + describe(*s.inner) + ")"; }
        std::string operator()(const Always&) const { return "always"; }
    };
    return std::visit(V{}, p.v);
}

struct Evaluator::NodeState {
    virtual ~NodeState() = default;
};

struct Evaluator::Node {
    virtual ~Node() = default;
    virtual std::unique_ptr<NodeState> make_state() const = 0;
    virtual bool test(std::span<const Elem> coeffs, NodeState& s) const = 0;
};

namespace {

using Node = Evaluator::Node;
using NodeState = Evaluator::NodeState;

bool all_zero(std::span<const Elem> c) {
    return std::all_of(c.begin(), c.end(), [](Elem e) { return e.v == 0; });
}

struct ScanState : NodeState {
    PreparedScan::Scratch scratch;
    explicit ScanState(PreparedScan::Scratch s) : scratch(std::move(s)) {}
};

// No singular point in the scanned degrees. `vacuous`: no condition at all, so f = 0 passes too.
struct ScanNode : Node {
    PreparedScan scan;
    bool vacuous;
    ScanNode(const SubschemeSpec& x, unsigned d, std::vector<unsigned> degrees, bool vacuous_ = false)
        : scan(x, d, std::move(degrees)), vacuous(vacuous_) {}
    std::unique_ptr<NodeState> make_state() const override {
        return std::make_unique<ScanState>(scan.make_scratch());
    }
    bool test(std::span<const Elem> coeffs, NodeState& s) const override {
        if (vacuous) return true;
        if (all_zero(coeffs)) return false;
        return !scan.any_singular(coeffs, static_cast<ScanState&>(s).scratch);
    }
};

struct NodesState : NodeState {
    PreparedScan::Scratch scratch;
    HomogPoly f;
    NodesState(PreparedScan::Scratch s, HomogPoly g) : scratch(std::move(s)), f(std::move(g)) {}
};

struct NodesNode : Node {
    PreparedScan scan;
    FieldPtr base;
    unsigned d;
    NodesNode(const SubschemeSpec& x, unsigned d_, std::vector<unsigned> degrees)
        : scan(x, d_, std::move(degrees)), base(x.base()), d(d_) {}
    std::unique_ptr<NodeState> make_state() const override {
        return std::make_unique<NodesState>(scan.make_scratch(), HomogPoly(base, 2, d));
    }
    bool test(std::span<const Elem> coeffs, NodeState& ns) const override {
        if (all_zero(coeffs)) return false;
        auto& s = static_cast<NodesState&>(ns);
        for (std::size_t k = 0; k < coeffs.size(); ++k) s.f.set_coeff(k, coeffs[k]);
        const bool bad = scan.visit_singular(coeffs, s.scratch, [&](const geometry::ProjPoint& p, const WorkingField& w) {
            auto jet = mpoly::poly_jet2(s.f, p.coords, p.lead, w);
            return !smooth::nondegenerate_binary_quadratic(jet.quad[0], jet.quad[1], jet.quad[2], w);
        });
        return !bad;
    }
};

struct PolyState : NodeState {
    HomogPoly f;
    explicit PolyState(HomogPoly g) : f(std::move(g)) {}
};

struct IntegralNode : Node {
    FieldPtr base;
    unsigned n, d;
    std::uint64_t budget;
    IntegralNode(FieldPtr b, unsigned n_, unsigned d_, std::uint64_t budget_) : base(std::move(b)), n(n_), d(d_), budget(budget_) {}
    std::unique_ptr<NodeState> make_state() const override { return std::make_unique<PolyState>(HomogPoly(base, n, d)); }
    bool test(std::span<const Elem> coeffs, NodeState& ns) const override {
        if (all_zero(coeffs) || d == 0) return false;
        auto& s = static_cast<PolyState&>(ns);
        for (std::size_t k = 0; k < coeffs.size(); ++k) s.f.set_coeff(k, coeffs[k]);
        return smooth::geometrically_integral(s.f, budget).kind == smooth::Integrality::Kind::GeometricallyIntegral;
    }
};

struct JetState : NodeState {
    std::vector<Elem> jet;
};

struct JetNode : Node {
    JetMap map;
    JetSet t;
    JetNode(const JetInSet& j, unsigned d) : map(j.z, d), t(j.t) {}
    std::unique_ptr<NodeState> make_state() const override { return std::make_unique<JetState>(); }
    bool test(std::span<const Elem> coeffs, NodeState& ns) const override {
        auto& s = static_cast<JetState&>(ns);
        map.apply(coeffs, s.jet);
        return t.contains(s.jet);
    }
};

struct ListState : NodeState {
    std::vector<std::unique_ptr<NodeState>> parts;
};

struct AndNode : Node {
    std::vector<std::shared_ptr<const Node>> parts;
    std::unique_ptr<NodeState> make_state() const override {
        auto s = std::make_unique<ListState>();
        for (const auto& p : parts) s->parts.push_back(p->make_state());
        return s;
    }
    bool test(std::span<const Elem> coeffs, NodeState& ns) const override {
        auto& s = static_cast<ListState&>(ns);
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (!parts[i]->test(coeffs, *s.parts[i])) return false;
        return true;
    }
};

struct NotNode : Node {
    std::shared_ptr<const Node> inner;
    std::unique_ptr<NodeState> make_state() const override { return inner->make_state(); }
    bool test(std::span<const Elem> coeffs, NodeState& s) const override { return !inner->test(coeffs, s); }
};

struct AlwaysNode : Node {
    std::unique_ptr<NodeState> make_state() const override { return std::make_unique<NodeState>(); }
    bool test(std::span<const Elem>, NodeState&) const override { return true; }
};

void check_space(const SubschemeSpec& x, const FieldDesc& field, unsigned n) {
    require(same_field(x.field, field), ErrorKind::FieldMismatch, "predicate X lives over a different field");
    require(x.n == n, ErrorKind::FieldMismatch, "predicate X lives in a different ambient space");
}

std::shared_ptr<const Node> build(const Predicate& p, const FieldDesc& field, unsigned n, unsigned d) {
    struct V {
        const FieldDesc& field;
        unsigned n, d;
        std::shared_ptr<const Node> operator()(const SmoothIntersection& s) const {
            check_space(s.x, field, n);
            smooth::Checker checker(s.x, s.bound);
            return std::make_shared<ScanNode>(s.x, d, smooth::cover_set(checker.plan(d).bound));
        }
        std::shared_ptr<const Node> operator()(const SmoothAtPointsBelow& s) const {
            check_space(s.x, field, n);
            require(s.r >= 1, ErrorKind::InvalidArgument, "r must be at least 1");
            if (s.r == 1) return std::make_shared<ScanNode>(s.x, d, std::vector<unsigned>{}, true);
            smooth::Checker checker(s.x, s.r - 1);
            require(smooth::feasible_bound(s.x, s.r - 1) == s.r - 1, ErrorKind::BudgetExceeded,
                    "points of degree < r exceed the scan limits");
            return std::make_shared<ScanNode>(s.x, d, smooth::cover_set(s.r - 1));
        }
        std::shared_ptr<const Node> operator()(const AtWorstNodes& s) const {
            require(n == 2, ErrorKind::UnsupportedX, "node classification is implemented for plane curves only");
            auto x = geometry::projective_space(field, 2);
            smooth::Checker checker(x, s.bound);
            return std::make_shared<NodesNode>(x, d, smooth::cover_set(checker.plan(d).bound));
        }
        std::shared_ptr<const Node> operator()(const GeomIntegral& s) const {
            return std::make_shared<IntegralNode>(gf::base_field(field), n, d, s.budget);
        }
        std::shared_ptr<const Node> operator()(const JetInSet& s) const {
            require(same_field(s.z.field(), field) && s.z.n() == n, ErrorKind::FieldMismatch,
                    "Z lives in a different space");
            return std::make_shared<JetNode>(s, d);
        }
        std::shared_ptr<const Node> operator()(const And& s) const {
            auto node = std::make_shared<AndNode>();
            for (const auto& part : s.parts) node->parts.push_back(build(part, field, n, d));
            return node;
        }
        std::shared_ptr<const Node> operator()(const Not& s) const {
            auto node = std::make_shared<NotNode>();
            node->inner = build(*s.inner, field, n, d);
            return node;
        }
        std::shared_ptr<const Node> operator()(const Always&) const { return std::make_shared<AlwaysNode>(); }
    };
    return std::visit(V{field, n, d}, p.v);
}

}  // namespace

Evaluator::State::State() = default;
Evaluator::State::State(State&&) noexcept = default;
Evaluator::State& Evaluator::State::operator=(State&&) noexcept = default;
Evaluator::State::~State() = default;

Evaluator::Evaluator(const Predicate& p, const FieldDesc& field, unsigned n, unsigned d) : root_(build(p, field, n, d)) {}
Evaluator::~Evaluator() = default;

Evaluator::State Evaluator::make_state() const {
    State s;
    s.root_ = root_->make_state();
    return s;
}

bool Evaluator::test(std::span<const Elem> coeffs, State& s) const { return root_->test(coeffs, *s.root_); }

// ---------------------------------------------------------------------------
// densities

Interval wilson95(std::uint64_t hits, std::uint64_t trials) {
    if (trials == 0) return {0, 1};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(hits) / n;
    const double denom = 1 + z * z / n;
    const double centre = (ph + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

const char* to_string(DensityEstimate::Mode m) {
    return m == DensityEstimate::Mode::Exhaustive ? "exhaustive" : "mc";
}

namespace {

struct FormState {
    Evaluator::State eval;
    std::vector<Elem> coeffs;
};

DensityEstimate finish_exhaustive(unsigned d, const Predicate& pred, std::uint64_t hits, std::uint64_t total) {
    DensityEstimate est;
    est.mode = DensityEstimate::Mode::Exhaustive;
    est.d = d;
    est.hits = hits;
    est.total = total;
    est.fraction = Rational(Integer(hits), Integer(total));
    est.ci95 = {est.value(), est.value()};
    est.predicate = describe(pred);
    return est;
}

DensityEstimate finish_mc(unsigned d, const Predicate& pred, std::uint64_t hits, std::uint64_t trials,
                          std::uint64_t seed) {
    DensityEstimate est;
    est.mode = DensityEstimate::Mode::MonteCarlo;
    est.d = d;
    est.hits = hits;
    est.total = trials;
    est.fraction = Rational(Integer(hits), Integer(trials));
    est.ci95 = wilson95(hits, trials);
    est.seed = seed;
    est.predicate = describe(pred);
    return est;
}

}  // namespace

DensityEstimate exhaustive_density(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred) {
    mpoly::FormSpace space(gf::base_field(field), n, d, config::exhaustive_budget());
    Evaluator ev(pred, field, n, d);
    const std::uint64_t hits = parallel::count_if(
        space.size(), [&] { return FormState{ev.make_state(), std::vector<Elem>(space.dimension())}; },
        [&](FormState& s, std::uint64_t i) {
            space.decode(i, s.coeffs);
            return ev.test(s.coeffs, s.eval);
        });
    return finish_exhaustive(d, pred, hits, space.size());
}

DensityEstimate exhaustive_density_serial(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred) {
    mpoly::FormSpace space(gf::base_field(field), n, d, config::exhaustive_budget());
    Evaluator ev(pred, field, n, d);
    FormState s{ev.make_state(), std::vector<Elem>(space.dimension())};
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        space.decode(i, s.coeffs);
        hits += ev.test(s.coeffs, s.eval) ? 1 : 0;
    }
    return finish_exhaustive(d, pred, hits, space.size());
}

DensityEstimate mc_density(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred,
                           std::uint64_t trials, std::uint64_t seed) {
    require(trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
    Evaluator ev(pred, field, n, d);
    const std::size_t dim = mpoly::binomial(n + d, n);
    const std::uint64_t q = field.q();
    const std::uint64_t hits = parallel::count_if(
        trials, [&] { return FormState{ev.make_state(), std::vector<Elem>(dim)}; },
        [&](FormState& s, std::uint64_t i) {
            CounterRng rng(seed, i);
            mpoly::sample_coeffs(q, s.coeffs, rng);
            return ev.test(s.coeffs, s.eval);
        });
    return finish_mc(d, pred, hits, trials, seed);
}

DensityEstimate mc_density_serial(const FieldDesc& field, unsigned n, unsigned d, const Predicate& pred,
                                  std::uint64_t trials, std::uint64_t seed) {
    require(trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
    Evaluator ev(pred, field, n, d);
    FormState s{ev.make_state(), std::vector<Elem>(mpoly::binomial(n + d, n))};
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        CounterRng rng(seed, i);
        mpoly::sample_coeffs(field.q(), s.coeffs, rng);
        hits += ev.test(s.coeffs, s.eval) ? 1 : 0;
    }
    return finish_mc(d, pred, hits, trials, seed);
}

// ---------------------------------------------------------------------------
// conditioned densities

namespace {

// Affine solution spaces of the jet map over F_p: particular(t) = lift · digits(t).
struct Lifter {
    FieldPtr fp;
    unsigned a;
    std::uint32_t p;
    std::size_t unknowns;
    std::vector<std::vector<Elem>> lift;    // per jet digit: a solution for the unit vector
    std::vector<std::vector<Elem>> kernel;  // over F_p

    Lifter(const JetMap& jm) : fp(prime_field(jm.scheme().field())), a(jm.scheme().field().a), p(jm.scheme().field().p) {
        auto A = transpose(jm.prime_matrix());
        unknowns = A.cols();
        std::vector<Elem> unit(A.rows(), Elem{0});
        for (std::size_t c = 0; c < A.rows(); ++c) {
            unit[c] = Elem{1};
            auto sol = linalg::solve(A, unit, *fp);
            require(sol.has_value(), ErrorKind::NotSurjective, "jet map is not surjective");
            lift.push_back(std::move(sol->particular));
            if (c == 0) kernel = std::move(sol->kernel);
            unit[c] = Elem{0};
        }
        if (A.rows() == 0) kernel = linalg::kernel(A, *fp);
    }

    std::vector<Elem> particular(std::span<const Elem> digits) const {
        std::vector<Elem> x(unknowns, Elem{0});
        for (std::size_t c = 0; c < digits.size(); ++c) {
            if (digits[c].v == 0) continue;
            for (std::size_t u = 0; u < unknowns; ++u) x[u] = fp->add(x[u], fp->mul(digits[c], lift[c][u]));
        }
        return x;
    }

    void add_kernel(std::vector<Elem>& x, std::size_t j, Elem c) const {
        if (c.v == 0) return;
        for (std::size_t u = 0; u < unknowns; ++u) x[u] = fp->add(x[u], fp->mul(c, kernel[j][u]));
    }

    std::vector<Elem> from_coeffs(std::span<const Elem> coeffs) const {
        std::vector<Elem> x(unknowns);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            std::uint32_t v = coeffs[k].v;
            for (unsigned j = 0; j < a; ++j, v /= p) x[k * a + j] = Elem{v % p};
        }
        return x;
    }

    void to_coeffs(std::span<const Elem> x, std::vector<Elem>& coeffs) const {
        coeffs.resize(unknowns / a);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            std::uint32_t v = 0, pj = 1;
            for (unsigned j = 0; j < a; ++j, pj *= p) v += x[k * a + j].v * pj;
            coeffs[k] = Elem{v};
        }
    }
};

}  // namespace

DensityEstimate conditioned_density(const JetSet& t, const JetScheme& z, unsigned d, const Predicate& pred,
                                    const ConditionOptions& opt) {
    require(t.size() > 0, ErrorKind::EmptyT, "T is empty");
    JetMap jm(z, d);
    const auto rk = rank_over_base(z.field(), jm.prime_matrix());
    require(rk == z.length(), ErrorKind::NotSurjective,
            "jet map has rank " + std::to_string(rk) + " < " + std::to_string(z.length()) + " at d = " +
                std::to_string(d));
    Lifter lifter(jm);
    Evaluator ev(pred, z.field(), z.n(), d);
    const Rational weight(t.size(), z.h0_size());
    const std::size_t kd = lifter.kernel.size();

    struct State {
        Evaluator::State eval;
        std::vector<Elem> x, coeffs, jet, target;
    };
    auto make_state = [&] { return State{ev.make_state(), {}, {}, {}, {}}; };

    DensityEstimate est;
    if (opt.mode == DensityEstimate::Mode::Exhaustive) {
        require(t.members().has_value(), ErrorKind::BudgetExceeded, "T is too large to enumerate");
        const auto& members = *t.members();
        std::vector<std::vector<Elem>> particulars;
        for (const auto& m : members) particulars.push_back(lifter.particular(jm.prime_digits(m)));
        const Integer coset = ipow(lifter.p, kd);
        const Integer total = coset * Integer(members.size());
        require(total <= config::exhaustive_budget(), ErrorKind::BudgetExceeded,
                "conditioned enumeration of " + total.str() + " forms exceeds the exhaustive budget");
        const auto per = coset.convert_to<std::uint64_t>();
        const std::uint64_t hits = parallel::count_if(total.convert_to<std::uint64_t>(), make_state,
                                                      [&](State& s, std::uint64_t i) {
                                                          s.x = particulars[i / per];
                                                          std::uint64_t r = i % per;
                                                          for (std::size_t j = 0; j < kd; ++j, r /= lifter.p)
                                                              lifter.add_kernel(s.x, j, Elem{static_cast<std::uint32_t>(r % lifter.p)});
                                                          lifter.to_coeffs(s.x, s.coeffs);
                                                          return ev.test(s.coeffs, s.eval);
                                                      });
        est = finish_exhaustive(d, pred, hits, total.convert_to<std::uint64_t>());
    } else {
        require(opt.trials >= 1, ErrorKind::InvalidArgument, "need at least one trial");
        const std::uint64_t hits = parallel::count_if(opt.trials, make_state, [&](State& s, std::uint64_t i) {
            // a uniform f moved onto the coset of a uniform t: f + lift(t - f|_Z)
            CounterRng rng(opt.seed, i);
            t.sample(rng, s.target);
            s.coeffs.resize(jm.dimension());
            mpoly::sample_coeffs(z.field().q(), s.coeffs, rng);
            jm.apply(s.coeffs, s.jet);
            auto want = jm.prime_digits(s.target);
            auto have = jm.prime_digits(s.jet);
            for (std::size_t c = 0; c < want.size(); ++c) want[c] = lifter.fp->sub(want[c], have[c]);
            s.x = lifter.from_coeffs(s.coeffs);
            auto shift = lifter.particular(want);
            for (std::size_t u = 0; u < s.x.size(); ++u) s.x[u] = lifter.fp->add(s.x[u], shift[u]);
            lifter.to_coeffs(s.x, s.coeffs);
            return ev.test(s.coeffs, s.eval);
        });
        est = finish_mc(d, pred, hits, opt.trials, opt.seed);
        est.ci95.lo *= zeta::to_double(weight);
        est.ci95.hi *= zeta::to_double(weight);
    }
    est.conditional = est.fraction;
    est.weight = weight;
    est.fraction = weight * est.fraction;
    if (est.mode == DensityEstimate::Mode::Exhaustive) est.ci95 = {est.value(), est.value()};
    est.predicate = describe(pred) + "|jets(Z=" + z.describe() + ",T=" + t.description() + ")";
    return est;
}

// ---------------------------------------------------------------------------

PointFraction singular_fraction_at_point(const SubschemeSpec& x, const ClosedPoint& p, unsigned d) {
    const auto& rep = p.rep;
    require(rep.coords.size() == x.n + 1, ErrorKind::InvalidArgument, "point has the wrong dimension");
    auto w = gf::field_extend(x.field, rep.e);
    geometry::LocalSystem sys(x, w);
    sys.load(rep.coords);
    require(sys.in_x(), ErrorKind::InvalidArgument, "P is not a point of X");
    const std::size_t want = x.n - x.m;
    require(sys.jacobian_rank(rep.lead, 0, x.n) == want, ErrorKind::InvalidArgument,
            "X is not smooth of dimension m at P");

    // tangent space of X at P in chart coordinates (all coordinates but lead)
    std::vector<unsigned> chart;
    for (unsigned v = 0; v <= x.n; ++v)
        if (v != rep.lead) chart.push_back(v);
    std::vector<std::vector<Elem>> tangent;
    if (x.closed.empty()) {
        for (std::size_t i = 0; i < chart.size(); ++i) {
            std::vector<Elem> u(chart.size(), Elem{0});
            u[i] = Elem{1};
            tangent.push_back(std::move(u));
        }
    } else {
        linalg::Matrix jac(x.closed.size(), chart.size());
        for (std::size_t g = 0; g < x.closed.size(); ++g)
            for (std::size_t i = 0; i < chart.size(); ++i)
                jac.at(g, i) = mpoly::poly_eval(mpoly::poly_derive(x.closed[g], chart[i]), rep.coords, *w);
        tangent = linalg::kernel(jac, *w);
    }

    const auto& tab = *mpoly::monomials(x.n, d);
    const std::size_t dim = tab.size();
    const std::size_t E = 1 + tangent.size();
    std::vector<Elem> table(dim * E);
    for (std::size_t k = 0; k < dim; ++k) {
        auto mj = jet_of_monomial(tab.exponents(k), rep.coords, *w);
        table[k * E] = mj.value;
        for (std::size_t t = 0; t < tangent.size(); ++t) {
            Elem s{0};
            for (std::size_t i = 0; i < chart.size(); ++i) s = w->add(s, w->mul(tangent[t][i], mj.partials[chart[i]]));
            table[k * E + 1 + t] = s;
        }
    }
    std::vector<const WorkingField*> fields(E, w.get());
    PointFraction out;
    out.codim = rank_over_base(x.field, prime_matrix(x.field, dim, table, fields));
    out.fraction = Rational(Integer(1), ipow(x.q(), out.codim));
    const std::uint64_t expected = static_cast<std::uint64_t>(x.m + 1) * p.degree;
    out.closed_form = Rational(Integer(1), ipow(x.q(), expected));
    out.hypothesis = expected <= d;
    if (out.hypothesis)
        require(out.codim == expected, ErrorKind::InvariantBreach,
                "codimension " + std::to_string(out.codim) + " differs from (m+1)e = " + std::to_string(expected));
    else
        out.warning = "e > d/(m+1): fraction from the jet-map rank, the closed form q^{-(m+1)e} need not hold";
    return out;
}

// ---------------------------------------------------------------------------

std::vector<DensityEstimate> density_sweep(const FieldDesc& field, unsigned n, const std::vector<unsigned>& degrees,
                                           const Predicate& pred, DensityEstimate::Mode mode, std::uint64_t trials,
                                           std::uint64_t seed) {
    std::vector<DensityEstimate> out;
    for (unsigned d : degrees)
        out.push_back(mode == DensityEstimate::Mode::Exhaustive ? exhaustive_density(field, n, d, pred)
                                                                : mc_density(field, n, d, pred, trials, seed));
    return out;
}

std::string sweep_csv(const std::vector<DensityEstimate>& rows) {
    std::ostringstream s;
    s << "d,mode,trials,hits,total,fraction,ci_lo,ci_hi,predicate,seed\n";
    for (const auto& r : rows) {
        std::string pred = r.predicate;
        std::string quoted = "\"";
        for (char c : pred) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        quoted += "\"";
        s << r.d << ',' << to_string(r.mode) << ','
          << (r.mode == DensityEstimate::Mode::MonteCarlo ? std::to_string(r.total) : std::string()) << ','
          << r.hits << ',' << r.total << ',' << fmt6(r.value()) << ',' << fmt6(r.ci95.lo) << ',' << fmt6(r.ci95.hi)
          << ',' << quoted << ',' << (r.seed ? std::to_string(*r.seed) : std::string()) << '\n';
    }
    return s.str();
}

}  // namespace bertini::sieve
