#include "bertini/construct.hpp"

#include "bertini/error.hpp"
#include "bertini/parallel.hpp"

#include <algorithm>
#include <functional>

namespace bertini::construct {

using geometry::ProjPoint;
using gf::FieldPtr;
using gf::WorkingField;
using smooth::PreparedScan;
using zeta::Integer;

const char* to_string(SearchResult::Kind k) {
    return k == SearchResult::Kind::Found ? "Found" : "NotFoundWithinBudget";
}

const char* to_string(AntiBertini::Kind k) {
    return k == AntiBertini::Kind::AllSingular ? "AllSingular" : "CounterexampleFound";
}

namespace {

linalg::Matrix transpose(const linalg::Matrix& m) {
    linalg::Matrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
    return t;
}

bool all_zero(std::span<const Elem> c) {
    return std::all_of(c.begin(), c.end(), [](Elem e) { return e.v == 0; });
}

// Union of affine subspaces particular_s + span(kernel) of S_d, in F_p
// coordinates (coefficient k, digit j at k*a + j).
class CandidateSpace {
public:
    CandidateSpace(const gf::FieldDesc& field, std::size_t dim)
        : fp_(gf::base_field(gf::field_make(field.p, 1))), a_(field.a), p_(field.p), unknowns_(dim * field.a) {}

    void add_system(std::vector<Elem> particular) { particulars_.push_back(std::move(particular)); }
    void set_kernel(std::vector<std::vector<Elem>> k) { kernel_ = std::move(k); }

    std::size_t systems() const { return particulars_.size(); }
    std::size_t kernel_dim() const { return kernel_.size(); }
    Integer size() const {
        return Integer(particulars_.size()) * boost::multiprecision::pow(Integer(p_), static_cast<unsigned>(kernel_.size()));
    }

    /// Candidate `index` in canonical order (index < size()).
    void canonical(std::uint64_t index, std::vector<Elem>& coeffs, std::vector<Elem>& x) const {
        const std::uint64_t per = size().convert_to<std::uint64_t>() / particulars_.size();
        x = particulars_[index / per];
        std::uint64_t r = index % per;
        for (std::size_t j = 0; j < kernel_.size(); ++j, r /= p_) add(x, j, Elem{static_cast<std::uint32_t>(r % p_)});
        to_coeffs(x, coeffs);
    }

    void sampled(std::uint64_t seed, std::uint64_t index, std::vector<Elem>& coeffs, std::vector<Elem>& x) const {
        CounterRng rng(seed, index);
        x = particulars_[rng.below(particulars_.size())];
        for (std::size_t j = 0; j < kernel_.size(); ++j) add(x, j, Elem{static_cast<std::uint32_t>(rng.below(p_))});
        to_coeffs(x, coeffs);
    }

    std::vector<Elem> digits(std::span<const Elem> target, const std::vector<const WorkingField*>& fields) const {
        std::vector<Elem> out;
        for (std::size_t j = 0; j < target.size(); ++j)
            for (unsigned i = 0; i < fields[j]->prime_degree(); ++i) out.push_back(Elem{fields[j]->digit(target[j], i)});
        return out;
    }

    const WorkingField& fp() const { return *fp_; }

private:
    void add(std::vector<Elem>& x, std::size_t j, Elem c) const {
        if (c.v == 0) return;
        for (std::size_t u = 0; u < unknowns_; ++u) x[u] = fp_->add(x[u], fp_->mul(c, kernel_[j][u]));
    }
    void to_coeffs(std::span<const Elem> x, std::vector<Elem>& coeffs) const {
        coeffs.resize(unknowns_ / a_);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            std::uint32_t v = 0, pj = 1;
            for (unsigned j = 0; j < a_; ++j, pj *= p_) v += x[k * a_ + j].v * pj;
            coeffs[k] = Elem{v};
        }
    }

    FieldPtr fp_;
    unsigned a_;
    std::uint32_t p_;
    std::size_t unknowns_;
    std::vector<std::vector<Elem>> particulars_;
    std::vector<std::vector<Elem>> kernel_;
};

std::vector<std::vector<Elem>> unit_kernel(std::size_t unknowns) {
    std::vector<std::vector<Elem>> k(unknowns, std::vector<Elem>(unknowns, Elem{0}));
    for (std::size_t i = 0; i < unknowns; ++i) k[i][i] = Elem{1};
    return k;
}

struct Scan {
    std::vector<Elem> coeffs, x;
    PreparedScan::Scratch scratch;
    std::vector<Elem> values;
};

// Searches a candidate space with first_index; returns the least passing index.
std::optional<std::uint64_t> search_space(const CandidateSpace& space, std::uint64_t budget, std::uint64_t seed,
                                          const PreparedScan& scan, DegreeLog& log,
                                          const std::function<bool(std::span<const Elem>)>& extra) {
    const Integer total = space.size();
    const bool canonical = total <= budget;
    const std::uint64_t count = canonical ? total.convert_to<std::uint64_t>() : budget;
    log.mode = canonical ? "canonical" : "sampled";
    log.space = total.str();
    log.systems = static_cast<unsigned>(space.systems());
    auto hit = parallel::first_index(
        count, [&] { return Scan{{}, {}, scan.make_scratch(), {}}; },
        [&](Scan& s, std::uint64_t i) {
            if (canonical) space.canonical(i, s.coeffs, s.x);
            else space.sampled(seed, i, s.coeffs, s.x);
            if (all_zero(s.coeffs)) return false;
            if (extra && !extra(s.coeffs)) return false;
            return !scan.any_singular(s.coeffs, s.scratch);
        });
    log.tried = hit ? *hit + 1 : count;
    return hit;
}

HomogPoly candidate_form(const CandidateSpace& space, bool canonical, std::uint64_t seed, std::uint64_t index,
                         const FieldPtr& base, unsigned n, unsigned d) {
    std::vector<Elem> coeffs, x;
    if (canonical) space.canonical(index, coeffs, x);
    else space.sampled(seed, index, coeffs, x);
    return HomogPoly(base, n, d, coeffs);
}

std::vector<Elem> homogeneous_gradient(const HomogPoly& f, std::span<const Elem> p, const WorkingField& w) {
    std::vector<Elem> g;
    for (unsigned i = 0; i <= f.n(); ++i) g.push_back(mpoly::poly_eval(mpoly::poly_derive(f, i), p, w));
    return g;
}

std::string point_text(const ClosedPoint& p, const gf::FieldDesc& field) {
    return geometry::format_point(p.rep, *gf::field_extend(field, p.rep.e));
}

// Points of X whose closed point has degree < ell, tabulated against the monomials of degree d.
struct AvoidTable {
    std::vector<FieldPtr> fields;       // per point
    std::vector<Elem> monomials;        // point-major
    std::size_t dim = 0;

    bool misses(std::span<const Elem> coeffs) const {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const WorkingField& w = *fields[i];
            Elem v{0};
            const Elem* row = monomials.data() + i * dim;
            for (std::size_t k = 0; k < dim; ++k)
                if (coeffs[k].v) v = w.add(v, w.mul(w.embed(coeffs[k]), row[k]));
            if (v.v == 0) return false;
        }
        return true;
    }
};

AvoidTable avoid_table(const SubschemeSpec& x, unsigned ell, unsigned d) {
    AvoidTable t;
    if (ell <= 1) return t;
    const auto& tab = *mpoly::monomials(x.n, d);
    t.dim = tab.size();
    for (unsigned e : smooth::cover_set(ell - 1)) {
        auto w = gf::field_extend(x.field, e);
        for (const auto& p : geometry::points_over(x, e)) {
            t.fields.push_back(w);
            for (std::size_t k = 0; k < t.dim; ++k) {
                Elem v = WorkingField::one();
                for (unsigned i = 0; i <= x.n; ++i)
                    if (tab.exponent(k, i)) v = w->mul(v, w->pow(p.coords[i], tab.exponent(k, i)));
                t.monomials.push_back(v);
            }
        }
    }
    return t;
}

void check_spec(const SearchSpec& spec) {
    const auto& x = spec.x;
    require(spec.d_min >= 1 && spec.d_min <= spec.d_max, ErrorKind::InvalidArgument, "need 1 <= d_min <= d_max");
    require(spec.budget >= 1, ErrorKind::InvalidArgument, "budget must be positive");
    if (spec.avoid_degree_below) {
        require(*spec.avoid_degree_below >= 1, ErrorKind::InvalidArgument, "ell must be at least 1");
        const unsigned below = *spec.avoid_degree_below - 1;
        require(smooth::feasible_bound(x, below) == below, ErrorKind::BudgetExceeded,
                "closed points of degree < " + std::to_string(*spec.avoid_degree_below) + " are too many to enumerate");
    }
    for (const auto& p : spec.pass_through) {
        require(p.rep.coords.size() == x.n + 1, ErrorKind::InvalidArgument, "point has the wrong dimension");
        auto w = gf::field_extend(x.field, p.rep.e);
        geometry::LocalSystem sys(x, w);
        sys.load(p.rep.coords);
        require(sys.in_x(), ErrorKind::InconsistentConditions, "prescribed point " + point_text(p, x.field) + " is not on X");
        if (spec.avoid_degree_below)
            require(p.degree >= *spec.avoid_degree_below, ErrorKind::InconsistentConditions,
                    "prescribed point " + point_text(p, x.field) + " has degree below ell");
    }
    for (const auto& t : spec.tangent) {
        require(t.point.degree == 1 && t.point.rep.e == 1, ErrorKind::InvalidArgument,
                "tangent prescriptions need rational points");
        const bool listed = std::any_of(spec.pass_through.begin(), spec.pass_through.end(), [&](const ClosedPoint& p) {
            return p.degree == 1 && p.rep.coords == t.point.rep.coords;
        });
        require(listed, ErrorKind::InvalidArgument, "tangent point is not among the pass-through points");
        require(t.hyperplane.d() == 1 && t.hyperplane.n() == x.n, ErrorKind::InvalidArgument,
                "tangent hyperplane must be a linear form on P^n");
        require(!t.hyperplane.is_zero(), ErrorKind::InconsistentConditions,
                "tangent prescription with zero normal forces a zero gradient");
        require(mpoly::poly_eval(t.hyperplane, t.point.rep.coords, *x.base()).v == 0, ErrorKind::InconsistentConditions,
                "tangent hyperplane does not pass through its point");
    }
}

std::vector<std::string> reverify(const SearchSpec& spec, const HomogPoly& f, smooth::Verdict& verdict) {
    const auto& x = spec.x;
    std::vector<std::string> log;
    for (const auto& p : spec.pass_through) {
        auto w = gf::field_extend(x.field, p.rep.e);
        require(mpoly::poly_eval(f, p.rep.coords, *w).v == 0, ErrorKind::InvariantBreach, "found f misses a prescribed point");
        log.push_back("passes through " + point_text(p, x.field));
    }
    for (const auto& t : spec.tangent) {
        auto w = x.base();
        auto grad = homogeneous_gradient(f, t.point.rep.coords, *w);
        std::optional<Elem> lambda;
        bool ok = true;
        for (unsigned i = 0; i <= x.n && ok; ++i) {
            const Elem h = t.hyperplane.coeff(i);
            if (h.v == 0) {
                ok = grad[i].v == 0;
                continue;
            }
            const Elem l = w->div(grad[i], h);
            if (!lambda) lambda = l;
            ok = *lambda == l;
        }
        require(ok && lambda && lambda->v != 0, ErrorKind::InvariantBreach, "found f has the wrong tangent");
        log.push_back("tangent at " + point_text(t.point, x.field) + " is " + t.hyperplane.to_string() + " = 0");
    }
    if (spec.avoid_degree_below && *spec.avoid_degree_below > 1) {
        for (unsigned e = 1; e < *spec.avoid_degree_below; ++e) {
            auto w = gf::field_extend(x.field, e);
            for (const auto& p : geometry::points_over(x, e))
                require(mpoly::poly_eval(f, p.coords, *w).v != 0, ErrorKind::InvariantBreach,
                        "found f has a point of low degree");
        }
        log.push_back("no closed point of degree < " + std::to_string(*spec.avoid_degree_below));
    }
    smooth::Checker checker(x, spec.smooth_bound);
    verdict = checker.verdict(f);
    require(verdict.smooth(), ErrorKind::InvariantBreach, "found f fails the smoothness check");
    log.push_back(std::string("smooth up to degree ") + std::to_string(verdict.bound) +
                  (verdict.exact ? " (certified)" : " (heuristic bound)"));
    return log;
}

}  // namespace

SearchResult find_section(const SearchSpec& spec) {
    check_spec(spec);
    const auto& x = spec.x;
    const auto base = x.base();
    smooth::Checker checker(x, spec.smooth_bound);
    const std::uint64_t q = x.q();

    // Z: the pass-through points, order 2 where a tangent is prescribed
    std::vector<sieve::JetPoint> jp;
    std::vector<const TangentCondition*> tangent_of;
    for (const auto& p : spec.pass_through) {
        const TangentCondition* t = nullptr;
        for (const auto& tc : spec.tangent)
            if (p.degree == 1 && tc.point.rep.coords == p.rep.coords) t = &tc;
        jp.push_back(sieve::JetPoint{p, t ? 2u : 1u});
        tangent_of.push_back(t);
    }
    std::optional<sieve::JetScheme> z;
    if (!jp.empty()) z.emplace(x.field, x.n, jp);

    SearchResult result;
    for (unsigned d = spec.d_min; d <= spec.d_max; ++d) {
        DegreeLog log;
        log.d = d;
        const std::size_t dim = mpoly::binomial(x.n + d, x.n);
        CandidateSpace space(x.field, dim);
        if (!z) {
            space.add_system(std::vector<Elem>(dim * x.field.a, Elem{0}));
            space.set_kernel(unit_kernel(dim * x.field.a));
        } else {
            sieve::JetMap jm(*z, d);
            auto pm = jm.prime_matrix();
            const std::size_t rk = sieve::rank_over_base(x.field, pm);
            if (rk < z->length()) {
                log.mode = "skipped";
                log.note = "jet map rank " + std::to_string(rk) + " < length " + std::to_string(z->length());
                result.degrees.push_back(log);
                continue;
            }
            auto A = transpose(pm);
            std::vector<const WorkingField*> fields;
            for (std::size_t j = 0; j < z->entries(); ++j) fields.push_back(&z->entry_field(j));
            // one system per choice of nonzero tangent scalars
            std::size_t nt = 0;
            for (auto* t : tangent_of) nt += t ? 1 : 0;
            std::vector<std::uint64_t> lambda(nt, 1);
            for (;;) {
                std::vector<Elem> target(z->entries(), Elem{0});
                std::size_t ti = 0;
                for (std::size_t i = 0; i < tangent_of.size(); ++i) {
                    if (!tangent_of[i]) continue;
                    const auto& tc = *tangent_of[i];
                    const WorkingField& w = *base;
                    const Elem l{static_cast<std::uint32_t>(lambda[ti++])};
                    std::size_t c = z->offset(i) + 1;
                    for (unsigned v = 0; v <= x.n; ++v)
                        if (v != z->points()[i].point.rep.lead) target[c++] = w.mul(l, tc.hyperplane.coeff(v));
                }
                auto sol = linalg::solve(A, space.digits(target, fields), space.fp());
                require(sol.has_value(), ErrorKind::InvariantBreach, "surjective jet map with an unsolvable system");
                if (space.systems() == 0) space.set_kernel(std::move(sol->kernel));
                space.add_system(std::move(sol->particular));
                std::size_t k = 0;
                while (k < nt && ++lambda[k] == q) lambda[k++] = 1;
                if (k == nt) break;
            }
        }
        PreparedScan scan(x, d, smooth::cover_set(checker.plan(d).bound));
        std::function<bool(std::span<const Elem>)> extra;
        AvoidTable avoid;
        if (spec.avoid_degree_below && *spec.avoid_degree_below > 1) {
            avoid = avoid_table(x, *spec.avoid_degree_below, d);
            extra = [&](std::span<const Elem> c) { return avoid.misses(c); };
        }
        auto hit = search_space(space, spec.budget, spec.seed, scan, log, extra);
        result.degrees.push_back(log);
        if (!hit) continue;
        auto f = candidate_form(space, log.mode == "canonical", spec.seed, *hit, base, x.n, d);
        result.kind = SearchResult::Kind::Found;
        result.d = d;
        result.checked = reverify(spec, f, result.verdict);
        result.integrality = smooth::geometrically_integral(f);
        result.checked.push_back(std::string("integrality: ") + smooth::to_string(result.integrality.kind));
        result.f = std::move(f);
        return result;
    }
    return result;
}

SearchResult space_avoiding(const SubschemeSpec& x, unsigned ell, unsigned d_min, unsigned d_max,
                            std::uint64_t budget, std::uint64_t seed) {
    SearchSpec spec;
    spec.x = x;
    spec.avoid_degree_below = ell;
    spec.d_min = d_min;
    spec.d_max = d_max;
    spec.budget = budget;
    spec.seed = seed;
    return find_section(spec);
}

HomogPoly katz_hypersurface(std::uint64_t q, unsigned n_pairs) { return geometry::katz_form(q, n_pairs); }

std::vector<HomogPoly> forms_up_to_scalar(const FieldPtr& field, unsigned n, unsigned d, std::uint64_t budget) {
    const std::uint64_t q = field->size();
    const std::uint64_t total = mpoly::s_d_size(q, n, d);
    require((total - 1) / (q - 1) <= budget, ErrorKind::BudgetExceeded,
            "more than " + std::to_string(budget) + " forms of degree " + std::to_string(d) + " up to scalar");
    mpoly::FormSpace space(field, n, d, total);
    std::vector<HomogPoly> out;
    std::vector<Elem> c(space.dimension());
    for (std::uint64_t i = 1; i < total; ++i) {
        space.decode(i, c);
        auto first = std::find_if(c.begin(), c.end(), [](Elem e) { return e.v != 0; });
        if (first->v == 1) out.emplace_back(field, n, d, c);
    }
    return out;
}

AntiBertini verify_anti_bertini(const SubschemeSpec& x, unsigned d_max, std::uint64_t budget,
                                std::optional<unsigned> bound) {
    smooth::Checker checker(x, bound);
    AntiBertini out;
    std::vector<HomogPoly> gs;
    for (unsigned d = 1; d <= d_max; ++d) {
        auto part = forms_up_to_scalar(x.base(), x.n, d, budget - std::min<std::uint64_t>(budget, gs.size()));
        gs.insert(gs.end(), part.begin(), part.end());
    }
    out.checked = gs.size();
    out.bound = d_max ? checker.plan(1).bound : 0;
    struct Found {
        std::size_t index;
        std::optional<ClosedPoint> witness;
    };
    auto found = parallel::collect<Found>(
        gs.size(), [] { return 0; },
        [&](int&, std::uint64_t i, std::vector<Found>& o) {
            o.push_back(Found{i, checker.first_singular(gs[i], checker.plan(gs[i].d()).bound)});
        });
    for (auto& f : found) {
        if (!f.witness) {
            out.kind = AntiBertini::Kind::CounterexampleFound;
            out.counterexample = gs[f.index];
            out.verdict = checker.verdict(gs[f.index]);
            out.witnesses.clear();
            return out;
        }
        out.witnesses.push_back(AntiBertini::Witness{gs[f.index], *f.witness});
    }
    return out;
}

SearchResult anti_bertini_search(std::uint64_t q, unsigned n, unsigned d, unsigned dx_min, unsigned dx_max,
                                 std::uint64_t budget, std::uint64_t seed) {
    require(d >= 1 && dx_min >= 1 && dx_min <= dx_max, ErrorKind::InvalidArgument, "need d >= 1 and 1 <= dx_min <= dx_max");
    const auto field = gf::field_of_order(q);
    const auto base = gf::base_field(field);
    const auto pn = geometry::projective_space(field, n);
    const std::uint64_t form_budget = 1u << 20;
    std::vector<HomogPoly> gs;
    for (unsigned k = 1; k <= d; ++k) {
        auto part = forms_up_to_scalar(base, n, k, form_budget);
        gs.insert(gs.end(), part.begin(), part.end());
    }

    // distinct points P_g on each H_g: augmenting-path matching over closed
    // points of degree 1, 2, 3 in canonical order
    std::vector<ClosedPoint> points;
    std::vector<std::vector<std::size_t>> on(gs.size());
    std::vector<std::optional<std::size_t>> match_g(gs.size());
    std::vector<std::optional<std::size_t>> match_p;
    std::size_t matched = 0;
    SearchResult result;
    for (unsigned e = 1; e <= 3 && matched < gs.size(); ++e) {
        if (smooth::feasible_bound(pn, e) < e) break;
        auto w = gf::field_extend(field, e);
        for (auto& p : geometry::closed_points(pn, e)) {
            const std::size_t pi = points.size();
            points.push_back(p);
            match_p.emplace_back();
            for (std::size_t g = 0; g < gs.size(); ++g)
                if (mpoly::poly_eval(gs[g], p.rep.coords, *w).v == 0) on[g].push_back(pi);
        }
        for (std::size_t g = 0; g < gs.size(); ++g) {
            if (match_g[g]) continue;
            std::vector<char> seen(points.size(), 0);
            std::function<bool(std::size_t)> augment = [&](std::size_t gi) {
                for (std::size_t pi : on[gi]) {
                    if (seen[pi]) continue;
                    seen[pi] = 1;
                    if (!match_p[pi] || augment(*match_p[pi])) {
                        match_p[pi] = gi;
                        match_g[gi] = pi;
                        return true;
                    }
                }
                return false;
            };
            if (augment(g)) ++matched;
        }
    }
    if (matched < gs.size()) {
        DegreeLog log;
        log.mode = "skipped";
        log.note = "no distinct points of degree <= 3 on all " + std::to_string(gs.size()) + " hypersurfaces";
        result.degrees.push_back(log);
        return result;
    }

    std::vector<sieve::JetPoint> jp;
    for (std::size_t g = 0; g < gs.size(); ++g) jp.push_back(sieve::JetPoint{points[*match_g[g]], 2});
    sieve::JetScheme z(field, n, jp);
    // chart gradients of each g at its point
    std::vector<std::vector<Elem>> normal(gs.size());
    for (std::size_t g = 0; g < gs.size(); ++g) {
        const auto& rep = z.points()[g].point.rep;
        const WorkingField& w = *z.point_field(g);
        auto grad = homogeneous_gradient(gs[g], rep.coords, w);
        for (unsigned v = 0; v <= n; ++v)
            if (v != rep.lead) normal[g].push_back(grad[v]);
    }

    smooth::Checker pcheck(pn);
    for (unsigned dx = dx_min; dx <= dx_max; ++dx) {
        DegreeLog log;
        log.d = dx;
        sieve::JetMap jm(z, dx);
        const std::size_t dim = jm.dimension();
        // functionals: F(P_g) and, where H_g is smooth at P_g, the chart gradient of F parallel to that of g
        std::vector<const WorkingField*> fields;
        std::vector<std::function<Elem(std::span<const Elem>)>> rows;
        for (std::size_t g = 0; g < gs.size(); ++g) {
            const WorkingField* w = z.point_field(g).get();
            const std::size_t off = z.offset(g);
            fields.push_back(w);
            rows.push_back([off](std::span<const Elem> jet) { return jet[off]; });
            const auto& v = normal[g];
            auto pivot = std::find_if(v.begin(), v.end(), [](Elem e) { return e.v != 0; });
            if (pivot == v.end()) continue;
            const std::size_t pv = static_cast<std::size_t>(pivot - v.begin());
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (j == pv) continue;
                fields.push_back(w);
                rows.push_back([w, off, pv, j, vp = v[pv], vj = v[j]](std::span<const Elem> jet) {
                    return w->sub(w->mul(vp, jet[off + 1 + j]), w->mul(vj, jet[off + 1 + pv]));
                });
            }
        }
        std::vector<Elem> table(dim * rows.size());
        for (std::size_t k = 0; k < dim; ++k) {
            auto jet = jm.monomial_jet(k);
            for (std::size_t r = 0; r < rows.size(); ++r) table[k * rows.size() + r] = rows[r](jet);
        }
        CandidateSpace space(field, dim);
        const auto A = transpose(sieve::prime_matrix(field, dim, table, fields));
        space.add_system(std::vector<Elem>(dim * field.a, Elem{0}));
        space.set_kernel(linalg::kernel(A, space.fp()));
        if (space.kernel_dim() == 0) {
            log.mode = "skipped";
            log.note = "only the zero form meets the conditions";
            result.degrees.push_back(log);
            continue;
        }
        PreparedScan scan(pn, dx, smooth::cover_set(pcheck.plan(dx).bound));
        auto hit = search_space(space, budget, seed, scan, log, {});
        result.degrees.push_back(log);
        if (!hit) continue;
        auto f = candidate_form(space, log.mode == "canonical", seed, *hit, base, n, dx);
        result.verdict = pcheck.verdict(f);
        require(result.verdict.smooth(), ErrorKind::InvariantBreach, "constructed X is not smooth");
        auto check = verify_anti_bertini(geometry::hypersurface(f), d, form_budget);
        require(check.kind == AntiBertini::Kind::AllSingular, ErrorKind::InvariantBreach,
                "constructed X has a smooth section");
        result.kind = SearchResult::Kind::Found;
        result.d = dx;
        result.checked.push_back(std::string("X smooth up to degree ") + std::to_string(result.verdict.bound) +
                                 (result.verdict.exact ? " (certified)" : " (heuristic bound)"));
        result.checked.push_back("every H_g with deg g <= " + std::to_string(d) + " meets X singularly (" +
                                 std::to_string(check.checked) + " forms)");
        result.integrality = smooth::geometrically_integral(f);
        result.checked.push_back(std::string("integrality: ") + smooth::to_string(result.integrality.kind));
        result.f = std::move(f);
        return result;
    }
    return result;
}

}  // namespace bertini::construct
