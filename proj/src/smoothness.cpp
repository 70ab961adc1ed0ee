#include "bertini/smoothness.hpp"

#include "bertini/config.hpp"
#include "bertini/error.hpp"
#include "bertini/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace bertini::smooth {

using geometry::LocalSystem;
using geometry::ProjectiveEnumerator;

namespace {

constexpr std::uint64_t kMaxTabulated = std::uint64_t{1} << 25;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r = sat_mul(r, b);
    return r;
}

bool scan_feasible(const SubschemeSpec& x, unsigned e) {
    const unsigned bits = config::max_field_bits();
    // q^e <= 2^bits, compared in floating point first to avoid overflow
    if (static_cast<double>(e) * std::log2(static_cast<double>(x.q())) > bits + 1e-9) return false;
    const std::uint64_t Q = sat_pow(x.q(), e);
    std::uint64_t points = 0, term = 1;
    for (unsigned i = 0; i <= x.n; ++i) {
        points = points + term < points ? UINT64_MAX : points + term;
        term = sat_mul(term, Q);
    }
    return points <= config::max_scan_points();
}

struct PointState {
    LocalSystem sys;
    std::vector<Elem> coords;
};

bool singular_loaded(const PointState& st, unsigned lead, std::size_t want) {
    return st.sys.in_x() && st.sys.extra_value(0).v == 0 && st.sys.jacobian_rank(lead, 1, want + 1) < want + 1;
}

}  // namespace

std::optional<std::uint64_t> certified_bound(unsigned d, const SubschemeSpec& x) {
    if (!x.closed.empty() || x.m != x.n) return std::nullopt;
    if (d == 0) return 0;
    return sat_mul(d, sat_pow(d - 1, x.n - 1));
}

std::vector<unsigned> cover_set(unsigned B) {
    std::vector<unsigned> out;
    for (unsigned e = B / 2 + 1; e <= B; ++e) out.push_back(e);
    return out;
}

unsigned feasible_bound(const SubschemeSpec& x, unsigned B) {
    unsigned b = 0;
    while (b < B && scan_feasible(x, b + 1)) ++b;
    return b;
}

const char* to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Smooth: return "Smooth";
        case Verdict::Kind::SingularAt: return "SingularAt";
        case Verdict::Kind::IsWholeSpace: return "IsWholeSpace";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Checker::Checker(SubschemeSpec x, std::optional<unsigned> requested) : x_(std::move(x)), requested_(requested) {
    if (x_.closed.empty() && x_.m == x_.n) return;  // open in P^n: smooth of dimension n
    const unsigned b = feasible_bound(x_, requested_.value_or(default_general_bound));
    if (b == 0) return;
    auto v = geometry::validate_smooth(x_, b);
    if (v.status != geometry::SmoothValidation::Status::ValidUpTo) {
        auto w = gf::field_extend(x_.field, v.witness->rep.e);
        fail(ErrorKind::XNotValidated, x_.name + " is not smooth of dimension " + std::to_string(x_.m) + " at " +
                                           geometry::format_point(v.witness->rep, *w) + " (" +
                                           geometry::to_string(v.status) + ")");
    }
}

Checker::Plan Checker::plan(unsigned d) const {
    auto cert = certified_bound(d, x_);
    std::uint64_t want = requested_ ? *requested_ : (cert ? *cert : default_general_bound);
    const unsigned b = feasible_bound(x_, static_cast<unsigned>(std::min<std::uint64_t>(want, 4096)));
    return Plan{b, cert.has_value() && b >= *cert, cert};
}

std::optional<ClosedPoint> Checker::first_singular(const HomogPoly& f, unsigned bound) const {
    const std::size_t want = x_.n - x_.m;
    std::vector<HomogPoly> extra{f};
    for (unsigned e = 1; e <= bound; ++e) {
        auto w = gf::field_extend(x_.field, e);
        ProjectiveEnumerator en(x_.n, w->size());
        geometry::checked_scan_size(x_.n, w->size());
        auto hit = parallel::first_index(
            en.count(), [&] { return PointState{LocalSystem(x_, w, extra), std::vector<Elem>(x_.n + 1)}; },
            [&](PointState& st, std::uint64_t i) {
                unsigned lead = en.decode(i, st.coords);
                st.sys.load(st.coords);
                return singular_loaded(st, lead, want);
            });
        if (!hit) continue;
        std::vector<Elem> coords(x_.n + 1);
        unsigned lead = en.decode(*hit, coords);
        return geometry::closed_point_of(ProjPoint{e, coords, lead}, *w);
    }
    return std::nullopt;
}

Verdict Checker::verdict(const HomogPoly& f) const {
    require(f.n() == x_.n && f.field().same_field(*x_.base()), ErrorKind::FieldMismatch,
            "form and X live over different rings");
    Verdict v;
    if (f.is_zero()) {
        v.kind = Verdict::Kind::IsWholeSpace;
        return v;
    }
    auto p = plan(f.d());
    v.bound = p.bound;
    v.exact = p.exact;
    v.certified = p.certified;
    if (f.d() == 0) {  // nonzero constant: H_f is empty
        v.exact = true;
        return v;
    }
    if (auto w = first_singular(f, p.bound)) {
        v.kind = Verdict::Kind::SingularAt;
        v.witness = std::move(w);
    }
    return v;
}

bool Checker::singular_at(const HomogPoly& f, const ProjPoint& p) const {
    auto w = gf::field_extend(x_.field, p.e);
    std::vector<HomogPoly> extra{f};
    PointState st{LocalSystem(x_, w, extra), p.coords};
    st.sys.load(p.coords);
    return singular_loaded(st, p.lead, x_.n - x_.m);
}

namespace {

std::vector<ClosedPoint> singular_points_impl(const HomogPoly& f, const SubschemeSpec& x, unsigned B, bool serial) {
    require(f.d() >= 1, ErrorKind::InvalidArgument, "singular_points needs deg f >= 1");
    Checker checker(x, B);
    const std::size_t want = x.n - x.m;
    std::vector<HomogPoly> extra{f};
    std::vector<ClosedPoint> out;
    for (unsigned e = 1; e <= B; ++e) {
        auto w = gf::field_extend(x.field, e);
        ProjectiveEnumerator en(x.n, w->size());
        geometry::checked_scan_size(x.n, w->size());
        auto make = [&] { return PointState{LocalSystem(x, w, extra), std::vector<Elem>(x.n + 1)}; };
        auto emit = [&](PointState& st, std::uint64_t i, std::vector<ClosedPoint>& sink) {
            unsigned lead = en.decode(i, st.coords);
            st.sys.load(st.coords);
            if (!singular_loaded(st, lead, want)) return;
            ProjPoint p{e, st.coords, lead};
            if (geometry::orbit_size(p, *w) != e || geometry::orbit_min(p, *w) != p) return;
            sink.push_back(ClosedPoint{e, std::move(p)});
        };
        if (serial) {
            auto st = make();
            for (std::uint64_t i = 0; i < en.count(); ++i) emit(st, i, out);
        } else {
            auto part = parallel::collect<ClosedPoint>(en.count(), make, emit);
            out.insert(out.end(), part.begin(), part.end());
        }
    }
    return out;
}

}  // namespace

std::vector<ClosedPoint> singular_points(const HomogPoly& f, const SubschemeSpec& x, unsigned B) {
    return singular_points_impl(f, x, B, false);
}

std::vector<ClosedPoint> singular_points_serial(const HomogPoly& f, const SubschemeSpec& x, unsigned B) {
    return singular_points_impl(f, x, B, true);
}

Verdict is_smooth_intersection(const HomogPoly& f, const SubschemeSpec& x, std::optional<unsigned> B) {
    return Checker(x, B).verdict(f);
}

// ---------------------------------------------------------------------------

bool nondegenerate_binary_quadratic(Elem a, Elem b, Elem c, const WorkingField& w) {
    if (w.characteristic() == 2) return b.v != 0;
    Elem disc = w.sub(w.mul(b, b), w.mul(w.from_int(4), w.mul(a, c)));
    return disc.v != 0;
}

SingularityClass classify_singularity(const HomogPoly& f, const SubschemeSpec& x, const ClosedPoint& p) {
    require(x.kind == geometry::SpaceKind::Projective && x.n == 2, ErrorKind::UnsupportedX,
            "node classification is implemented for the projective plane only");
    Checker checker(x, std::nullopt);
    require(!f.is_zero() && checker.singular_at(f, p.rep), ErrorKind::NotSingularHere,
            "H_f is not singular at the given point");
    auto w = gf::field_extend(x.field, p.rep.e);
    auto jet = mpoly::poly_jet2(f, p.rep.coords, p.rep.lead, *w);
    SingularityClass out;
    out.node = nondegenerate_binary_quadratic(jet.quad[0], jet.quad[1], jet.quad[2], *w);
    if (!out.node)
        out.degenerate_quadratic_part = std::any_of(jet.quad.begin(), jet.quad.end(), [](Elem c) { return c.v != 0; });
    return out;
}

// ---------------------------------------------------------------------------

std::uint64_t finite_locus_cap(unsigned d, const SubschemeSpec& x) {
    if (x.closed.empty()) return d == 0 ? 0 : sat_mul(d, sat_pow(d - 1, x.n - 1));
    unsigned D = d;
    std::uint64_t degx = 1;
    for (const auto& g : x.closed) {
        D = std::max(D, g.d());
        degx = sat_mul(degx, g.d());
    }
    if (x.m == 0) return degx;
    return sat_mul(sat_mul(d, sat_pow(D == 0 ? 0 : D - 1, x.m - 1)), degx);
}

LocusReport positive_dim_singular_locus(const HomogPoly& f, const SubschemeSpec& x, unsigned B) {
    Checker checker(x, B);
    const std::size_t want = x.n - x.m;
    LocusReport rep;
    rep.cap = finite_locus_cap(f.d(), x);
    std::vector<HomogPoly> extra{f};
    const unsigned b = feasible_bound(x, B);
    for (unsigned e = 1; e <= b; ++e) {
        auto w = gf::field_extend(x.field, e);
        ProjectiveEnumerator en(x.n, w->size());
        auto count = parallel::count_if(
            en.count(), [&] { return PointState{LocalSystem(x, w, extra), std::vector<Elem>(x.n + 1)}; },
            [&](PointState& st, std::uint64_t i) {
                unsigned lead = en.decode(i, st.coords);
                st.sys.load(st.coords);
                return singular_loaded(st, lead, want);
            });
        rep.counts.push_back(count);
        if (count > rep.cap) {
            rep.positive_dim = true;
            rep.witness_e = e;
            return rep;
        }
    }
    rep.bound = b;
    return rep;
}

// ---------------------------------------------------------------------------

const char* to_string(Integrality::Kind k) {
    switch (k) {
        case Integrality::Kind::GeometricallyIntegral: return "GeometricallyIntegral";
        case Integrality::Kind::ReducibleOver: return "ReducibleOver";
        case Integrality::Kind::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

// Multiplication-by-g matrix structure: product monomial index for (k in S_i, j in S_{d-i}).
std::vector<std::size_t> product_index(unsigned n, unsigned i, unsigned d) {
    auto ti = mpoly::monomials(n, i), tj = mpoly::monomials(n, d - i), td = mpoly::monomials(n, d);
    std::vector<std::size_t> out(ti->size() * tj->size());
    std::vector<std::uint16_t> exps(n + 1);
    for (std::size_t k = 0; k < ti->size(); ++k)
        for (std::size_t j = 0; j < tj->size(); ++j) {
            for (unsigned v = 0; v <= n; ++v) exps[v] = static_cast<std::uint16_t>(ti->exponent(k, v) + tj->exponent(j, v));
            out[k * tj->size() + j] = td->index_of(exps);
        }
    return out;
}

// every coefficient lies in the subfield F_{q^s} for some proper divisor s of e
bool in_proper_subfield(std::span<const Elem> c, unsigned e, const WorkingField& w) {
    for (unsigned s = 1; s < e; ++s) {
        if (e % s) continue;
        const std::uint64_t qs = sat_pow(w.base_order(), s);
        if (std::all_of(c.begin(), c.end(), [&](Elem x) { return w.pow(x, qs) == x; })) return true;
    }
    return false;
}

}  // namespace

Integrality geometrically_integral(const HomogPoly& f, std::uint64_t budget) {
    require(f.d() >= 1, ErrorKind::InvalidArgument, "geometric integrality needs deg f >= 1");
    require(!f.is_zero(), ErrorKind::InvalidArgument, "the zero form does not define a hypersurface");
    require(f.field().degree() == 1, ErrorKind::FieldMismatch, "form must be over its base field");
    const unsigned d = f.d(), n = f.n();
    Integrality out;
    for (unsigned e = 1; e <= d; ++e) {
        const unsigned imax = std::min(d / 2, d / e);
        if (imax == 0) break;
        FieldPtr w;
        try {
            w = gf::field_extend(f.field().base(), e);
        } catch (const Error& err) {
            out.kind = Integrality::Kind::Unknown;
            out.note = std::string("extension of degree ") + std::to_string(e) + " unavailable: " + err.what();
            return out;
        }
        const auto F = mpoly::poly_embed(f, w);
        const std::uint64_t Q = w->size();
        for (unsigned i = 1; i <= imax; ++i) {
            const auto ti = mpoly::monomials(n, i), tj = mpoly::monomials(n, d - i);
            const auto prod = product_index(n, i, d);
            const std::size_t gi = ti->size(), hj = tj->size(), fd = F.size();
            std::vector<Elem> g(gi);
            // g runs over vectors whose first nonzero entry is 1
            for (std::size_t leadpos = 0; leadpos < gi; ++leadpos) {
                const std::size_t free = gi - leadpos - 1;
                const std::uint64_t count = sat_pow(Q, static_cast<unsigned>(free));
                for (std::uint64_t code = 0; code < count; ++code) {
                    std::fill(g.begin(), g.end(), Elem{0});
                    g[leadpos] = WorkingField::one();
                    std::uint64_t c = code;
                    for (std::size_t t = leadpos + 1; t < gi; ++t) {
                        g[t] = Elem{static_cast<std::uint32_t>(c % Q)};
                        c /= Q;
                    }
                    if (e > 1 && in_proper_subfield(g, e, *w)) continue;
                    if (++out.candidates > budget) {
                        out.kind = Integrality::Kind::Unknown;
                        out.note = "factor candidate budget " + std::to_string(budget) + " exhausted";
                        return out;
                    }
                    linalg::Matrix m(fd, hj);
                    for (std::size_t k = 0; k < gi; ++k) {
                        if (g[k].v == 0) continue;
                        for (std::size_t j = 0; j < hj; ++j) {
                            Elem& slot = m.at(prod[k * hj + j], j);
                            slot = w->add(slot, g[k]);
                        }
                    }
                    auto sol = linalg::solve(m, F.coeffs(), *w);
                    if (!sol) continue;
                    HomogPoly gp(w, n, i, g), hp(w, n, d - i, sol->particular);
                    if (!(mpoly::poly_mul(gp, hp) == F))
                        fail(ErrorKind::InvariantBreach, "factorisation witness does not multiply back to f");
                    out.kind = Integrality::Kind::ReducibleOver;
                    out.e = e;
                    out.factor_degrees = {i, d - i};
                    out.factor = gp.to_string();
                    out.cofactor = hp.to_string();
                    return out;
                }
            }
        }
    }
    out.kind = Integrality::Kind::GeometricallyIntegral;
    return out;
}

// ---------------------------------------------------------------------------

PreparedScan::PreparedScan(const SubschemeSpec& x, unsigned d, std::vector<unsigned> degrees)
    : x_(x), d_(d), dim_(mpoly::binomial(x.n + d, x.n)), plain_(x.closed.empty()), table_(mpoly::monomials(x.n, d)) {
    const unsigned n = x.n;
    std::uint64_t cells = 0;
    for (unsigned e : degrees) {
        Level l;
        l.e = e;
        l.w = gf::field_extend(x.field, e);
        for (auto& p : geometry::points_over(x, e)) {
            l.coords.insert(l.coords.end(), p.coords.begin(), p.coords.end());
            l.leads.push_back(p.lead);
        }
        total_points_ += l.size();
        cells += l.size() * dim_;
        levels_.push_back(std::move(l));
    }
    tabulated_ = cells <= kMaxTabulated;
    if (tabulated_) {
        for (auto& l : levels_) {
            l.monomials.resize(l.size() * dim_);
            const auto count = static_cast<std::int64_t>(l.size());
            const WorkingField& w = *l.w;
            const auto& tab = *table_;
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
            for (std::int64_t idx = 0; idx < count; ++idx) {
                mpoly::PowerTable pw(n, std::max(1u, d));
                pw.fill({l.coords.data() + idx * (n + 1), n + 1}, w);
                Elem* row = l.monomials.data() + idx * dim_;
                for (std::size_t k = 0; k < dim_; ++k) {
                    Elem v = gf::WorkingField::one();
                    for (unsigned i = 0; i <= n; ++i) {
                        const unsigned ex = tab.exponent(k, i);
                        if (ex) v = w.mul(v, pw.get(i, ex));
                    }
                    row[k] = v;
                }
            }
        }
    }
    const std::uint32_t p = x.field.p;
    for (std::size_t k = 0; k < dim_; ++k)
        for (unsigned i = 0; i <= n; ++i) {
            const unsigned ex = table_->exponent(k, i);
            if (ex % p) deriv_.push_back(DerivTerm{static_cast<std::uint32_t>(k), static_cast<std::uint16_t>(i), ex % p});
        }
}

PreparedScan::Scratch PreparedScan::make_scratch() const {
    Scratch s;
    s.embedded.assign(dim_, Elem{0});
    s.grad.assign(x_.n + 1, Elem{0});
    s.pw = mpoly::PowerTable(x_.n, std::max(1u, d_));
    for (const auto& l : levels_) s.systems.emplace_back(x_, l.w);
    s.compiled.resize(levels_.size());
    return s;
}

void PreparedScan::begin_level(std::span<const Elem> coeffs, Scratch& s, std::size_t li) const {
    const WorkingField& w = *levels_[li].w;
    std::fill(s.embedded.begin(), s.embedded.end(), Elem{0});
    for (auto k : s.nonzero) s.embedded[k] = w.embed(coeffs[k]);
    if (!tabulated_) {
        HomogPoly f(x_.base(), x_.n, d_, std::vector<Elem>(coeffs.begin(), coeffs.end()));
        s.compiled[li] = mpoly::CompiledPoly(f, w, s.pw.stride());
    }
}

Elem PreparedScan::value(const Level& l, std::size_t idx, Scratch& s, std::size_t li) const {
    const WorkingField& w = *l.w;
    if (!tabulated_) {
        s.pw.fill({l.coords.data() + idx * (x_.n + 1), x_.n + 1}, w);
        return s.compiled[li].eval(s.pw, w);
    }
    const Elem* row = l.monomials.data() + idx * dim_;
    if (w.characteristic() == 2 && x_.q() == 2) {
        std::uint32_t acc = 0;
        for (auto k : s.nonzero) acc ^= row[k].v;
        return Elem{acc};
    }
    Elem acc{0};
    for (auto k : s.nonzero) acc = w.add(acc, w.mul(s.embedded[k], row[k]));
    return acc;
}

bool PreparedScan::singular_here(const Level& l, std::size_t idx, Scratch& s, std::size_t li) const {
    const WorkingField& w = *l.w;
    const unsigned n = x_.n;
    std::span<const Elem> point{l.coords.data() + idx * (n + 1), n + 1};
    const unsigned lead = l.leads[idx];
    if (tabulated_) s.pw.fill(point, w);
    std::fill(s.grad.begin(), s.grad.end(), Elem{0});
    const auto& tab = *table_;
    for (const auto& t : deriv_) {
        const Elem c = s.embedded[t.k];
        if (c.v == 0 || t.var == lead) continue;
        Elem v = w.mul(c, w.from_int(t.factor));
        for (unsigned i = 0; i <= n; ++i) {
            unsigned ex = tab.exponent(t.k, i) - (i == t.var ? 1u : 0u);
            if (ex) v = w.mul(v, s.pw.get(i, ex));
        }
        s.grad[t.var] = w.add(s.grad[t.var], v);
    }
    if (plain_) {
        for (unsigned i = 0; i <= n; ++i)
            if (i != lead && s.grad[i].v != 0) return false;
        return true;
    }
    auto& sys = s.systems[li];
    sys.load(point);
    const std::size_t want = n - x_.m;
    return sys.jacobian_rank_with(lead, s.grad, want + 1) < want + 1;
}

}  // namespace bertini::smooth
