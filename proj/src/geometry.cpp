#include "bertini/geometry.hpp"

#include "bertini/config.hpp"
#include "bertini/error.hpp"
#include "bertini/parallel.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>

namespace bertini::geometry {

namespace {

unsigned max_degree(const SubschemeSpec& x, std::span<const HomogPoly> extra) {
    unsigned d = 0;
    for (const auto& g : x.closed) d = std::max(d, g.d());
    for (const auto& h : x.open_nonvanishing) d = std::max(d, h.d());
    for (const auto& f : extra) d = std::max(d, f.d());
    return d;
}

std::vector<mpoly::CompiledPoly> compile_partials(const HomogPoly& f, const WorkingField& w, unsigned stride) {
    std::vector<mpoly::CompiledPoly> out;
    for (unsigned i = 0; i <= f.n(); ++i) out.emplace_back(mpoly::poly_derive(f, i), w, stride);
    return out;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        r *= base;
        require(r < (static_cast<unsigned __int128>(1) << 63), ErrorKind::Overflow, "point count exceeds 2^63");
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

SubschemeSpec make_spec(std::string name, FieldDesc field, unsigned n, unsigned m, std::vector<HomogPoly> closed,
                        std::vector<HomogPoly> open_nonvanishing) {
    require(n >= 1, ErrorKind::BadSpec, "ambient dimension must be at least 1");
    require(m <= n, ErrorKind::BadSpec, "claimed dimension m exceeds n");
    const auto base = gf::base_field(field);
    for (const auto* list : {&closed, &open_nonvanishing})
        for (const auto& g : *list) {
            require(g.n() == n, ErrorKind::BadSpec, "generator has the wrong number of variables");
            require(g.field().same_field(*base), ErrorKind::FieldMismatch, "generator over a different field");
        }
    SubschemeSpec x;
    x.name = std::move(name);
    x.field = std::move(field);
    x.n = n;
    x.m = m;
    x.closed = std::move(closed);
    x.open_nonvanishing = std::move(open_nonvanishing);
    return x;
}

SubschemeSpec projective_space(const FieldDesc& field, unsigned n) {
    auto x = make_spec("P^" + std::to_string(n), field, n, n, {}, {});
    x.kind = SpaceKind::Projective;
    return x;
}

SubschemeSpec affine_space(const FieldDesc& field, unsigned n) {
    HomogPoly x0(gf::base_field(field), n, 1);
    x0.set_coeff(0, WorkingField::one());
    auto x = make_spec("A^" + std::to_string(n), field, n, n, {}, {x0});
    x.kind = SpaceKind::Affine;
    return x;
}

SubschemeSpec hypersurface(const HomogPoly& f, std::string name) {
    require(f.d() >= 1 && !f.is_zero(), ErrorKind::BadSpec, "hypersurface needs a nonzero form of positive degree");
    if (name.empty()) name = "V(" + f.to_string() + ")";
    return make_spec(std::move(name), f.field().base(), f.n(), f.n() - 1, {f}, {});
}

HomogPoly katz_form(std::uint64_t q, unsigned n) {
    auto desc = gf::field_of_order(q);
    auto base = gf::base_field(desc);
    const unsigned vars = 2 * n + 2;
    require(q + 1 < 65536, ErrorKind::InvalidArgument, "q too large for a Katz form");
    HomogPoly f(base, vars - 1, static_cast<unsigned>(q + 1));
    std::vector<std::uint16_t> exps(vars);
    for (unsigned i = 0; i <= n; ++i) {
        const unsigned xi = i, yi = n + 1 + i;
        std::fill(exps.begin(), exps.end(), 0);
        exps[xi] = 1;
        exps[yi] = static_cast<std::uint16_t>(q);
        f.add_term(exps, WorkingField::one());
        std::fill(exps.begin(), exps.end(), 0);
        exps[xi] = static_cast<std::uint16_t>(q);
        exps[yi] = 1;
        f.add_term(exps, base->neg(WorkingField::one()));
    }
    return f;
}

SubschemeSpec spec_from_json(const nlohmann::json& j) {
    try {
        require(j.is_object(), ErrorKind::BadSpec, "variety spec must be a JSON object");
        const auto p = j.at("p").get<std::uint64_t>();
        const auto a = j.value("a", 1u);
        const auto n = j.at("n").get<unsigned>();
        const auto m = j.at("m").get<unsigned>();
        auto field = gf::field_make(p, a);
        auto base = gf::base_field(field);
        std::vector<HomogPoly> closed, open;
        for (const auto& s : j.value("closed", nlohmann::json::array()))
            closed.push_back(mpoly::poly_parse(s.get<std::string>(), base, n));
        for (const auto& s : j.value("open_nonvanishing", nlohmann::json::array()))
            open.push_back(mpoly::poly_parse(s.get<std::string>(), base, n));
        return make_spec(j.value("name", std::string("X")), std::move(field), n, m, std::move(closed),
                         std::move(open));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadSpec, std::string("malformed variety spec: ") + e.what());
    }
}

nlohmann::json spec_to_json(const SubschemeSpec& x) {
    nlohmann::json j;
    j["name"] = x.name;
    j["p"] = x.field.p;
    j["a"] = x.field.a;
    j["n"] = x.n;
    j["m"] = x.m;
    j["closed"] = nlohmann::json::array();
    for (const auto& g : x.closed) j["closed"].push_back(g.to_string());
    j["open_nonvanishing"] = nlohmann::json::array();
    for (const auto& h : x.open_nonvanishing) j["open_nonvanishing"].push_back(h.to_string());
    return j;
}

SubschemeSpec resolve_space(std::string_view name, std::optional<std::uint64_t> q) {
    static const std::regex named(R"(([PA])\^?(\d+))");
    static const std::regex katz(R"(katz\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    const std::string s(name);
    std::smatch mt;
    if (std::regex_match(s, mt, named)) {
        require(q.has_value(), ErrorKind::BadSpec, "space " + s + " needs --q");
        const unsigned n = static_cast<unsigned>(std::stoul(mt[2]));
        require(n >= 1 && n <= 64, ErrorKind::BadSpec, "dimension out of range in " + s);
        auto field = gf::field_of_order(*q);
        return mt[1] == "P" ? projective_space(field, n) : affine_space(field, n);
    }
    if (std::regex_match(s, mt, katz)) {
        const unsigned n = static_cast<unsigned>(std::stoul(mt[1]));
        const std::uint64_t kq = std::stoull(mt[2]);
        require(!q || *q == kq, ErrorKind::BadSpec, "--q disagrees with " + s);
        auto f = katz_form(kq, n);
        return hypersurface(f, s);
    }
    require(std::filesystem::exists(s), ErrorKind::BadSpec, "unknown space '" + s + "' (not a built-in or a file)");
    std::ifstream in(s);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadSpec, "cannot parse " + s + ": " + e.what());
    }
    auto x = spec_from_json(j);
    require(!q || *q == x.q(), ErrorKind::BadSpec, "--q disagrees with the field in " + s);
    return x;
}

// ---------------------------------------------------------------------------

std::string format_point(const ProjPoint& p, const WorkingField& w) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) out += ':';
        out += w.format(p.coords[i]);
    }
    return out + ")";
}

ProjPoint normalize(std::vector<Elem> coords, unsigned e, const WorkingField& w) {
    auto it = std::find_if(coords.begin(), coords.end(), [](Elem c) { return c.v != 0; });
    require(it != coords.end(), ErrorKind::InvalidArgument, "the zero vector is not a projective point");
    const unsigned lead = static_cast<unsigned>(it - coords.begin());
    const Elem inv = w.inv(*it);
    for (auto& c : coords) c = w.mul(c, inv);
    return ProjPoint{e, std::move(coords), lead};
}

ProjectiveEnumerator::ProjectiveEnumerator(unsigned n, std::uint64_t Q) : n_(n), Q_(Q) {
    std::uint64_t acc = 0;
    for (unsigned b = 0; b <= n; ++b) {  // block b has lead n - b and Q^b points
        block_start_.push_back(acc);
        acc += checked_pow(Q, b);
    }
    total_ = acc;
}

unsigned ProjectiveEnumerator::decode(std::uint64_t index, std::span<Elem> coords) const {
    unsigned b = n_;
    while (block_start_[b] > index) --b;
    std::uint64_t t = index - block_start_[b];
    const unsigned lead = n_ - b;
    for (unsigned i = 0; i < lead; ++i) coords[i] = Elem{0};
    coords[lead] = Elem{1};
    for (unsigned i = n_; i > lead; --i) {
        coords[i] = Elem{static_cast<std::uint32_t>(t % Q_)};
        t /= Q_;
    }
    return lead;
}

std::uint64_t checked_scan_size(unsigned n, std::uint64_t Q) {
    ProjectiveEnumerator en(n, Q);
    require(en.count() <= config::max_scan_points(), ErrorKind::BudgetExceeded,
            "scanning " + std::to_string(en.count()) + " points exceeds the scan budget " +
                std::to_string(config::max_scan_points()));
    return en.count();
}

ProjPoint frobenius(const ProjPoint& p, const WorkingField& w) {
    ProjPoint out = p;
    for (auto& c : out.coords) c = w.frobenius(c);
    return out;
}

unsigned orbit_size(const ProjPoint& p, const WorkingField& w) {
    ProjPoint cur = frobenius(p, w);
    unsigned k = 1;
    while (cur != p) {
        cur = frobenius(cur, w);
        ++k;
    }
    return k;
}

ProjPoint orbit_min(const ProjPoint& p, const WorkingField& w) {
    ProjPoint best = p, cur = frobenius(p, w);
    while (cur != p) {
        if (cur < best) best = cur;
        cur = frobenius(cur, w);
    }
    return best;
}

ClosedPoint closed_point_of(const ProjPoint& p, const WorkingField& w) {
    return ClosedPoint{orbit_size(p, w), orbit_min(p, w)};
}

// ---------------------------------------------------------------------------

LocalSystem::LocalSystem(const SubschemeSpec& x, FieldPtr w, std::span<const HomogPoly> extra)
    : w_(std::move(w)), n_(x.n), pw_(x.n, std::max(1u, max_degree(x, extra))) {
    const unsigned stride = pw_.stride();
    for (const auto& g : x.closed) {
        closed_.emplace_back(g, *w_, stride);
        closed_partials_.push_back(compile_partials(g, *w_, stride));
    }
    for (const auto& h : x.open_nonvanishing) open_.emplace_back(h, *w_, stride);
    for (const auto& f : extra) {
        require(f.n() == x.n, ErrorKind::FieldMismatch, "form and X live in different ambient spaces");
        extra_.emplace_back(f, *w_, stride);
        extra_partials_.push_back(compile_partials(f, *w_, stride));
    }
}

void LocalSystem::load(std::span<const Elem> point) { pw_.fill(point, *w_); }

bool LocalSystem::in_x() const {
    for (const auto& g : closed_)
        if (g.eval(pw_, *w_).v != 0) return false;
    if (open_.empty()) return true;
    for (const auto& h : open_)
        if (h.eval(pw_, *w_).v != 0) return true;
    return false;
}

Elem LocalSystem::extra_value(std::size_t i) const { return extra_[i].eval(pw_, *w_); }

std::size_t LocalSystem::jacobian_rank(unsigned lead, std::size_t extra_rows, std::size_t stop_at) const {
    const std::size_t rows = closed_.size() + extra_rows;
    if (rows == 0 || stop_at == 0) return 0;
    linalg::Matrix jac(rows, n_);
    auto fill = [&](std::size_t r, const std::vector<mpoly::CompiledPoly>& partials) {
        unsigned c = 0;
        for (unsigned i = 0; i <= n_; ++i) {
            if (i == lead) continue;
            jac.at(r, c++) = partials[i].eval(pw_, *w_);
        }
    };
    for (std::size_t r = 0; r < closed_.size(); ++r) fill(r, closed_partials_[r]);
    for (std::size_t r = 0; r < extra_rows; ++r) fill(closed_.size() + r, extra_partials_[r]);
    return linalg::rank(std::move(jac), *w_, stop_at);
}

std::size_t LocalSystem::jacobian_rank_with(unsigned lead, std::span<const Elem> gradient,
                                            std::size_t stop_at) const {
    linalg::Matrix jac(closed_.size() + 1, n_);
    for (std::size_t r = 0; r < closed_.size(); ++r) {
        unsigned c = 0;
        for (unsigned i = 0; i <= n_; ++i)
            if (i != lead) jac.at(r, c++) = closed_partials_[r][i].eval(pw_, *w_);
    }
    unsigned c = 0;
    for (unsigned i = 0; i <= n_; ++i)
        if (i != lead) jac.at(closed_.size(), c++) = gradient[i];
    return linalg::rank(std::move(jac), *w_, stop_at);
}

// ---------------------------------------------------------------------------

namespace {

struct ScanState {
    LocalSystem sys;
    std::vector<Elem> coords;
};

}  // namespace

std::vector<ProjPoint> points_over(const SubschemeSpec& x, unsigned e) {
    auto w = gf::field_extend(x.field, e);
    ProjectiveEnumerator en(x.n, w->size());
    checked_scan_size(x.n, w->size());
    return parallel::collect<ProjPoint>(
        en.count(), [&] { return ScanState{LocalSystem(x, w), std::vector<Elem>(x.n + 1)}; },
        [&](ScanState& st, std::uint64_t i, std::vector<ProjPoint>& out) {
            unsigned lead = en.decode(i, st.coords);
            st.sys.load(st.coords);
            if (st.sys.in_x()) out.push_back(ProjPoint{e, st.coords, lead});
        });
}

std::vector<ProjPoint> points_over_serial(const SubschemeSpec& x, unsigned e) {
    auto w = gf::field_extend(x.field, e);
    ProjectiveEnumerator en(x.n, w->size());
    checked_scan_size(x.n, w->size());
    LocalSystem sys(x, w);
    std::vector<Elem> coords(x.n + 1);
    std::vector<ProjPoint> out;
    for (std::uint64_t i = 0; i < en.count(); ++i) {
        unsigned lead = en.decode(i, coords);
        sys.load(coords);
        if (sys.in_x()) out.push_back(ProjPoint{e, coords, lead});
    }
    return out;
}

std::uint64_t count_points(const SubschemeSpec& x, unsigned e) {
    auto w = gf::field_extend(x.field, e);
    ProjectiveEnumerator en(x.n, w->size());
    checked_scan_size(x.n, w->size());
    return parallel::count_if(
        en.count(), [&] { return ScanState{LocalSystem(x, w), std::vector<Elem>(x.n + 1)}; },
        [&](ScanState& st, std::uint64_t i) {
            en.decode(i, st.coords);
            st.sys.load(st.coords);
            return st.sys.in_x();
        });
}

std::uint64_t count_points_serial(const SubschemeSpec& x, unsigned e) {
    return points_over_serial(x, e).size();
}

std::vector<std::uint64_t> count_sequence(const SubschemeSpec& x, unsigned r_max) {
    std::vector<std::uint64_t> N;
    for (unsigned r = 1; r <= r_max; ++r) {
        if (x.kind == SpaceKind::Projective) {
            const std::uint64_t Q = checked_pow(x.q(), r);
            std::uint64_t total = 0;
            for (unsigned i = 0; i <= x.n; ++i) {
                const std::uint64_t term = checked_pow(Q, i);
                require(total <= (std::uint64_t{1} << 63) - term, ErrorKind::Overflow, "point count exceeds 2^63");
                total += term;
            }
            N.push_back(total);
        } else if (x.kind == SpaceKind::Affine) {
            N.push_back(checked_pow(checked_pow(x.q(), r), x.n));
        } else {
            N.push_back(count_points(x, r));
        }
    }
    return N;
}

int mobius(unsigned n) {
    int result = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    if (n > 1) result = -result;
    return result;
}

std::vector<std::uint64_t> closed_counts(std::span<const std::uint64_t> N) {
    require(!N.empty(), ErrorKind::InvalidArgument, "closed_counts needs at least N_1");
    std::vector<std::uint64_t> a;
    for (unsigned e = 1; e <= N.size(); ++e) {
        __int128 sum = 0;
        for (unsigned d = 1; d <= e; ++d)
            if (e % d == 0) sum += static_cast<__int128>(mobius(e / d)) * static_cast<__int128>(N[d - 1]);
        require(sum >= 0 && sum % e == 0, ErrorKind::InconsistentCounts,
                "point counts do not come from a variety (degree " + std::to_string(e) + ")");
        a.push_back(static_cast<std::uint64_t>(sum / e));
    }
    return a;
}

std::vector<ClosedPoint> closed_points(const SubschemeSpec& x, unsigned e) {
    auto w = gf::field_extend(x.field, e);
    std::vector<ClosedPoint> out;
    for (auto& p : points_over(x, e)) {
        if (orbit_size(p, *w) != e) continue;
        if (orbit_min(p, *w) != p) continue;
        out.push_back(ClosedPoint{e, std::move(p)});
    }
    return out;
}

// ---------------------------------------------------------------------------

const char* to_string(SmoothValidation::Status s) {
    switch (s) {
        case SmoothValidation::Status::ValidUpTo: return "ValidUpTo";
        case SmoothValidation::Status::NotSmoothAt: return "NotSmoothAt";
        case SmoothValidation::Status::WrongRankAt: return "WrongRankAt";
    }
    return "?";
}

SmoothValidation validate_smooth(const SubschemeSpec& x, unsigned B) {
    require(B >= 1, ErrorKind::InvalidArgument, "validation bound must be at least 1");
    const std::size_t want = x.n - x.m;
    for (unsigned e = 1; e <= B; ++e) {
        auto w = gf::field_extend(x.field, e);
        ProjectiveEnumerator en(x.n, w->size());
        checked_scan_size(x.n, w->size());
        auto hit = parallel::first_index(
            en.count(), [&] { return ScanState{LocalSystem(x, w), std::vector<Elem>(x.n + 1)}; },
            [&](ScanState& st, std::uint64_t i) {
                unsigned lead = en.decode(i, st.coords);
                st.sys.load(st.coords);
                return st.sys.in_x() && st.sys.jacobian_rank(lead, 0, want + 1) != want;
            });
        if (!hit) continue;
        std::vector<Elem> coords(x.n + 1);
        unsigned lead = en.decode(*hit, coords);
        LocalSystem sys(x, w);
        sys.load(coords);
        const std::size_t r = sys.jacobian_rank(lead, 0, want + 1);
        ProjPoint p{e, coords, lead};
        SmoothValidation v;
        v.status = r < want ? SmoothValidation::Status::NotSmoothAt : SmoothValidation::Status::WrongRankAt;
        v.bound = e;
        v.witness = closed_point_of(p, *w);
        v.rank = r;
        return v;
    }
    return SmoothValidation{SmoothValidation::Status::ValidUpTo, B, std::nullopt, want};
}

}  // namespace bertini::geometry
