#include "canonical_json.hpp"

#include "bertini/config.hpp"
#include "bertini/construct.hpp"
#include "bertini/error.hpp"
#include "bertini/parallel.hpp"
#include "bertini/sieve.hpp"
#include "bertini/smoothness.hpp"
#include "bertini/zeta.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace bertini;
using nlohmann::json;
using geometry::ClosedPoint;
using geometry::SubschemeSpec;
using mpoly::HomogPoly;
using zeta::Rational;

namespace {

constexpr const char* artifact_version = "1.0";

struct Options {
    std::string space = "P2";
    std::optional<std::uint64_t> q;
    std::string degrees = "3";
    unsigned s = 3;
    std::optional<unsigned> r;
    std::string pred = "smooth";
    std::string mode = "exhaustive";
    std::uint64_t trials = 10000;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> bound;
    std::optional<unsigned> threads;
    std::string out, csv;
    std::uint64_t budget = 1u << 16;
    unsigned pairs = 1;
    bool no_timing = false;
    bool from_stdin = false;
    std::string form;
    std::string points = "rational";
    unsigned order = 2;
    std::vector<std::string> tangent;
    std::optional<unsigned> avoid_below;
    unsigned d_min = 1, d_max = 1;
    bool search = false;
    unsigned n = 2;
    unsigned dx_min = 2, dx_max = 6;
    std::uint64_t limit = 1000000;
    unsigned poly_degree = 12;
};

struct Report {
    json params = json::object();
    json result = json::object();
    std::optional<std::uint64_t> seed;
};

std::string rat(const Rational& r) { return zeta::to_string(r); }

std::string point_text(const geometry::ProjPoint& p, const gf::FieldDesc& field) {
    return geometry::format_point(p, *gf::field_extend(field, p.e));
}

json point_json(const ClosedPoint& p, const gf::FieldDesc& field) {
    return json{{"point", point_text(p.rep, field)}, {"degree", p.degree}};
}

json verdict_json(const smooth::Verdict& v, const gf::FieldDesc& field) {
    json j{{"kind", smooth::to_string(v.kind)}, {"bound", v.bound}, {"exact", v.exact}};
    j["certified_bound"] = v.certified ? json(*v.certified) : json(nullptr);
    j["witness"] = v.witness ? point_json(*v.witness, field) : json(nullptr);
    return j;
}

json integrality_json(const smooth::Integrality& it) {
    json j{{"kind", smooth::to_string(it.kind)}, {"candidates", it.candidates}};
    if (it.kind == smooth::Integrality::Kind::ReducibleOver) {
        j["e"] = it.e;
        j["factor_degrees"] = it.factor_degrees;
        j["factor"] = it.factor;
        j["cofactor"] = it.cofactor;
    }
    if (!it.note.empty()) j["note"] = it.note;
    return j;
}

std::uint64_t require_seed(const Options& o, const char* what) {
    require(o.seed.has_value(), ErrorKind::InvalidArgument, std::string(what) + " is randomized: --seed is required");
    return *o.seed;
}

SubschemeSpec space_of(const Options& o, Report& rep) {
    auto x = geometry::resolve_space(o.space, o.q);
    rep.params["space"] = o.space;
    rep.params["q"] = x.q();
    return x;
}

std::vector<unsigned> parse_degrees(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(static_cast<unsigned>(std::stoul(item)));
            } else {
                const unsigned a = static_cast<unsigned>(std::stoul(item.substr(0, dots)));
                const unsigned b = static_cast<unsigned>(std::stoul(item.substr(dots + 2)));
                require(a <= b && b - a < 4096, ErrorKind::InvalidArgument, "bad degree range " + item);
                for (unsigned d = a; d <= b; ++d) out.push_back(d);
            }
        } catch (const std::logic_error&) {
            fail(ErrorKind::InvalidArgument, "bad degree list '" + text + "'");
        }
    }
    require(!out.empty(), ErrorKind::InvalidArgument, "empty degree list");
    return out;
}

// ---- points ------------------------------------------------------------------

ClosedPoint parse_point(std::string_view text, const SubschemeSpec& x) {
    auto open = text.find('('), close = text.rfind(')');
    require(open != std::string_view::npos && close != std::string_view::npos && open < close,
            ErrorKind::SyntaxError, "point '" + std::string(text) + "' must look like (a:b:c)");
    const auto w = x.base();
    std::vector<gf::Elem> coords;
    std::string_view body = text.substr(open + 1, close - open - 1);
    std::size_t start = 0;
    for (;;) {
        auto colon = body.find(':', start);
        coords.push_back(w->parse(body.substr(start, colon == std::string_view::npos ? colon : colon - start)));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    require(coords.size() == x.n + 1, ErrorKind::InvalidArgument,
            "point " + std::string(text) + " needs " + std::to_string(x.n + 1) + " coordinates");
    return ClosedPoint{1, geometry::normalize(coords, 1, *w)};
}

// "rational", "degree:E", or "(a:b:c),(d:e:f)"
std::vector<ClosedPoint> parse_points(const std::string& text, const SubschemeSpec& x) {
    if (text == "rational" || text.find("rational points") != std::string::npos) return geometry::closed_points(x, 1);
    if (text.rfind("degree:", 0) == 0) {
        unsigned e = 0;
        try {
            e = static_cast<unsigned>(std::stoul(text.substr(7)));
        } catch (const std::logic_error&) {
            fail(ErrorKind::InvalidArgument, "bad point set '" + text + "'");
        }
        require(e >= 1, ErrorKind::InvalidArgument, "point degree must be at least 1");
        return geometry::closed_points(x, e);
    }
    std::vector<ClosedPoint> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto close = text.find(')', pos);
        require(close != std::string::npos, ErrorKind::SyntaxError, "unterminated point in '" + text + "'");
        out.push_back(parse_point(std::string_view(text).substr(pos, close + 1 - pos), x));
        pos = text.find('(', close);
        if (pos == std::string::npos) break;
    }
    require(!out.empty(), ErrorKind::InvalidArgument, "no points in '" + text + "'");
    return out;
}

// ---- predicates --------------------------------------------------------------

// smooth | smooth_below:R | nodes | integral | always | not:P, joined with '&'
sieve::Predicate parse_predicate(const std::string& text, const SubschemeSpec& x, std::optional<unsigned> bound) {
    if (auto amp = text.find('&'); amp != std::string::npos) {
        sieve::And a;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, '&')) a.parts.push_back(parse_predicate(part, x, bound));
        return sieve::Predicate{a};
    }
    if (text.rfind("not:", 0) == 0) return sieve::negate(parse_predicate(text.substr(4), x, bound));
    if (text == "smooth") return sieve::Predicate{sieve::SmoothIntersection{x, bound}};
    if (text == "nodes") {
        require(x.kind == geometry::SpaceKind::Projective && x.n == 2, ErrorKind::UnsupportedX,
                "the nodes predicate needs X = P^2");
        return sieve::Predicate{sieve::AtWorstNodes{bound}};
    }
    if (text == "integral") return sieve::Predicate{sieve::GeomIntegral{}};
    if (text == "always") return sieve::Predicate{sieve::Always{}};
    if (text.rfind("smooth_below:", 0) == 0) {
        unsigned r = 0;
        try {
            r = static_cast<unsigned>(std::stoul(text.substr(13)));
        } catch (const std::logic_error&) {
            fail(ErrorKind::InvalidArgument, "bad predicate '" + text + "'");
        }
        require(r >= 1, ErrorKind::InvalidArgument, "smooth_below needs r >= 1");
        return sieve::Predicate{sieve::SmoothAtPointsBelow{x, r}};
    }
    fail(ErrorKind::InvalidArgument, "unknown predicate '" + text + "'");
}

json prediction_json(const zeta::DensityPrediction& p) {
    json j{{"value", rat(p.value)}, {"decimal", zeta::to_double(p.value)}, {"provenance", zeta::to_string(p.provenance)}};
    if (p.provenance == zeta::DensityPrediction::Provenance::Truncated) {
        j["r"] = p.r;
        j["stabilization"] = p.stabilization;
    }
    if (!p.note.empty()) j["note"] = p.note;
    return j;
}

// Limit density the predicate should approach, when one is known.
std::optional<json> predict(const std::string& text, const SubschemeSpec& x, unsigned r) {
    if (text.find('&') != std::string::npos) return std::nullopt;
    if (text.rfind("not:", 0) == 0) {
        auto inner = predict(text.substr(4), x, r);
        if (!inner) return std::nullopt;
        Rational v(inner->at("value").get<std::string>());
        v = Rational(1) - v;
        (*inner)["value"] = rat(v);
        (*inner)["decimal"] = zeta::to_double(v);
        return inner;
    }
    if (text == "smooth") return prediction_json(zeta::predict_density(x, r));
    if (text == "nodes") {
        zeta::DensityPrediction p;
        p.value = zeta::zeta_inv_closed_form(x, x.m + 2);
        p.note = "zeta_X(m+2)^-1";
        return prediction_json(p);
    }
    if (text == "integral" || text == "always") {
        zeta::DensityPrediction p;
        p.value = Rational(1);
        return prediction_json(p);
    }
    if (text.rfind("smooth_below:", 0) == 0) {
        auto a = zeta::zeta_inv_truncated(x, x.m + 1, static_cast<unsigned>(std::stoul(text.substr(13))));
        zeta::DensityPrediction p;
        p.provenance = zeta::DensityPrediction::Provenance::Truncated;
        p.value = a.value;
        p.r = a.r;
        p.stabilization = a.stabilization;
        p.note = "exact for d >= the jet threshold";
        return prediction_json(p);
    }
    return std::nullopt;
}

json estimate_json(const sieve::DensityEstimate& e) {
    json j{{"d", e.d},
           {"hits", e.hits},
           {"total", e.total},
           {"fraction", rat(e.fraction)},
           {"decimal", e.value()},
           {"ci95", json::array({e.ci95.lo, e.ci95.hi})},
           {"provenance", e.mode == sieve::DensityEstimate::Mode::Exhaustive ? "Exhaustive" : "MC"},
           {"predicate", e.predicate}};
    return j;
}

// ---- commands ------------------------------------------------------------------

void cmd_density(const Options& o, Report& rep) {
    auto x = space_of(o, rep);
    auto degrees = parse_degrees(o.degrees);
    require(o.mode == "exhaustive" || o.mode == "mc", ErrorKind::InvalidArgument, "--mode is exhaustive or mc");
    const bool mc = o.mode == "mc";
    const unsigned r = o.r.value_or(zeta::default_truncation);
    auto pred = parse_predicate(o.pred, x, o.bound);
    rep.params["d"] = degrees;
    rep.params["pred"] = o.pred;
    rep.params["mode"] = o.mode;
    rep.params["bound"] = o.bound ? json(*o.bound) : json(nullptr);
    rep.params["r"] = r;
    if (mc) {
        rep.seed = require_seed(o, "mc mode");
        rep.params["trials"] = o.trials;
    }
    auto rows = sieve::density_sweep(x.field, x.n, degrees, pred,
                                     mc ? sieve::DensityEstimate::Mode::MonteCarlo : sieve::DensityEstimate::Mode::Exhaustive,
                                     o.trials, rep.seed.value_or(0));
    auto prediction = predict(o.pred, x, r);
    json out = json::array();
    for (const auto& e : rows) {
        json j = estimate_json(e);
        if (prediction) {
            j["prediction"] = *prediction;
            j["difference"] = e.value() - prediction->at("decimal").get<double>();
        } else {
            j["prediction"] = nullptr;
        }
        out.push_back(j);
    }
    rep.result = out.size() == 1 ? out[0] : json{{"rows", out}};
    if (!o.csv.empty()) {
        std::ofstream f(o.csv);
        require(static_cast<bool>(f), ErrorKind::InvalidArgument, "cannot write " + o.csv);
        f << sieve::sweep_csv(rows);
    }
}

void cmd_zeta(const Options& o, Report& rep) {
    auto x = space_of(o, rep);
    rep.params["s"] = o.s;
    rep.params["r"] = o.r ? json(*o.r) : json(nullptr);
    std::optional<Rational> closed;
    if (x.kind != geometry::SpaceKind::General) closed = zeta::zeta_inv_closed_form(x, o.s);
    if (closed) {
        rep.result = json{{"value", rat(*closed)}, {"decimal", zeta::to_double(*closed)}, {"provenance", "ClosedForm"}};
    }
    if (!closed || o.r) {
        auto a = zeta::zeta_inv_truncated(x, o.s, o.r.value_or(zeta::default_truncation));
        json t{{"value", rat(a.value)},
               {"decimal", zeta::to_double(a.value)},
               {"provenance", "Truncated"},
               {"r", a.r},
               {"closed_point_counts", a.terms},
               {"stabilization", a.stabilization}};
        if (closed) rep.result["truncated"] = t;
        else rep.result = t;
    }
}

HomogPoly read_form(const Options& o, const SubschemeSpec& x) {
    std::string text = o.form;
    if (o.from_stdin) {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
        auto j = json::parse(text, nullptr, false);
        if (!j.is_discarded() && j.is_object()) {
            require(j.contains("result") && j["result"].contains("form"), ErrorKind::InvalidArgument,
                    "stdin report has no result.form");
            text = j["result"]["form"].get<std::string>();
        }
    }
    require(!text.empty(), ErrorKind::InvalidArgument, "no form given (use --form or --stdin)");
    return mpoly::poly_parse(text, x.base(), x.n);
}

void cmd_smooth_check(const Options& o, Report& rep) {
    auto x = space_of(o, rep);
    auto f = read_form(o, x);
    rep.params["form"] = f.to_string();
    rep.params["bound"] = o.bound ? json(*o.bound) : json(nullptr);
    smooth::Checker checker(x, o.bound);
    auto v = checker.verdict(f);
    rep.result["intersection"] = verdict_json(v, x.field);
    rep.result["intersection"]["provenance"] = "Exhaustive";
    if (f.d() >= 1 && !f.is_zero()) {
        const unsigned b = smooth::feasible_bound(geometry::hypersurface(f), o.bound.value_or(3));
        auto val = geometry::validate_smooth(geometry::hypersurface(f), b);
        json j{{"status", geometry::to_string(val.status)}, {"bound", val.bound}, {"provenance", "Exhaustive"}};
        j["witness"] = val.witness ? point_json(*val.witness, x.field) : json(nullptr);
        rep.result["hypersurface"] = j;
    }
}

void cmd_jet_rank(const Options& o, Report& rep) {
    auto x = space_of(o, rep);
    const unsigned d = parse_degrees(o.degrees).front();
    require(o.order == 1 || o.order == 2, ErrorKind::InvalidArgument, "--order is 1 or 2");
    auto pts = parse_points(o.points, x);
    std::vector<sieve::JetPoint> jp;
    for (auto& p : pts) jp.push_back(sieve::JetPoint{p, o.order});
    sieve::JetScheme z(x.field, x.n, jp);
    rep.params["points"] = o.points;
    rep.params["order"] = o.order;
    rep.params["d"] = d;
    auto r = sieve::jet_map_rank(z, d);
    rep.result = json{{"rows", r.rows},        {"cols", r.cols},
                      {"rank", r.rank},        {"surjective", r.surjective},
                      {"threshold", r.threshold}, {"points", pts.size()},
                      {"scheme", z.describe()}, {"provenance", "Exact"}};
}

json search_json(const construct::SearchResult& r, const gf::FieldDesc& field) {
    json j{{"kind", construct::to_string(r.kind)}, {"provenance", "Search"}};
    json logs = json::array();
    for (const auto& l : r.degrees)
        logs.push_back(json{{"d", l.d}, {"mode", l.mode}, {"tried", l.tried}, {"space", l.space},
                            {"systems", l.systems}, {"note", l.note}});
    j["degrees"] = logs;
    if (r.found()) {
        j["d"] = r.d;
        j["form"] = r.f->to_string();
        j["verdict"] = verdict_json(r.verdict, field);
        j["integrality"] = integrality_json(r.integrality);
        j["checked"] = r.checked;
    }
    return j;
}

void cmd_find(const Options& o, Report& rep) {
    auto x = space_of(o, rep);
    rep.seed = require_seed(o, "find");
    construct::SearchSpec s;
    s.x = x;
    if (!o.points.empty() && o.points != "none") s.pass_through = parse_points(o.points, x);
    for (const auto& t : o.tangent) {
        auto eq = t.find('=');
        require(eq != std::string::npos, ErrorKind::SyntaxError, "--tangent takes '(point)=linear form'");
        s.tangent.push_back(construct::TangentCondition{parse_point(t.substr(0, eq), x),
                                                        mpoly::poly_parse(t.substr(eq + 1), x.base(), x.n)});
    }
    s.avoid_degree_below = o.avoid_below;
    s.d_min = o.d_min;
    s.d_max = o.d_max;
    s.budget = o.budget;
    s.seed = *rep.seed;
    s.smooth_bound = o.bound;
    rep.params["points"] = o.points;
    rep.params["tangent"] = o.tangent;
    rep.params["avoid_below"] = o.avoid_below ? json(*o.avoid_below) : json(nullptr);
    rep.params["d_min"] = o.d_min;
    rep.params["d_max"] = o.d_max;
    rep.params["budget"] = o.budget;
    rep.params["bound"] = o.bound ? json(*o.bound) : json(nullptr);
    rep.result = search_json(construct::find_section(s), x.field);
}

void cmd_anti_bertini(const Options& o, Report& rep) {
    const unsigned d = parse_degrees(o.degrees).front();
    rep.params["d"] = d;
    if (o.search) {
        rep.seed = require_seed(o, "anti-bertini --search");
        require(o.q.has_value(), ErrorKind::InvalidArgument, "--search needs --q");
        rep.params["search"] = true;
        rep.params["q"] = *o.q;
        rep.params["n"] = o.n;
        rep.params["dx_min"] = o.dx_min;
        rep.params["dx_max"] = o.dx_max;
        rep.params["budget"] = o.budget;
        auto r = construct::anti_bertini_search(*o.q, o.n, d, o.dx_min, o.dx_max, o.budget, *rep.seed);
        rep.result = search_json(r, gf::field_of_order(*o.q));
        return;
    }
    auto x = space_of(o, rep);
    rep.params["bound"] = o.bound ? json(*o.bound) : json(nullptr);
    auto r = construct::verify_anti_bertini(x, d, o.budget, o.bound);
    json j{{"kind", construct::to_string(r.kind)}, {"checked", r.checked}, {"bound", r.bound}, {"provenance", "Exhaustive"}};
    json w = json::array();
    for (const auto& wt : r.witnesses) w.push_back(json{{"g", wt.g.to_string()}, {"witness", point_json(wt.point, x.field)}});
    j["witnesses"] = w;
    if (r.counterexample) {
        j["counterexample"] = r.counterexample->to_string();
        j["verdict"] = verdict_json(r.verdict, x.field);
    }
    rep.result = j;
}

void cmd_katz(const Options& o, Report& rep) {
    require(o.q.has_value(), ErrorKind::InvalidArgument, "katz needs --q");
    rep.params["q"] = *o.q;
    rep.params["pairs"] = o.pairs;
    auto f = construct::katz_hypersurface(*o.q, o.pairs);
    rep.result = json{{"form", f.to_string()}, {"n", f.n()}, {"degree", f.d()}, {"provenance", "ClosedForm"}};
}

void cmd_squarefree(const Options& o, Report& rep) {
    const std::uint64_t q = o.q.value_or(2);
    const unsigned d = o.poly_degree;
    rep.params["limit"] = o.limit;
    rep.params["q"] = q;
    rep.params["n"] = 1;
    rep.params["d"] = d;
    auto z = zeta::squarefree_integer_density(o.limit);
    rep.result["integers"] = json{{"limit", z.limit},
                                  {"squarefree", z.squarefree},
                                  {"fraction", rat(z.fraction)},
                                  {"decimal", zeta::to_double(z.fraction)},
                                  {"target", z.target},
                                  {"difference", z.difference},
                                  {"provenance", "Exhaustive"}};
    auto a1 = geometry::affine_space(gf::field_of_order(q), 1);
    auto e = sieve::exhaustive_density(a1.field, 1, d, sieve::Predicate{sieve::SmoothIntersection{a1, std::nullopt}});
    json poly = estimate_json(e);
    poly["prediction"] = prediction_json(zeta::predict_density(a1));
    poly["difference"] = e.value() - poly["prediction"]["decimal"].get<double>();
    rep.result["polynomials"] = poly;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bertini theorems over finite fields: densities, zeta predictions and constructions"};
    app.require_subcommand(1);
    Options o;
    std::string command;

    auto common = [&](CLI::App* c) {
        c->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::PositiveNumber);
        c->add_option("--out", o.out, "also write the report to this file");
        c->add_flag("--no-timing", o.no_timing, "report wall_time_s as null");
    };
    auto with_space = [&](CLI::App* c) {
        c->add_option("--space", o.space, "P^n, A^n, katz(n,q) or a variety JSON file")->capture_default_str();
        c->add_option("--q", o.q, "field size");
    };

    auto* density = app.add_subcommand("density", "empirical density of a predicate next to its zeta prediction");
    with_space(density);
    density->add_option("--d", o.degrees, "degree, list (2,3) or range (2..5)")->capture_default_str();
    density->add_option("--pred", o.pred, "smooth | smooth_below:R | nodes | integral | always | not:P, joined by &")
        ->capture_default_str();
    density->add_option("--mode", o.mode, "exhaustive or mc")->capture_default_str();
    density->add_option("--trials", o.trials, "Monte-Carlo trials")->capture_default_str();
    density->add_option("--seed", o.seed, "required in mc mode");
    density->add_option("--bound", o.bound, "smoothness degree bound");
    density->add_option("--r", o.r, "Euler-product truncation for general X");
    density->add_option("--csv", o.csv, "write the sweep as CSV");

    auto* zeta_cmd = app.add_subcommand("zeta", "zeta_X(s)^-1, closed form or truncated Euler product");
    with_space(zeta_cmd);
    zeta_cmd->add_option("--s", o.s)->capture_default_str();
    zeta_cmd->add_option("--r", o.r, "truncate at closed points of degree < r");

    auto* smooth_cmd = app.add_subcommand("smooth-check", "smoothness of H_f ∩ X and of V(f)");
    with_space(smooth_cmd);
    smooth_cmd->add_option("--form", o.form, "the form f");
    smooth_cmd->add_flag("--stdin", o.from_stdin, "read f (or a report with result.form) from stdin");
    smooth_cmd->add_option("--bound", o.bound, "degree bound");

    auto* jet = app.add_subcommand("jet-rank", "rank of S_d -> H^0(Z, O_Z)");
    with_space(jet);
    jet->add_option("--points", o.points, "rational | degree:E | (a:b:c),(d:e:f)")->capture_default_str();
    jet->add_option("--order", o.order, "1: values, 2: values and first derivatives")->capture_default_str();
    jet->add_option("--d", o.degrees, "degree")->capture_default_str();

    auto* find = app.add_subcommand("find", "search for f with H_f ∩ X smooth under point conditions");
    with_space(find);
    find->add_option("--points", o.points, "pass-through points: none | rational | degree:E | (a:b:c),...")
        ->capture_default_str();
    find->add_option("--tangent", o.tangent, "(a:b:c)=linear form, repeatable");
    find->add_option("--avoid-below", o.avoid_below, "no closed points of degree below this");
    find->add_option("--d-min", o.d_min)->capture_default_str();
    find->add_option("--d-max", o.d_max)->capture_default_str();
    find->add_option("--budget", o.budget, "candidates per degree")->capture_default_str();
    find->add_option("--seed", o.seed, "sampling seed (required)");
    find->add_option("--bound", o.bound, "smoothness degree bound");

    auto* anti = app.add_subcommand("anti-bertini", "check or construct X whose low-degree sections are all singular");
    with_space(anti);
    anti->add_option("--d", o.degrees, "section degree bound")->capture_default_str();
    anti->add_flag("--search", o.search, "construct a plane/space hypersurface instead of checking --space");
    anti->add_option("--n", o.n, "ambient dimension for --search")->capture_default_str();
    anti->add_option("--dx-min", o.dx_min)->capture_default_str();
    anti->add_option("--dx-max", o.dx_max)->capture_default_str();
    anti->add_option("--budget", o.budget)->capture_default_str();
    anti->add_option("--seed", o.seed, "required with --search");
    anti->add_option("--bound", o.bound, "smoothness degree bound");

    auto* katz = app.add_subcommand("katz", "the Katz form sum x_i y_i^q - x_i^q y_i");
    katz->add_option("--q", o.q, "field size")->required();
    katz->add_option("--pairs", o.pairs, "P^(2 pairs + 1)")->capture_default_str();

    auto* sqf = app.add_subcommand("squarefree-demo", "squarefree integers and squarefree polynomials");
    sqf->add_option("--limit", o.limit)->capture_default_str();
    sqf->add_option("--q", o.q, "field size (default 2)");
    sqf->add_option("--d", o.poly_degree, "polynomial degree")->capture_default_str();

    for (auto* c : {density, zeta_cmd, smooth_cmd, jet, find, anti, katz, sqf}) common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Report rep;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (o.threads) omp_set_num_threads(static_cast<int>(*o.threads));
        auto* sub = app.get_subcommands().front();
        command = sub->get_name();
        if (command == "density") cmd_density(o, rep);
        else if (command == "zeta") cmd_zeta(o, rep);
        else if (command == "smooth-check") cmd_smooth_check(o, rep);
        else if (command == "jet-rank") cmd_jet_rank(o, rep);
        else if (command == "find") cmd_find(o, rep);
        else if (command == "anti-bertini") cmd_anti_bertini(o, rep);
        else if (command == "katz") cmd_katz(o, rep);
        else cmd_squarefree(o, rep);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report{{"artifact_version", artifact_version},
                {"command", command},
                {"params", rep.params},
                {"result", rep.result},
                {"seed", rep.seed ? json(*rep.seed) : json(nullptr)},
                {"shard_count", parallel::max_chunks},
                {"wall_time_s", o.no_timing ? json(nullptr) : json(wall)}};
    const std::string text = cli::canonical_dump(report);
    std::cout << text;
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "error: cannot write " << o.out << "\n";
            return 2;
        }
        f << text;
    }
    return 0;
}
