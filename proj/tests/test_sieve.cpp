#include "bertini/config.hpp"
#include "bertini/error.hpp"
#include "bertini/sieve.hpp"
#include "oracle.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <set>

using namespace bertini;
using namespace bertini::sieve;
using geometry::ProjPoint;

namespace {

const gf::FieldDesc F2 = gf::field_of_order(2);
const gf::FieldDesc F3 = gf::field_of_order(3);

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvariantBreach;
}

ClosedPoint rational(std::vector<std::uint32_t> c) {
    std::vector<gf::Elem> coords;
    for (auto v : c) coords.push_back(gf::Elem{v});
    unsigned lead = 0;
    while (coords[lead].v == 0) ++lead;
    return ClosedPoint{1, ProjPoint{1, coords, lead}};
}

Predicate smooth_p(const SubschemeSpec& x, std::optional<unsigned> b = std::nullopt) {
    return Predicate{SmoothIntersection{x, b}};
}

}  // namespace

TEST_CASE("exhaustive densities") {
    auto p2 = geometry::projective_space(F2, 2);
    auto lines = exhaustive_density(F2, 2, 1, smooth_p(p2));
    CHECK(zeta::to_string(lines.fraction) == "7/8");
    CHECK(lines.total == 8);

    auto s2 = exhaustive_density(F2, 2, 2, smooth_p(p2));
    auto n2 = exhaustive_density(F2, 2, 2, negate(smooth_p(p2)));
    CHECK(s2.fraction + n2.fraction == 1);
    CHECK(s2.total == 64);

    auto all = exhaustive_density(F2, 2, 2, Predicate{Always{}});
    CHECK(all.fraction == 1);
    CHECK(describe(negate(smooth_p(p2))) == "not(smooth(X=P^2,B=auto))");
}

TEST_CASE("smooth plane cubics match the naive oracle") {
    auto p2 = geometry::projective_space(F2, 2);
    auto fast = exhaustive_density(F2, 2, 3, smooth_p(p2));
    auto serial = exhaustive_density_serial(F2, 2, 3, smooth_p(p2));
    CHECK(fast.hits == serial.hits);
    mpoly::FormSpace space(gf::base_field(F2), 2, 3, 1u << 20);
    std::uint64_t smooth = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) smooth += oracle::hypersurface_singular(space.form(i), F2, 6) ? 0 : 1;
    CHECK(fast.hits == smooth);
    CHECK(fast.total == 1024);
}

TEST_CASE("Monte Carlo determinism") {
    auto p2 = geometry::projective_space(F2, 2);
    auto pred = Predicate{SmoothAtPointsBelow{p2, 2}};
    auto reference = mc_density_serial(F2, 2, 6, pred, 3000, 17);
    for (int threads : {1, 2, 8}) {
        omp_set_num_threads(threads);
        auto est = mc_density(F2, 2, 6, pred, 3000, 17);
        CHECK(est.hits == reference.hits);
        CHECK(est.ci95.lo == reference.ci95.lo);
    }
    omp_set_num_threads(1);
    auto other = mc_density(F2, 2, 6, pred, 3000, 18);
    CHECK(other.hits != reference.hits);

    auto always = mc_density(F2, 2, 3, Predicate{Always{}}, 100, 1);
    CHECK(always.fraction == 1);
    CHECK(always.ci95.hi == 1.0);
    CHECK(always.ci95.lo < 1.0);
    CHECK(*always.seed == 1);
    CHECK_THROWS(mc_density(F2, 2, 3, Predicate{Always{}}, 0, 1));
}

TEST_CASE("Wilson interval") {
    auto ci = wilson95(50, 100);
    CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
    auto zero = wilson95(0, 10);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi > 0.0);
}

TEST_CASE("smooth at the rational points: finite-d identity") {
    // the jet map at the 7 rational points is surjective from d = 20, so the
    // density is exactly (7/8)^7; at d = 6 it is already close
    auto p2 = geometry::projective_space(F2, 2);
    auto z = JetScheme::closed_points_of(p2, 1, 2);
    CHECK(jet_map_rank(z, 20).surjective);
    auto est = mc_density(F2, 2, 20, Predicate{SmoothAtPointsBelow{p2, 2}}, 4000, 5);
    const double expect = std::pow(7.0 / 8.0, 7);
    const double sigma = std::sqrt(expect * (1 - expect) / 4000);
    CHECK(std::abs(est.value() - expect) < 3 * sigma);
    CHECK(est.ci95.lo < expect);
    CHECK(est.ci95.hi > expect);

    // exhaustive on a small surjective case: P^1 over F_2, 3 rational points, order 2 -> length 6, d = 5
    auto p1 = geometry::projective_space(F2, 1);
    auto z1 = JetScheme::closed_points_of(p1, 1, 2);
    CHECK(jet_map_rank(z1, 5).surjective);
    auto ex = exhaustive_density(F2, 1, 5, Predicate{SmoothAtPointsBelow{p1, 2}});
    CHECK(ex.fraction == zeta::Rational(27, 64));
}

TEST_CASE("jet map ranks") {
    auto p2 = geometry::projective_space(F2, 2);
    JetScheme one(F2, 2, {JetPoint{rational({1, 0, 0}), 2}});
    auto r = jet_map_rank(one, 2);
    CHECK(r.rows == 3);
    CHECK(r.cols == 6);
    CHECK(r.rank == 3);
    CHECK(r.surjective);
    CHECK(r.threshold == 2);

    JetScheme value(F2, 2, {JetPoint{rational({0, 1, 1}), 1}});
    auto r0 = jet_map_rank(value, 0);
    CHECK(r0.rank == 1);
    CHECK(r0.surjective);

    auto seven = JetScheme::closed_points_of(p2, 1, 2);
    CHECK(seven.points().size() == 7);
    CHECK(seven.length() == 21);
    auto r20 = jet_map_rank(seven, 20);
    CHECK(r20.rank == 21);
    CHECK(r20.threshold == 20);
    CHECK(r20.surjective);
    auto r1 = jet_map_rank(seven, 1);
    CHECK(r1.rank == 3);
    CHECK_FALSE(r1.surjective);

    // a degree-2 point contributes its F_q-length
    auto deg2 = JetScheme::closed_points_of(p2, 2, 2);
    CHECK(deg2.points().size() == 7);
    CHECK(deg2.length() == 42);
    CHECK(jet_map_rank(deg2, 41).surjective);

    // over F_4 the rank is still counted over F_q
    auto f4 = gf::field_of_order(4);
    JetScheme z4(f4, 2, {JetPoint{rational({1, 0, 0}), 2}, JetPoint{rational({0, 1, 0}), 1}});
    auto r4 = jet_map_rank(z4, 2);
    CHECK(r4.rank == 4);
    CHECK(r4.surjective);

    CHECK(kind_of([&] { JetScheme(F2, 2, {JetPoint{rational({1, 0, 0}), 1}, JetPoint{rational({1, 0, 0}), 2}}); }) ==
          ErrorKind::PointsNotDistinct);
    CHECK(kind_of([&] { JetScheme(F2, 2, {}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("jet sets") {
    JetScheme z(F2, 2, {JetPoint{rational({0, 0, 1}), 2}});
    CHECK(z.h0_size() == 8);
    auto smooth = JetSet::smooth_through(z);
    CHECK(smooth.size() == 3);
    REQUIRE(smooth.members().has_value());
    CHECK(smooth.members()->size() == 3);
    auto van = JetSet::vanishing(z);
    CHECK(van.size() == 4);
    auto all = JetSet::all(z);
    CHECK(all.size() == 8);
    auto custom = JetSet::where(
        z, [](const JetScheme&, std::span<const gf::Elem> j) { return j[1].v == 1; }, "du=1");
    CHECK(custom.size() == 4);
    auto listed = JetSet::listed(z, {{gf::Elem{0}, gf::Elem{0}, gf::Elem{0}}, {gf::Elem{0}, gf::Elem{0}, gf::Elem{0}}}, "zero");
    CHECK(listed.size() == 1);
    CHECK(listed.contains(std::vector<gf::Elem>{gf::Elem{0}, gf::Elem{0}, gf::Elem{0}}));
}

TEST_CASE("conditioned densities") {
    auto p2 = geometry::projective_space(F2, 2);
    JetScheme z(F2, 2, {JetPoint{rational({0, 0, 1}), 2}});

    // T = everything: the unconditioned density
    auto base = exhaustive_density(F2, 2, 3, smooth_p(p2));
    auto full = conditioned_density(JetSet::all(z), z, 3, smooth_p(p2));
    CHECK(full.fraction == base.fraction);
    CHECK(*full.weight == 1);

    // one linear condition
    JetScheme v(F2, 2, {JetPoint{rational({0, 0, 1}), 1}});
    auto lin = conditioned_density(JetSet::vanishing(v), v, 3, Predicate{Always{}});
    CHECK(zeta::to_string(lin.fraction) == "1/2");
    CHECK(lin.total == 512);

    // T = {value 0, gradient != 0}: compare with a direct count over S_3
    auto t = JetSet::smooth_through(z);
    auto cond = conditioned_density(t, z, 3, smooth_p(p2));
    CHECK(*cond.weight == zeta::Rational(3, 8));
    mpoly::FormSpace space(gf::base_field(F2), 2, 3, 1u << 20);
    auto w = gf::base_field(F2);
    std::vector<gf::Elem> pt{gf::Elem{0}, gf::Elem{0}, gf::Elem{1}};
    std::uint64_t in_t = 0, hits = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        auto f = space.form(i);
        if (mpoly::poly_eval(f, pt, *w).v != 0) continue;
        bool grad = mpoly::poly_eval(mpoly::poly_derive(f, 0), pt, *w).v || mpoly::poly_eval(mpoly::poly_derive(f, 1), pt, *w).v;
        if (!grad) continue;
        ++in_t;
        hits += oracle::hypersurface_singular(f, F2, 6) ? 0 : 1;
    }
    CHECK(in_t == 384);
    CHECK(cond.total == in_t);
    CHECK(cond.hits == hits);
    CHECK(cond.fraction == zeta::Rational(hits, 1024));

    // Monte Carlo within its interval of the exact value
    ConditionOptions mc{DensityEstimate::Mode::MonteCarlo, 4000, 9};
    auto sampled = conditioned_density(t, z, 3, smooth_p(p2), mc);
    const double exact = cond.value();
    CHECK(sampled.ci95.lo <= exact);
    CHECK(sampled.ci95.hi >= exact);
    auto again = conditioned_density(t, z, 3, smooth_p(p2), mc);
    CHECK(again.hits == sampled.hits);

    // non-surjective and empty
    auto seven = JetScheme::closed_points_of(p2, 1, 2);
    CHECK(kind_of([&] { conditioned_density(JetSet::all(seven), seven, 2, smooth_p(p2)); }) == ErrorKind::NotSurjective);
    auto empty = JetSet::listed(z, {}, "empty");
    CHECK(kind_of([&] { conditioned_density(empty, z, 3, smooth_p(p2)); }) == ErrorKind::EmptyT);
}

TEST_CASE("singular fraction at a point") {
    auto p2 = geometry::projective_space(F2, 2);
    auto at = singular_fraction_at_point(p2, rational({0, 0, 1}), 3);
    CHECK(zeta::to_string(at.fraction) == "1/8");
    CHECK(at.hypothesis);
    CHECK(at.warning.empty());
    // exhaustive cross-check through the jet predicate: jet (0, 0, 0) at the point
    JetScheme z(F2, 2, {JetPoint{rational({0, 0, 1}), 2}});
    auto zero = JetSet::listed(z, {{gf::Elem{0}, gf::Elem{0}, gf::Elem{0}}}, "zero");
    auto ex = exhaustive_density(F2, 2, 3, Predicate{JetInSet{z, zero}});
    CHECK(ex.hits == 128);

    auto deg2 = geometry::closed_points(p2, 2).front();
    auto f2 = singular_fraction_at_point(p2, deg2, 6);
    CHECK(zeta::to_string(f2.fraction) == "1/64");
    auto low = singular_fraction_at_point(p2, deg2, 3);
    CHECK_FALSE(low.hypothesis);
    CHECK_FALSE(low.warning.empty());
    CHECK(low.fraction >= f2.fraction);

    // A^1 in P^1 over F_3: brute force over the 27 quadratic forms
    auto a1 = geometry::affine_space(F3, 1);
    auto pt = rational({1, 0});
    auto af = singular_fraction_at_point(a1, pt, 2);
    CHECK(zeta::to_string(af.fraction) == "1/9");
    smooth::Checker checker(a1);
    mpoly::FormSpace s3(gf::base_field(F3), 1, 2, 1000);
    std::uint64_t sing = 0;
    for (std::uint64_t i = 0; i < s3.size(); ++i) sing += checker.singular_at(s3.form(i), pt.rep) ? 1 : 0;
    CHECK(sing == 3);

    // a smooth conic over F_3 (m = 1): 1/9 again, brute force over S_2
    auto conic = geometry::hypersurface(mpoly::poly_parse("x0*x2 + x1^2", gf::base_field(F3), 2));
    auto cp = rational({0, 0, 1});
    auto cf = singular_fraction_at_point(conic, cp, 2);
    CHECK(zeta::to_string(cf.fraction) == "1/9");
    smooth::Checker cc(conic);
    mpoly::FormSpace s32(gf::base_field(F3), 2, 2, 1000);
    std::uint64_t csing = 0;
    for (std::uint64_t i = 0; i < s32.size(); ++i) csing += cc.singular_at(s32.form(i), cp.rep) ? 1 : 0;
    CHECK(csing * 9 == s32.size());

    CHECK(kind_of([&] { singular_fraction_at_point(conic, rational({0, 1, 0}), 2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("vanishing at an affine point is rare") {
    // Lemma 2.5 at q = 2, n = 2: share of A_{<=d} vanishing at P is at most 2^{-min(d, e^{1/2})}
    auto a2 = geometry::affine_space(F2, 2);
    for (unsigned e = 1; e <= 3; ++e) {
        for (const auto& p : geometry::closed_points(a2, e)) {
            JetScheme z(F2, 2, {JetPoint{p, 1}});
            for (unsigned d = 1; d <= 3; ++d) {
                auto ex = exhaustive_density(F2, 2, d, Predicate{JetInSet{z, JetSet::vanishing(z)}});
                const double bound = std::pow(2.0, -std::min<double>(d, std::sqrt(double(e))));
                CHECK(ex.value() <= bound + 1e-12);
            }
            break;
        }
    }
}

TEST_CASE("event containments") {
    auto p2 = geometry::projective_space(F2, 2);
    auto smooth = exhaustive_density(F2, 2, 3, smooth_p(p2));
    auto below = exhaustive_density(F2, 2, 3, Predicate{SmoothAtPointsBelow{p2, 3}});
    auto nodes = exhaustive_density(F2, 2, 3, Predicate{AtWorstNodes{}});
    CHECK(smooth.fraction <= below.fraction);
    CHECK(smooth.fraction <= nodes.fraction);
    auto both = exhaustive_density(F2, 2, 3, Predicate{And{{smooth_p(p2), Predicate{AtWorstNodes{}}}}});
    CHECK(both.fraction == smooth.fraction);
    auto r1 = exhaustive_density(F2, 2, 3, Predicate{SmoothAtPointsBelow{p2, 1}});
    CHECK(r1.fraction == 1);
    auto r2 = exhaustive_density(F2, 2, 3, Predicate{SmoothAtPointsBelow{p2, 2}});
    auto both_below = exhaustive_density(F2, 2, 3, Predicate{And{{Predicate{SmoothAtPointsBelow{p2, 3}},
                                                                    Predicate{SmoothAtPointsBelow{p2, 2}}}}});
    CHECK(below.fraction <= r2.fraction);
    CHECK(both_below.fraction == below.fraction);
}

TEST_CASE("nodal cubics match classification of their singular points") {
    auto p2 = geometry::projective_space(F2, 2);
    auto nodes = exhaustive_density(F2, 2, 3, Predicate{AtWorstNodes{}});
    mpoly::FormSpace space(gf::base_field(F2), 2, 3, 1u << 20);
    std::uint64_t count = 0;
    for (std::uint64_t i = 1; i < space.size(); ++i) {
        auto f = space.form(i);
        bool ok = true;
        for (const auto& p : smooth::singular_points(f, p2, 6)) ok = ok && smooth::classify_singularity(f, p2, p).node;
        count += ok ? 1 : 0;
    }
    CHECK(nodes.hits == count);
    CHECK(nodes.hits > exhaustive_density(F2, 2, 3, smooth_p(p2)).hits);
}

TEST_CASE("geometrically integral conics") {
    // reducible conics over F_2 split into lines over F_4
    auto f4 = gf::field_extend(F2, 2);
    auto line = [&](std::uint32_t i) {
        return HomogPoly(f4, 2, 1, {gf::Elem{i % 4}, gf::Elem{i / 4 % 4}, gf::Elem{i / 16}});
    };
    std::set<std::vector<gf::Elem>> reducible;
    for (std::uint32_t i = 1; i < 64; ++i)
        for (std::uint32_t j = i; j < 64; ++j) {
            auto g = mpoly::poly_mul(line(i), line(j));
            std::vector<gf::Elem> c(g.coeffs().begin(), g.coeffs().end());
            if (std::all_of(c.begin(), c.end(), [](gf::Elem e) { return e.v <= 1; })) reducible.insert(c);
        }
    auto est = exhaustive_density(F2, 2, 2, Predicate{GeomIntegral{}});
    CHECK(est.hits == 64 - 1 - reducible.size());
}

TEST_CASE("sweep CSV") {
    auto p2 = geometry::projective_space(F2, 2);
    auto rows = density_sweep(F2, 2, {1, 2}, smooth_p(p2), DensityEstimate::Mode::Exhaustive, 0, 0);
    auto csv = sweep_csv(rows);
    CHECK(csv.rfind("d,mode,trials,hits,total,fraction,ci_lo,ci_hi,predicate,seed\n", 0) == 0);
    CHECK(csv.find("1,exhaustive,,7,8,0.875,0.875,0.875,\"smooth(X=P^2,B=auto)\",\n") != std::string::npos);
    auto mc = density_sweep(F2, 2, {2}, smooth_p(p2), DensityEstimate::Mode::MonteCarlo, 50, 3);
    CHECK(sweep_csv(mc).find(",mc,50,") != std::string::npos);
}

TEST_CASE("budget guard") {
    config::set_exhaustive_budget(1000);
    auto p2 = geometry::projective_space(F2, 2);
    CHECK(kind_of([&] { exhaustive_density(F2, 2, 3, smooth_p(p2)); }) == ErrorKind::BudgetExceeded);
    config::set_exhaustive_budget(std::uint64_t{1} << 24);
}
