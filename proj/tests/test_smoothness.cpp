#include "bertini/error.hpp"
#include "bertini/smoothness.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace bertini;
using namespace bertini::gf;
using namespace bertini::geometry;
using namespace bertini::smooth;

namespace {

const FieldDesc F2 = field_make(2, 1);
FieldPtr base2() { return base_field(F2); }
HomogPoly P(const char* s, unsigned n = 2, const FieldDesc& fd = F2) { return mpoly::poly_parse(s, base_field(fd), n); }
std::vector<Elem> E(std::initializer_list<std::uint32_t> v) {
    std::vector<Elem> out;
    for (auto x : v) out.push_back(Elem{x});
    return out;
}

}  // namespace

TEST_CASE("bounds") {
    auto p2 = projective_space(F2, 2);
    CHECK(certified_bound(3, p2) == 6u);
    CHECK(certified_bound(4, projective_space(F2, 3)) == 36u);
    CHECK(certified_bound(12, affine_space(F2, 1)) == 12u);
    CHECK_FALSE(certified_bound(3, hypersurface(P("x0^2 + x1*x2"))).has_value());
    CHECK(cover_set(6) == std::vector<unsigned>{4, 5, 6});
    CHECK(cover_set(9) == std::vector<unsigned>{5, 6, 7, 8, 9});
    CHECK(cover_set(1) == std::vector<unsigned>{1});
    for (unsigned B = 1; B <= 20; ++B)
        for (unsigned k = 1; k <= B; ++k) {
            bool ok = false;
            for (unsigned e : cover_set(B)) ok |= e % k == 0;
            CHECK(ok);
        }
    CHECK(feasible_bound(p2, 100) == 10);  // 2^22 scan points
}

TEST_CASE("singular points") {
    auto p2 = projective_space(F2, 2);
    CHECK(singular_points(P("x0^3 + x1^3 + x2^3"), p2, 4).empty());
    auto s = singular_points(P("x0^2*x1"), p2, 1);
    std::vector<std::vector<Elem>> coords;
    for (const auto& c : s) coords.push_back(c.rep.coords);
    CHECK(std::find(coords.begin(), coords.end(), E({0, 0, 1})) != coords.end());
    CHECK(std::find(coords.begin(), coords.end(), E({0, 1, 0})) != coords.end());
    auto node = singular_points(P("x1*x2"), p2, 1);
    REQUIRE(node.size() == 1);
    CHECK(node[0].rep.coords == E({1, 0, 0}));
    CHECK(singular_points(P("x0^2*x1"), p2, 3) == singular_points_serial(P("x0^2*x1"), p2, 3));
}

TEST_CASE("verdicts") {
    auto p2 = projective_space(F2, 2);
    auto v = is_smooth_intersection(P("x0^3 + x1^3 + x2^3"), p2);
    CHECK(v.kind == Verdict::Kind::Smooth);
    CHECK(v.bound == 6);
    CHECK(v.exact);
    auto a1 = affine_space(F2, 1);
    auto e = is_smooth_intersection(P("x0^5", 1), a1);
    CHECK(e.kind == Verdict::Kind::Smooth);
    CHECK(e.exact);
    CHECK(is_smooth_intersection(HomogPoly(base2(), 2, 3), p2).kind == Verdict::Kind::IsWholeSpace);
    auto sing = is_smooth_intersection(P("x1*x2"), p2);
    CHECK(sing.kind == Verdict::Kind::SingularAt);
    CHECK(sing.witness->rep.coords == E({1, 0, 0}));
    // two lines conjugate over F_4, meeting in a rational point
    auto deg2 = is_smooth_intersection(P("x0^2 + x0*x1 + x1^2"), p2);
    CHECK(deg2.kind == Verdict::Kind::SingularAt);
    CHECK(deg2.witness->degree == 1);  // (0:0:1) is rational
    // requested bound below the certified one is not exact
    auto partial = is_smooth_intersection(P("x0^3 + x1^3 + x2^3"), p2, 3);
    CHECK(partial.bound == 3);
    CHECK_FALSE(partial.exact);
}

TEST_CASE("verdicts on a general X") {
    auto base = base2();
    auto conic = hypersurface(mpoly::poly_parse("x0^2 + x1*x2", base, 2));
    auto v = is_smooth_intersection(P("x0"), conic, 3);
    CHECK(v.bound == 3);
    CHECK_FALSE(v.exact);
    auto crossing = make_spec("lines", F2, 2, 1, {P("x0*x1")}, {});
    CHECK_THROWS_AS(is_smooth_intersection(P("x2"), crossing, 2), Error);
    // the line x1 = 0 is tangent to the conic at (0:0:1)
    auto t = is_smooth_intersection(P("x1"), conic, 2);
    CHECK(t.kind == Verdict::Kind::SingularAt);
    CHECK(t.witness->rep.coords == E({0, 0, 1}));
}

TEST_CASE("scalar and Frobenius invariance") {
    auto f4 = field_make(2, 2);
    auto base = base_field(f4);
    auto p2 = projective_space(f4, 2);
    for (std::uint64_t s = 0; s < 8; ++s) {
        CounterRng rng(3, s);
        auto f = mpoly::poly_sample(base, 2, 2, rng);
        if (f.is_zero()) continue;
        auto sp = singular_points(f, p2, 2);
        CHECK(sp == singular_points(mpoly::poly_scale(f, Elem{2}), p2, 2));
        Checker checker(p2, 2);
        for (const auto& c : sp) {
            auto w = field_extend(f4, c.rep.e);
            auto cur = c.rep;
            for (unsigned k = 0; k < c.degree; ++k) {
                CHECK(checker.singular_at(f, cur));
                cur = frobenius(cur, *w);
            }
        }
    }
}

TEST_CASE("prepared scan agrees with the checker and the naive oracle") {
    auto p2 = projective_space(F2, 2);
    PreparedScan scan(p2, 3, cover_set(6));
    CHECK(scan.tabulated());
    auto s = scan.make_scratch();
    mpoly::FormSpace space(base2(), 2, 3, 1024);
    Checker checker(p2);
    for (std::uint64_t i = 0; i < 1024; i += 7) {
        auto f = space.form(i);
        bool fast = scan.any_singular(f.coeffs(), s);
        CHECK(fast == !checker.verdict(f).smooth());
        CHECK(fast == oracle::hypersurface_singular(f, F2, 6));
    }

    // F_3 conics, and an untabulated scan
    auto f3 = field_make(3, 1);
    auto p2_3 = projective_space(f3, 2);
    PreparedScan scan3(p2_3, 2, cover_set(2));
    auto s3 = scan3.make_scratch();
    mpoly::FormSpace conics(base_field(f3), 2, 2, 1000);
    Checker c3(p2_3);
    for (std::uint64_t i = 0; i < conics.size(); i += 5) {
        auto f = conics.form(i);
        CHECK(scan3.any_singular(f.coeffs(), s3) == !c3.verdict(f).smooth());
    }

    // over a general X with closed generators
    auto base = base2();
    auto katz = hypersurface(katz_form(2, 1));
    PreparedScan ks(katz, 1, {1, 2});
    auto kscr = ks.make_scratch();
    Checker kc(katz, 2);
    mpoly::FormSpace planes(base, 3, 1, 16);
    for (std::uint64_t i = 1; i < 16; ++i) {
        auto g = planes.form(i);
        CHECK(ks.any_singular(g.coeffs(), kscr) == !kc.verdict(g).smooth());
    }
}

TEST_CASE("node classification") {
    auto p2 = projective_space(F2, 2);
    ClosedPoint origin{1, ProjPoint{1, E({1, 0, 0}), 0}};
    CHECK(classify_singularity(P("x1*x2"), p2, origin).node);
    auto cusp = classify_singularity(P("x0*x1^2 + x2^3"), p2, origin);
    CHECK_FALSE(cusp.node);
    CHECK(cusp.degenerate_quadratic_part);
    CHECK(classify_singularity(P("x0*x1^2 + x0*x1*x2 + x0*x2^2"), p2, origin).node);
    CHECK_FALSE(classify_singularity(P("x1^3 + x2^3"), p2, origin).degenerate_quadratic_part);
    try {
        classify_singularity(P("x0^3 + x1^3 + x2^3"), p2, origin);
        FAIL("expected NotSingularHere");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSingularHere);
    }
    try {
        classify_singularity(P("x1*x2"), hypersurface(katz_form(2, 1)), origin);
        FAIL("expected UnsupportedX");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedX);
    }
    // odd characteristic: u^2 - v^2 is a node, u^2 is not
    auto f3 = field_make(3, 1);
    auto p2_3 = projective_space(f3, 2);
    CHECK(classify_singularity(P("x0*x1^2 - x0*x2^2", 2, f3), p2_3, origin).node);
    CHECK_FALSE(classify_singularity(P("x0*x1^2 + x2^3", 2, f3), p2_3, origin).node);
}

TEST_CASE("positive-dimensional singular locus") {
    auto p2 = projective_space(F2, 2);
    auto r = positive_dim_singular_locus(P("x0^2*x1"), p2, 3);
    CHECK(r.positive_dim);
    CHECK(r.witness_e == 3);
    CHECK(r.cap == 6);
    CHECK(r.counts == std::vector<std::uint64_t>{3, 5, 9});
    auto node = positive_dim_singular_locus(P("x1*x2 + x0^2"), p2, 3);
    CHECK_FALSE(node.positive_dim);
    auto smooth = positive_dim_singular_locus(P("x0^3 + x1^3 + x2^3"), p2, 3);
    CHECK_FALSE(smooth.positive_dim);
    CHECK(smooth.counts == std::vector<std::uint64_t>{0, 0, 0});
}

TEST_CASE("geometric integrality") {
    auto r = geometrically_integral(P("x1*x2"));
    CHECK(r.kind == Integrality::Kind::ReducibleOver);
    CHECK(r.e == 1);
    CHECK(r.factor_degrees == std::vector<unsigned>{1, 1});
    CHECK(geometrically_integral(P("x0^2 + x1*x2")).kind == Integrality::Kind::GeometricallyIntegral);
    auto norm = geometrically_integral(P("x0^2 + x0*x1 + x1^2", 1));
    CHECK(norm.kind == Integrality::Kind::ReducibleOver);
    CHECK(norm.e == 2);
    CHECK(geometrically_integral(P("x0^2 + x1*x2"), 3).kind == Integrality::Kind::Unknown);
    CHECK(geometrically_integral(P("x0")).kind == Integrality::Kind::GeometricallyIntegral);
    CHECK(geometrically_integral(P("x0^3 + x1^3 + x2^3")).kind == Integrality::Kind::GeometricallyIntegral);
    // x0^3 + x1^3 splits into three lines over F_4
    auto three = geometrically_integral(P("x0^3 + x1^3"));
    CHECK(three.kind == Integrality::Kind::ReducibleOver);
    CHECK(three.e == 1);  // x0 + x1 is a rational factor
    CHECK_THROWS_AS(geometrically_integral(HomogPoly(base2(), 2, 2)), Error);

    // smooth exact verdict in n >= 3 excludes reducibility (quadrics in P^3)
    auto p3 = projective_space(F2, 3);
    mpoly::FormSpace quadrics(base2(), 3, 2, 1024);
    Checker c(p3);
    int smooth_seen = 0;
    for (std::uint64_t i = 1; i < quadrics.size(); i += 3) {
        auto f = quadrics.form(i);
        auto v = c.verdict(f);
        if (!v.smooth() || !v.exact) continue;
        ++smooth_seen;
        CHECK(geometrically_integral(f).kind != Integrality::Kind::ReducibleOver);
    }
    CHECK(smooth_seen > 0);
}

TEST_CASE("Lemma 2.3 at the point (0:0:1)") {
    auto p2 = projective_space(F2, 2);
    Checker c(p2);
    ProjPoint pt{1, E({0, 0, 1}), 2};
    mpoly::FormSpace space(base2(), 2, 3, 1024);
    int hits = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) hits += c.singular_at(space.form(i), pt) ? 1 : 0;
    CHECK(hits == 128);
}
