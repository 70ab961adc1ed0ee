#include "bertini/error.hpp"
#include "bertini/geometry.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace bertini;
using namespace bertini::gf;
using namespace bertini::geometry;

namespace {

const FieldDesc F2 = field_make(2, 1);

// Irreducible monic polynomials of degree e over F_p, by brute-force root-free/factor check
std::uint64_t count_monic_irreducible(std::uint32_t p, unsigned e) {
    std::uint64_t total = 1, count = 0;
    for (unsigned i = 0; i < e; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
        FpPoly f(e + 1);
        std::uint64_t c = code;
        for (unsigned i = 0; i < e; ++i) {
            f[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        f[e] = 1;
        if (fp_irreducible(f, p)) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("points over") {
    auto p2 = projective_space(F2, 2);
    CHECK(points_over(p2, 1).size() == 7);
    CHECK(points_over(p2, 2).size() == 21);
    auto base = base_field(F2);
    auto line = make_spec("V(x0)", F2, 1, 0, {mpoly::poly_parse("x0", base, 1)}, {});
    auto pts = points_over(line, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].coords == std::vector<Elem>{Elem{0}, Elem{1}});
    CHECK(points_over(affine_space(F2, 1), 3).size() == 8);

    // canonical order, and the parallel scan equals the serial one
    auto all = points_over(p2, 2);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(all.front().coords == std::vector<Elem>{Elem{0}, Elem{0}, Elem{1}});
    CHECK(all == points_over_serial(p2, 2));
    CHECK(count_points(p2, 3) == count_points_serial(p2, 3));
}

TEST_CASE("count sequence and closed counts") {
    CHECK(count_sequence(projective_space(F2, 1), 3) == std::vector<std::uint64_t>{3, 5, 9});
    CHECK(count_sequence(projective_space(F2, 2), 3) == std::vector<std::uint64_t>{7, 21, 73});
    CHECK(count_sequence(projective_space(F2, 3), 1) == std::vector<std::uint64_t>{15});

    // the named-space shortcut agrees with actual enumeration
    auto p2 = projective_space(F2, 2);
    for (unsigned r = 1; r <= 4; ++r) CHECK(count_points(p2, r) == count_sequence(p2, r).back());
    auto a2 = affine_space(field_make(3, 1), 2);
    for (unsigned r = 1; r <= 3; ++r) CHECK(count_points(a2, r) == count_sequence(a2, r).back());

    std::vector<std::uint64_t> n1{3, 5, 9}, n2{7, 21, 73}, na{2, 4, 8};
    CHECK(closed_counts(n1) == std::vector<std::uint64_t>{3, 1, 2});
    CHECK(closed_counts(n2) == std::vector<std::uint64_t>{7, 7, 22});
    CHECK(closed_counts(na) == std::vector<std::uint64_t>{2, 1, 2});
    std::vector<std::uint64_t> bad{3, 4};
    CHECK_THROWS_AS(closed_counts(bad), Error);

    // A^1 closed points <-> monic irreducibles
    std::vector<std::uint64_t> aff = count_sequence(affine_space(F2, 1), 8);
    auto a = closed_counts(aff);
    for (unsigned e = 1; e <= 8; ++e) CHECK(a[e - 1] == count_monic_irreducible(2, e));

    // Moebius consistency
    auto N = count_sequence(p2, 6);
    auto ap = closed_counts(N);
    for (unsigned e = 1; e <= 6; ++e) {
        std::uint64_t s = 0;
        for (unsigned d = 1; d <= e; ++d)
            if (e % d == 0) s += d * ap[d - 1];
        CHECK(s == N[e - 1]);
    }
}

TEST_CASE("closed points") {
    auto p2 = projective_space(F2, 2);
    CHECK(closed_points(p2, 1).size() == 7);
    auto deg2 = closed_points(p2, 2);
    CHECK(deg2.size() == 7);
    auto w = field_extend(F2, 2);
    for (const auto& c : deg2) {
        bool outside = false;
        for (Elem x : c.rep.coords) outside |= x.v > 1;
        CHECK(outside);
        CHECK(orbit_size(c.rep, *w) == 2);
    }
    CHECK(closed_points(projective_space(F2, 1), 2).size() == 1);
    CHECK(closed_points(p2, 3).size() == 22);
    // orbit enumeration agrees with Moebius counts over F_3
    auto p1 = projective_space(field_make(3, 1), 1);
    auto a = closed_counts(count_sequence(p1, 4));
    for (unsigned e = 1; e <= 4; ++e) CHECK(closed_points(p1, e).size() == a[e - 1]);
}

TEST_CASE("Frobenius invariance and open restriction") {
    auto base = base_field(F2);
    auto conic = hypersurface(mpoly::poly_parse("x0^2 + x1*x2", base, 2));
    auto w = field_extend(F2, 3);
    auto pts = points_over(conic, 3);
    std::set<std::vector<Elem>> set;
    for (const auto& p : pts) set.insert(p.coords);
    for (const auto& p : pts) CHECK(set.count(frobenius(p, *w).coords) == 1);

    auto restricted = conic;
    restricted.open_nonvanishing.push_back(mpoly::poly_parse("x1", base, 2));
    CHECK(count_points(restricted, 3) <= count_points(conic, 3));
    CHECK(count_points(conic, 3) == 9);
}

TEST_CASE("validate smooth") {
    auto base = base_field(F2);
    CHECK(validate_smooth(projective_space(F2, 2), 3).status == SmoothValidation::Status::ValidUpTo);
    auto cross = make_spec("lines", F2, 2, 1, {mpoly::poly_parse("x0*x1", base, 2)}, {});
    auto v = validate_smooth(cross, 2);
    CHECK(v.status == SmoothValidation::Status::NotSmoothAt);
    REQUIRE(v.witness);
    CHECK(v.witness->rep.coords == std::vector<Elem>{Elem{0}, Elem{0}, Elem{1}});
    auto katz = hypersurface(katz_form(2, 1));
    CHECK(katz.closed[0].to_string() == mpoly::poly_parse("x0*x2^2 + x0^2*x2 + x1*x3^2 + x1^2*x3", base, 3).to_string());
    CHECK(validate_smooth(katz, 4).status == SmoothValidation::Status::ValidUpTo);
    auto wrong = make_spec("P2 claimed m=1", F2, 2, 1, {}, {});
    CHECK(validate_smooth(wrong, 1).status == SmoothValidation::Status::NotSmoothAt);
    auto too_small = make_spec("conic claimed m=2", F2, 2, 2, {mpoly::poly_parse("x0^2 + x1*x2", base, 2)}, {});
    CHECK(validate_smooth(too_small, 1).status == SmoothValidation::Status::WrongRankAt);
}

TEST_CASE("space resolution") {
    auto p2 = resolve_space("P2", 2);
    CHECK(p2.kind == SpaceKind::Projective);
    CHECK(resolve_space("P^3", 4).n == 3);
    CHECK(resolve_space("A1", 3).kind == SpaceKind::Affine);
    auto k = resolve_space("katz(1,3)", std::nullopt);
    CHECK(k.n == 3);
    CHECK(k.closed[0].d() == 4);
    CHECK_THROWS_AS(resolve_space("P2", std::nullopt), Error);
    CHECK_THROWS_AS(resolve_space("no-such-space", 2), Error);

    const char* path = "test_geometry_spec.json";
    {
        std::ofstream out(path);
        out << R"({"name": "conic", "p": 2, "a": 1, "n": 2, "m": 1, "closed": ["x0^2 + x1*x2"], "open_nonvanishing": []})";
    }
    auto c = resolve_space(path, std::nullopt);
    CHECK(c.name == "conic");
    CHECK(count_points(c, 1) == 3);
    CHECK(spec_from_json(spec_to_json(c)).closed[0] == c.closed[0]);
    {
        std::ofstream out(path);
        out << R"({"p": 2, "n": 2, "closed": ["x0 + x1^2"]})";
    }
    CHECK_THROWS_AS(resolve_space(path, std::nullopt), Error);
    std::remove(path);
}
