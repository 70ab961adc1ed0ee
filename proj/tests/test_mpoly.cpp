#include "bertini/error.hpp"
#include "bertini/mpoly.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <set>

using namespace bertini;
using namespace bertini::gf;
using namespace bertini::mpoly;

namespace {

FieldPtr F(std::uint64_t q) { return base_field(field_of_order(q)); }

}  // namespace

TEST_CASE("monomial table") {
    auto t = monomials(2, 3);
    CHECK(t->size() == 10);
    auto lin = monomials(2, 1);
    CHECK(lin->exponent(0, 0) == 1);
    CHECK(lin->exponent(1, 1) == 1);
    CHECK(lin->exponent(2, 2) == 1);
    // graded colex: x0^3 first, x2^3 last
    CHECK(t->exponent(0, 0) == 3);
    CHECK(t->exponent(9, 2) == 3);
    for (std::size_t k = 0; k < t->size(); ++k) CHECK(t->index_of(t->exponents(k)) == k);
    CHECK(binomial(22, 2) == 231);
}

TEST_CASE("parse and print") {
    auto f2 = F(2);
    auto f = poly_parse("x0^3 + x1^3 + x2^3", f2, 2);
    CHECK(f.d() == 3);
    CHECK(f.term_count() == 3);
    CHECK(f.to_string() == "x0^3 + x1^3 + x2^3");
    auto g = poly_parse("x0*x1^2 + x2^3", f2, 2);
    CHECK(g.term_count() == 2);
    CHECK(poly_parse(g.to_string(), f2, 2) == g);

    try {
        poly_parse("x0 + x1^2", f2, 2);
        FAIL("expected NotHomogeneous");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotHomogeneous);
    }
    try {
        poly_parse("x0 + x5", f2, 2);
        FAIL("expected BadVariableIndex");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadVariableIndex);
    }
    try {
        poly_parse("x0 + * x1", f2, 2);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 5);
    }
    try {
        poly_parse("[g]*x0", f2, 1);
        FAIL("expected CoefficientNotInField");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CoefficientNotInField);
    }

    auto f3 = F(3);
    auto h = poly_parse("x0 - x1", f3, 1);
    CHECK(h.coeff_of(std::vector<std::uint16_t>{0, 1}) == Elem{2});
    CHECK(poly_parse("5*x0", f3, 1).coeff(0) == Elem{2});
    CHECK(poly_parse("-x0", f3, 1).coeff(0) == Elem{2});
    CHECK(h.to_string() == "x0 + 2*x1");

    auto f4 = F(4);
    auto k = poly_parse("[g+1]*x0^2 + x0 * x1", f4, 1);
    CHECK(k.coeff(0) == Elem{3});
    CHECK(k.to_string() == "[g+1]*x0^2 + x0*x1");
    CHECK(poly_parse(k.to_string(), f4, 1) == k);
    CHECK(poly_parse("0", f2, 2).is_zero());
}

TEST_CASE("S_d enumeration") {
    auto f2 = F(2);
    FormSpace s(f2, 2, 3, 1u << 24);
    CHECK(s.size() == 1024);
    FormSpace line(f2, 1, 2, 1u << 24);
    CHECK(line.size() == 8);
    CHECK(line.form(0).is_zero());

    std::set<std::vector<std::uint32_t>> seen;
    std::uint64_t covered = 0;
    for (unsigned k = 0; k < 4; ++k) {
        auto sl = s.shard(k, 4);
        CHECK(sl.end - sl.begin == 256);
        CHECK(sl.begin == covered);
        covered = sl.end;
        for (auto i = sl.begin; i < sl.end; ++i) {
            auto f = s.form(i);
            std::vector<std::uint32_t> key;
            for (Elem c : f.coeffs()) key.push_back(c.v);
            seen.insert(key);
        }
    }
    CHECK(seen.size() == 1024);
    CHECK_THROWS_AS(FormSpace(f2, 2, 3, 1000), Error);

    FormSpace s3(F(3), 1, 1, 100);
    CHECK(s3.size() == 9);
    auto sl = s3.shard(2, 4);
    CHECK(sl.end - sl.begin == 2);
}

TEST_CASE("sampling") {
    auto f2 = F(2);
    CounterRng a(7, 0), b(7, 0);
    for (int i = 0; i < 10; ++i) CHECK(poly_sample(f2, 2, 3, a) == poly_sample(f2, 2, 3, b));

    int ones = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        CounterRng r(1, static_cast<std::uint64_t>(i));
        ones += static_cast<int>(poly_sample(f2, 2, 3, r).coeff(4).v);
    }
    CHECK(std::abs(ones / double(draws) - 0.5) < 0.01);

    auto f4 = F(4);
    std::array<int, 4> counts{};
    for (int i = 0; i < draws; ++i) {
        CounterRng r(99, static_cast<std::uint64_t>(i));
        ++counts[poly_sample(f4, 2, 2, r).coeff(0).v];
    }
    double chi = 0, expected = draws / 4.0;
    for (int c : counts) chi += (c - expected) * (c - expected) / expected;
    boost::math::chi_squared dist(3);
    CHECK(chi < boost::math::quantile(boost::math::complement(dist, 1e-6)));
}

TEST_CASE("derivatives") {
    auto f2 = F(2);
    CHECK(poly_derive(poly_parse("x0^2", f2, 2), 0).is_zero());
    CHECK(poly_derive(poly_parse("x0^3 + x1^3 + x2^3", f2, 2), 1) == poly_parse("x1^2", f2, 2));
    auto f3 = F(3);
    CHECK(poly_derive(poly_parse("x0*x1^2", f3, 1), 1) == poly_parse("2*x0*x1", f3, 1));
    CHECK(poly_derive(poly_parse("1", f3, 1), 0).d() == 0);
}

TEST_CASE("Euler relation") {
    for (std::uint64_t q : {2u, 3u, 4u}) {
        auto fq = F(q);
        for (unsigned d = 1; d <= 4; ++d)
            for (std::uint64_t s = 0; s < 5; ++s) {
                CounterRng rng(q * 100 + d, s);
                auto f = poly_sample(fq, 2, d, rng);
                HomogPoly lhs(fq, 2, d);
                for (unsigned i = 0; i <= 2; ++i) {
                    auto xi = HomogPoly(fq, 2, 1);
                    xi.set_coeff(i, WorkingField::one());
                    lhs = poly_add(lhs, poly_mul(xi, poly_derive(f, i)));
                }
                CHECK(lhs == poly_scale(f, fq->from_int(d)));
            }
    }
}

TEST_CASE("dehomogenize") {
    auto f2 = F(2);
    auto a = poly_dehomogenize(poly_parse("x0*x1^2 + x2^3", f2, 2), 0);
    CHECK(a.to_string() == "x1^2 + x2^3");
    CHECK(a.degree() == 3);
    auto c = poly_dehomogenize(poly_parse("x0^4", f2, 2), 0);
    CHECK(c.is_constant());
    CHECK(c.to_string() == "1");
    auto g = poly_parse("x1*x2^2", f2, 2);
    CHECK(poly_dehomogenize(g, 0).homogenize(0, 3) == g);
    auto h = poly_parse("x0*x1*x2 + x0^3", f2, 2);
    CHECK(poly_dehomogenize(h, 1).homogenize(1, 3) == h);
}

TEST_CASE("evaluation") {
    auto f2 = F(2);
    std::vector<Elem> ones{Elem{1}, Elem{1}, Elem{1}};
    CHECK(poly_eval(poly_parse("x0^3 + x1^3 + x2^3", f2, 2), ones, *f2) == Elem{1});
    std::vector<Elem> pt{Elem{0}, Elem{1}};
    CHECK(poly_eval(poly_parse("x0*x1", f2, 1), pt, *f2) == Elem{0});
    auto w4 = field_extend(field_make(2, 1), 2);
    std::vector<Elem> tp{Elem{2}, Elem{1}};
    CHECK(poly_eval(poly_parse("x0^2 + x0*x1", f2, 1), tp, *w4) == Elem{1});

    // coefficients over F_4 cannot be evaluated in F_{2^3}
    auto f4 = F(4);
    auto w8 = field_extend(field_make(2, 1), 3);
    CHECK_THROWS_AS(poly_eval(poly_parse("[g]*x0", f4, 1), tp, *w8), Error);
}

TEST_CASE("chart consistency") {
    auto f3 = F(3);
    auto w = field_extend(field_make(3, 1), 2);
    for (std::uint64_t s = 0; s < 20; ++s) {
        CounterRng rng(5, s);
        auto f = poly_sample(f3, 2, 3, rng);
        std::vector<Elem> p{Elem{static_cast<std::uint32_t>(1 + rng.below(8))},
                            Elem{static_cast<std::uint32_t>(1 + rng.below(8))},
                            Elem{static_cast<std::uint32_t>(rng.below(9))}};
        // chart 0 and chart 1 values
        std::vector<Elem> a0{w->div(p[1], p[0]), w->div(p[2], p[0])};
        std::vector<Elem> a1{w->div(p[0], p[1]), w->div(p[2], p[1])};
        Elem v0 = poly_dehomogenize(f, 0).eval(a0, *w);
        Elem v1 = poly_dehomogenize(f, 1).eval(a1, *w);
        CHECK(v0 == w->mul(v1, w->pow(w->div(p[1], p[0]), 3)));
        CHECK(w->mul(poly_eval(f, p, *w), w->inv(w->pow(p[0], 3))) == v0);
    }
}

TEST_CASE("jets") {
    auto f2 = F(2);
    std::vector<Elem> origin{Elem{1}, Elem{0}, Elem{0}};
    auto j = poly_jet2(poly_parse("x1*x2", f2, 2), origin, 0, *f2);
    CHECK(j.value == Elem{0});
    CHECK(j.gradient == std::vector<Elem>{Elem{0}, Elem{0}});
    CHECK(j.quad == std::vector<Elem>{Elem{0}, Elem{1}, Elem{0}});
    auto c = poly_jet2(poly_parse("x0*x1^2 + x2^3", f2, 2), origin, 0, *f2);
    CHECK(c.value == Elem{0});
    CHECK(c.quad == std::vector<Elem>{Elem{1}, Elem{0}, Elem{0}});
    auto k = poly_jet2(poly_parse("x0^3", f2, 2), origin, 0, *f2);
    CHECK(k.value == Elem{1});
    CHECK(k.quad == std::vector<Elem>{Elem{0}, Elem{0}, Elem{0}});

    // value and gradient agree with eval and the partials (chart 0, P_0 = 1)
    for (std::uint64_t q : {2u, 3u, 5u}) {
        auto fq = F(q);
        auto w = field_extend(field_of_order(q), 2);
        for (std::uint64_t s = 0; s < 10; ++s) {
            CounterRng rng(q, s);
            auto f = poly_sample(fq, 2, 4, rng);
            std::vector<Elem> p{Elem{1}, Elem{static_cast<std::uint32_t>(rng.below(w->size()))},
                                Elem{static_cast<std::uint32_t>(rng.below(w->size()))}};
            auto jet = poly_jet2(f, p, 0, *w);
            CHECK(jet.value == poly_eval(f, p, *w));
            CHECK(jet.gradient[0] == poly_eval(poly_derive(f, 1), p, *w));
            CHECK(jet.gradient[1] == poly_eval(poly_derive(f, 2), p, *w));
            if (q % 2 == 1) {
                // odd characteristic: quad(a,b) = D_aD_b f(P), quad(a,a) = D_a^2 f(P) / 2
                auto d11 = poly_eval(poly_derive(poly_derive(f, 1), 1), p, *w);
                auto d12 = poly_eval(poly_derive(poly_derive(f, 1), 2), p, *w);
                auto d22 = poly_eval(poly_derive(poly_derive(f, 2), 2), p, *w);
                CHECK(w->add(jet.quad[0], jet.quad[0]) == d11);
                CHECK(jet.quad[1] == d12);
                CHECK(w->add(jet.quad[2], jet.quad[2]) == d22);
            }
        }
    }
}

TEST_CASE("compiled evaluation matches poly_eval") {
    auto f2 = F(2);
    auto w = field_extend(field_make(2, 1), 5);
    for (std::uint64_t s = 0; s < 10; ++s) {
        CounterRng rng(11, s);
        auto f = poly_sample(f2, 3, 4, rng);
        CompiledPoly cp(f, *w, 5);
        PowerTable pw(3, 4);
        for (int t = 0; t < 10; ++t) {
            std::vector<Elem> p(4);
            for (auto& c : p) c = Elem{static_cast<std::uint32_t>(rng.below(32))};
            pw.fill(p, *w);
            CHECK(cp.eval(pw, *w) == poly_eval(f, p, *w));
        }
    }
}
