#include "bertini/config.hpp"
#include "bertini/error.hpp"
#include "bertini/gf.hpp"

#include <doctest.h>

#include <set>

using namespace bertini;
using namespace bertini::gf;

namespace {

// Independent check: brute force over all monic polynomials of degree deg.
FpPoly brute_smallest_irreducible(std::uint32_t p, unsigned deg) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < deg; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
        FpPoly f(deg + 1);
        std::uint64_t c = code;
        for (unsigned i = 0; i < deg; ++i) {
            f[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        f[deg] = 1;
        // no root and no factor search by evaluation: only valid for deg <= 3
        bool root = false;
        for (std::uint32_t x = 0; x < p; ++x) {
            std::uint64_t acc = 0;
            for (unsigned i = deg + 1; i-- > 0;) acc = (acc * x + f[i]) % p;
            if (acc == 0) root = true;
        }
        if (!root) return f;
    }
    return {};
}

}  // namespace

TEST_CASE("field_make") {
    CHECK(field_make(2, 1).q() == 2);
    CHECK(field_make(2, 2).modulus == FpPoly{1, 1, 1});
    CHECK(field_make(3, 1).q() == 3);
    CHECK_THROWS_AS(field_make(4, 1), Error);
    CHECK_THROWS_AS(field_make(2, 0), Error);
    try {
        field_make(6, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrime);
    }
    CHECK(field_make(5, 3) == field_make(5, 3));
    CHECK(prime_power(9) == std::pair<std::uint32_t, unsigned>{3, 2});
    CHECK_THROWS(prime_power(12));
}

TEST_CASE("smallest irreducibles agree with a root-test oracle for degree <= 3") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u})
        for (unsigned deg : {2u, 3u}) CHECK(smallest_irreducible(p, deg) == brute_smallest_irreducible(p, deg));
    CHECK(smallest_irreducible(2, 3) == FpPoly{1, 1, 0, 1});  // w^3+w+1
    CHECK(smallest_irreducible(2, 4) == FpPoly{1, 1, 0, 0, 1});
}

TEST_CASE("field_extend") {
    auto f8 = field_extend(field_make(2, 1), 3);
    CHECK(f8->modulus() == FpPoly{1, 1, 0, 1});
    CHECK(f8->size() == 8);

    auto f4 = field_make(2, 2);
    auto w = field_extend(f4, 1);
    CHECK(w->size() == 4);
    for (std::uint32_t v = 0; v < 4; ++v) CHECK(w->embed(Elem{v}) == Elem{v});

    auto w16 = field_extend(f4, 2);
    CHECK(w16->size() == 16);
    Elem t = w16->embed_image();
    CHECK(w16->add(w16->add(w16->mul(t, t), t), WorkingField::one()) == WorkingField::zero());
    // smallest root: every smaller element fails
    for (std::uint32_t v = 0; v < t.v; ++v) {
        Elem x{v};
        CHECK(w16->add(w16->add(w16->mul(x, x), x), WorkingField::one()) != WorkingField::zero());
    }
    CHECK(field_extend(f4, 2) == w16);  // cached
}

TEST_CASE("arithmetic in F_4") {
    auto w = field_extend(field_make(2, 2), 1);
    Elem t{2}, t1{3};
    CHECK(w->add(WorkingField::one(), WorkingField::one()) == WorkingField::zero());
    CHECK(w->mul(t, t) == t1);
    CHECK(w->inv(t) == t1);
    CHECK(w->frobenius(t) == t);  // x -> x^4 over the base F_4 itself
    auto w2 = field_extend(field_make(2, 1), 2);
    CHECK(w2->frobenius(t) == t1);
    CHECK(w2->frobenius(w2->frobenius(t)) == t);
    CHECK_THROWS_AS(w->inv(WorkingField::zero()), Error);
    CHECK(w->format(t1) == "g+1");
    CHECK(w->parse("g+1") == t1);
    CHECK_THROWS_AS(w->parse("g^2"), Error);
}

TEST_CASE("enumeration order") {
    auto w = field_extend(field_make(2, 2), 1);
    auto all = w->enumerate();
    REQUIRE(all.size() == 4);
    CHECK(w->format(all[0]) == "0");
    CHECK(w->format(all[1]) == "1");
    CHECK(w->format(all[2]) == "g");
    CHECK(w->format(all[3]) == "g+1");
    CHECK(field_extend(field_make(2, 1), 3)->enumerate().size() == 8);
}

TEST_CASE("field axioms exhaustively for small fields") {
    struct Case {
        std::uint32_t p;
        unsigned a, e;
    };
    for (Case c : {Case{2, 1, 4}, Case{2, 2, 2}, Case{3, 1, 2}, Case{3, 2, 1}, Case{5, 1, 2}, Case{2, 3, 2}}) {
        CAPTURE(c.p);
        CAPTURE(c.a);
        CAPTURE(c.e);
        auto base = field_make(c.p, c.a);
        auto w = field_extend(base, c.e);
        auto bf = base_field(base);
        const auto all = w->enumerate();
        // x^{q^e} = x and Frobenius fixes exactly the embedded F_q
        std::set<std::uint32_t> fixed;
        for (Elem x : all) {
            CHECK(w->pow(x, w->size()) == x);
            if (w->frobenius(x) == x) fixed.insert(x.v);
            if (x != WorkingField::zero()) CHECK(w->mul(x, w->inv(x)) == WorkingField::one());
        }
        std::set<std::uint32_t> image;
        for (Elem x : bf->enumerate()) image.insert(w->embed(x).v);
        CHECK(fixed == image);
        CHECK(image.size() == base.q());
        for (Elem x : bf->enumerate())
            for (Elem y : bf->enumerate()) {
                CHECK(w->embed(bf->mul(x, y)) == w->mul(w->embed(x), w->embed(y)));
                CHECK(w->embed(bf->add(x, y)) == w->add(w->embed(x), w->embed(y)));
            }
        // distributivity on a sample
        for (std::size_t i = 0; i < all.size(); i += 3)
            for (std::size_t j = 0; j < all.size(); j += 5)
                for (std::size_t k = 0; k < all.size(); k += 7)
                    CHECK(w->mul(all[i], w->add(all[j], all[k])) ==
                          w->add(w->mul(all[i], all[j]), w->mul(all[i], all[k])));
    }
}

TEST_CASE("untabulated fields agree with tabulated ones") {
    config::set_max_field_bits(20);
    auto base = field_make(2, 1);
    auto big = field_extend(base, 17);
    CHECK_FALSE(big->tabulated());
    Elem x{12345}, y{98765};
    CHECK(big->mul(x, big->inv(x)) == WorkingField::one());
    CHECK(big->mul(x, y) == big->mul(y, x));
    CHECK(big->pow(x, big->size()) == x);
    auto odd = field_extend(field_make(3, 1), 11);
    CHECK_FALSE(odd->tabulated());
    Elem z{4242};
    CHECK(odd->mul(z, odd->inv(z)) == WorkingField::one());
}

TEST_CASE("size guard") {
    CHECK_THROWS_AS(field_extend(field_make(2, 1), 21), Error);
}
