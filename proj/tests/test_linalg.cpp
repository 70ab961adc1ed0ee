#include "bertini/linalg.hpp"

#include <doctest.h>

using namespace bertini;
using namespace bertini::gf;
using namespace bertini::linalg;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<std::uint32_t>> rows) {
    Matrix m(0, rows.begin()->size());
    for (auto r : rows) {
        std::vector<Elem> v;
        for (auto x : r) v.push_back(Elem{x});
        m.append_row(v);
    }
    return m;
}

std::vector<Elem> apply(const Matrix& m, const std::vector<Elem>& x, const WorkingField& w) {
    std::vector<Elem> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) out[i] = w.add(out[i], w.mul(m.at(i, k), x[k]));
    return out;
}

}  // namespace

TEST_CASE("rank over F_2 and F_3") {
    auto f2 = base_field(field_make(2, 1));
    CHECK(rank(from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), *f2) == 2);
    CHECK(rank(from_rows({{1, 0}, {0, 1}}), *f2) == 2);
    CHECK(rank(from_rows({{1, 0}, {0, 1}}), *f2, 1) == 1);
    auto f3 = base_field(field_make(3, 1));
    CHECK(rank(from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 2}}), *f3) == 2);
    CHECK(rank(from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), *f3) == 3);
    CHECK(rank(Matrix(0, 3), *f3) == 0);
}

TEST_CASE("kernel and solve") {
    auto f3 = base_field(field_make(3, 1));
    auto m = from_rows({{1, 1, 0, 2}, {0, 1, 1, 1}});
    auto ker = kernel(m, *f3);
    CHECK(ker.size() == 2);
    for (const auto& v : ker)
        for (Elem c : apply(m, v, *f3)) CHECK(c.v == 0);

    std::vector<Elem> b{Elem{2}, Elem{1}};
    auto sol = solve(m, b, *f3);
    REQUIRE(sol);
    CHECK(apply(m, sol->particular, *f3) == b);
    CHECK(sol->kernel.size() == 2);

    auto inconsistent = from_rows({{1, 1}, {1, 1}});
    std::vector<Elem> c{Elem{0}, Elem{1}};
    CHECK_FALSE(solve(inconsistent, c, *f3));
}

TEST_CASE("rank over an extension field") {
    auto w = field_extend(field_make(2, 1), 2);
    // rows (1, g) and (g, g+1): second = g * first since g*g = g+1
    CHECK(rank(from_rows({{1, 2}, {2, 3}}), *w) == 1);
    CHECK(rank(from_rows({{1, 2}, {2, 1}}), *w) == 2);
}
