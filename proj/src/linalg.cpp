#include "bertini/linalg.hpp"

#include "bertini/error.hpp"

#include <utility>

namespace bertini::linalg {

void Matrix::append_row(std::span<const Elem> values) {
    require(values.size() == cols_, ErrorKind::InvalidArgument, "row length mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

namespace {

// Forward elimination with optional back substitution. Returns pivot columns.
std::vector<std::size_t> eliminate(Matrix& m, const WorkingField& w, bool reduced, std::size_t stop_at) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows() && pivots.size() < stop_at; ++c) {
        std::size_t p = r;
        while (p < m.rows() && m.at(p, c).v == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(p, k), m.at(r, k));
        const Elem inv = w.inv(m.at(r, c));
        for (std::size_t k = c; k < m.cols(); ++k) m.at(r, k) = w.mul(m.at(r, k), inv);
        for (std::size_t i = reduced ? 0 : r + 1; i < m.rows(); ++i) {
            if (i == r) continue;
            const Elem factor = m.at(i, c);
            if (factor.v == 0) continue;
            for (std::size_t k = c; k < m.cols(); ++k) m.at(i, k) = w.sub(m.at(i, k), w.mul(factor, m.at(r, k)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(Matrix m, const WorkingField& w, std::size_t stop_at) {
    return eliminate(m, w, false, stop_at).size();
}

std::vector<std::size_t> rref(Matrix& m, const WorkingField& w) {
    return eliminate(m, w, true, static_cast<std::size_t>(-1));
}

std::vector<std::vector<Elem>> kernel(const Matrix& m, const WorkingField& w) {
    Matrix r = m;
    auto pivots = rref(r, w);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Elem>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Elem> v(m.cols());
        v[free] = WorkingField::one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = w.neg(r.at(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<AffineSolution> solve(const Matrix& m, std::span<const Elem> b, const WorkingField& w) {
    require(b.size() == m.rows(), ErrorKind::InvalidArgument, "right-hand side length mismatch");
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) aug.at(i, k) = m.at(i, k);
        aug.at(i, m.cols()) = b[i];
    }
    auto pivots = rref(aug, w);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    AffineSolution sol;
    sol.particular.assign(m.cols(), WorkingField::zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = aug.at(i, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Elem> v(m.cols());
        v[free] = WorkingField::one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = w.neg(aug.at(i, free));
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

}  // namespace bertini::linalg
