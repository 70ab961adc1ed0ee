#pragma once

// Dense Gaussian elimination over a WorkingField.

#include "bertini/gf.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bertini::linalg {

using gf::Elem;
using gf::WorkingField;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Elem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    void append_row(std::span<const Elem> values);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Elem> data_;
};

/// Rank of m; elimination stops early once the rank reaches `stop_at`.
std::size_t rank(Matrix m, const WorkingField& w, std::size_t stop_at = static_cast<std::size_t>(-1));

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m, const WorkingField& w);

/// Basis of {x : m x = 0}, one vector per free column, in column order.
std::vector<std::vector<Elem>> kernel(const Matrix& m, const WorkingField& w);

struct AffineSolution {
    std::vector<Elem> particular;  // free variables set to zero
    std::vector<std::vector<Elem>> kernel;
};

/// All x with m x = b, or nullopt when inconsistent.
std::optional<AffineSolution> solve(const Matrix& m, std::span<const Elem> b, const WorkingField& w);

}  // namespace bertini::linalg
