#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "streamcode/gf.hpp"

namespace streamcode::linalg {

/// Row-major dense matrix over a field.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Symbol> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    Symbol& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Symbol at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

std::size_t rank(const Field& f, Matrix m);
std::optional<Matrix> inverse(const Field& f, Matrix m);
Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
/// One solution of a x = rhs (free variables set to 0), or nullopt if inconsistent.
std::optional<std::vector<Symbol>> solve(const Field& f, Matrix a, std::vector<Symbol> rhs);

}  // namespace streamcode::linalg
