#include "streamcode/linalg.hpp"

#include <utility>

#include "streamcode/errors.hpp"

namespace streamcode::linalg {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> reduce(const Field& f, Matrix& m, std::vector<Symbol>* rhs) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row) {
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(row, c));
            if (rhs) std::swap((*rhs)[sel], (*rhs)[row]);
        }
        const Symbol scale = f.inv(m.at(row, col));
        for (std::size_t c = col; c < m.cols; ++c) m.at(row, c) = f.mul(m.at(row, c), scale);
        if (rhs) (*rhs)[row] = f.mul((*rhs)[row], scale);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == row) continue;
            const Symbol factor = m.at(r, col);
            if (factor == 0) continue;
            for (std::size_t c = col; c < m.cols; ++c) m.at(r, c) ^= f.mul(factor, m.at(row, c));
            if (rhs) (*rhs)[r] ^= f.mul(factor, (*rhs)[row]);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const Field& f, Matrix m) { return reduce(f, m, nullptr).size(); }

std::optional<Matrix> inverse(const Field& f, Matrix m) {
    if (m.rows != m.cols) throw InvalidArgument("inverse of a non-square matrix");
    const std::size_t n = m.rows;
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    const auto pivots = reduce(f, aug, nullptr);
    if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
    Matrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
    return out;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw LengthMismatch("matrix dimensions do not agree");
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Symbol x = a.at(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) ^= f.mul(x, b.at(k, j));
        }
    return out;
}

std::optional<std::vector<Symbol>> solve(const Field& f, Matrix a, std::vector<Symbol> rhs) {
    if (rhs.size() != a.rows) throw LengthMismatch("right-hand side has wrong length");
    const auto pivots = reduce(f, a, &rhs);
    for (std::size_t r = pivots.size(); r < a.rows; ++r)
        if (rhs[r] != 0) return std::nullopt;
    std::vector<Symbol> x(a.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = rhs[r];
    return x;
}

}  // namespace streamcode::linalg
