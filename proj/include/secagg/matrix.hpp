#pragma once

// Dense matrices over a runtime field, with exact Gaussian elimination
// (first-nonzero pivoting) for rank, solve, and inverse. Matrices keep a
// non-owning pointer to their field; the field must outlive the matrix.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace secagg {

class Matrix {
public:
    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : f_(&f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(const Field& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return *f_; }

    felem& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    felem at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Matrix mul(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix out(*f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                felem v = at(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out.at(i, j) = f_->add(out.at(i, j), f_->mul(v, o.at(k, j)));
            }
        return out;
    }

    Matrix submatrix(const std::vector<std::size_t>& row_idx,
                     const std::vector<std::size_t>& col_idx) const {
        check_indices(row_idx, rows_, "row");
        check_indices(col_idx, cols_, "column");
        Matrix out(*f_, row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out.at(i, j) = at(row_idx[i], col_idx[j]);
        return out;
    }

    std::size_t rank() const {
        Matrix w = *this;
        std::size_t r = 0;
        for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
            std::size_t pivot = r;
            while (pivot < rows_ && w.at(pivot, col) == 0) ++pivot;
            if (pivot == rows_) continue;
            w.swap_rows(r, pivot);
            w.scale_row(r, f_->inv(w.at(r, col)));
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != r && w.at(i, col) != 0) w.add_scaled_row(i, r, f_->neg(w.at(i, col)));
            ++r;
        }
        return r;
    }

    /// Solve this * X = rhs for a square nonsingular matrix; rhs may have
    /// any number of columns. Throws std::domain_error when singular.
    Matrix solve(const Matrix& rhs) const {
        if (rows_ != cols_) throw std::invalid_argument("solve requires a square matrix");
        if (rhs.rows_ != rows_) throw std::invalid_argument("solve shape mismatch");
        Matrix w = *this;
        Matrix x = rhs;
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t pivot = col;
            while (pivot < rows_ && w.at(pivot, col) == 0) ++pivot;
            if (pivot == rows_) throw std::domain_error("singular system");
            w.swap_rows(col, pivot); x.swap_rows(col, pivot);
            felem s = f_->inv(w.at(col, col));
            w.scale_row(col, s); x.scale_row(col, s);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == col || w.at(i, col) == 0) continue;
                felem c = f_->neg(w.at(i, col));
                w.add_scaled_row(i, col, c); x.add_scaled_row(i, col, c);
            }
        }
        return x;
    }

    Matrix inverse() const { return solve(identity(*f_, rows_)); }

private:
    static void check_indices(const std::vector<std::size_t>& idx, std::size_t bound,
                              const char* what) {
        std::vector<bool> seen(bound, false);
        for (std::size_t i : idx) {
            if (i >= bound) throw std::out_of_range(std::string(what) + " index out of range");
            if (seen[i]) throw std::invalid_argument(std::string("duplicate ") + what + " index");
            seen[i] = true;
        }
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
    }
    void scale_row(std::size_t i, felem s) {
        for (std::size_t k = 0; k < cols_; ++k) at(i, k) = f_->mul(at(i, k), s);
    }
    void add_scaled_row(std::size_t dst, std::size_t src, felem s) {
        for (std::size_t k = 0; k < cols_; ++k)
            at(dst, k) = f_->add(at(dst, k), f_->mul(s, at(src, k)));
    }

    const Field* f_;
    std::size_t rows_, cols_;
    std::vector<felem> a_;
};

struct CauchyParams {
    std::vector<felem> alphas;
    std::vector<felem> betas;
};

/// Entry (i, j) = 1 / (alpha_i - beta_j). Requires all alphas and betas
/// pairwise distinct as one combined list; every square submatrix of the
/// result is then nonsingular.
inline Matrix cauchy(const Field& f, const CauchyParams& cp) {
    const std::size_t a = cp.alphas.size(), b = cp.betas.size();
    if (a == 0 || b == 0) throw std::invalid_argument("cauchy matrix needs nonempty parameters");
    if (a + b > f.size())
        throw std::invalid_argument("field too small for " + std::to_string(a + b) +
                                    " distinct cauchy parameters");
    std::vector<felem> all;
    all.reserve(a + b);
    all.insert(all.end(), cp.alphas.begin(), cp.alphas.end());
    all.insert(all.end(), cp.betas.begin(), cp.betas.end());
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j]) throw std::invalid_argument("cauchy parameters must be distinct");
    Matrix m(f, a, b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
            m.at(i, j) = f.inv(f.sub(cp.alphas[i], cp.betas[j]));
    return m;
}

/// Canonical a x b Cauchy matrix: alpha_i is the element with canonical
/// index i-1, beta_j the element with canonical index a+j-1. Deterministic,
/// so dealer and verifier rebuild identical matrices from sizes alone.
inline Matrix canonical_cauchy(const Field& f, std::size_t a, std::size_t b) {
    if (a + b > f.size())
        throw std::invalid_argument("field of size " + std::to_string(f.size()) +
                                    " too small for canonical cauchy " + std::to_string(a) +
                                    "x" + std::to_string(b));
    CauchyParams cp;
    for (std::size_t i = 0; i < a; ++i) cp.alphas.push_back(f.element(i));
    for (std::size_t j = 0; j < b; ++j) cp.betas.push_back(f.element(a + j));
    return cauchy(f, cp);
}

}  // namespace secagg
