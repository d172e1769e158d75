#pragma once

// Small exact linear algebra over the rationals: incremental row-echelon
// rank and a dense square solver. Sized for the desk-scale systems here
// (commutant constraints, span ranks, polytope vertex bases).

#include <optional>
#include <vector>

#include "blab/scalar.hpp"

namespace blab {

/// Maintains a reduced row basis; rows are inserted one at a time so rank
/// computations can stop early once the ambient dimension is reached.
class RationalRowBasis {
  public:
    explicit RationalRowBasis(std::size_t dim) : dim_(dim) {}

    /// Reduces v against the basis; keeps it when independent.
    /// Returns true iff the rank grew.
    bool insert(std::vector<Rational> v) {
        for (std::size_t b = 0; b < rows_.size(); ++b) {
            const Rational& lead = v[pivots_[b]];
            if (lead.sign() != 0) {
                const Rational f = lead;  // basis rows are normalized to pivot 1
                for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[b][j];
            }
        }
        std::size_t pivot = dim_;
        for (std::size_t j = 0; j < dim_; ++j)
            if (v[j].sign() != 0) {
                pivot = j;
                break;
            }
        if (pivot == dim_) return false;
        const Rational inv = v[pivot];
        for (std::size_t j = 0; j < dim_; ++j) v[j] /= inv;
        rows_.push_back(std::move(v));
        pivots_.push_back(pivot);
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    bool full() const { return rows_.size() == dim_; }

  private:
    std::size_t dim_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> pivots_;
};

inline std::size_t rational_rank(const std::vector<std::vector<Rational>>& rows,
                                 std::size_t dim) {
    RationalRowBasis basis(dim);
    for (const auto& r : rows) {
        basis.insert(r);
        if (basis.full()) break;
    }
    return basis.rank();
}

/// Solves the square system A x = b by Gaussian elimination with exact
/// pivoting; nullopt when A is singular.
inline std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].sign() == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] /= inv;
        b[col] /= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].sign() == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace blab
