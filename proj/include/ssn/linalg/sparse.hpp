#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ssn/errors.hpp"
#include "ssn/linalg/matrix.hpp"
#include "ssn/linalg/vec.hpp"

namespace ssn::linalg {

/// One (row, col, value) entry of a sparse matrix.
struct Triplet {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;

    bool operator==(const Triplet&) const = default;
};

/// Square sparse matrix in compressed-row form. Entries within a row are
/// stored in ascending column order, which fixes the accumulation order of
/// every product computed from it.
class SparseCsr {
public:
    SparseCsr() = default;

    /// Builds from triplets; duplicates are not allowed.
    static SparseCsr from_triplets(std::size_t n, std::vector<Triplet> entries) {
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseCsr m;
        m.n_ = n;
        m.row_ptr_.assign(n + 1, 0);
        m.col_.reserve(entries.size());
        m.val_.reserve(entries.size());
        std::uint32_t prev_row = 0, prev_col = 0;
        bool first = true;
        for (const Triplet& t : entries) {
            if (t.row >= n || t.col >= n) throw DimensionMismatchError("triplet index out of range");
            if (!first && t.row == prev_row && t.col == prev_col) {
                throw DimensionMismatchError("duplicate triplet");
            }
            prev_row = t.row;
            prev_col = t.col;
            first = false;
            m.row_ptr_[t.row + 1]++;
            m.col_.push_back(t.col);
            m.val_.push_back(t.value);
        }
        for (std::size_t i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
        return m;
    }

    std::size_t dim() const { return n_; }
    std::size_t nnz() const { return val_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::uint32_t>& col_idx() const { return col_; }
    const std::vector<double>& values() const { return val_; }

    void scale(double c) {
        for (double& v : val_) v *= c;
    }

    /// Entries in row-major order.
    std::vector<Triplet> to_triplets() const {
        std::vector<Triplet> out;
        out.reserve(nnz());
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                out.push_back({static_cast<std::uint32_t>(i), col_[k], val_[k]});
            }
        }
        return out;
    }

    DenseMatrix to_dense() const {
        DenseMatrix d(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_[k]) = val_[k];
        }
        return d;
    }

    bool operator==(const SparseCsr&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;
};

} // namespace ssn::linalg
