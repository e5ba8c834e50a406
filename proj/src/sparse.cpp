#include "koitervi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace koitervi {

void SparseMatrix::finalize() {
    if (finalized_) return;
    std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    row_ptr_.assign(n_ + 1, 0);
    col_idx_.clear();
    val_.clear();
    size_t k = 0;
    for (int i = 0; i < n_; ++i) {
        while (k < triplets_.size() && triplets_[k].i == i) {
            int j = triplets_[k].j;
            double v = 0.0;
            while (k < triplets_.size() && triplets_[k].i == i && triplets_[k].j == j) {
                v += triplets_[k].v;
                ++k;
            }
            col_idx_.push_back(j);
            val_.push_back(v);
        }
        row_ptr_[i + 1] = static_cast<int>(col_idx_.size());
    }
    triplets_.clear();
    triplets_.shrink_to_fit();
    finalized_ = true;
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    if (!finalized_) throw std::logic_error("SparseMatrix::multiply before finalize");
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_idx_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
}

double SparseMatrix::diagonal(int i) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] == i) return val_[k];
    return 0.0;
}

double SparseMatrix::row_dot_offdiag(int i, const std::vector<double>& x) const {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] != i) s += val_[k] * x[col_idx_[k]];
    return s;
}

double SparseMatrix::symmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            int j = col_idx_[k];
            double aji = 0.0;
            for (int m = row_ptr_[j]; m < row_ptr_[j + 1]; ++m)
                if (col_idx_[m] == i) {
                    aji = val_[m];
                    break;
                }
            worst = std::max(worst, std::abs(val_[k] - aji));
        }
    return worst;
}

void SparseMatrix::clamp(const std::vector<char>& clamped) {
    if (!finalized_) throw std::logic_error("SparseMatrix::clamp before finalize");
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            int j = col_idx_[k];
            if (clamped[i] || clamped[j]) val_[k] = (i == j) ? 1.0 : 0.0;
        }
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
    std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d[i][col_idx_[k]] = val_[k];
    return d;
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
    char buf[64];
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%d %d %.12e\n", i, col_idx_[k], val_[k]);
            os << buf;
        }
}

}  // namespace koitervi
