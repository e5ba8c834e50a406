#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

namespace koitervi {

/// Symmetric sparse matrix in CSR form, built from triplets.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(int n) : n_(n) {}

    int rows() const { return n_; }

    void add_triplet(int i, int j, double v) { triplets_.push_back({i, j, v}); }
    void finalize();  // merge duplicates, build CSR
    bool finalized() const { return finalized_; }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    double diagonal(int i) const;
    /// row-action skipping the diagonal entry, used by Gauss-Seidel style sweeps
    double row_dot_offdiag(int i, const std::vector<double>& x) const;

    double symmetry_defect() const;  // max |A_ij - A_ji|

    /// Zero the row and column of every flagged dof and put a unit diagonal there.
    void clamp(const std::vector<char>& clamped);

    std::vector<std::vector<double>> to_dense() const;

    /// coordinate triplet export: one "i j value" line per stored entry (0-based)
    void write_coordinate(std::ostream& os) const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return val_; }

private:
    struct Triplet {
        int i, j;
        double v;
    };
    int n_ = 0;
    bool finalized_ = false;
    std::vector<Triplet> triplets_;
    std::vector<int> row_ptr_, col_idx_;
    std::vector<double> val_;
};

}  // namespace koitervi
