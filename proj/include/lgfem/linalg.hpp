#pragma once

#include <span>
#include <vector>

namespace lgfem {

class FeSpace;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row sparse matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed in input order, so the result
  /// is bitwise reproducible for a fixed triplet sequence. Explicit zeros are
  /// kept as structural entries.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Entry (i, j), zero if not stored.
  double at(int i, int j) const;
  std::vector<double> diagonal() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

/// a*A + b*B over the union of the two sparsity patterns.
SparseMatrix linear_combination(double a, const SparseMatrix& lhs, double b, const SparseMatrix& rhs);

/// M_ij = integral of phi_i phi_j (rule of degree 2k).
SparseMatrix assemble_mass(const FeSpace& space);

/// A_ij = integral of grad phi_i . grad phi_j (rule of degree max(1, 2k-2)).
SparseMatrix assemble_stiffness(const FeSpace& space);

struct CgOptions {
  double rel_tol = 1e-12;
  int max_iter = -1;  // -1: 10 * n
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Throws SolverFailure when
/// ||b - A x|| <= rel_tol ||b|| is not reached within max_iter iterations.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                  const CgOptions& options = {});

/// Symmetric elimination of homogeneous Dirichlet DOFs: masked rows and
/// columns become zero, masked diagonals one, masked right-hand side entries
/// zero. The sparsity pattern is kept.
void apply_dirichlet(SparseMatrix& a, std::span<double> b, const std::vector<bool>& mask);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// sqrt(x^T A x), clamped at zero.
double energy_norm(const SparseMatrix& a, std::span<const double> x);

}  // namespace lgfem
