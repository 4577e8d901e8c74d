#include "lgfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lgfem/errors.hpp"
#include "lgfem/fe_space.hpp"
#include "lgfem/quadrature.hpp"

namespace lgfem {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimension");
  }
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("SparseMatrix: triplet index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(rows + 1, 0);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    double v = 0.0;
    std::size_t j = k;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
      v += triplets[j].value;
    }
    m.col_indices_.push_back(t.col);
    m.values_.push_back(v);
    ++m.row_offsets_[t.row + 1];
    k = j;
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      s += values_[k] * x[col_indices_[k]];
    }
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::at(int i, int j) const {
  const auto first = col_indices_.begin() + row_offsets_[i];
  const auto last = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) {
    return 0.0;
  }
  return values_[it - col_indices_.begin()];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = at(static_cast<int>(i), static_cast<int>(i));
  }
  return d;
}

SparseMatrix linear_combination(double a, const SparseMatrix& lhs, double b, const SparseMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw std::invalid_argument("linear_combination: dimension mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(lhs.nnz() + rhs.nnz());
  for (int i = 0; i < lhs.rows(); ++i) {
    for (int k = lhs.row_offsets()[i]; k < lhs.row_offsets()[i + 1]; ++k) {
      t.push_back({i, lhs.col_indices()[k], a * lhs.values()[k]});
    }
    for (int k = rhs.row_offsets()[i]; k < rhs.row_offsets()[i + 1]; ++k) {
      t.push_back({i, rhs.col_indices()[k], b * rhs.values()[k]});
    }
  }
  return SparseMatrix::from_triplets(lhs.rows(), lhs.cols(), std::move(t));
}

namespace {

template <class Local>
SparseMatrix assemble(const FeSpace& space, int rule_degree, Local&& local) {
  const Mesh& mesh = space.mesh();
  const TriangleRule& rule = rule_of_degree(rule_degree);
  const int nloc = space.dofs_per_element();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * nloc * nloc);
  std::array<double, 36> block{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    block.fill(0.0);
    local(e, rule, block);
    const auto dofs = space.element_dofs(e);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        t.push_back({dofs[i], dofs[j], block[i * nloc + j]});
      }
    }
  }
  return SparseMatrix::from_triplets(space.num_dofs(), space.num_dofs(), std::move(t));
}

}  // namespace

SparseMatrix assemble_mass(const FeSpace& space) {
  const int nloc = space.dofs_per_element();
  return assemble(space, 2 * space.degree(),
                  [&](int e, const TriangleRule& rule, std::array<double, 36>& block) {
                    const double area = space.mesh().area(e);
                    std::array<double, 6> phi{};
                    for (std::size_t q = 0; q < rule.size(); ++q) {
                      space.basis(rule.points[q], phi);
                      const double w = area * rule.weights[q];
                      for (int i = 0; i < nloc; ++i) {
                        for (int j = 0; j < nloc; ++j) {
                          block[i * nloc + j] += w * phi[i] * phi[j];
                        }
                      }
                    }
                  });
}

SparseMatrix assemble_stiffness(const FeSpace& space) {
  const int nloc = space.dofs_per_element();
  return assemble(space, std::max(1, 2 * space.degree() - 2),
                  [&](int e, const TriangleRule& rule, std::array<double, 36>& block) {
                    const double area = space.mesh().area(e);
                    std::array<Point, 6> g{};
                    for (std::size_t q = 0; q < rule.size(); ++q) {
                      space.basis_gradients(e, rule.points[q], g);
                      const double w = area * rule.weights[q];
                      for (int i = 0; i < nloc; ++i) {
                        for (int j = 0; j < nloc; ++j) {
                          block[i * nloc + j] += w * dot(g[i], g[j]);
                        }
                      }
                    }
                  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double energy_norm(const SparseMatrix& a, std::span<const double> x) {
  const std::vector<double> ax = a.multiply(x);
  return std::sqrt(std::max(0.0, dot(x, ax)));
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                  const CgOptions& options) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n) {
    throw std::invalid_argument("cg_solve: size mismatch");
  }
  if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) {
    throw std::invalid_argument("cg_solve: rel_tol must lie in (0, 1)");
  }
  const int max_iter = options.max_iter < 0 ? 10 * std::max(n, 1) : options.max_iter;

  CgResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    return res;
  }
  const double target = options.rel_tol * bnorm;

  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) {
      throw std::invalid_argument("cg_solve: non-positive diagonal entry");
    }
    d = 1.0 / d;
  }

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> r(n);
  std::vector<double> z(n);
  std::vector<double> p(n);
  std::vector<double> ap(n);

  auto true_residual = [&] {
    a.multiply(x, r);
    for (int i = 0; i < n; ++i) {
      r[i] = b[i] - r[i];
    }
    return norm2(r);
  };

  double rnorm = true_residual();
  int it = 0;
  // The recursive residual drifts from the true one near machine precision;
  // restart from the current iterate when they disagree.
  while (rnorm > target && it < max_iter) {
    for (int i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
    }
    p = z;
    double rz = dot(r, z);
    while (it < max_iter) {
      a.multiply(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) {
        throw SolverFailure(rnorm / bnorm, it, "cg_solve: matrix not positive definite");
      }
      const double alpha = rz / pap;
      for (int i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      ++it;
      rnorm = norm2(r);
      if (rnorm <= target) {
        break;
      }
      for (int i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
      }
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int i = 0; i < n; ++i) {
        p[i] = z[i] + beta * p[i];
      }
    }
    rnorm = true_residual();
  }
  res.relative_residual = rnorm / bnorm;
  res.iterations = it;
  if (rnorm > target) {
    throw SolverFailure(res.relative_residual, it,
                        "cg_solve: no convergence after " + std::to_string(it) +
                            " iterations, relative residual " + std::to_string(res.relative_residual));
  }
  res.x = std::move(x);
  return res;
}

void apply_dirichlet(SparseMatrix& a, std::span<double> b, const std::vector<bool>& mask) {
  const int n = a.rows();
  if (static_cast<int>(mask.size()) != n || static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("apply_dirichlet: size mismatch");
  }
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  auto& vals = a.values();
  for (int i = 0; i < n; ++i) {
    for (int k = off[i]; k < off[i + 1]; ++k) {
      const int j = cols[k];
      if (mask[i] || mask[j]) {
        vals[k] = (i == j) ? 1.0 : 0.0;
      }
    }
    if (mask[i]) {
      b[i] = 0.0;
    }
  }
}

}  // namespace lgfem
