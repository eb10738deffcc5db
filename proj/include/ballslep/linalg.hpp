#pragma once

#include <cstddef>
#include <vector>

namespace ballslep::linalg {

/// Dense symmetric matrix, full row-major storage.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  /// Writes v to (i,j) and (j,i).
  void set_sym(std::size_t i, std::size_t j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  static SymmetricMatrix identity(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row i is the eigenvector of values[i]; empty if not requested
};

/// Householder tridiagonalization followed by implicit QL.
EigenDecomposition eigh(const SymmetricMatrix& a, bool want_vectors);

/// Cyclic Jacobi rotations. Slow; used to cross-check eigh.
EigenDecomposition eigh_jacobi(const SymmetricMatrix& a, bool want_vectors);

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (off.size() == diag.size() - 1), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

}  // namespace ballslep::linalg
