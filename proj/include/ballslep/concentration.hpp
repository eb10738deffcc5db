#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ballslep/basis.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/linalg.hpp"

namespace ballslep::concentration {

struct GramOptions {
  /// Zero counts pick defaults from the largest basis degree.
  geometry::RuleCounts counts;
  int threads = 1;
};

/// Matrix of <Z_a, Z_b>_{L^2(D)} over an ordered index set.
struct GramMatrix {
  basis::IndexSet set;
  basis::EllSequence ell;
  geometry::Domain domain;
  geometry::RuleCounts counts;  // factor orders actually used
  linalg::SymmetricMatrix matrix;
};

GramMatrix assemble_gram(const geometry::Domain& domain, const basis::IndexSet& set,
                         const basis::EllSequence& ell, const GramOptions& opts = {});

/// Largest polynomial degree 2i + l_j over the set, rounded up.
int max_degree(const basis::IndexSet& set, const basis::EllSequence& ell);

class SpectrumReport {
 public:
  SpectrumReport(std::vector<double> raw_desc, double trace, double hs2);

  const std::vector<double>& eigenvalues() const { return clamped_; }  // descending, in [0,1]
  const std::vector<double>& raw() const { return raw_; }              // descending
  double trace() const { return trace_; }
  double hs2() const { return hs2_; }
  std::size_t dim() const { return raw_.size(); }
  double lambda1() const { return clamped_.empty() ? 0.0 : clamped_.front(); }
  double shannon_empirical() const { return dim() ? trace_ / dim() : 0.0; }

  /// #{i : a < lambda_i <= b} on the clamped values.
  std::size_t count(double a, double b) const;

 private:
  std::vector<double> raw_;
  std::vector<double> clamped_;
  double trace_;
  double hs2_;
};

struct Eigensystem {
  SpectrumReport report;
  std::vector<double> vectors;  // row r belongs to eigenvalues()[r]; empty unless requested
};

/// Tolerance for eigenvalues outside [0, 1] before aborting.
inline constexpr double kEigenSlack = 1e-8;

Eigensystem eigensolve_sym(const GramMatrix& g, bool want_vectors);
Eigensystem eigensolve_sym(const linalg::SymmetricMatrix& m, bool want_vectors);

struct SpectrumStats {
  double eps = 0.0;
  double tau = 0.0;
  std::size_t transition = 0;  // N(eps, 1 - eps)
  std::size_t concentrated = 0;  // N(tau, 1]
  double transition_rel = 0.0;
  double concentrated_rel = 0.0;
  double shannon_empirical = 0.0;
};

SpectrumStats spectrum_stats(const SpectrumReport& report, double eps, double tau);

struct IdentityResiduals {
  double trace_matrix = 0.0;      // sum of Gram diagonal
  double trace_eigen = 0.0;       // sum of eigenvalues
  double trace_quadrature = 0.0;  // int_D K(x,x) dx
  double hs2_eigen = 0.0;         // sum of squared eigenvalues
  double hs2_frobenius = 0.0;     // ||Gram||_F^2
  double trace_residual = 0.0;    // |trace_eigen - trace_quadrature|
  double hs_residual = 0.0;       // |hs2_eigen - hs2_frobenius|
  double trace_relative = 0.0;
  double hs_relative = 0.0;
};

IdentityResiduals verify_operator_identities(const geometry::Domain& domain,
                                             const basis::IndexSet& set,
                                             const basis::EllSequence& ell,
                                             const GramOptions& opts = {});

/// Same, reusing an already assembled Gram matrix and its spectrum.
IdentityResiduals verify_operator_identities(const GramMatrix& g, const SpectrumReport& spectrum,
                                             int threads = 1);

/// int_D K(x,x) dx for the set's reproducing kernel (tensor quadrature).
double trace_by_quadrature(const geometry::Domain& domain, const basis::IndexSet& set,
                           const basis::EllSequence& ell, int threads = 1);

}  // namespace ballslep::concentration
