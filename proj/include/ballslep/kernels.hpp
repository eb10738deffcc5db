#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ballslep/basis.hpp"
#include "ballslep/geometry.hpp"

namespace ballslep::kernels {

using geometry::Point;

/// K_n^mu for sigma_mu-orthonormal polynomials of degree <= n.
struct PolyClosedForm {
  double mu = 0.5;
  int n = 0;
  int d = 3;
  int psi_points = 0;  // 0: n + 10
};

/// Sum of Z_a(x) Z_a(y) over an index set (Lebesgue-orthonormal storage).
/// Uses the addition theorem for every (i, j) whose k-group is complete.
class SumKernel {
 public:
  SumKernel(basis::IndexSet set, basis::EllSequence ell);

  const basis::IndexSet& set() const { return set_; }
  const basis::EllSequence& ell() const { return ell_; }
  int dim() const { return set_.dim(); }

  double operator()(const Point& x, const Point& y) const;
  double diag(const Point& x) const;

  /// Radial factor sum_{i in I_j} R_ij(rx) R_ij(ry) per degree j (complete groups only).
  std::vector<double> radial_sums(double rx, double ry) const;

 private:
  struct Group {
    int j = 0;
    std::vector<int> is;  // radial degrees with a complete k-group
  };

  basis::IndexSet set_;
  basis::EllSequence ell_;
  std::vector<Group> groups_;
  std::vector<basis::BasisIndex> partial_;  // members of incomplete k-groups
};

struct HarmClosedForm {
  int n = 0;
  int d = 3;
};

using KernelSpec = std::variant<PolyClosedForm, SumKernel, HarmClosedForm>;

double kernel_poly_closed(double mu, int n, int d, const Point& x, const Point& y, int psi_points = 0);

/// Reproducing kernel of Harm_n(S^{d-1}), closed form in t = xi . eta.
double harm_kernel(int n, int d, double t);

/// Same kernel as the Legendre sum sum_j dim(H_j)/vol P_j^{(d)}(t).
double harm_kernel_sum(int n, int d, double t);

/// Evaluates any kernel family; for HarmClosedForm x, y are taken as directions.
double kernel_eval(const KernelSpec& ks, const Point& x, const Point& y);

/// Dimension of the space reproduced by ks.
std::int64_t kernel_dimension(const KernelSpec& ks);

// Limit weights.
double w_mu(double mu, const Point& x, int d);
double w0(const Point& x, int d);
double w0_tilde(const Point& x, int d);
double w0_radial(double r, int d);
double w0_tilde_radial(double r, int d);

struct ChristoffelValue {
  double value = 0.0;   // K(x,x)/dim
  double target = 0.0;  // analytic limit; NaN when none is known
};

ChristoffelValue christoffel_ratio(const KernelSpec& ks, const Point& x);

/// G(x, w, v) = |w - v|^2 + (x.(w - v))^2 / (1 - |x|^2).
double universality_G(const Point& x, const Point& w, const Point& v, int d);

/// J*_{d/2}(sqrt G(x,0,v)) / J*_{d/2}(0).
double bessel_reference(const Point& x, const Point& v, int d);

/// vol/N_s sinc(2t / sqrt(1 - r^2)) K_Harm(xi_x . xi).
double fj_reference(double r, double t, int n, int d, double xi_dot);

struct UniversalitySample {
  double offset = 0.0;
  double ratio = 0.0;
  double reference = 0.0;
  bool valid = true;  // false when the shifted point left the ball
};

/// (K(x, x + v/n)/K(x,x), Bessel reference) for each offset v.
std::vector<UniversalitySample> universality_scan_poly(double mu, int n, int d, const Point& x,
                                                       const std::vector<Point>& offsets);

/// (K(x, x_t)/K(x,x), sinc x K_Harm reference) along x_t = (|x| + t/(m+1)) xi.
std::vector<UniversalitySample> universality_scan_fj(const SumKernel& fj, const Point& x,
                                                     const Point& xi, const std::vector<double>& ts);

/// vol(S^{d-1}) 2^{d-1} Gamma(d/2) Gamma(d/2 + 1).
double e_d_constant(int d);

/// int_{|t|<L} |J*_{d/2}(|t|)/J*_{d/2}(0)|^2 dt by radial quadrature.
double e_d_truncated(int d, double L);

/// int_0^T t^{-1} J_{d/2}(t)^2 dt.
double bessel_square_integral(int d, double T);

/// Mass of |K_Harm|^2 vol/N_s on the cap {1 - xi.eta < eps}.
double cap_concentration(int n, int d, double eps);

}  // namespace ballslep::kernels
