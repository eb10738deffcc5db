#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ballslep::geometry {

/// Cartesian point; for d = 2 the third coordinate is ignored (kept at 0).
using Point = std::array<double, 3>;

double norm(const Point& x, int d);
double dot(const Point& x, const Point& y, int d);

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

Rule1D gauss_legendre(int npts, double a, double b);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
Rule1D gauss_jacobi(int npts, double alpha, double beta);

/// Nodes u = cos(psi) and weights for int_0^pi f(cos psi) sin^{2mu-1}(psi) dpsi.
Rule1D gauss_gegenbauer(int npts, double mu);

/// Periodic trapezoid rule on [a, a + 2 pi).
Rule1D trapezoid_periodic(int npts, double a);

enum class DomainKind { FullBall, Shell, Tesseroid };

/// Region of B^d. For d = 2 a tesseroid is the annular sector (r1, r2, phi1, phi2).
class Domain {
 public:
  static Domain full_ball(int d);
  static Domain shell(int d, double r1, double r2);
  static Domain tesseroid(double r1, double r2, double theta1, double theta2, double phi1,
                          double phi2);
  static Domain sector(double r1, double r2, double phi1, double phi2);

  DomainKind kind() const { return kind_; }
  int dim() const { return d_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double theta1() const { return th1_; }
  double theta2() const { return th2_; }
  double phi1() const { return ph1_; }
  double phi2() const { return ph2_; }

  bool full_phi() const;
  bool full_theta() const;
  /// Angular part covers the whole sphere S^{d-1}.
  bool full_angles() const { return full_phi() && full_theta(); }

  bool contains(const Point& x) const;

  /// Lebesgue measure, closed form.
  double volume() const;

  std::string describe() const;

 private:
  Domain() = default;
  void validate() const;

  DomainKind kind_ = DomainKind::FullBall;
  int d_ = 3;
  double r1_ = 0.0;
  double r2_ = 1.0;
  double th1_ = 0.0;
  double th2_ = 0.0;
  double ph1_ = 0.0;
  double ph2_ = 0.0;
};

/// Jacobi weight W_mu(x) = omega_mu (1 - |x|^2)^{mu - 1/2}.
class WeightSpec {
 public:
  WeightSpec(double mu, int d);

  double mu() const { return mu_; }
  int dim() const { return d_; }
  double omega() const { return omega_; }
  double operator()(double r) const;

 private:
  double mu_;
  int d_;
  double omega_;
};

/// omega_mu = Gamma(mu + (d+1)/2) / (pi^{d/2} Gamma(mu + 1/2)).
double omega_mu(double mu, int d);

struct Measure {
  bool lebesgue = true;
  double mu = 0.5;

  static Measure lebesgue_measure() { return {}; }
  static Measure jacobi(double mu) { return {false, mu}; }
  bool operator==(const Measure&) const = default;
};

struct RuleCounts {
  int radial = 0;
  int polar = 0;
  int azimuthal = 0;
};

/// Tensor-product rule. Radial weights include r^{d-1} and, for a Jacobi
/// measure, the weight W_mu; polar nodes are u = cos(theta) with weights for du.
struct QuadratureRule {
  int dim = 3;
  Measure measure;
  RuleCounts counts;
  Rule1D radial;
  Rule1D polar;
  std::vector<double> polar_sin;  // sin(theta) at the polar nodes
  Rule1D azimuthal;
};

QuadratureRule make_rule(const Domain& dom, const Measure& m, RuleCounts counts);

/// Counts exact (up to the polar/azimuthal margins) for products of
/// polynomials of degree <= maxdeg.
RuleCounts default_counts(const Domain& dom, int maxdeg);

using Integrand = std::function<double(const Point&)>;

/// Radial nodes may be processed by up to `threads` workers; partial sums are
/// combined in a fixed tree order, so the result does not depend on threads.
double integrate(const Domain& dom, const Measure& m, const Integrand& f, const QuadratureRule& rule,
                 int threads = 1);

/// Pairwise (tree) summation; fixed order for reproducibility.
double pairwise_sum(const double* v, std::size_t n);

/// Point with spherical coordinates (r, u = cos theta, phi); u ignored for d = 2.
Point from_spherical(int d, double r, double u, double phi);
/// As above with s = sin theta supplied (accurate near the poles).
Point from_spherical(int d, double r, double u, double s, double phi);

}  // namespace ballslep::geometry
