#include "ballslep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ballslep/error.hpp"
#include "ballslep/linalg.hpp"
#include "ballslep/parallel.hpp"
#include "ballslep/specfun.hpp"

namespace ballslep::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNewtonTol = 1e-14;
constexpr int kNewtonMaxIter = 100;
constexpr double kAngleTol = 1e-12;

// P_n^{a,b}(x) and P_{n-1}^{a,b}(x) by the three-term recurrence.
std::pair<double, double> jacobi_pair(int n, double a, double b, double x) {
  double p0 = 1.0;
  double p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  if (n == 0) return {p0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = next;
  }
  return {p1, p0};
}

// d/dx P_n^{a,b} from P_n and P_{n-1}.
double jacobi_derivative(int n, double a, double b, double x, double pn, double pn1) {
  const double s = 2.0 * n + a + b;
  return (n * (a - b - s * x) * pn + 2.0 * (n + a) * (n + b) * pn1) / (s * (1.0 - x * x));
}

}  // namespace

double norm(const Point& x, int d) { return std::sqrt(dot(x, x, d)); }

double dot(const Point& x, const Point& y, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i] * y[i];
  return s;
}

Rule1D gauss_legendre(int npts, double a, double b) {
  if (npts < 1) throw ParameterError("gauss_legendre: npts must be >= 1");
  if (!(a < b)) throw ParameterError("gauss_legendre: need a < b");
  Rule1D rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (npts + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int k = 1; k <= npts; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      dp = npts * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < kNewtonTol) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int k = 1; k <= npts; ++k) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
    }
    dp = npts * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[npts - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[npts - 1 - i] = half * w;
  }
  if (npts % 2 == 1) rule.nodes[npts / 2] = mid;
  return rule;
}

Rule1D gauss_jacobi(int npts, double alpha, double beta) {
  if (npts < 1) throw ParameterError("gauss_jacobi: npts must be >= 1");
  specfun::JacobiParams params(alpha, beta);
  const double ab = alpha + beta;

  // Golub-Welsch eigenvalues as starting points, polished by Newton.
  std::vector<double> diag(npts);
  std::vector<double> off(npts - 1);
  for (int k = 0; k < npts; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = (k == 0) ? (beta - alpha) / (ab + 2.0)
                       : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < npts; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[k - 1] = std::sqrt(b2);
  }
  std::vector<double> x = linalg::tridiagonal_eigenvalues(diag, off);

  const double log_c = specfun::log_gamma(npts + alpha + 1.0) + specfun::log_gamma(npts + beta + 1.0) -
                       specfun::log_gamma(npts + ab + 1.0) - specfun::log_gamma(npts + 1.0) +
                       (ab + 1.0) * std::numbers::ln2;
  Rule1D rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  for (int i = 0; i < npts; ++i) {
    double z = std::clamp(x[i], -1.0 + 1e-300, 1.0 - 1e-300);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      auto [pn, pn1] = jacobi_pair(npts, alpha, beta, z);
      const double dp = jacobi_derivative(npts, alpha, beta, z, pn, pn1);
      const double dz = pn / dp;
      const double zn = z - dz;
      if (!(zn > -1.0 && zn < 1.0)) break;
      z = zn;
      if (std::abs(dz) < kNewtonTol) break;
    }
    auto [pn, pn1] = jacobi_pair(npts, alpha, beta, z);
    const double dp = jacobi_derivative(npts, alpha, beta, z, pn, pn1);
    rule.nodes[i] = z;
    rule.weights[i] = std::exp(log_c) / ((1.0 - z * z) * dp * dp);
  }
  (void)params;
  return rule;
}

Rule1D gauss_gegenbauer(int npts, double mu) {
  if (!(mu > 0.0)) {
    throw ParameterError("gauss_gegenbauer: mu must be > 0 (mu = 0 uses the two-term kernel)");
  }
  return gauss_jacobi(npts, mu - 1.0, mu - 1.0);
}

Rule1D trapezoid_periodic(int npts, double a) {
  if (npts < 1) throw ParameterError("trapezoid_periodic: npts must be >= 1");
  Rule1D rule;
  rule.nodes.resize(npts);
  rule.weights.assign(npts, 2.0 * kPi / npts);
  for (int i = 0; i < npts; ++i) rule.nodes[i] = a + 2.0 * kPi * i / npts;
  return rule;
}

// ---------------------------------------------------------------- Domain

Domain Domain::full_ball(int d) {
  Domain dom;
  dom.kind_ = DomainKind::FullBall;
  dom.d_ = d;
  dom.r1_ = 0.0;
  dom.r2_ = 1.0;
  dom.th1_ = 0.0;
  dom.th2_ = kPi;
  dom.ph1_ = -kPi;
  dom.ph2_ = kPi;
  dom.validate();
  return dom;
}

Domain Domain::shell(int d, double r1, double r2) {
  Domain dom = full_ball(d);
  dom.kind_ = DomainKind::Shell;
  dom.r1_ = r1;
  dom.r2_ = r2;
  dom.validate();
  return dom;
}

Domain Domain::tesseroid(double r1, double r2, double theta1, double theta2, double phi1,
                         double phi2) {
  Domain dom;
  dom.kind_ = DomainKind::Tesseroid;
  dom.d_ = 3;
  dom.r1_ = r1;
  dom.r2_ = r2;
  dom.th1_ = theta1;
  dom.th2_ = theta2;
  dom.ph1_ = phi1;
  dom.ph2_ = phi2;
  dom.validate();
  return dom;
}

Domain Domain::sector(double r1, double r2, double phi1, double phi2) {
  Domain dom;
  dom.kind_ = DomainKind::Tesseroid;
  dom.d_ = 2;
  dom.r1_ = r1;
  dom.r2_ = r2;
  dom.th1_ = 0.0;
  dom.th2_ = kPi;
  dom.ph1_ = phi1;
  dom.ph2_ = phi2;
  dom.validate();
  return dom;
}

void Domain::validate() const {
  if (d_ != 2 && d_ != 3) throw ParameterError("domain dimension must be 2 or 3");
  if (!(r1_ >= 0.0 && r1_ < r2_ && r2_ <= 1.0)) {
    throw ParameterError("domain radii must satisfy 0 <= r1 < r2 <= 1");
  }
  if (!(th1_ >= 0.0 && th1_ < th2_ && th2_ <= kPi + kAngleTol)) {
    throw ParameterError("domain polar range must satisfy 0 <= theta1 < theta2 <= pi");
  }
  if (!(ph1_ >= -kPi - kAngleTol && ph1_ < ph2_ && ph2_ <= 3.0 * kPi + kAngleTol)) {
    throw ParameterError("domain azimuth must satisfy -pi <= phi1 < phi2 <= 3 pi");
  }
  if (ph2_ - ph1_ > 2.0 * kPi + kAngleTol) {
    throw ParameterError("domain azimuthal span exceeds 2 pi");
  }
}

bool Domain::full_phi() const { return std::abs(ph2_ - ph1_ - 2.0 * kPi) < kAngleTol; }

bool Domain::full_theta() const {
  return d_ == 2 || (th1_ <= kAngleTol && std::abs(th2_ - kPi) < kAngleTol);
}

bool Domain::contains(const Point& x) const {
  const double r = norm(x, d_);
  if (r < r1_ || r > r2_) return false;
  if (kind_ != DomainKind::Tesseroid) return true;
  if (r == 0.0) return r1_ == 0.0 && full_angles();
  if (d_ == 3) {
    const double th = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
    if (th < th1_ || th > th2_) return false;
  }
  if (full_phi()) return true;
  const double ph = std::atan2(x[1], x[0]);
  for (double cand : {ph, ph + 2.0 * kPi, ph - 2.0 * kPi}) {
    if (cand >= ph1_ && cand <= ph2_) return true;
  }
  return false;
}

double Domain::volume() const {
  const double radial = (std::pow(r2_, d_) - std::pow(r1_, d_)) / d_;
  if (d_ == 2) return radial * (ph2_ - ph1_);
  return radial * (std::cos(th1_) - std::cos(th2_)) * (ph2_ - ph1_);
}

std::string Domain::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case DomainKind::FullBall:
      os << "ball(d=" << d_ << ")";
      break;
    case DomainKind::Shell:
      os << "shell(d=" << d_ << ", r1=" << r1_ << ", r2=" << r2_ << ")";
      break;
    case DomainKind::Tesseroid:
      os << "tesseroid(d=" << d_ << ", r1=" << r1_ << ", r2=" << r2_;
      if (d_ == 3) os << ", theta1=" << th1_ << ", theta2=" << th2_;
      os << ", phi1=" << ph1_ << ", phi2=" << ph2_ << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- weights

double omega_mu(double mu, int d) {
  if (!(mu >= 0.0)) throw ParameterError("Jacobi weight needs mu >= 0");
  return std::exp(specfun::log_gamma(mu + (d + 1) / 2.0) - specfun::log_gamma(mu + 0.5)) /
         std::pow(kPi, d / 2.0);
}

WeightSpec::WeightSpec(double mu, int d) : mu_(mu), d_(d), omega_(omega_mu(mu, d)) {}

double WeightSpec::operator()(double r) const {
  if (r >= 1.0) {
    if (mu_ == 0.5) return omega_;
    if (mu_ > 0.5) return 0.0;
    throw DomainError("W_mu is singular on the unit sphere for mu < 1/2");
  }
  return omega_ * std::pow(1.0 - r * r, mu_ - 0.5);
}

// ---------------------------------------------------------------- rules

Point from_spherical(int d, double r, double u, double phi) {
  return from_spherical(d, r, u, std::sqrt(std::max(0.0, 1.0 - u * u)), phi);
}

Point from_spherical(int d, double r, double u, double s, double phi) {
  if (d == 2) return {r * std::cos(phi), r * std::sin(phi), 0.0};
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * u};
}

namespace {

Rule1D radial_rule(const Domain& dom, const Measure& m, int npts) {
  const int d = dom.dim();
  const double r1 = dom.r1();
  const double r2 = dom.r2();
  const bool plain = m.lebesgue || m.mu == 0.5;
  const double scale = m.lebesgue ? 1.0 : omega_mu(m.mu, d);

  if (plain || r2 < 1.0) {
    Rule1D rule = gauss_legendre(npts, r1, r2);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.nodes[i];
      double w = std::pow(r, d - 1) * scale;
      if (!plain) w *= std::pow(1.0 - r * r, m.mu - 0.5);
      rule.weights[i] *= w;
    }
    return rule;
  }

  // r2 = 1 with a non-smooth weight: integrate in z = 2 r^2 - 1.
  const double a = m.mu - 0.5;
  Rule1D rule;
  if (r1 == 0.0) {
    const double b = (d - 2) / 2.0;
    Rule1D gj = gauss_jacobi(npts, a, b);
    const double c = std::pow(2.0, -a - b) / 4.0 * scale;
    rule.nodes.resize(gj.size());
    rule.weights.resize(gj.size());
    for (std::size_t i = 0; i < gj.size(); ++i) {
      rule.nodes[i] = std::sqrt((1.0 + gj.nodes[i]) / 2.0);
      rule.weights[i] = gj.weights[i] * c;
    }
  } else {
    const double z1 = 2.0 * r1 * r1 - 1.0;
    const double len = 1.0 - z1;
    Rule1D gj = gauss_jacobi(npts, a, 0.0);
    rule.nodes.resize(gj.size());
    rule.weights.resize(gj.size());
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const double z = z1 + len * (1.0 + gj.nodes[i]) / 2.0;
      const double r = std::sqrt((1.0 + z) / 2.0);
      rule.nodes[i] = r;
      rule.weights[i] = gj.weights[i] * std::pow(len / 4.0, a) * (len / 2.0) *
                        std::pow(r, d - 2) / 4.0 * scale;
    }
  }
  // Ascending order in r for deterministic nesting.
  std::vector<std::size_t> idx(rule.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto p, auto q) { return rule.nodes[p] < rule.nodes[q]; });
  Rule1D sorted;
  for (auto i : idx) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  return sorted;
}

}  // namespace

QuadratureRule make_rule(const Domain& dom, const Measure& m, RuleCounts counts) {
  if (counts.radial < 1 || counts.azimuthal < 1 || (dom.dim() == 3 && counts.polar < 1)) {
    throw ParameterError("quadrature counts must be >= 1");
  }
  QuadratureRule rule;
  rule.dim = dom.dim();
  rule.measure = m;
  rule.counts = counts;
  rule.radial = radial_rule(dom, m, counts.radial);
  if (dom.dim() == 3) {
    Rule1D th = gauss_legendre(counts.polar, dom.theta1(), dom.theta2());
    rule.polar.nodes.resize(th.size());
    rule.polar.weights.resize(th.size());
    rule.polar_sin.resize(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) {
      rule.polar.nodes[i] = std::cos(th.nodes[i]);
      rule.polar_sin[i] = std::sin(th.nodes[i]);
      rule.polar.weights[i] = th.weights[i] * rule.polar_sin[i];
    }
  }
  if (dom.full_phi()) {
    rule.azimuthal = trapezoid_periodic(counts.azimuthal, dom.phi1());
  } else {
    rule.azimuthal = gauss_legendre(counts.azimuthal, dom.phi1(), dom.phi2());
  }
  return rule;
}

RuleCounts default_counts(const Domain& dom, int maxdeg) {
  maxdeg = std::max(maxdeg, 0);
  RuleCounts c;
  c.radial = (2 * maxdeg + 3 + 1) / 2;
  c.polar = dom.dim() == 3 ? static_cast<int>(std::ceil(2.5 * maxdeg)) + 20 : 0;
  c.azimuthal = dom.full_phi() ? 2 * maxdeg + 2 : 5 * maxdeg + 20;
  return c;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double integrate(const Domain& dom, const Measure& m, const Integrand& f, const QuadratureRule& rule,
                 int threads) {
  if (rule.dim != dom.dim()) throw ParameterError("integrate: rule and domain dimension differ");
  if (!(rule.measure == m)) throw ParameterError("integrate: rule was built for a different measure");
  const int d = dom.dim();
  const std::size_t nr = rule.radial.size();
  const std::size_t nu = d == 3 ? rule.polar.size() : 1;
  const std::size_t np = rule.azimuthal.size();

  std::vector<double> rsum(nr);
  parallel_for(nr, threads, [&](std::size_t a) {
    std::vector<double> usum(nu);
    std::vector<double> psum(np);
    const double r = rule.radial.nodes[a];
    for (std::size_t b = 0; b < nu; ++b) {
      const double u = d == 3 ? rule.polar.nodes[b] : 0.0;
      const double s = d == 3 ? rule.polar_sin[b] : 1.0;
      for (std::size_t c = 0; c < np; ++c) {
        psum[c] = rule.azimuthal.weights[c] * f(from_spherical(d, r, u, s, rule.azimuthal.nodes[c]));
      }
      usum[b] = (d == 3 ? rule.polar.weights[b] : 1.0) * pairwise_sum(psum.data(), np);
    }
    rsum[a] = rule.radial.weights[a] * pairwise_sum(usum.data(), nu);
  });
  return pairwise_sum(rsum.data(), nr);
}

}  // namespace ballslep::geometry
