#include "ballslep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "ballslep/error.hpp"
#include "ballslep/specfun.hpp"

namespace ballslep::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double rpow(double r, double ell) {
  if (r == 0.0) {
    if (ell < 0.0) throw DomainError("kernel with negative l_j evaluated at the origin");
    return ell == 0.0 ? 1.0 : 0.0;
  }
  return std::pow(r, ell);
}

// Normalized psi-rule (weights sum to 1), cached per (npts, mu).
const geometry::Rule1D& psi_rule(int npts, double mu) {
  static std::mutex mtx;
  static std::map<std::pair<int, double>, geometry::Rule1D> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(npts, mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  geometry::Rule1D rule = geometry::gauss_gegenbauer(npts, mu);
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return cache.emplace(key, std::move(rule)).first->second;
}

double poly_prefactor(double mu, int n, int d) {
  using specfun::log_gamma;
  if (mu == 0.0) {
    return std::exp(log_gamma(d / 2.0 + 1.0) + log_gamma(n + d) - log_gamma(d + 1.0) -
                    log_gamma(n + d / 2.0));
  }
  return 2.0 * std::exp(log_gamma(mu + (d + 2) / 2.0) + log_gamma(n + 2.0 * mu + d) -
                        log_gamma(2.0 * mu + d + 1.0) - log_gamma(n + mu + d / 2.0));
}

void check_interior(const Point& x, int d) {
  if (!(geometry::norm(x, d) < 1.0)) {
    throw DomainError("limit diagnostics require |x| < 1");
  }
}

}  // namespace

// ---------------------------------------------------------------- closed forms

double kernel_poly_closed(double mu, int n, int d, const Point& x, const Point& y, int psi_points) {
  if (!(mu >= 0.0)) throw ParameterError("kernel_poly_closed: mu must be >= 0");
  if (n < 0) throw ParameterError("kernel_poly_closed: n must be >= 0");
  const double rx2 = std::min(1.0, geometry::dot(x, x, d));
  const double ry2 = std::min(1.0, geometry::dot(y, y, d));
  const double a = geometry::dot(x, y, d);
  const double b = std::sqrt(1.0 - rx2) * std::sqrt(1.0 - ry2);
  const specfun::JacobiParams p(mu + d / 2.0, mu + d / 2.0 - 1.0);
  const double pref = poly_prefactor(mu, n, d);
  auto P = [&](double t) { return specfun::jacobi_poly(n, p, std::clamp(t, -1.0, 1.0)); };
  if (mu == 0.0) return pref * (P(a + b) + P(a - b));
  const int npts = psi_points > 0 ? psi_points : n + 10;
  const auto& rule = psi_rule(npts, mu);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * P(a + b * rule.nodes[q]);
  return pref * s;
}

double harm_kernel(int n, int d, double t) {
  if (n < 0) throw ParameterError("harm_kernel: n must be >= 0");
  const double lambda = (d - 3) / 2.0;
  const double c = specfun::binomial(n + d - 2.0, n) / specfun::binomial(n + lambda, n);
  return c / specfun::sphere_area(d) *
         specfun::jacobi_poly(n, specfun::JacobiParams(1.0 + lambda, lambda), t);
}

double harm_kernel_sum(int n, int d, double t) {
  std::vector<double> p(n + 1);
  specfun::legendre_gegenbauer_sequence(d, t, p);
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += static_cast<double>(basis::dim_harm(j, d)) * p[j];
  return s / specfun::sphere_area(d);
}

// ---------------------------------------------------------------- sum form

SumKernel::SumKernel(basis::IndexSet set, basis::EllSequence ell)
    : set_(std::move(set)), ell_(std::move(ell)) {
  const int d = set_.dim();
  ell_.validate(d, set_.max_j());
  std::map<std::pair<int, int>, int> counts;  // (j, i) -> #k
  for (const auto& b : set_) ++counts[{b.j, b.i}];
  std::map<int, std::vector<int>> complete;
  for (const auto& [key, cnt] : counts) {
    if (cnt == basis::dim_harm(key.first, d)) complete[key.first].push_back(key.second);
  }
  for (auto& [j, is] : complete) {
    std::sort(is.begin(), is.end());
    groups_.push_back({j, is});
  }
  for (const auto& b : set_) {
    if (counts[{b.j, b.i}] != basis::dim_harm(b.j, d)) partial_.push_back(b);
  }
}

std::vector<double> SumKernel::radial_sums(double rx, double ry) const {
  const int d = set_.dim();
  std::vector<double> out(groups_.size(), 0.0);
  std::vector<double> px;
  std::vector<double> py;
  const double zx = 2.0 * rx * rx - 1.0;
  const double zy = 2.0 * ry * ry - 1.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const int j = groups_[g].j;
    const double l = ell_(j);
    const double fx = rpow(rx, l);
    const double fy = rpow(ry, l);
    if (fx == 0.0 || fy == 0.0) continue;
    const int imax = groups_[g].is.back();
    px.resize(imax + 1);
    py.resize(imax + 1);
    const specfun::JacobiParams p(0.0, l + (d - 2) / 2.0);
    specfun::jacobi_sequence(p, zx, px);
    specfun::jacobi_sequence(p, zy, py);
    double s = 0.0;
    for (int i : groups_[g].is) s += (4.0 * i + 2.0 * l + d) * px[i] * py[i];
    out[g] = s * fx * fy;
  }
  return out;
}

double SumKernel::operator()(const Point& x, const Point& y) const {
  const int d = set_.dim();
  const double rx = std::min(1.0, geometry::norm(x, d));
  const double ry = std::min(1.0, geometry::norm(y, d));
  const Point xi = basis::direction(x, d);
  const Point eta = basis::direction(y, d);
  const double t = std::clamp(geometry::dot(xi, eta, d), -1.0, 1.0);

  double k = 0.0;
  if (!groups_.empty()) {
    const auto rs = radial_sums(rx, ry);
    std::vector<double> leg(set_.max_j() + 1);
    specfun::legendre_gegenbauer_sequence(d, t, leg);
    const double vol = specfun::sphere_area(d);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const int j = groups_[g].j;
      k += rs[g] * static_cast<double>(basis::dim_harm(j, d)) / vol * leg[j];
    }
  }
  for (const auto& b : partial_) {
    k += basis::zernike_eval(b, ell_, d, x) * basis::zernike_eval(b, ell_, d, y);
  }
  return k;
}

double SumKernel::diag(const Point& x) const { return (*this)(x, x); }

// ---------------------------------------------------------------- dispatch

double kernel_eval(const KernelSpec& ks, const Point& x, const Point& y) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PolyClosedForm>) {
          return kernel_poly_closed(k.mu, k.n, k.d, x, y, k.psi_points);
        } else if constexpr (std::is_same_v<T, SumKernel>) {
          return k(x, y);
        } else {
          const Point xi = basis::direction(x, k.d);
          const Point eta = basis::direction(y, k.d);
          return harm_kernel(k.n, k.d, std::clamp(geometry::dot(xi, eta, k.d), -1.0, 1.0));
        }
      },
      ks);
}

std::int64_t kernel_dimension(const KernelSpec& ks) {
  return std::visit(
      [](const auto& k) -> std::int64_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PolyClosedForm>) {
          return static_cast<std::int64_t>(specfun::binomial_int(k.n + k.d, k.d));
        } else if constexpr (std::is_same_v<T, SumKernel>) {
          return static_cast<std::int64_t>(k.set().size());
        } else {
          return basis::harm_count(k.n, k.d);
        }
      },
      ks);
}

// ---------------------------------------------------------------- weights

double w_mu(double mu, const Point& x, int d) {
  return geometry::WeightSpec(mu, d)(geometry::norm(x, d));
}

double w0_radial(double r, int d) {
  if (!(r < 1.0)) throw DomainError("W_0 is infinite on the unit sphere");
  return geometry::omega_mu(0.0, d) / std::sqrt(1.0 - r * r);
}

double w0_tilde_radial(double r, int d) {
  if (!(r < 1.0) || !(r > 0.0)) throw DomainError("tilde W_0 requires 0 < |x| < 1");
  return 2.0 / (kPi * specfun::sphere_area(d) * std::pow(r, d - 1) * std::sqrt(1.0 - r * r));
}

double w0(const Point& x, int d) { return w0_radial(geometry::norm(x, d), d); }

double w0_tilde(const Point& x, int d) { return w0_tilde_radial(geometry::norm(x, d), d); }

ChristoffelValue christoffel_ratio(const KernelSpec& ks, const Point& x) {
  ChristoffelValue out;
  const double dim = static_cast<double>(kernel_dimension(ks));
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PolyClosedForm>) {
          check_interior(x, k.d);
          out.value = kernel_poly_closed(k.mu, k.n, k.d, x, x, k.psi_points) / dim;
          out.target = w0(x, k.d) / w_mu(k.mu, x, k.d);
        } else if constexpr (std::is_same_v<T, SumKernel>) {
          const int d = k.dim();
          check_interior(x, d);
          out.value = k.diag(x) / dim;
          const auto& spec = k.set().spec();
          const bool poly_like =
              spec.kind == basis::IndexSpec::Kind::PolyDegree ||
              (spec.kind == basis::IndexSpec::Kind::Shape &&
               spec.shape.kind() == basis::SpectralShape::Kind::Triangle);
          const double r = geometry::norm(x, d);
          if (poly_like && k.ell().is_polynomial_family()) {
            out.target = w0(x, d);
          } else if (spec.kind == basis::IndexSpec::Kind::FourierJacobi && r > 0.0) {
            out.target = w0_tilde(x, d);
          } else {
            out.target = kNaN;
          }
        } else {
          out.value = harm_kernel(k.n, k.d, 1.0) / dim;
          out.target = 1.0 / specfun::sphere_area(k.d);
        }
      },
      ks);
  return out;
}

// ---------------------------------------------------------------- universality

double universality_G(const Point& x, const Point& w, const Point& v, int d) {
  Point diff{};
  for (int t = 0; t < d; ++t) diff[t] = w[t] - v[t];
  const double xd = geometry::dot(x, diff, d);
  return geometry::dot(diff, diff, d) + xd * xd / (1.0 - geometry::dot(x, x, d));
}

double bessel_reference(const Point& x, const Point& v, int d) {
  const double g = universality_G(x, Point{0.0, 0.0, 0.0}, v, d);
  return specfun::bessel_jstar(d / 2.0, std::sqrt(g)) / specfun::bessel_jstar(d / 2.0, 0.0);
}

double fj_reference(double r, double t, int n, int d, double xi_dot) {
  const double vol = specfun::sphere_area(d);
  return vol / static_cast<double>(basis::harm_count(n, d)) *
         specfun::sinc(2.0 * t / std::sqrt(1.0 - r * r)) * harm_kernel(n, d, xi_dot);
}

std::vector<UniversalitySample> universality_scan_poly(double mu, int n, int d, const Point& x,
                                                       const std::vector<Point>& offsets) {
  check_interior(x, d);
  if (n < 1) throw ParameterError("universality scan needs n >= 1");
  const double kxx = kernel_poly_closed(mu, n, d, x, x);
  std::vector<UniversalitySample> out;
  out.reserve(offsets.size());
  for (const auto& v : offsets) {
    UniversalitySample s;
    s.offset = geometry::norm(v, d);
    Point y{};
    for (int t = 0; t < d; ++t) y[t] = x[t] + v[t] / n;
    s.reference = bessel_reference(x, v, d);
    if (geometry::norm(y, d) > 1.0) {
      s.valid = false;
      s.ratio = kNaN;
    } else {
      s.ratio = kernel_poly_closed(mu, n, d, x, y) / kxx;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<UniversalitySample> universality_scan_fj(const SumKernel& fj, const Point& x,
                                                     const Point& xi, const std::vector<double>& ts) {
  const int d = fj.dim();
  const auto& spec = fj.set().spec();
  if (spec.kind != basis::IndexSpec::Kind::FourierJacobi) {
    throw ParameterError("universality_scan_fj needs a Fourier-Jacobi index set");
  }
  check_interior(x, d);
  const double r = geometry::norm(x, d);
  if (r == 0.0) throw DomainError("Fourier-Jacobi universality needs x != 0");
  const Point xix = basis::direction(x, d);
  const Point eta = basis::direction(xi, d);
  const double kxx = fj.diag(x);
  const double xi_dot = std::clamp(geometry::dot(xix, eta, d), -1.0, 1.0);
  std::vector<UniversalitySample> out;
  for (double t : ts) {
    UniversalitySample s;
    s.offset = t;
    const double ry = r + t / (spec.m + 1.0);
    s.reference = fj_reference(r, t, spec.n, d, xi_dot);
    if (ry < 0.0 || ry > 1.0) {
      s.valid = false;
      s.ratio = kNaN;
    } else {
      Point y{};
      for (int c = 0; c < d; ++c) y[c] = ry * eta[c];
      s.ratio = fj(x, y) / kxx;
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------- constants

double e_d_constant(int d) {
  if (d < 2) throw ParameterError("e_d needs d >= 2");
  return specfun::sphere_area(d) * std::pow(2.0, d - 1) * specfun::gamma(d / 2.0) *
         specfun::gamma(d / 2.0 + 1.0);
}

double bessel_square_integral(int d, double T) {
  const specfun::BesselOrder order(d / 2.0);
  const int panels = std::max(1, static_cast<int>(std::ceil(T)));
  const double h = T / panels;
  const auto base = geometry::gauss_legendre(16, 0.0, 1.0);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double s = 0.0;
    for (std::size_t q = 0; q < base.size(); ++q) {
      const double t = (p + base.nodes[q]) * h;
      const double j = specfun::bessel_j(order, t);
      s += base.weights[q] * j * j / t;
    }
    total += s * h;
  }
  return total;
}

double e_d_truncated(int d, double L) {
  const double j0 = specfun::bessel_jstar(d / 2.0, 0.0);
  return specfun::sphere_area(d) * bessel_square_integral(d, L) / (j0 * j0);
}

double cap_concentration(int n, int d, double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) throw ParameterError("cap radius must be in (0, 2]");
  const double theta_max = std::acos(1.0 - eps);
  const auto rule = geometry::gauss_legendre(4 * n + 40, 0.0, theta_max);
  const double rim = specfun::sphere_area(d - 1);
  const double scale = specfun::sphere_area(d) / static_cast<double>(basis::harm_count(n, d));
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double th = rule.nodes[q];
    const double k = harm_kernel(n, d, std::cos(th));
    s += rule.weights[q] * k * k * std::pow(std::sin(th), d - 2);
  }
  return s * rim * scale;
}

}  // namespace ballslep::kernels
