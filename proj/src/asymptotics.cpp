#include "ballslep/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ballslep/concentration.hpp"
#include "ballslep/error.hpp"
#include "ballslep/kernels.hpp"
#include "ballslep/parallel.hpp"
#include "ballslep/specfun.hpp"

namespace ballslep::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double angular_measure(const geometry::Domain& dom) {
  const double dphi = dom.phi2() - dom.phi1();
  if (dom.dim() == 2) return dphi;
  return (std::cos(dom.theta1()) - std::cos(dom.theta2())) * dphi;
}

geometry::Point axis_point(int d, double r) {
  geometry::Point x{0.0, 0.0, 0.0};
  x[d - 1] = r;
  return x;
}

Curve diag_curve(const basis::IndexSet& set, const basis::EllSequence& ell,
                 const std::vector<double>& radii, std::string label, int threads) {
  const kernels::SumKernel k(set, ell);
  Curve c;
  c.label = std::move(label);
  c.dim = static_cast<int>(set.size());
  c.points.resize(radii.size());
  parallel_for(radii.size(), threads, [&](std::size_t t) {
    const auto cv = kernels::christoffel_ratio(k, axis_point(set.dim(), radii[t]));
    c.points[t] = {radii[t], cv.value, cv.target};
  });
  return c;
}

}  // namespace

const char* to_string(Notion n) {
  return n == Notion::PolyDegree ? "W0" : "W0_tilde";
}

const char* to_string(ShannonMethod m) {
  return m == ShannonMethod::AnalyticShell ? "analytic-shell" : "quadrature";
}

double shell_tilde_closed_form(double r1, double r2) {
  return 2.0 / kPi * (std::asin(r2) - std::asin(r1));
}

ShannonPrediction predicted_shannon(const geometry::Domain& domain, Notion notion) {
  ShannonPrediction p{domain, notion, 0.0, ShannonMethod::Quadrature};
  const int d = domain.dim();
  if (domain.kind() == geometry::DomainKind::FullBall) {
    p.value = 1.0;
    p.method = ShannonMethod::AnalyticShell;
    return p;
  }
  const double s1 = std::asin(domain.r1());
  const double s2 = std::asin(domain.r2());
  if (notion == Notion::FourierJacobi && domain.full_angles()) {
    p.value = shell_tilde_closed_form(domain.r1(), domain.r2());
    p.method = ShannonMethod::AnalyticShell;
    return p;
  }
  // r = sin s: r^{d-1} W_0 dr = omega_0 sin^{d-1}(s) ds and
  // r^{d-1} tilde W_0 dr = 2 / (pi vol) ds.
  double radial = 0.0;
  if (notion == Notion::FourierJacobi) {
    radial = 2.0 / (kPi * specfun::sphere_area(d)) * (s2 - s1);
  } else {
    const auto gl = geometry::gauss_legendre(32, s1, s2);
    for (std::size_t q = 0; q < gl.size(); ++q) radial += gl.weights[q] * std::pow(std::sin(gl.nodes[q]), d - 1);
    radial *= geometry::omega_mu(0.0, d);
  }
  p.value = radial * angular_measure(domain);
  return p;
}

double shannon_by_quadrature(const geometry::Domain& domain, Notion notion, int radial_points,
                             int angular_points) {
  const int d = domain.dim();
  const auto rs = geometry::gauss_legendre(radial_points, std::asin(domain.r1()), std::asin(domain.r2()));
  const auto th = geometry::gauss_legendre(d == 3 ? angular_points : 1, domain.theta1(),
                                           d == 3 ? domain.theta2() : domain.theta1() + 1.0);
  const auto ph = geometry::gauss_legendre(angular_points, domain.phi1(), domain.phi2());
  double total = 0.0;
  for (std::size_t a = 0; a < rs.size(); ++a) {
    const double r = std::sin(rs.nodes[a]);
    const double jac = std::pow(r, d - 1) * std::cos(rs.nodes[a]) * rs.weights[a];
    for (std::size_t b = 0; b < th.size(); ++b) {
      const double u = std::cos(th.nodes[b]);
      const double s = std::sin(th.nodes[b]);
      const double wth = d == 3 ? th.weights[b] * s : 1.0;
      for (std::size_t c = 0; c < ph.size(); ++c) {
        const auto x = geometry::from_spherical(d, r, u, s, ph.nodes[c]);
        const double w = notion == Notion::PolyDegree ? kernels::w0(x, d) : kernels::w0_tilde(x, d);
        total += w * jac * wth * ph.weights[c];
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------- Remez

RemezBound remez_bound(int n, int d, double ratio) {
  if (n < 0) throw ParameterError("remez: n must be >= 0");
  if (d < 1) throw ParameterError("remez: d must be >= 1");
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ParameterError("remez: ratio must lie in (0, 1]");
  RemezBound b;
  b.n = n;
  b.d = d;
  b.ratio = ratio;
  b.n_factor = std::pow(static_cast<double>(n), 2.0 * d);
  if (ratio == 0.0) {
    b.q = 1.0;
    b.argument = std::numeric_limits<double>::infinity();
    b.log_t_n = b.t_n = std::numeric_limits<double>::infinity();
    b.infinite = true;
    return b;
  }
  b.q = std::pow(1.0 - ratio, 1.0 / d);
  b.argument = (1.0 + b.q) / (1.0 - b.q);
  b.log_t_n = specfun::log_chebyshev_T(n, b.argument);
  b.t_n = specfun::chebyshev_T(n, b.argument);
  return b;
}

double remez_sup_bound(int n, int d, double ratio) { return remez_bound(n, d, ratio).t_n; }

double log_lambda1_lower_gap(int n, int d, double e_measure) {
  if (n < 1) throw ParameterError("lambda1_lower_gap: n must be >= 1");
  const double ratio = e_measure * geometry::omega_mu(0.5, d);
  // q = (1 - omega |E|)^{1/d}: the Remez factor at ratio omega |E|.
  const auto b = remez_bound(n, d, std::clamp(ratio, 0.0, 1.0));
  return -2.0 * d * std::log(static_cast<double>(n)) - 2.0 * b.log_t_n;
}

double lambda1_lower_gap(int n, int d, double e_measure) {
  return std::exp(log_lambda1_lower_gap(n, d, e_measure));
}

RemezCheck remez_empirical(int n, int d, double radius, int samples, std::uint64_t seed,
                           int points_per_set, int threads) {
  if (!(radius > 0.0 && radius <= 1.0)) throw ParameterError("remez_empirical: radius must lie in (0, 1]");
  const auto set = basis::index_set(basis::IndexSpec::poly(n), d);
  const auto ell = basis::EllSequence::linear(0.0);
  const std::size_t nb = set.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto sample_ball = [&](double rad) {
    std::vector<geometry::Point> pts;
    pts.reserve(points_per_set);
    while (static_cast<int>(pts.size()) < points_per_set) {
      geometry::Point x{unif(rng), unif(rng), 0.0};
      if (d == 3) x[2] = unif(rng);
      if (geometry::norm(x, d) > 1.0) continue;
      for (int c = 0; c < d; ++c) x[c] *= rad;
      pts.push_back(x);
    }
    return pts;
  };
  const auto full = sample_ball(1.0);
  const auto sub = sample_ball(radius);

  auto tabulate = [&](const std::vector<geometry::Point>& pts) {
    std::vector<double> v(pts.size() * nb);
    parallel_for(pts.size(), threads, [&](std::size_t p) {
      for (std::size_t a = 0; a < nb; ++a) v[p * nb + a] = basis::zernike_eval(set[a], ell, d, pts[p]);
    });
    return v;
  };
  const auto vf = tabulate(full);
  const auto vs = tabulate(sub);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> coef(nb * samples);
  for (double& c : coef) c = normal(rng);

  auto sup = [&](const std::vector<double>& tab, std::size_t npts, const double* c) {
    double m = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
      double f = 0.0;
      for (std::size_t a = 0; a < nb; ++a) f += c[a] * tab[p * nb + a];
      m = std::max(m, std::abs(f));
    }
    return m;
  };

  RemezCheck out;
  out.n = n;
  out.samples = samples;
  const double ratio = std::pow(radius, d);  // |E| / |B^d|
  out.bound = remez_sup_bound(n, d, ratio);
  std::vector<double> ratios(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    const double* c = &coef[s * nb];
    ratios[s] = sup(vf, full.size(), c) / sup(vs, sub.size(), c);
  });
  for (double r : ratios) {
    out.max_ratio = std::max(out.max_ratio, r);
    if (!(r <= out.bound)) ++out.violations;
  }
  return out;
}

std::vector<GapRow> lambda1_gap_scan(int d, double radius, const std::vector<int>& n_list, int threads) {
  if (n_list.empty()) return {};
  const auto dom = geometry::Domain::shell(d, 0.0, radius);
  const double e_measure = geometry::Domain::full_ball(d).volume() - dom.volume();
  std::vector<GapRow> rows;
  for (int n : n_list) {
    const auto set = basis::index_set(basis::IndexSpec::poly(n), d);
    concentration::GramOptions opts;
    opts.threads = threads;
    const auto g = concentration::assemble_gram(dom, set, basis::EllSequence::linear(0.0), opts);
    const auto eig = concentration::eigensolve_sym(g, false);
    GapRow row;
    row.n = n;
    row.lambda1 = eig.report.raw().front();
    row.gap = 1.0 - row.lambda1;
    row.bound = lambda1_lower_gap(n, d, e_measure);
    rows.push_back(row);
  }
  const double c = rows.front().gap / rows.front().bound;
  for (auto& row : rows) {
    row.fitted_bound = c * row.bound;
    row.holds = row.gap >= row.fitted_bound * (1.0 - 1e-12);
  }
  return rows;
}

// ---------------------------------------------------------------- scans

std::vector<Curve> kappa_scan(const basis::EllSequence& ell, int d, double kappa,
                              const std::vector<int>& m_list, const std::vector<double>& radii,
                              int threads) {
  if (!(kappa > 0.0)) throw ParameterError("kappa_scan: kappa must be > 0");
  std::vector<Curve> out;
  for (int m : m_list) {
    const int n = static_cast<int>(std::lround(kappa * m));
    const auto set = basis::index_set(basis::IndexSpec::fourier_jacobi(m, n), d);
    auto c = diag_curve(set, ell, radii, "m=" + std::to_string(m) + ",n=" + std::to_string(n), threads);
    for (auto& p : c.points) p.reference = p.r > 0.0 && p.r < 1.0 ? kernels::w0_tilde_radial(p.r, d) : kNaN;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Curve> omega_scan(const basis::SpectralShape& shape, const basis::EllSequence& ell, int d,
                              const std::vector<int>& n_list, const std::vector<double>& radii,
                              int threads) {
  shape.validate_low_pass();
  std::vector<Curve> out;
  for (int N : n_list) {
    const auto set = basis::index_set(basis::IndexSpec::spectral(shape, N), d);
    out.push_back(diag_curve(set, ell, radii, shape.name() + ",N=" + std::to_string(N), threads));
  }
  return out;
}

std::optional<double> crossing_radius(const std::vector<double>& r, const std::vector<double>& a,
                                      const std::vector<double>& b) {
  for (std::size_t t = 1; t < r.size(); ++t) {
    const double f0 = a[t - 1] - b[t - 1];
    const double f1 = a[t] - b[t];
    if (f0 == 0.0) return r[t - 1];
    if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) return r[t - 1] + (r[t] - r[t - 1]) * f0 / (f0 - f1);
    if (f1 == 0.0) return r[t];
  }
  return std::nullopt;
}

OpticsComparison optics_compare(int n, const std::vector<double>& radii, int threads) {
  const auto ell = basis::EllSequence::linear(0.0);
  OpticsComparison out;
  out.total = diag_curve(basis::index_set(basis::IndexSpec::poly(n), 2), ell, radii,
                         "total:n=" + std::to_string(n), threads);
  out.sum = diag_curve(basis::index_set(basis::IndexSpec::sum(n), 2), ell, radii,
                       "sum:n=" + std::to_string(n), threads);
  for (auto& p : out.total.points) p.reference = p.r < 1.0 ? kernels::w0_radial(p.r, 2) : kNaN;
  for (auto& p : out.sum.points) p.reference = kNaN;
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t t = 0; t < radii.size(); ++t) {
    a.push_back(out.total.points[t].value);
    b.push_back(out.sum.points[t].value);
  }
  out.crossing = crossing_radius(radii, a, b);
  return out;
}

std::vector<NikolskiiRow> nikolskii_heuristic(int d, const std::vector<int>& n_list, int radial_samples) {
  std::vector<NikolskiiRow> rows;
  for (int n : n_list) {
    if (n < 1) throw ParameterError("nikolskii_heuristic: n must be >= 1");
    const kernels::SumKernel k(basis::index_set(basis::IndexSpec::poly(n), d), basis::EllSequence::linear(0.0));
    double kmax = 0.0;
    for (int t = 0; t < radial_samples; ++t) {
      const double r = radial_samples == 1 ? 1.0 : static_cast<double>(t) / (radial_samples - 1);
      kmax = std::max(kmax, k.diag(axis_point(d, r)));
    }
    NikolskiiRow row;
    row.n = n;
    row.sup_over_l2 = std::sqrt(kmax);
    row.n_factor = std::pow(static_cast<double>(n), d);  // 2d/p with p = 2
    rows.push_back(row);
  }
  if (rows.empty()) return rows;
  const double c = rows.front().sup_over_l2 / rows.front().n_factor;
  for (auto& row : rows) {
    row.fitted = c * row.n_factor;
    row.holds = row.sup_over_l2 <= row.fitted * (1.0 + 1e-12);
  }
  return rows;
}

}  // namespace ballslep::asymptotics
