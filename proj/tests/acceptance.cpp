// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ballslep/asymptotics.hpp"
#include "ballslep/basis.hpp"
#include "ballslep/concentration.hpp"
#include "ballslep/experiment.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/kernels.hpp"
#include "ballslep/specfun.hpp"

using namespace ballslep;
using geometry::Point;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const basis::EllSequence kZ = basis::EllSequence::linear(0.0);

geometry::Domain d1() { return geometry::Domain::tesseroid(0.1, 0.8, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi); }
geometry::Domain d2() { return geometry::Domain::tesseroid(0.7, 0.9, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi); }

Point random_in_ball(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Point x{u(rng), u(rng), d == 3 ? u(rng) : 0.0};
    if (geometry::norm(x, d) < 1.0) return x;
  }
}

Point random_unit(std::mt19937_64& rng, int d) {
  auto x = random_in_ball(rng, d);
  const double r = geometry::norm(x, d);
  for (int c = 0; c < d; ++c) x[c] /= r;
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& spec : {basis::IndexSpec::poly(8), basis::IndexSpec::fourier_jacobi(4, 4)}) {
    const auto g = concentration::assemble_gram(geometry::Domain::full_ball(3), basis::index_set(spec, 3), kZ);
    const auto& m = g.matrix;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) worst = std::max(worst, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
  }
  const double s = seconds_since(t0);
  return {worst < 1e-10 && s < 10.0, fmt("max |G - I| = %.3e, %.2f s", worst, s)};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = concentration::verify_operator_identities(d1(), basis::index_set(basis::IndexSpec::poly(10), 3), kZ);
  const double s = seconds_since(t0);
  return {r.trace_relative < 1e-8 && r.hs_relative < 1e-8 && s < 60.0,
          fmt("trace rel %.3e, HS rel %.3e, %.2f s", r.trace_relative, r.hs_relative, s)};
}

Outcome c3() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int d : {2, 3}) {
    const double omega = geometry::omega_mu(0.5, d);
    for (int n = 0; n <= 10; ++n) {
      const kernels::SumKernel k(basis::index_set(basis::IndexSpec::poly(n), d), kZ);
      for (int t = 0; t < 50; ++t) {
        const auto x = random_in_ball(rng, d);
        const auto y = random_in_ball(rng, d);
        const double ref = k(x, y) / omega;
        // near a zero of K(x, .) the error is measured against sqrt(K(x,x) K(y,y))
        const double scale = std::max(std::abs(ref), 1e-6 * std::sqrt(k.diag(x) * k.diag(y)) / omega);
        worst = std::max(worst, std::abs(kernels::kernel_poly_closed(0.5, n, d, x, y) - ref) / scale);
      }
    }
  }
  return {worst < 1e-8, fmt("max relative error %.3e", worst)};
}

Outcome c4() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int d : {2, 3}) {
    for (int j = 0; j <= 15; ++j) {
      std::vector<double> a(basis::dim_harm(j, d));
      std::vector<double> b(a.size());
      for (int t = 0; t < 100; ++t) {
        const auto xi = random_unit(rng, d);
        const auto eta = random_unit(rng, d);
        basis::sph_harm_all(j, d, xi, a);
        basis::sph_harm_all(j, d, eta, b);
        double s = 0.0;
        for (std::size_t q = 0; q < a.size(); ++q) s += a[q] * b[q];
        const double ref = a.size() / specfun::sphere_area(d) * specfun::legendre_gegenbauer(j, d, geometry::dot(xi, eta, d));
        worst = std::max(worst, std::abs(s - ref));
      }
    }
  }
  return {worst < 1e-10, fmt("max absolute error %.3e", worst)};
}

Outcome c5() {
  const auto t0 = std::chrono::steady_clock::now();
  const Point x{0.5 * std::sin(1.0) * std::cos(0.3), 0.5 * std::sin(1.0) * std::sin(0.3), 0.5 * std::cos(1.0)};
  auto err = [&](int n) {
    const auto cv = kernels::christoffel_ratio(kernels::PolyClosedForm{0.5, n, 3}, x);
    return std::abs(cv.value - cv.target) / cv.target;
  };
  const double e20 = err(20);
  const double e60 = err(60);
  const double s = seconds_since(t0);
  return {e60 < 0.05 && e60 < e20 && s < 5.0, fmt("rel err n=20 %.4f, n=60 %.4f, %.2f s", e20, e60, s)};
}

Outcome c6() {
  bool ok = true;
  std::string out;
  for (int which = 0; which < 2; ++which) {
    const auto dom = which == 0 ? d1() : d2();
    const double target = asymptotics::predicted_shannon(dom, asymptotics::Notion::PolyDegree).value;
    auto err = [&](int n) {
      const auto set = basis::index_set(basis::IndexSpec::poly(n), 3);
      return std::abs(concentration::trace_by_quadrature(dom, set, kZ) / set.size() - target);
    };
    const double e4 = err(4);
    const double e16 = err(16);
    ok = ok && e16 < 0.15 && e16 < e4;
    out += std::string(which == 0 ? "D1" : "; D2") + fmt(": |err| n=4 %.5f, n=16 %.5f", e4, e16);
  }
  return {ok, out};
}

Outcome c7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dom = geometry::Domain::shell(3, 0.7, 0.9);
  const double target = asymptotics::shell_tilde_closed_form(0.7, 0.9);
  const double quad = asymptotics::shannon_by_quadrature(dom, asymptotics::Notion::FourierJacobi);
  const auto set = basis::index_set(basis::IndexSpec::fourier_jacobi(30, 6), 3);
  const double emp = concentration::trace_by_quadrature(dom, set, kZ) / set.size();
  const double s = seconds_since(t0);
  return {std::abs(emp - target) < 0.1 && std::abs(quad - target) < 1e-8 && s < 60.0,
          fmt("trace/dim %.6f, target %.6f, |quad - closed| %.2e, %.2f s", emp, target, std::abs(quad - target), s)};
}

Outcome c8() {
  const auto t0 = std::chrono::steady_clock::now();
  auto rel = [&](int n) {
    const auto set = basis::index_set(basis::IndexSpec::poly(n), 3);
    const auto g = concentration::assemble_gram(d1(), set, kZ, {{}, 0});
    const auto e = concentration::eigensolve_sym(g, false);
    return static_cast<double>(e.report.count(0.05, 0.95)) / e.report.dim();
  };
  const double r8 = rel(8);
  const double r16 = rel(16);
  const double s = seconds_since(t0);
  return {r16 < r8 && s < 600.0, fmt("N/dim n=8 %.4f, n=16 %.4f, %.1f s", r8, r16, s)};
}

// Same five offset directions as the kernel-scan experiment.
std::vector<Point> offsets() {
  std::vector<Point> v;
  for (int q = 0; q < 5; ++q) {
    const double a = kPi * (q + 0.5) / 5;
    v.push_back({std::cos(a) * std::sin(1.0 + q), std::sin(a) * std::sin(1.0 + q), std::cos(1.0 + q)});
  }
  return v;
}

Outcome c9() {
  const Point x{0.4, 0.0, 0.0};
  const auto s20 = kernels::universality_scan_poly(0.5, 20, 3, x, offsets());
  const auto s60 = kernels::universality_scan_poly(0.5, 60, 3, x, offsets());
  bool ok = true;
  std::string out;
  for (std::size_t q = 0; q < s20.size(); ++q) {
    const double a = std::abs(s20[q].ratio - s20[q].reference);
    const double b = std::abs(s60[q].ratio - s60[q].reference);
    ok = ok && s20[q].valid && s60[q].valid && b < a;
    out += fmt("%.1e->%.1e ", a, b);
  }
  return {ok, out};
}

Outcome c10() {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    worst = std::max(worst, std::abs(geometry::omega_mu(0.0, d) / specfun::factorial(d) * kernels::e_d_constant(d) - 1.0));
  const double e3 = kernels::e_d_constant(3);
  const double tr = kernels::e_d_truncated(3, 200.0);
  const double rel = std::abs(tr - e3) / e3;
  return {worst < 1e-12 && rel < 0.05, fmt("identity err %.2e, truncated/e_3 - 1 = %.4f", worst, tr / e3 - 1.0)};
}

Outcome c11() {
  const auto chk = asymptotics::remez_empirical(6, 3, 0.5, 200, 42, 4000, 0);
  return {chk.violations == 0 && chk.samples == 200,
          fmt("violations %.0f of %.0f, max ratio %.3f, factor %.3e", static_cast<double>(chk.violations),
              static_cast<double>(chk.samples), chk.max_ratio, chk.bound)};
}

Outcome c12() {
  const double m = kernels::cap_concentration(40, 3, 0.3);
  return {m >= 0.95, fmt("cap mass %.5f", m)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome c13() {
  const fs::path root = fs::temp_directory_path() / "ballslep_acceptance_det";
  fs::remove_all(root);
  auto cfg = experiment::find_preset("fig2-poly-D1").config;
  cfg.basis.index = "poly(10)";
  cfg.numeric.vectors = true;
  std::vector<std::vector<fs::path>> runs;
  for (int t : {1, 1, 4}) {
    cfg.numeric.threads = t;
    cfg.output.dir = (root / ("run" + std::to_string(runs.size()))).string();
    auto files = experiment::run(cfg, false).files;
    std::erase_if(files, [](const fs::path& p) { return p.extension() != ".csv"; });
    runs.push_back(files);
  }
  bool ok = !runs[0].empty();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    ok = ok && runs[r].size() == runs[0].size();
    for (std::size_t f = 0; ok && f < runs[0].size(); ++f) ok = slurp(runs[0][f]) == slurp(runs[r][f]);
  }
  const auto n = runs[0].size();
  fs::remove_all(root);
  return {ok, fmt("%.0f CSV files compared across 3 runs (threads 1, 1, 4)", static_cast<double>(n))};
}

Outcome c14() {
  bool count_ok = true;
  for (int d : {2, 3})
    for (int n = 0; n <= 30; ++n) {
      std::int64_t total = 0;
      for (int i = 0; 2 * i <= n; ++i)
        for (int j = 0; j <= n - 2 * i; ++j) total += basis::dim_harm(j, d);
      std::int64_t ns = 0;
      for (int j = 0; j <= n; ++j) ns += basis::dim_harm(j, d);
      count_ok = count_ok && total == static_cast<std::int64_t>(specfun::binomial_int(n + d, d)) &&
                 ns == static_cast<std::int64_t>(specfun::binomial_int(n + d - 1, n) + specfun::binomial_int(n + d - 2, n - 1)) &&
                 basis::index_set(basis::IndexSpec::poly(n), d).size() == static_cast<std::size_t>(total) &&
                 basis::index_set(basis::IndexSpec::fourier_jacobi(3, n), d).size() == static_cast<std::size_t>(4 * ns);
    }

  // monomials of degree <= n are reproduced by the poly(n) projection
  const int d = 3;
  double worst = 0.0;
  const auto dom = geometry::Domain::full_ball(d);
  const auto meas = geometry::Measure::lebesgue_measure();
  for (int n = 0; n <= 4; ++n) {
    const auto set = basis::index_set(basis::IndexSpec::poly(n), d);
    const auto rule = geometry::make_rule(dom, meas, geometry::default_counts(dom, 2 * n));
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b)
        for (int c = 0; a + b + c <= n; ++c) {
          auto mono = [&](const Point& x) { return std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c); };
          const double norm2 = geometry::integrate(dom, meas, [&](const Point& x) { return mono(x) * mono(x); }, rule);
          std::vector<double> coef;
          for (const auto& z : set)
            coef.push_back(geometry::integrate(dom, meas, [&](const Point& x) { return mono(x) * basis::zernike_eval(z, kZ, d, x); }, rule));
          auto resid = [&](const Point& x) {
            double f = mono(x);
            for (std::size_t q = 0; q < set.size(); ++q) f -= coef[q] * basis::zernike_eval(set[q], kZ, d, x);
            return f * f;
          };
          worst = std::max(worst, std::sqrt(geometry::integrate(dom, meas, resid, rule) / norm2));
        }
  }
  return {count_ok && worst < 1e-8,
          std::string(count_ok ? "counting exact" : "counting MISMATCH") + fmt(", span residual %.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"orthonormality on the full ball", c1},
      {"trace and Hilbert-Schmidt identities on D1", c2},
      {"closed-form kernel against sum form", c3},
      {"addition theorem", c4},
      {"Christoffel convergence at |x| = 0.5", c5},
      {"Shannon agreement, total-degree bandlimit", c6},
      {"Shannon agreement, Fourier-Jacobi bandlimit", c7},
      {"eigenvalue clustering on D1", c8},
      {"universality trend", c9},
      {"e_d identities", c10},
      {"Remez inequality sampling", c11},
      {"cap concentration", c12},
      {"determinism across runs and threads", c13},
      {"counting identity and span test", c14},
  };
  int failed = 0;
  for (std::size_t q = 0; q < criteria.size(); ++q) {
    Outcome o;
    try {
      o = criteria[q].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", q + 1, criteria[q].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
