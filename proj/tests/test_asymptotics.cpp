#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ballslep/asymptotics.hpp"
#include "ballslep/basis.hpp"
#include "ballslep/error.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/kernels.hpp"

using namespace ballslep;
using namespace ballslep::asymptotics;

namespace {

constexpr double kPi = std::numbers::pi;

geometry::Domain d1() { return geometry::Domain::tesseroid(0.1, 0.8, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi); }

// int_D W_0 by rejection sampling in the cube [-1, 1]^3.
double w0_rejection(const geometry::Domain& dom, int samples) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double s = 0.0;
  for (int i = 0; i < samples; ++i) {
    const geometry::Point x{u(rng), u(rng), u(rng)};
    if (geometry::norm(x, 3) < 1.0 && dom.contains(x)) s += kernels::w0(x, 3);
  }
  return 8.0 * s / samples;
}

const basis::EllSequence kZernike = basis::EllSequence::linear(0.0);

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

}  // namespace

TEST_CASE("Shannon predictions: exact cases") {
  for (int d : {2, 3}) {
    CHECK(predicted_shannon(geometry::Domain::full_ball(d), Notion::PolyDegree).value == 1.0);
    CHECK(predicted_shannon(geometry::Domain::shell(d, 0.0, 1.0), Notion::FourierJacobi).value == 1.0);
    const auto p = predicted_shannon(geometry::Domain::shell(d, 0.7, 0.9), Notion::FourierJacobi);
    CHECK(p.method == ShannonMethod::AnalyticShell);
    CHECK(p.value == doctest::Approx(0.2192340360).epsilon(1e-9));
  }
  CHECK(std::abs(shannon_by_quadrature(geometry::Domain::shell(3, 0.7, 0.9), Notion::FourierJacobi) - 0.2192340360) < 1e-8);
}

TEST_CASE("shell closed form against quadrature, random radii") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    const int d = 2 + t % 2;
    const auto dom = geometry::Domain::shell(d, a, b);
    CHECK(std::abs(shell_tilde_closed_form(a, b) - shannon_by_quadrature(dom, Notion::FourierJacobi)) < 1e-8);
    CHECK(std::abs(predicted_shannon(dom, Notion::PolyDegree).value - shannon_by_quadrature(dom, Notion::PolyDegree)) < 1e-8);
  }
}

TEST_CASE("D1 prediction: tensor rule against rejection sampling") {
  const double tensor = predicted_shannon(d1(), Notion::PolyDegree).value;
  CHECK(std::abs(tensor - shannon_by_quadrature(d1(), Notion::PolyDegree)) < 1e-10);
  CHECK(std::abs(tensor - w0_rejection(d1(), 4000000)) < 2e-3);
  const auto ft = predicted_shannon(d1(), Notion::FourierJacobi);
  CHECK(ft.method == ShannonMethod::Quadrature);
  CHECK(std::abs(ft.value - shannon_by_quadrature(d1(), Notion::FourierJacobi)) < 1e-8);
}

TEST_CASE("predictions are monotone under inclusion") {
  const auto small = geometry::Domain::tesseroid(0.7, 0.9, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi);
  const auto mid = geometry::Domain::tesseroid(0.1, 0.9, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi);
  const auto big = geometry::Domain::tesseroid(0.05, 0.99, 0.1 * kPi, 0.95 * kPi, -0.9 * kPi, 0.9 * kPi);
  for (auto n : {Notion::PolyDegree, Notion::FourierJacobi}) {
    const double a = predicted_shannon(small, n).value;
    const double b = predicted_shannon(mid, n).value;
    const double c = predicted_shannon(big, n).value;
    CHECK(a <= b);
    CHECK(b <= c);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("Remez factor") {
  CHECK(remez_sup_bound(7, 3, 1.0) == 1.0);
  CHECK(remez_sup_bound(3, 3, 1.0 - 0.125) == doctest::Approx(99.0).epsilon(1e-12));
  const auto b = remez_bound(3, 3, 0.875);
  CHECK(b.q == doctest::Approx(0.5));
  CHECK(b.argument == doctest::Approx(3.0));
  CHECK(remez_bound(4, 2, 0.0).infinite);
  CHECK(std::isinf(remez_sup_bound(4, 2, 0.0)));
  CHECK_THROWS_AS(remez_bound(4, 2, 1.5), ParameterError);
  double prev = INFINITY;
  for (double r = 0.05; r <= 1.0; r += 0.05) {
    const double v = remez_sup_bound(6, 3, r);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("lambda_1 gap bound") {
  const double vol = geometry::Domain::full_ball(3).volume();
  const double e = vol * (1.0 - 0.125);  // complement of ball(0, 1/2)
  double prev = 1.0;
  for (int n = 1; n <= 12; ++n) {
    const double g = lambda1_lower_gap(n, 3, e);
    CHECK(g > 0.0);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(lambda1_lower_gap(3, 3, e) == doctest::Approx(std::pow(3.0, -6) / (99.0 * 99.0)));
  CHECK(lambda1_lower_gap(5, 3, vol) == doctest::Approx(std::pow(5.0, -6)));
  CHECK(std::isfinite(log_lambda1_lower_gap(400, 3, e)));
}

TEST_CASE("sampled Remez inequality") {
  const auto chk = remez_empirical(4, 3, 0.5, 50, 5, 1500, 2);
  CHECK(chk.violations == 0);
  CHECK(chk.max_ratio >= 1.0);
  CHECK(chk.max_ratio <= chk.bound);
  const auto again = remez_empirical(4, 3, 0.5, 50, 5, 1500, 1);
  CHECK(again.max_ratio == chk.max_ratio);
}

TEST_CASE("fitted gap bound on ball(0, 1/2)") {
  const auto rows = lambda1_gap_scan(3, 0.5, {4, 5, 6, 7, 8});
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r.holds);
    CHECK(r.gap > 0.0);
  }
  CHECK(rows.back().gap < rows.front().gap);
}

TEST_CASE("kappa scan") {
  const auto radii = grid(0.2, 0.8, 7);
  for (int d : {2, 3}) {
    const auto small = kappa_scan(kZernike, d, 2.0 / 60.0, {60}, radii);
    REQUIRE(small.size() == 1);
    for (const auto& p : small[0].points) {
      CHECK(p.value > 0.0);
      CHECK(std::abs(p.value / p.reference - 1.0) < 0.05);
    }
    const auto eq = kappa_scan(kZernike, d, 1.0, {20, 40}, radii);
    double between = 0.0;
    double to_ref = 0.0;
    for (std::size_t t = 0; t < radii.size(); ++t) {
      between = std::max(between, std::abs(eq[0].points[t].value - eq[1].points[t].value));
      to_ref = std::max(to_ref, std::abs(eq[0].points[t].value - eq[0].points[t].reference));
      to_ref = std::max(to_ref, std::abs(eq[1].points[t].value - eq[1].points[t].reference));
    }
    CHECK(between < to_ref);
  }
}

TEST_CASE("omega scan") {
  const auto radii = grid(0.0, 0.9, 10);
  // triangle is the total-degree bandlimit
  const auto tri = omega_scan(basis::SpectralShape::triangle(), kZernike, 3, {8}, radii);
  const kernels::SumKernel k(basis::index_set(basis::IndexSpec::poly(8), 3), kZernike);
  for (const auto& p : tri[0].points) {
    const auto cv = kernels::christoffel_ratio(k, {0.0, 0.0, p.r});
    CHECK(p.value == doctest::Approx(cv.value).epsilon(1e-14));
    CHECK(p.reference == doctest::Approx(cv.target).epsilon(1e-14));
  }
  // rectangle is the Fourier-Jacobi bandlimit
  const auto rect = omega_scan(basis::SpectralShape::rectangle(0.5), kZernike, 2, {20}, radii);
  const auto kap = kappa_scan(kZernike, 2, 0.5, {20}, radii);
  for (std::size_t t = 0; t < radii.size(); ++t)
    CHECK(rect[0].points[t].value == doctest::Approx(kap[0].points[t].value).epsilon(1e-14));
  // the two Fig. 5 shapes give visibly different curves
  const auto q1 = omega_scan(basis::SpectralShape::quarter_disc(), kZernike, 2, {40}, {0.5});
  const auto q2 = omega_scan(basis::SpectralShape::inverted_quarter_disc(), kZernike, 2, {40}, {0.5});
  CHECK(std::abs(q1[0].points[0].value / q2[0].points[0].value - 1.0) > 0.05);
  const auto bad = basis::SpectralShape::piecewise_linear({{0.0, 0.2}, {0.5, 1.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(omega_scan(bad, kZernike, 2, {10}, radii), ValidationError);
}

TEST_CASE("optics comparison on the disc") {
  const auto radii = grid(0.0, 0.99, 100);
  const auto cmp = optics_compare(40, radii);
  REQUIRE(cmp.crossing.has_value());
  CHECK(*cmp.crossing > 0.7);
  CHECK(*cmp.crossing < 0.9);
  for (std::size_t t = 0; t < radii.size(); t += 10) {
    const auto& p = cmp.total.points[t];
    if (p.r <= 0.9) CHECK(std::abs(p.value / p.reference - 1.0) < 0.03);
  }
  // int_disc K(x,x)/dim dx = 1 for both bandlimits; the i + j <= n diagonal has degree 4n in r
  const auto gl = geometry::gauss_legendre(85, 0.0, 1.0);
  const auto ir = optics_compare(40, gl.nodes);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t t = 0; t < gl.size(); ++t) {
    a += 2 * kPi * gl.weights[t] * gl.nodes[t] * ir.total.points[t].value;
    b += 2 * kPi * gl.weights[t] * gl.nodes[t] * ir.sum.points[t].value;
  }
  CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(crossing_radius({0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}).value() == doctest::Approx(0.5));
  CHECK_FALSE(crossing_radius({0.0, 1.0}, {0.0, 0.5}, {1.0, 1.0}).has_value());
}

TEST_CASE("Nikolskii heuristic") {
  const auto rows = nikolskii_heuristic(3, {2, 3, 4, 5, 6, 7, 8});
  for (const auto& r : rows) CHECK(r.holds);
  // extremal ratio squared is max K(x,x), attained on the sphere
  const kernels::SumKernel k(basis::index_set(basis::IndexSpec::poly(4), 3), kZernike);
  CHECK(rows[2].sup_over_l2 * rows[2].sup_over_l2 == doctest::Approx(k.diag({0.0, 0.0, 1.0})));
}
