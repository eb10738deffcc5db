#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ballslep/basis.hpp"
#include "ballslep/error.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/kernels.hpp"
#include "ballslep/specfun.hpp"

using namespace ballslep;
using namespace ballslep::kernels;
using geometry::Point;

namespace {

constexpr double kPi = std::numbers::pi;

Point random_in_ball(std::mt19937_64& rng, int d, double rmax = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Point x{u(rng), u(rng), d == 3 ? u(rng) : 0.0};
    if (geometry::norm(x, d) < 1.0) {
      for (int c = 0; c < d; ++c) x[c] *= rmax;
      return x;
    }
  }
}

Point random_unit(std::mt19937_64& rng, int d) {
  auto x = random_in_ball(rng, d);
  const double r = geometry::norm(x, d);
  for (int c = 0; c < d; ++c) x[c] /= r;
  return x;
}

// Direct sum over the basis, no grouping.
double brute_sum(const basis::IndexSet& set, const basis::EllSequence& ell, const Point& x, const Point& y) {
  double s = 0.0;
  for (const auto& b : set) s += basis::zernike_eval(b, ell, set.dim(), x) * basis::zernike_eval(b, ell, set.dim(), y);
  return s;
}

}  // namespace

TEST_CASE("sum kernel equals the direct basis sum") {
  std::mt19937_64 rng(21);
  const auto ell = basis::EllSequence::linear(0.0);
  for (int d : {2, 3}) {
    for (const auto& spec : {basis::IndexSpec::poly(6), basis::IndexSpec::fourier_jacobi(3, 4),
                             basis::IndexSpec::sum(5)}) {
      const auto set = basis::index_set(spec, d);
      const SumKernel k(set, ell);
      for (int t = 0; t < 10; ++t) {
        const auto x = random_in_ball(rng, d);
        const auto y = random_in_ball(rng, d);
        CHECK(std::abs(k(x, y) - brute_sum(set, ell, x, y)) < 1e-11);
        CHECK(std::abs(k.diag(x) - brute_sum(set, ell, x, x)) < 1e-11);
      }
    }
  }
  // Noll sets contain incomplete k-groups
  const auto noll = basis::index_set(basis::IndexSpec::noll(12), 2);
  const SumKernel kn(noll, ell);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_in_ball(rng, 2);
    const auto y = random_in_ball(rng, 2);
    CHECK(std::abs(kn(x, y) - brute_sum(noll, ell, x, y)) < 1e-11);
  }
}

TEST_CASE("closed form at mu = 1/2 matches the rescaled sum") {
  std::mt19937_64 rng(4);
  const auto ell = basis::EllSequence::linear(0.0);
  for (int d : {2, 3}) {
    const double omega = geometry::omega_mu(0.5, d);
    for (int n : {0, 1, 3, 7}) {
      const SumKernel k(basis::index_set(basis::IndexSpec::poly(n), d), ell);
      for (int t = 0; t < 8; ++t) {
        const auto x = random_in_ball(rng, d);
        const auto y = random_in_ball(rng, d);
        const double ref = k(x, y) / omega;
        CHECK(std::abs(kernel_poly_closed(0.5, n, d, x, y) - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST_CASE("closed form reproduces polynomials for other weights") {
  // int K_mu(x, y) p(y) W_mu(y) dy = p(x) for p of degree <= n
  std::mt19937_64 rng(8);
  const auto ell = basis::EllSequence::linear(0.0);
  for (int d : {2, 3}) {
    const auto ball = geometry::Domain::full_ball(d);
    for (double mu : {0.0, 0.25, 1.5}) {
      const int n = 4;
      const auto m = geometry::Measure::jacobi(mu);
      const auto rule = geometry::make_rule(ball, m, geometry::default_counts(ball, 2 * n));
      const basis::BasisIndex z{1, 2, 2};
      for (int t = 0; t < 3; ++t) {
        const auto x = random_in_ball(rng, d, 0.9);
        const double v = geometry::integrate(ball, m, [&](const Point& y) {
          return kernel_poly_closed(mu, n, d, x, y) * basis::zernike_eval(z, ell, d, y);
        }, rule);
        CHECK(std::abs(v - basis::zernike_eval(z, ell, d, x)) < 1e-10);
      }
    }
  }
  CHECK(kernel_poly_closed(0.0, 0, 3, {0.1, 0.2, 0.3}, {0.5, 0.0, 0.1}) == doctest::Approx(1.0));
  CHECK(kernel_poly_closed(1.0, 0, 2, {0.1, 0.2, 0.0}, {0.5, 0.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("harmonic kernel: closed form, Legendre sum and addition theorem") {
  std::mt19937_64 rng(13);
  for (int d : {2, 3}) {
    for (int n : {0, 1, 5, 15}) {
      for (double t : {-1.0, -0.4, 0.0, 0.3, 0.99, 1.0})
        CHECK(std::abs(harm_kernel(n, d, t) - harm_kernel_sum(n, d, t)) < 1e-11 * std::max(1.0, harm_kernel_sum(n, d, 1.0)));
    }
    for (int t = 0; t < 10; ++t) {
      const auto xi = random_unit(rng, d);
      const auto eta = random_unit(rng, d);
      double s = 0.0;
      std::vector<double> a;
      std::vector<double> b;
      for (int j = 0; j <= 9; ++j) {
        a.resize(basis::dim_harm(j, d));
        b.resize(a.size());
        basis::sph_harm_all(j, d, xi, a);
        basis::sph_harm_all(j, d, eta, b);
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
      }
      CHECK(std::abs(s - harm_kernel(9, d, geometry::dot(xi, eta, d))) < 1e-11);
    }
  }
}

TEST_CASE("limit weights") {
  CHECK(w0({0.0, 0.0, 0.0}, 2) == doctest::Approx(1.0 / (2 * kPi)));
  CHECK(w0({0.6, 0.0, 0.0}, 3) == doctest::Approx(1.0 / (kPi * kPi * 0.8)));
  CHECK(w_mu(0.5, {0.3, 0.1, 0.0}, 3) == doctest::Approx(3.0 / (4 * kPi)));
  CHECK(w0_tilde_radial(0.5, 3) == doctest::Approx(2.0 / (kPi * 4 * kPi * 0.25 * std::sqrt(0.75))));
  CHECK_THROWS_AS(w0_radial(1.0, 3), DomainError);
  CHECK_THROWS_AS(w0_tilde_radial(0.0, 3), DomainError);
  CHECK_THROWS_AS(christoffel_ratio(PolyClosedForm{0.5, 4, 3}, {1.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("christoffel targets by kernel family") {
  const auto ell = basis::EllSequence::linear(0.0);
  const Point x{0.0, 0.3, 0.2};
  const auto poly = christoffel_ratio(SumKernel(basis::index_set(basis::IndexSpec::poly(4), 3), ell), x);
  CHECK(poly.target == doctest::Approx(w0(x, 3)));
  const auto fj = christoffel_ratio(SumKernel(basis::index_set(basis::IndexSpec::fourier_jacobi(4, 2), 3), ell), x);
  CHECK(fj.target == doctest::Approx(w0_tilde(x, 3)));
  const auto sum = christoffel_ratio(SumKernel(basis::index_set(basis::IndexSpec::sum(4), 2), ell), {0.1, 0.1, 0.0});
  CHECK(std::isnan(sum.target));
  const auto harm = christoffel_ratio(HarmClosedForm{6, 3}, {0.0, 0.0, 1.0});
  CHECK(harm.value == doctest::Approx(1.0 / (4 * kPi)));
  CHECK(kernel_dimension(HarmClosedForm{6, 3}) == 49);
  CHECK(kernel_dimension(PolyClosedForm{0.5, 6, 3}) == 84);
}

TEST_CASE("closed-form and sum diagonals agree through kernel_eval") {
  const auto ell = basis::EllSequence::linear(0.0);
  const Point x{0.2, -0.1, 0.4};
  const KernelSpec a = PolyClosedForm{0.5, 5, 3};
  const KernelSpec b = SumKernel(basis::index_set(basis::IndexSpec::poly(5), 3), ell);
  CHECK(kernel_eval(a, x, x) * geometry::omega_mu(0.5, 3) == doctest::Approx(kernel_eval(b, x, x)).epsilon(1e-12));
}

TEST_CASE("universality function and references") {
  const Point x{0.4, 0.0, 0.0};
  const Point v{1.0, 2.0, 0.5};
  const double g = universality_G(x, {0.0, 0.0, 0.0}, v, 3);
  CHECK(g == doctest::Approx(5.25 + 0.16 / 0.84));
  CHECK(bessel_reference(x, {0.0, 0.0, 0.0}, 3) == doctest::Approx(1.0));
  // J*_{3/2}(z) / J*_{3/2}(0) = 3 (sin z - z cos z) / z^3
  const double z = std::sqrt(g);
  CHECK(bessel_reference(x, v, 3) == doctest::Approx(3 * (std::sin(z) - z * std::cos(z)) / (z * z * z)).epsilon(1e-12));
  const auto s = universality_scan_poly(0.5, 20, 3, x, {{0.0, 0.0, 0.0}, {50.0, 0.0, 0.0}});
  CHECK(s[0].ratio == doctest::Approx(1.0));
  CHECK_FALSE(s[1].valid);
  CHECK(fj_reference(0.5, 0.0, 4, 3, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("e_d constants") {
  for (int d = 2; d <= 5; ++d) {
    CHECK(std::abs(geometry::omega_mu(0.0, d) / specfun::factorial(d) * e_d_constant(d) - 1.0) < 1e-12);
  }
  CHECK(e_d_constant(3) == doctest::Approx(6 * kPi * kPi));
  // int_0^inf J_nu(t)^2 / t dt = 1 / (2 nu)
  CHECK(bessel_square_integral(3, 400.0) == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
}

TEST_CASE("cap concentration grows with n") {
  const double a = cap_concentration(10, 3, 0.3);
  const double b = cap_concentration(40, 3, 0.3);
  CHECK(a < b);
  CHECK(b <= 1.0 + 1e-12);
  CHECK(cap_concentration(5, 3, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cap_concentration(5, 2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}
