#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ballslep/basis.hpp"
#include "ballslep/concentration.hpp"
#include "ballslep/error.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/linalg.hpp"

using namespace ballslep;
using namespace ballslep::concentration;

namespace {

constexpr double kPi = std::numbers::pi;

geometry::Domain d1() { return geometry::Domain::tesseroid(0.1, 0.8, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi); }

const basis::EllSequence kZernike = basis::EllSequence::linear(0.0);

double max_offdelta(const linalg::SymmetricMatrix& m) {
  double e = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) e = std::max(e, std::abs(m(a, b) - (a == b ? 1.0 : 0.0)));
  return e;
}

}  // namespace

TEST_CASE("full ball Gram is the identity") {
  for (int d : {2, 3}) {
    for (const auto& spec : {basis::IndexSpec::poly(8), basis::IndexSpec::fourier_jacobi(4, 4)}) {
      const auto g = assemble_gram(geometry::Domain::full_ball(d), basis::index_set(spec, d), kZernike);
      CHECK(max_offdelta(g.matrix) < 1e-12);
    }
  }
  // non-polynomial exponents on the full ball
  const auto g = assemble_gram(geometry::Domain::full_ball(3), basis::index_set(basis::IndexSpec::fourier_jacobi(3, 3), 3),
                               basis::EllSequence::linear(0.5));
  CHECK(max_offdelta(g.matrix) < 1e-12);
}

TEST_CASE("Gram entries against pointwise quadrature") {
  const auto check = [](const geometry::Domain& dom, const basis::IndexSpec& spec) {
    const int d = dom.dim();
    const auto set = basis::index_set(spec, d);
    const auto g = assemble_gram(dom, set, kZernike);
    const auto m = geometry::Measure::lebesgue_measure();
    const auto rule = geometry::make_rule(dom, m, {20, 40, 40});
    double err = 0.0;
    for (std::size_t a = 0; a < set.size(); a += 3)
      for (std::size_t b = a; b < set.size(); b += 2) {
        const double v = geometry::integrate(dom, m, [&](const geometry::Point& x) {
          return basis::zernike_eval(set[a], kZernike, d, x) * basis::zernike_eval(set[b], kZernike, d, x);
        }, rule);
        err = std::max(err, std::abs(v - g.matrix(a, b)));
      }
    return err;
  };
  CHECK(check(d1(), basis::IndexSpec::poly(5)) < 1e-12);
  CHECK(check(geometry::Domain::sector(0.2, 0.9, -1.0, 2.0), basis::IndexSpec::poly(6)) < 1e-12);
  CHECK(check(geometry::Domain::shell(3, 0.0, 0.6), basis::IndexSpec::fourier_jacobi(3, 2)) < 1e-12);
  CHECK(check(geometry::Domain::tesseroid(0.0, 0.7, 0.0, 2.0, 0.0, 2 * kPi), basis::IndexSpec::poly(4)) < 1e-12);
}

TEST_CASE("shell spectrum equals radial blocks with multiplicity") {
  const auto dom = geometry::Domain::shell(3, 0.0, 0.6);
  const auto set = basis::index_set(basis::IndexSpec::poly(7), 3);
  const auto g = assemble_gram(dom, set, kZernike);
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = 0; b < set.size(); ++b)
      if (set[a].j != set[b].j || set[a].k != set[b].k) CHECK(g.matrix(a, b) == 0.0);

  // radial blocks by Gauss-Legendre in r, eigenvalues by cyclic Jacobi
  const auto gl = geometry::gauss_legendre(30, 0.0, 0.6);
  std::vector<double> expected;
  for (int j = 0; j <= 7; ++j) {
    const int ni = (7 - j) / 2 + 1;
    linalg::SymmetricMatrix blk(ni);
    for (int p = 0; p < ni; ++p)
      for (int q = 0; q < ni; ++q) {
        double s = 0.0;
        for (std::size_t t = 0; t < gl.size(); ++t) {
          const double r = gl.nodes[t];
          s += gl.weights[t] * r * r * basis::zernike_radial(p, j, 3, r) * basis::zernike_radial(q, j, 3, r);
        }
        blk(p, q) = s;
      }
    const auto e = linalg::eigh_jacobi(blk, false);
    for (double v : e.values)
      for (int k = 0; k < 2 * j + 1; ++k) expected.push_back(v);
  }
  std::sort(expected.rbegin(), expected.rend());
  const auto rep = eigensolve_sym(g, false).report;
  REQUIRE(rep.dim() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(rep.raw()[i] - expected[i]) < 1e-12);
}

TEST_CASE("eigensolve on small matrices") {
  const auto id = eigensolve_sym(linalg::SymmetricMatrix::identity(5), false).report;
  for (double v : id.eigenvalues()) CHECK(v == doctest::Approx(1.0));
  linalg::SymmetricMatrix m(2);
  m(0, 0) = m(1, 1) = 0.6;
  m.set_sym(0, 1, 0.3);
  const auto e = eigensolve_sym(m, true);
  CHECK(e.report.raw()[0] == doctest::Approx(0.9));
  CHECK(e.report.raw()[1] == doctest::Approx(0.3));
  CHECK(e.report.trace() == doctest::Approx(1.2));
  CHECK(e.report.hs2() == doctest::Approx(0.9 * 0.9 + 0.3 * 0.3));
  CHECK(e.vectors.size() == 4);
  CHECK(std::abs(e.vectors[0]) == doctest::Approx(std::sqrt(0.5)));

  m(0, 0) = 1.5;
  CHECK_THROWS_AS(eigensolve_sym(m, false), NumericalQualityError);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eigensolve_sym(m, false), InputError);
}

TEST_CASE("spectrum statistics") {
  const SpectrumReport ones({1.0, 1.0, 1.0}, 3.0, 3.0);
  CHECK(spectrum_stats(ones, 0.1, 0.5).transition == 0);
  const SpectrumReport r({1.0, 0.5, 0.0}, 1.5, 1.25);
  const auto s = spectrum_stats(r, 0.1, 0.4);
  CHECK(s.concentrated == 2);
  CHECK(s.transition == 1);
  CHECK(s.transition_rel == doctest::Approx(1.0 / 3));
  CHECK(s.shannon_empirical == doctest::Approx(0.5));
  CHECK_THROWS_AS(spectrum_stats(r, 0.5, 0.4), ParameterError);
  CHECK_THROWS_AS(spectrum_stats(r, 0.1, 1.0), ParameterError);
  // clamping keeps raw values
  const SpectrumReport c({1.0 + 1e-9, -1e-9}, 1.0, 1.0);
  CHECK(c.eigenvalues()[0] == 1.0);
  CHECK(c.eigenvalues()[1] == 0.0);
  CHECK(c.raw()[0] > 1.0);
}

TEST_CASE("operator identities") {
  const auto full = verify_operator_identities(geometry::Domain::full_ball(3), basis::index_set(basis::IndexSpec::poly(6), 3), kZernike);
  CHECK(full.trace_residual < 1e-10);
  CHECK(full.hs_residual < 1e-10);
  CHECK(full.trace_eigen == doctest::Approx(84.0));
  const auto r1 = verify_operator_identities(d1(), basis::index_set(basis::IndexSpec::poly(8), 3), kZernike);
  CHECK(r1.trace_relative < 1e-8);
  CHECK(r1.hs_relative < 1e-8);
  const auto r2 = verify_operator_identities(geometry::Domain::shell(3, 0.5, 1.0),
                                             basis::index_set(basis::IndexSpec::fourier_jacobi(4, 4), 3), kZernike);
  CHECK(r2.trace_relative < 1e-8);
  CHECK(r2.hs_relative < 1e-8);
  CHECK(r2.trace_residual < 1e-8);
}

TEST_CASE("assembly does not depend on the worker count") {
  const auto set = basis::index_set(basis::IndexSpec::poly(7), 3);
  const auto a = assemble_gram(d1(), set, kZernike, {{}, 1});
  const auto b = assemble_gram(d1(), set, kZernike, {{}, 4});
  CHECK(a.matrix.data() == b.matrix.data());
  CHECK(eigensolve_sym(a, false).report.raw() == eigensolve_sym(b, false).report.raw());
}

TEST_CASE("lambda_1 is nondecreasing in the bandlimit") {
  double prev = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const auto l1 = eigensolve_sym(assemble_gram(d1(), basis::index_set(basis::IndexSpec::poly(n), 3), kZernike), false)
                        .report.raw()
                        .front();
    CHECK(l1 >= prev - 1e-12);
    prev = l1;
  }
}

TEST_CASE("lambda_1 grows with the domain") {
  const auto set = basis::index_set(basis::IndexSpec::poly(6), 3);
  const auto inner = geometry::Domain::tesseroid(0.7, 0.9, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi);
  const auto outer = geometry::Domain::tesseroid(0.1, 0.95, 0.25 * kPi, 0.9 * kPi, -0.6 * kPi, 0.95 * kPi);
  const double a = eigensolve_sym(assemble_gram(inner, set, kZernike), false).report.lambda1();
  const double b = eigensolve_sym(assemble_gram(outer, set, kZernike), false).report.lambda1();
  CHECK(a <= b + 1e-12);
}

TEST_CASE("complement identity") {
  const auto set = basis::index_set(basis::IndexSpec::poly(8), 3);
  const auto gd = assemble_gram(d1(), set, kZernike);
  const auto gb = assemble_gram(geometry::Domain::full_ball(3), set, kZernike);
  linalg::SymmetricMatrix ge(set.size());
  for (std::size_t i = 0; i < ge.data().size(); ++i) ge.data()[i] = gb.matrix.data()[i] - gd.matrix.data()[i];
  const double l1 = eigensolve_sym(gd, false).report.raw().front();
  const double lmin = eigensolve_sym(ge, false).report.raw().back();
  CHECK(std::abs(l1 - (1.0 - lmin)) < 1e-8);

  // shells: the complement of Shell(0, 0.5) is Shell(0.5, 1), assembled directly
  const auto inner = eigensolve_sym(assemble_gram(geometry::Domain::shell(3, 0.0, 0.5), set, kZernike), false).report;
  const auto outer = eigensolve_sym(assemble_gram(geometry::Domain::shell(3, 0.5, 1.0), set, kZernike), false).report;
  CHECK(std::abs(inner.raw().front() - (1.0 - outer.raw().back())) < 1e-8);
}

TEST_CASE("eigenvalues cluster as the bandlimit grows") {
  auto rel = [](int n) {
    const auto rep = eigensolve_sym(assemble_gram(d1(), basis::index_set(basis::IndexSpec::poly(n), 3), kZernike), false).report;
    return static_cast<double>(rep.count(0.05, 0.95)) / rep.dim();
  };
  CHECK(rel(12) < rel(6));
}

TEST_CASE("dimension mismatch is a parameter error") {
  CHECK_THROWS_AS(assemble_gram(geometry::Domain::full_ball(2), basis::index_set(basis::IndexSpec::poly(2), 3), kZernike),
                  ParameterError);
  CHECK_THROWS_AS(assemble_gram(geometry::Domain::full_ball(3), basis::index_set(basis::IndexSpec::poly(2), 3),
                                basis::EllSequence::constant(-1.6)),
                  ValidationError);
}
