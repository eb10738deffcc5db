#include "ballslep/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ballslep/error.hpp"

namespace ballslep::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double zm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (zm1 + static_cast<double>(i));
  }
  return a;
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

// Power series for J_nu(z), in extended precision to soften the
// cancellation at moderate z.
double bessel_series(double nu, double z) {
#ifdef __SIZEOF_FLOAT128__
  using Wide = __float128;
#else
  using Wide = long double;
#endif
  const Wide half = static_cast<Wide>(z) / 2;
  const Wide q = -half * half;
  Wide term = static_cast<Wide>(std::pow(static_cast<long double>(z) / 2.0L, static_cast<long double>(nu)) /
                                static_cast<long double>(gamma(nu + 1.0)));
  Wide sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<Wide>(k) * (static_cast<Wide>(k) + static_cast<Wide>(nu)));
    sum += term;
    const Wide at = term < 0 ? -term : term;
    const Wide as = sum < 0 ? -sum : sum;
    if (at < static_cast<Wide>(1e-30L) * as && k > z) break;
  }
  return static_cast<double>(sum);
}

// Hankel large-argument expansion.
double bessel_asymptotic(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double ak = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      ak *= (mu - odd * odd) / (k * 8.0 * z);
    }
    const double mag = std::abs(ak);
    if (mag > prev) break;
    prev = mag;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * ak;
    } else {
      q += sign * ak;
    }
    if (mag < 1e-17) break;
  }
  const double w = z - nu * kPi / 2.0 - kPi / 4.0;
  return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(w) - q * std::sin(w));
}

// J_{l+1/2}(z) from spherical Bessel functions, upward recurrence (z > l).
double bessel_half_odd(int l, double z) {
  double j0 = std::sin(z) / z;
  if (l == 0) return std::sqrt(2.0 * z / kPi) * j0;
  double j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  for (int k = 1; k < l; ++k) {
    const double next = (2.0 * k + 1.0) / z * j1 - j0;
    j0 = j1;
    j1 = next;
  }
  return std::sqrt(2.0 * z / kPi) * j1;
}

}  // namespace

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw ParameterError("Jacobi parameters must satisfy alpha > -1 and beta > -1 (got " +
                         std::to_string(alpha) + ", " + std::to_string(beta) + ")");
  }
}

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !is_integer(2.0 * nu)) {
    throw ParameterError("unsupported Bessel order " + std::to_string(nu) +
                         " (need nu >= 0 with 2*nu integer)");
  }
  const long twice = std::lround(2.0 * nu);
  rep_ = (twice % 2 == 1) ? Representation::HalfIntegerClosedForm
                          : Representation::IntegerSeries;
}

double gamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) throw ParameterError("gamma has a pole at non-positive integers");
  if (z < 0.5) {
    return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
  }
  const double zm1 = z - 1.0;
  const double t = zm1 + kLanczosG + 0.5;
  // t^(z-1/2) split in two halves so it stays finite up to z ~ 171.
  const double half_pow = std::pow(t, (zm1 + 0.5) / 2.0);
  return std::sqrt(2.0 * kPi) * half_pow * (half_pow * std::exp(-t)) * lanczos_sum(zm1);
}

double log_gamma(double z) {
  if (!(z > 0.0)) {
    throw ParameterError("log_gamma requires z > 0");
  }
  if (z < 0.5) {
    return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  const double zm1 = z - 1.0;
  const double t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm1));
}

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double binomial(double top, int k) {
  if (k < 0) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) {
    b *= (top - k + i) / static_cast<double>(i);
  }
  return b;
}

std::uint64_t binomial_int(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t b = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    b = b * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return b;
}

void jacobi_sequence(const JacobiParams& p, double x, std::span<double> out) {
  if (out.empty()) return;
  const double a = p.alpha();
  const double b = p.beta();
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double n = static_cast<double>(k);
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    out[k] = (c2 * out[k - 1] - c3 * out[k - 2]) / c1;
  }
}

double jacobi_poly(int n, const JacobiParams& p, double x) {
  if (n < 0) throw ParameterError("Jacobi degree must be non-negative");
  if (n == 0) return 1.0;
  double prev2 = 1.0;
  double prev1 = 0.0;
  const double a = p.alpha();
  const double b = p.beta();
  prev1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    const double c1 = 2.0 * kk * (kk + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * s;
    const double next = (c2 * prev1 - c3 * prev2) / c1;
    prev2 = prev1;
    prev1 = next;
  }
  return prev1;
}

void legendre_gegenbauer_sequence(int d, double t, std::span<double> out) {
  if (d < 2) throw ParameterError("Legendre polynomials P_j^(d) need d >= 2");
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    const double jj = static_cast<double>(j);
    out[j + 1] = ((2.0 * jj + d - 2.0) * t * out[j] - jj * out[j - 1]) / (jj + d - 2.0);
  }
}

double legendre_gegenbauer(int j, int d, double t) {
  if (d < 2) throw ParameterError("Legendre polynomials P_j^(d) need d >= 2");
  if (j < 0) throw ParameterError("Legendre degree must be non-negative");
  if (j == 0) return 1.0;
  double p0 = 1.0;
  double p1 = t;
  for (int k = 1; k < j; ++k) {
    const double next = ((2.0 * k + d - 2.0) * t * p1 - k * p0) / (k + d - 2.0);
    p0 = p1;
    p1 = next;
  }
  return p1;
}

double chebyshev_T(int n, double x) {
  if (n < 0) throw ParameterError("Chebyshev degree must be non-negative");
  if (std::abs(x) <= 1.0) {
    if (n == 0) return 1.0;
    double t0 = 1.0;
    double t1 = x;
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * x * t1 - t0;
      t0 = t1;
      t1 = next;
    }
    return t1;
  }
  const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  const double lg = log_chebyshev_T(n, std::abs(x));
  return sign * std::exp(lg);
}

double log_chebyshev_T(int n, double x) {
  if (n < 0) throw ParameterError("Chebyshev degree must be non-negative");
  if (x < 1.0) throw DomainError("log_chebyshev_T requires x >= 1");
  // T_n(x) = cosh(n L) with L = log(x + sqrt(x^2 - 1)).
  const double l = std::log(x + std::sqrt(x * x - 1.0));
  const double nl = n * l;
  return nl + std::log1p(std::exp(-2.0 * nl)) - std::numbers::ln2;
}

double bessel_j(const BesselOrder& order, double z) {
  const double nu = order.nu();
  if (z < 0.0) throw DomainError("bessel_j is implemented for z >= 0");
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (order.representation() == BesselOrder::Representation::HalfIntegerClosedForm) {
    const int l = static_cast<int>(std::lround(nu - 0.5));
    if (z < l + 1.0) return bessel_series(nu, z);
    return bessel_half_odd(l, z);
  }
  if (z <= 30.0) return bessel_series(nu, z);
  return bessel_asymptotic(nu, z);
}

double bessel_jstar(double alpha, double z) {
  const BesselOrder order(alpha);
  if (z < 0.0) throw DomainError("bessel_jstar is implemented for z >= 0");
  if (z < 1.0) {
    const double q = -z * z / 4.0;
    double term = std::pow(2.0, -alpha) / gamma(alpha + 1.0);
    double sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= q / (k * (k + alpha));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return bessel_j(order, z) / std::pow(z, alpha);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sphere_area(int d) {
  if (d < 1) throw ParameterError("sphere_area needs d >= 1");
  return 2.0 * std::pow(kPi, d / 2.0) / gamma(d / 2.0);
}

}  // namespace ballslep::specfun
