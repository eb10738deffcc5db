#pragma once

#include <cstdint>
#include <span>

namespace ballslep::specfun {

/// Jacobi indices (alpha, beta) of P_n^{alpha,beta}; both must exceed -1.
class JacobiParams {
 public:
  JacobiParams(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double alpha_;
  double beta_;
};

/// Order of a Bessel function of the first kind. Only orders with 2*nu a
/// non-negative integer are supported; half-odd orders use the spherical
/// Bessel closed forms, integer orders the power series / Hankel expansion.
class BesselOrder {
 public:
  enum class Representation { HalfIntegerClosedForm, IntegerSeries };

  explicit BesselOrder(double nu);

  double nu() const { return nu_; }
  Representation representation() const { return rep_; }

 private:
  double nu_;
  Representation rep_;
};

double gamma(double z);
double log_gamma(double z);

/// n! as a double; exact while the result fits the 2^53 integer range.
double factorial(unsigned n);

/// Generalized binomial coefficient binom(top, k) for real top.
double binomial(double top, int k);

/// Integer binomial coefficient; returns 0 for k < 0 or k > n.
std::uint64_t binomial_int(std::int64_t n, std::int64_t k);

/// P_n^{alpha,beta}(x), normalized so that P_n(1) = binom(n+alpha, n).
double jacobi_poly(int n, const JacobiParams& p, double x);

/// Fills out[i] = P_i^{alpha,beta}(x) for i = 0..out.size()-1.
void jacobi_sequence(const JacobiParams& p, double x, std::span<double> out);

/// d-dimensional Legendre polynomial P_j^{(d)}(t) with P_j^{(d)}(1) = 1.
double legendre_gegenbauer(int j, int d, double t);

/// Fills out[j] = P_j^{(d)}(t) for j = 0..out.size()-1.
void legendre_gegenbauer_sequence(int d, double t, std::span<double> out);

/// Chebyshev polynomial of the first kind, valid for every real x.
double chebyshev_T(int n, double x);

/// log T_n(x) for x >= 1, finite where T_n itself would overflow.
double log_chebyshev_T(int n, double x);

double bessel_j(const BesselOrder& order, double z);

/// J*_alpha(z) = z^{-alpha} J_alpha(z), continuous at z = 0.
double bessel_jstar(double alpha, double z);

double sinc(double x);

/// Surface measure of the unit sphere S^{d-1}.
double sphere_area(int d);

}  // namespace ballslep::specfun
