#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballslep/basis.hpp"
#include "ballslep/geometry.hpp"

namespace ballslep::asymptotics {

/// Which limit density the Shannon number is measured against.
enum class Notion { PolyDegree, FourierJacobi };  // W_0, tilde W_0

enum class ShannonMethod { AnalyticShell, Quadrature };

const char* to_string(Notion n);
const char* to_string(ShannonMethod m);

struct ShannonPrediction {
  geometry::Domain domain;
  Notion notion = Notion::PolyDegree;
  double value = 0.0;
  ShannonMethod method = ShannonMethod::Quadrature;
};

/// int_D W dx with W = W_0 or tilde W_0.
ShannonPrediction predicted_shannon(const geometry::Domain& domain, Notion notion);

/// Generic tensor quadrature of the same integral in (s = arcsin r, theta, phi),
/// evaluating W pointwise. Used to cross-check the closed forms.
double shannon_by_quadrature(const geometry::Domain& domain, Notion notion, int radial_points = 64,
                             int angular_points = 64);

/// (2/pi)(arcsin r2 - arcsin r1).
double shell_tilde_closed_form(double r1, double r2);

struct RemezBound {
  int n = 0;
  int d = 3;
  double ratio = 0.0;      // |E| / |Omega|
  double q = 0.0;          // (1 - ratio)^{1/d}
  double argument = 1.0;   // (1 + q) / (1 - q)
  double log_t_n = 0.0;    // log T_n(argument)
  double t_n = 1.0;        // may be +inf
  double n_factor = 1.0;   // n^{2d}
  bool infinite = false;   // ratio = 0
};

RemezBound remez_bound(int n, int d, double ratio);

/// T_n((1+q)/(1-q)); +inf for ratio = 0.
double remez_sup_bound(int n, int d, double ratio);

/// n^{-2d} T_n(arg)^{-2} with q = (1 - omega_{1/2} |E|)^{1/d}. The constant
/// of the lower gap bound is unknown; this is the bound with C = 1.
double lambda1_lower_gap(int n, int d, double e_measure);

/// log of the same quantity (finite where the bound underflows).
double log_lambda1_lower_gap(int n, int d, double e_measure);

struct RemezCheck {
  int n = 0;
  int samples = 0;
  int violations = 0;
  double bound = 0.0;      // T_n factor
  double max_ratio = 0.0;  // worst sampled sup_Omega / sup_E
};

/// Random polynomials of degree n on B^d (unit normal coefficients in the
/// Zernike basis) against E = ball(0, radius); sup norms over sampled points.
RemezCheck remez_empirical(int n, int d, double radius, int samples, std::uint64_t seed,
                           int points_per_set = 4000, int threads = 1);

struct GapRow {
  int n = 0;
  double lambda1 = 0.0;
  double gap = 0.0;          // 1 - lambda1
  double bound = 0.0;        // lambda1_lower_gap
  double fitted_bound = 0.0; // C * bound
  bool holds = true;
};

/// 1 - lambda_1 on D = ball(0, radius) for each n, with C fitted at n_list.front().
std::vector<GapRow> lambda1_gap_scan(int d, double radius, const std::vector<int>& n_list,
                                     int threads = 1);

struct CurvePoint {
  double r = 0.0;
  double value = 0.0;
  double reference = 0.0;  // NaN when no limit is known
};

struct Curve {
  std::string label;
  int dim = 0;
  std::vector<CurvePoint> points;
};

/// K(x,x)/dim for FourierJacobi(m, round(kappa m)) along x = r e_d.
std::vector<Curve> kappa_scan(const basis::EllSequence& ell, int d, double kappa,
                              const std::vector<int>& m_list, const std::vector<double>& radii,
                              int threads = 1);

/// K(x,x)/dim for the spectral-shape sets Pi_N^{Omega,d}.
std::vector<Curve> omega_scan(const basis::SpectralShape& shape, const basis::EllSequence& ell, int d,
                              const std::vector<int>& n_list, const std::vector<double>& radii,
                              int threads = 1);

struct OpticsComparison {
  Curve total;   // 2i + j <= n, reference W_0
  Curve sum;     // i + j <= n
  std::optional<double> crossing;  // first radius where the curves swap order
};

OpticsComparison optics_compare(int n, const std::vector<double>& radii, int threads = 1);

/// First sign change of a - b, linearly interpolated.
std::optional<double> crossing_radius(const std::vector<double>& r, const std::vector<double>& a,
                                      const std::vector<double>& b);

struct NikolskiiRow {
  int n = 0;
  double sup_over_l2 = 0.0;  // sqrt(max_x K_n(x,x)): the extremal ratio ||f||_inf / ||f||_2
  double n_factor = 0.0;     // n^{2d/p}, p = 2
  double fitted = 0.0;       // C n^{2d/p}
  bool holds = true;
};

/// Heuristic check of ||f||_inf <= C n^{2d/p} ||f||_2 with C fitted at n_list.front().
std::vector<NikolskiiRow> nikolskii_heuristic(int d, const std::vector<int>& n_list,
                                              int radial_samples = 201);

}  // namespace ballslep::asymptotics
