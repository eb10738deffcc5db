#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ballslep/geometry.hpp"

namespace ballslep::basis {

using geometry::Point;

/// Radial exponents l_j of Z_{i,j,k}.
class EllSequence {
 public:
  enum class Kind { Constant, Linear, Table };

  static EllSequence constant(double c);
  /// l_j = j + c; c = 0 gives the polynomial (Zernike) family.
  static EllSequence linear(double c = 0.0);
  static EllSequence table(std::vector<double> values);
  /// Parses the describe() form: linear(c), constant(c), table(a;b;...).
  static EllSequence parse(const std::string& text);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  const std::vector<double>& values() const { return table_; }

  double operator()(int j) const;

  /// Throws ValidationError unless l_j + (d-2)/2 > -1 for all j <= max_j.
  void validate(int d, int max_j) const;

  bool is_polynomial_family() const { return kind_ == Kind::Linear && c_ == 0.0; }
  std::string describe() const;

  bool operator==(const EllSequence&) const = default;

 private:
  Kind kind_ = Kind::Linear;
  double c_ = 0.0;
  std::vector<double> table_;
};

struct BasisIndex {
  int i = 0;
  int j = 0;
  int k = 1;  // 1..dim(H_j^d)

  auto operator<=>(const BasisIndex&) const = default;
};

std::int64_t dim_harm(int j, int d);

/// sum_{j <= n} dim(H_j^d).
std::int64_t harm_count(int n, int d);

/// Real orthonormal spherical harmonic Y_{j,k}. For d = 3, k = 1 is the
/// zonal function, k = 2m the cos(m phi) and k = 2m+1 the sin(m phi) variant.
/// For d = 2, k = 1 is cos(j phi) (the constant for j = 0), k = 2 sin(j phi).
double sph_harm_real(int j, int k, int d, const Point& xi);

/// All Y_{j,k}(xi), k = 1..dim; out.size() must equal dim_harm(j, d).
void sph_harm_all(int j, int d, const Point& xi, std::span<double> out);

/// Fully normalized associated Legendre functions without Condon-Shortley
/// phase, out[j*(maxj+1)+m] for 0 <= m <= j <= maxj; int_{-1}^{1} out^2 du = 1.
void assoc_legendre_table(int maxj, double u, std::vector<double>& out);
/// Same with s = sin(theta) given explicitly.
void assoc_legendre_table(int maxj, double u, double s, std::vector<double>& out);

/// Radial factor gamma_ij P_i^{0, l+(d-2)/2}(2r^2-1) r^l.
double zernike_radial(int i, double ell, int d, double r);

double zernike_eval(const BasisIndex& idx, const EllSequence& ell, int d, const Point& x);

/// Unit direction of x; e_d for x = 0.
Point direction(const Point& x, int d);

class SpectralShape {
 public:
  enum class Kind { Triangle, Rectangle, QuarterDisc, InvertedQuarterDisc, PiecewiseLinear };

  static SpectralShape triangle();
  static SpectralShape rectangle(double kappa);
  static SpectralShape quarter_disc();
  static SpectralShape inverted_quarter_disc();
  /// Boundary y = f(x) through the given points (x increasing), region below it.
  static SpectralShape piecewise_linear(std::vector<std::pair<double, double>> points);
  /// Names: triangle, rectangle:KAPPA, quarter_disc, inverted_quarter_disc.
  static SpectralShape from_name(const std::string& name);

  Kind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  bool contains(double x, double y) const;
  /// Bounding box [0,X] x [0,Y].
  std::pair<double, double> extent() const;

  /// Simple low-pass probe on a 64 x 64 grid; throws ValidationError.
  void validate_low_pass() const;

  std::string name() const;
  bool operator==(const SpectralShape&) const = default;

 private:
  Kind kind_ = Kind::Triangle;
  double kappa_ = 1.0;
  std::vector<std::pair<double, double>> points_;
};

struct IndexSpec {
  enum class Kind { PolyDegree, FourierJacobi, Shape, SumDegree, Noll };

  Kind kind = Kind::PolyDegree;
  int n = 0;
  int m = 0;
  double bandwidth = 0.0;  // Shape only
  int count = 0;           // Noll only
  SpectralShape shape;

  static IndexSpec poly(int n);
  static IndexSpec fourier_jacobi(int m, int n);
  static IndexSpec spectral(SpectralShape shape, double N);
  static IndexSpec sum(int n);
  static IndexSpec noll(int count);

  /// Parses poly(n), fj(m,n), shape(name,N), sum(n), noll(count).
  static IndexSpec parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const IndexSpec&) const = default;
};

class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(IndexSpec spec, int d, std::vector<BasisIndex> items);

  const IndexSpec& spec() const { return spec_; }
  int dim() const { return d_; }
  std::size_t size() const { return items_.size(); }
  const BasisIndex& operator[](std::size_t a) const { return items_[a]; }
  const std::vector<BasisIndex>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  int max_i() const { return max_i_; }
  int max_j() const { return max_j_; }

 private:
  IndexSpec spec_;
  int d_ = 3;
  std::vector<BasisIndex> items_;
  int max_i_ = 0;
  int max_j_ = 0;
};

/// Materializes the spec, ordered by (j, i, k).
IndexSet index_set(const IndexSpec& spec, int d);

struct NollMode {
  enum class Variant { None, Cos, Sin };
  int n = 0;
  int m = 0;
  Variant variant = Variant::None;

  bool operator==(const NollMode&) const = default;
};

/// Noll's single-index ordering of disc Zernike modes (j >= 1).
NollMode noll_map(int j);

}  // namespace ballslep::basis
