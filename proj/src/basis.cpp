#include "ballslep/basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "ballslep/error.hpp"
#include "ballslep/specfun.hpp"

namespace ballslep::basis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShapeTol = 1e-12;

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Normalized associated Legendre table given u = cos(theta) and s = sin(theta).
void legendre_table_us(int maxj, double u, double s, std::vector<double>& out) {
  const int w = maxj + 1;
  out.assign(static_cast<std::size_t>(w) * w, 0.0);
  double pmm = std::sqrt(0.5);
  for (int m = 0; m <= maxj; ++m) {
    if (m > 0) pmm *= s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    out[m * w + m] = pmm;
    if (m + 1 > maxj) continue;
    double p1 = u * std::sqrt(2.0 * m + 3.0) * pmm;
    out[(m + 1) * w + m] = p1;
    double p0 = pmm;
    for (int j = m + 2; j <= maxj; ++j) {
      const double jj = j;
      const double a = std::sqrt((4.0 * jj * jj - 1.0) / (jj * jj - m * m));
      const double b =
          std::sqrt(((jj - 1.0) * (jj - 1.0) - m * m) / (4.0 * (jj - 1.0) * (jj - 1.0) - 1.0));
      const double next = a * (u * p1 - b * p0);
      out[j * w + m] = next;
      p0 = p1;
      p1 = next;
    }
  }
}

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw ValidationError("cannot parse number '" + s + "' in " + what);
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (v != std::floor(v) || v < 0 || v > 1e6) {
    throw ValidationError("expected a non-negative integer, got '" + s + "' in " + what);
  }
  return static_cast<int>(v);
}

}  // namespace

// ---------------------------------------------------------------- EllSequence

EllSequence EllSequence::constant(double c) {
  EllSequence e;
  e.kind_ = Kind::Constant;
  e.c_ = c;
  return e;
}

EllSequence EllSequence::linear(double c) {
  EllSequence e;
  e.kind_ = Kind::Linear;
  e.c_ = c;
  return e;
}

EllSequence EllSequence::table(std::vector<double> values) {
  if (values.empty()) throw ValidationError("ell table must not be empty");
  EllSequence e;
  e.kind_ = Kind::Table;
  e.table_ = std::move(values);
  return e;
}

EllSequence EllSequence::parse(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.size() < open + 2 || text.back() != ')') {
    throw ValidationError("malformed ell sequence '" + text + "'");
  }
  const std::string name = text.substr(0, open);
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("bad number '" + s + "' in ell sequence '" + text + "'");
    return v;
  };
  if (name == "linear") return linear(number(body));
  if (name == "constant") return constant(number(body));
  if (name == "table") {
    std::vector<double> vals;
    std::stringstream ss(body);
    for (std::string part; std::getline(ss, part, ';');) vals.push_back(number(part));
    return table(std::move(vals));
  }
  throw ValidationError("unknown ell sequence kind '" + name + "'");
}

double EllSequence::operator()(int j) const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Linear:
      return j + c_;
    case Kind::Table:
      if (j < 0 || static_cast<std::size_t>(j) >= table_.size()) {
        throw ParameterError("ell table has no entry for j = " + std::to_string(j));
      }
      return table_[j];
  }
  return 0.0;
}

void EllSequence::validate(int d, int max_j) const {
  if (kind_ == Kind::Table && static_cast<std::size_t>(max_j) >= table_.size()) {
    throw ValidationError("ell table too short: need " + std::to_string(max_j + 1) + " entries");
  }
  for (int j = 0; j <= max_j; ++j) {
    if (!((*this)(j) + (d - 2) / 2.0 > -1.0)) {
      throw ValidationError("ell sequence violates l_j + (d-2)/2 > -1 at j = " + std::to_string(j));
    }
  }
}

std::string EllSequence::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant(" + fmt_double(c_) + ")";
    case Kind::Linear:
      return "linear(" + fmt_double(c_) + ")";
    case Kind::Table: {
      std::string s = "table(";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) s += ";";
        s += fmt_double(table_[i]);
      }
      return s + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------- harmonics

std::int64_t dim_harm(int j, int d) {
  if (j < 0 || d < 2) throw ParameterError("dim_harm needs j >= 0 and d >= 2");
  return static_cast<std::int64_t>(specfun::binomial_int(j + d - 1, j)) -
         static_cast<std::int64_t>(specfun::binomial_int(j + d - 3, j - 2));
}

std::int64_t harm_count(int n, int d) {
  std::int64_t s = 0;
  for (int j = 0; j <= n; ++j) s += dim_harm(j, d);
  return s;
}

void assoc_legendre_table(int maxj, double u, std::vector<double>& out) {
  legendre_table_us(maxj, u, std::sqrt(std::max(0.0, 1.0 - u * u)), out);
}

void assoc_legendre_table(int maxj, double u, double s, std::vector<double>& out) {
  legendre_table_us(maxj, u, s, out);
}

void sph_harm_all(int j, int d, const Point& xi, std::span<double> out) {
  if (d != 2 && d != 3) throw ParameterError("spherical harmonics are implemented for d = 2, 3");
  if (static_cast<std::int64_t>(out.size()) != dim_harm(j, d)) {
    throw ParameterError("sph_harm_all: output size must equal dim(H_j^d)");
  }
  const double phi = std::atan2(xi[1], xi[0]);
  if (d == 2) {
    if (j == 0) {
      out[0] = 1.0 / std::sqrt(2.0 * kPi);
    } else {
      out[0] = std::cos(j * phi) / std::sqrt(kPi);
      out[1] = std::sin(j * phi) / std::sqrt(kPi);
    }
    return;
  }
  std::vector<double> tab;
  legendre_table_us(j, std::clamp(xi[2], -1.0, 1.0), std::hypot(xi[0], xi[1]), tab);
  const double* row = &tab[static_cast<std::size_t>(j) * (j + 1)];
  out[0] = row[0] / std::sqrt(2.0 * kPi);
  for (int m = 1; m <= j; ++m) {
    out[2 * m - 1] = row[m] * std::cos(m * phi) / std::sqrt(kPi);
    out[2 * m] = row[m] * std::sin(m * phi) / std::sqrt(kPi);
  }
}

double sph_harm_real(int j, int k, int d, const Point& xi) {
  if (d != 2 && d != 3) throw ParameterError("spherical harmonics are implemented for d = 2, 3");
  const std::int64_t dim = dim_harm(j, d);
  if (k < 1 || k > dim) {
    throw ParameterError("harmonic order k = " + std::to_string(k) + " out of range for j = " +
                         std::to_string(j));
  }
  std::vector<double> all(static_cast<std::size_t>(dim));
  sph_harm_all(j, d, xi, all);
  return all[k - 1];
}

// ---------------------------------------------------------------- Zernike

double zernike_radial(int i, double ell, int d, double r) {
  const double beta = ell + (d - 2) / 2.0;
  const double gamma = std::sqrt(4.0 * i + 2.0 * ell + d);
  double rl;
  if (r == 0.0) {
    if (ell < 0.0) throw DomainError("Z with negative l_j is undefined at the origin");
    rl = ell == 0.0 ? 1.0 : 0.0;
  } else {
    rl = std::pow(r, ell);
  }
  return gamma * specfun::jacobi_poly(i, specfun::JacobiParams(0.0, beta), 2.0 * r * r - 1.0) * rl;
}

Point direction(const Point& x, int d) {
  const double r = geometry::norm(x, d);
  if (r == 0.0) {
    Point e{0.0, 0.0, 0.0};
    e[d - 1] = 1.0;
    return e;
  }
  Point xi{0.0, 0.0, 0.0};
  for (int t = 0; t < d; ++t) xi[t] = x[t] / r;
  return xi;
}

double zernike_eval(const BasisIndex& idx, const EllSequence& ell, int d, const Point& x) {
  const double r = geometry::norm(x, d);
  if (r > 1.0 + 1e-12) throw DomainError("zernike_eval: point outside the unit ball");
  const double rad = zernike_radial(idx.i, ell(idx.j), d, std::min(r, 1.0));
  if (rad == 0.0) return 0.0;
  return rad * sph_harm_real(idx.j, idx.k, d, direction(x, d));
}

// ---------------------------------------------------------------- shapes

SpectralShape SpectralShape::triangle() { return {}; }

SpectralShape SpectralShape::rectangle(double kappa) {
  if (!(kappa > 0.0)) throw ValidationError("rectangle shape needs kappa > 0");
  SpectralShape s;
  s.kind_ = Kind::Rectangle;
  s.kappa_ = kappa;
  return s;
}

SpectralShape SpectralShape::quarter_disc() {
  SpectralShape s;
  s.kind_ = Kind::QuarterDisc;
  return s;
}

SpectralShape SpectralShape::inverted_quarter_disc() {
  SpectralShape s;
  s.kind_ = Kind::InvertedQuarterDisc;
  return s;
}

SpectralShape SpectralShape::piecewise_linear(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ValidationError("piecewise-linear shape needs >= 2 points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first)) {
      throw ValidationError("piecewise-linear shape points must have increasing x");
    }
  }
  for (const auto& p : points) {
    if (p.first < 0.0 || p.second < 0.0) {
      throw ValidationError("piecewise-linear shape points must lie in [0,inf)^2");
    }
  }
  SpectralShape s;
  s.kind_ = Kind::PiecewiseLinear;
  s.points_ = std::move(points);
  return s;
}

SpectralShape SpectralShape::from_name(const std::string& name) {
  if (name == "triangle") return triangle();
  if (name == "quarter_disc") return quarter_disc();
  if (name == "inverted_quarter_disc") return inverted_quarter_disc();
  if (name.rfind("rectangle:", 0) == 0) {
    return rectangle(parse_number(name.substr(10), "rectangle shape"));
  }
  throw ValidationError("unknown spectral shape '" + name + "'");
}

bool SpectralShape::contains(double x, double y) const {
  if (x < -kShapeTol || y < -kShapeTol) return false;
  switch (kind_) {
    case Kind::Triangle:
      return x <= 0.5 + kShapeTol && y <= 1.0 - 2.0 * x + kShapeTol;
    case Kind::Rectangle:
      return x <= 1.0 + kShapeTol && y <= kappa_ + kShapeTol;
    case Kind::QuarterDisc:
      return x <= 1.0 + kShapeTol && y <= 1.0 + kShapeTol && x * x + y * y <= 1.0 + kShapeTol;
    case Kind::InvertedQuarterDisc:
      return x <= 1.0 + kShapeTol && y <= 1.0 + kShapeTol &&
             (1.0 - x) * (1.0 - x) + (1.0 - y) * (1.0 - y) >= 1.0 - kShapeTol;
    case Kind::PiecewiseLinear: {
      if (x > points_.back().first + kShapeTol) return false;
      double f = points_.front().second;
      if (x >= points_.back().first) {
        f = points_.back().second;
      } else if (x > points_.front().first) {
        for (std::size_t i = 1; i < points_.size(); ++i) {
          if (x <= points_[i].first) {
            const auto [x0, y0] = points_[i - 1];
            const auto [x1, y1] = points_[i];
            f = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            break;
          }
        }
      }
      return y <= f + kShapeTol;
    }
  }
  return false;
}

std::pair<double, double> SpectralShape::extent() const {
  switch (kind_) {
    case Kind::Triangle:
      return {0.5, 1.0};
    case Kind::Rectangle:
      return {1.0, kappa_};
    case Kind::QuarterDisc:
    case Kind::InvertedQuarterDisc:
      return {1.0, 1.0};
    case Kind::PiecewiseLinear: {
      double ymax = 0.0;
      for (const auto& p : points_) ymax = std::max(ymax, p.second);
      return {points_.back().first, ymax};
    }
  }
  return {0.0, 0.0};
}

void SpectralShape::validate_low_pass() const {
  constexpr int kGrid = 64;
  const auto [ex, ey] = extent();
  if (!contains(0.0, 0.0)) throw ValidationError("spectral shape does not contain the origin");
  auto at = [&](int a, int b) { return contains(ex * a / (kGrid - 1), ey * b / (kGrid - 1)); };
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      if (!at(a, b)) continue;
      if ((a > 0 && !at(a - 1, b)) || (b > 0 && !at(a, b - 1))) {
        throw ValidationError("spectral shape '" + name() + "' is not simple low-pass");
      }
    }
  }
}

std::string SpectralShape::name() const {
  switch (kind_) {
    case Kind::Triangle:
      return "triangle";
    case Kind::Rectangle:
      return "rectangle:" + fmt_double(kappa_);
    case Kind::QuarterDisc:
      return "quarter_disc";
    case Kind::InvertedQuarterDisc:
      return "inverted_quarter_disc";
    case Kind::PiecewiseLinear: {
      std::string s = "piecewise";
      for (const auto& p : points_) s += ":" + fmt_double(p.first) + "/" + fmt_double(p.second);
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------- index sets

IndexSpec IndexSpec::poly(int n) {
  if (n < 0) throw ValidationError("poly(n) needs n >= 0");
  IndexSpec s;
  s.kind = Kind::PolyDegree;
  s.n = n;
  return s;
}

IndexSpec IndexSpec::fourier_jacobi(int m, int n) {
  if (m < 0 || n < 0) throw ValidationError("fj(m,n) needs m, n >= 0");
  IndexSpec s;
  s.kind = Kind::FourierJacobi;
  s.m = m;
  s.n = n;
  return s;
}

IndexSpec IndexSpec::spectral(SpectralShape shape, double N) {
  if (!(N > 0.0)) throw ValidationError("shape(name,N) needs N > 0");
  IndexSpec s;
  s.kind = Kind::Shape;
  s.shape = std::move(shape);
  s.bandwidth = N;
  return s;
}

IndexSpec IndexSpec::sum(int n) {
  if (n < 0) throw ValidationError("sum(n) needs n >= 0");
  IndexSpec s;
  s.kind = Kind::SumDegree;
  s.n = n;
  return s;
}

IndexSpec IndexSpec::noll(int count) {
  if (count < 1) throw ValidationError("noll(count) needs count >= 1");
  IndexSpec s;
  s.kind = Kind::Noll;
  s.count = count;
  return s;
}

IndexSpec IndexSpec::parse(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      close + 1 != text.size()) {
    throw ValidationError("malformed index-set spec '" + text + "'");
  }
  const std::string name = text.substr(0, open);
  const std::string body = text.substr(open + 1, close - open - 1);
  std::vector<std::string> args;
  std::stringstream ss(body);
  for (std::string part; std::getline(ss, part, ',');) args.push_back(part);
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw ValidationError("index-set spec '" + text + "' expects " + std::to_string(k) +
                            " argument(s)");
    }
  };
  if (name == "poly") {
    need(1);
    return poly(parse_int(args[0], text));
  }
  if (name == "fj") {
    need(2);
    return fourier_jacobi(parse_int(args[0], text), parse_int(args[1], text));
  }
  if (name == "sum") {
    need(1);
    return sum(parse_int(args[0], text));
  }
  if (name == "noll") {
    need(1);
    return noll(parse_int(args[0], text));
  }
  if (name == "shape") {
    need(2);
    std::string sname = args[0];
    sname.erase(std::remove(sname.begin(), sname.end(), ' '), sname.end());
    return spectral(SpectralShape::from_name(sname), parse_number(args[1], text));
  }
  throw ValidationError("unknown index-set kind '" + name + "'");
}

std::string IndexSpec::to_string() const {
  switch (kind) {
    case Kind::PolyDegree:
      return "poly(" + std::to_string(n) + ")";
    case Kind::FourierJacobi:
      return "fj(" + std::to_string(m) + "," + std::to_string(n) + ")";
    case Kind::Shape:
      return "shape(" + shape.name() + "," + fmt_double(bandwidth) + ")";
    case Kind::SumDegree:
      return "sum(" + std::to_string(n) + ")";
    case Kind::Noll:
      return "noll(" + std::to_string(count) + ")";
  }
  return {};
}

IndexSet::IndexSet(IndexSpec spec, int d, std::vector<BasisIndex> items)
    : spec_(std::move(spec)), d_(d), items_(std::move(items)) {
  for (const auto& b : items_) {
    max_i_ = std::max(max_i_, b.i);
    max_j_ = std::max(max_j_, b.j);
  }
}

IndexSet index_set(const IndexSpec& spec, int d) {
  if (d != 2 && d != 3) throw ParameterError("index sets are implemented for d = 2, 3");
  std::vector<BasisIndex> items;
  auto push_all_k = [&](int i, int j) {
    const auto dim = dim_harm(j, d);
    for (int k = 1; k <= dim; ++k) items.push_back({i, j, k});
  };
  switch (spec.kind) {
    case IndexSpec::Kind::PolyDegree:
      for (int j = 0; j <= spec.n; ++j)
        for (int i = 0; 2 * i + j <= spec.n; ++i) push_all_k(i, j);
      break;
    case IndexSpec::Kind::FourierJacobi:
      for (int j = 0; j <= spec.n; ++j)
        for (int i = 0; i <= spec.m; ++i) push_all_k(i, j);
      break;
    case IndexSpec::Kind::SumDegree:
      for (int j = 0; j <= spec.n; ++j)
        for (int i = 0; i + j <= spec.n; ++i) push_all_k(i, j);
      break;
    case IndexSpec::Kind::Shape: {
      spec.shape.validate_low_pass();
      const auto [ex, ey] = spec.shape.extent();
      const double N = spec.bandwidth;
      const int imax = static_cast<int>(std::floor(ex * N + 1e-9));
      const int jmax = static_cast<int>(std::floor(ey * N + 1e-9));
      for (int j = 0; j <= jmax; ++j)
        for (int i = 0; i <= imax; ++i)
          if (spec.shape.contains(i / N, j / N)) push_all_k(i, j);
      break;
    }
    case IndexSpec::Kind::Noll: {
      if (d != 2) throw ValidationError("noll(count) index sets exist only for d = 2");
      for (int jn = 1; jn <= spec.count; ++jn) {
        const NollMode mode = noll_map(jn);
        const int k = mode.variant == NollMode::Variant::Sin ? 2 : 1;
        items.push_back({(mode.n - mode.m) / 2, mode.m, k});
      }
      std::sort(items.begin(), items.end(), [](const BasisIndex& a, const BasisIndex& b) {
        return std::tie(a.j, a.i, a.k) < std::tie(b.j, b.i, b.k);
      });
      break;
    }
  }
  return IndexSet(spec, d, std::move(items));
}

NollMode noll_map(int j) {
  if (j < 1) throw ParameterError("Noll index starts at 1");
  NollMode mode;
  const int n = static_cast<int>(std::floor(std::sqrt(2.0 * j - 1.0) + 0.5)) - 1;
  int m;
  if (n % 2 == 0) {
    m = 2 * ((2 * j + 1 - n * (n + 1)) / 4);
  } else {
    m = 2 * ((2 * (j + 1) - n * (n + 1)) / 4) - 1;
  }
  mode.n = n;
  mode.m = m;
  if (m == 0) {
    mode.variant = NollMode::Variant::None;
  } else {
    mode.variant = (j % 2 == 0) ? NollMode::Variant::Sin : NollMode::Variant::Cos;
  }
  return mode;
}

}  // namespace ballslep::basis
