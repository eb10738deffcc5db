#include "ballslep/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <variant>

#include "ballslep/asymptotics.hpp"
#include "ballslep/basis.hpp"
#include "ballslep/concentration.hpp"
#include "ballslep/geometry.hpp"
#include "ballslep/kernels.hpp"

namespace ballslep::experiment {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxPolyDegree = 24;
constexpr std::size_t kMaxFjDim = 4000;

const std::vector<std::pair<Kind, const char*>> kKindNames = {
    {Kind::Spectrum, "spectrum"},     {Kind::Shannon, "shannon"}, {Kind::KernelScan, "kernel-scan"},
    {Kind::Conjecture, "conjecture"}, {Kind::Optics, "optics"},   {Kind::Bounds, "bounds"},
    {Kind::Verify, "verify"},
};

// Allowed params keys per experiment kind.
const std::map<Kind, std::set<std::string>>& param_keys() {
  static const std::map<Kind, std::set<std::string>> keys = {
      {Kind::Spectrum, {"eps", "tau", "n_list"}},
      {Kind::Shannon, {"notion", "radii", "quadrature_check"}},
      {Kind::KernelScan, {"radii", "universality_radius", "directions"}},
      {Kind::Conjecture, {"mode", "kappa", "m_list", "shape", "n_list", "radii"}},
      {Kind::Optics, {"n", "radii"}},
      {Kind::Bounds,
       {"remez_n", "ratios", "remez_check_n", "remez_samples", "remez_radius", "seed", "gap_radius",
        "gap_n", "nikolskii_n"}},
      {Kind::Verify, {"tolerance"}},
  };
  return keys;
}

// ---------------------------------------------------------------- strict JSON readers

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double read_number(const Json& obj, const std::string& where, const std::string& key, double def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path_of(where, key), "expected a number");
  return v.get<double>();
}

int read_int(const Json& obj, const std::string& where, const std::string& key, int def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path_of(where, key), "expected an integer");
  return v.get<int>();
}

bool read_bool(const Json& obj, const std::string& where, const std::string& key, bool def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(path_of(where, key), "expected true or false");
  return v.get<bool>();
}

std::string read_string(const Json& obj, const std::string& where, const std::string& key,
                        const std::string& def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path_of(where, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> read_numbers(const Json& obj, const std::string& where, const std::string& key,
                                 std::vector<double> def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(path_of(where, key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path_of(where, key), "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> read_ints(const Json& obj, const std::string& where, const std::string& key,
                           std::vector<int> def) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(path_of(where, key), "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(path_of(where, key), "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 1; k <= 99; ++k) r.push_back(k / 100.0);
  return r;
}

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

// ---------------------------------------------------------------- resolved parameters

struct SpectrumParams {
  std::vector<double> eps;
  double tau = 0.5;
  std::vector<int> n_list;
};

struct ShannonParams {
  std::string notion;
  std::vector<double> radii;
  bool quadrature_check = true;
};

struct KernelScanParams {
  std::vector<double> radii;
  double universality_radius = 0.4;
  int directions = 5;
};

struct ConjectureParams {
  std::string mode;
  double kappa = 0.5;
  std::vector<int> m_list;
  std::string shape;
  std::vector<int> n_list;
  std::vector<double> radii;
};

struct OpticsParams {
  int n = 40;
  std::vector<double> radii;
};

struct BoundsParams {
  std::vector<int> remez_n;
  std::vector<double> ratios;
  int remez_check_n = 6;
  int remez_samples = 200;
  double remez_radius = 0.5;
  std::uint64_t seed = 42;
  double gap_radius = 0.5;
  std::vector<int> gap_n;
  std::vector<int> nikolskii_n;
};

struct VerifyParams {
  double tolerance = 1e-8;
};

const std::string kP = "params";

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool radii_ok(const std::vector<double>& r) {
  if (r.empty()) return false;
  for (double v : r)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

SpectrumParams spectrum_params(const Json& p) {
  SpectrumParams s;
  s.eps = read_numbers(p, kP, "eps", {0.05, 0.1, 0.2});
  s.tau = read_number(p, kP, "tau", 0.5);
  s.n_list = read_ints(p, kP, "n_list", {});
  require(!s.eps.empty(), "params.eps", "must not be empty");
  for (double e : s.eps) require(e > 0.0 && e < 0.5, "params.eps", "entries must lie in (0, 1/2)");
  require(s.tau > 0.0 && s.tau < 1.0, "params.tau", "must lie in (0, 1)");
  for (int n : s.n_list) require(n >= 0, "params.n_list", "entries must be >= 0");
  return s;
}

ShannonParams shannon_params(const Json& p) {
  ShannonParams s;
  s.notion = read_string(p, kP, "notion", "both");
  s.radii = read_numbers(p, kP, "radii", default_radii());
  s.quadrature_check = read_bool(p, kP, "quadrature_check", true);
  require(s.notion == "W0" || s.notion == "W0_tilde" || s.notion == "both", "params.notion",
          "expected W0, W0_tilde or both");
  for (double r : s.radii) require(r > 0.0 && r < 1.0, "params.radii", "entries must lie in (0, 1)");
  return s;
}

KernelScanParams kernel_scan_params(const Json& p) {
  KernelScanParams s;
  s.radii = read_numbers(p, kP, "radii", default_radii());
  s.universality_radius = read_number(p, kP, "universality_radius", 0.4);
  s.directions = read_int(p, kP, "directions", 5);
  for (double r : s.radii) require(r >= 0.0 && r < 1.0, "params.radii", "entries must lie in [0, 1)");
  require(s.universality_radius >= 0.0 && s.universality_radius < 1.0, "params.universality_radius",
          "must lie in [0, 1)");
  require(s.directions >= 0 && s.directions <= 64, "params.directions", "must lie in 0..64");
  return s;
}

ConjectureParams conjecture_params(const Json& p) {
  ConjectureParams s;
  s.mode = read_string(p, kP, "mode", "kappa");
  s.kappa = read_number(p, kP, "kappa", 0.5);
  s.m_list = read_ints(p, kP, "m_list", {10, 20, 40});
  s.shape = read_string(p, kP, "shape", "quarter_disc");
  s.n_list = read_ints(p, kP, "n_list", {10, 20, 40});
  s.radii = read_numbers(p, kP, "radii", default_radii());
  require(s.mode == "kappa" || s.mode == "omega", "params.mode", "expected kappa or omega");
  require(s.kappa > 0.0, "params.kappa", "must be > 0");
  for (int m : s.m_list) require(m >= 0, "params.m_list", "entries must be >= 0");
  for (int n : s.n_list) require(n >= 0, "params.n_list", "entries must be >= 0");
  for (double r : s.radii) require(r >= 0.0 && r < 1.0, "params.radii", "entries must lie in [0, 1)");
  try {
    basis::SpectralShape::from_name(s.shape).validate_low_pass();
  } catch (const Error& e) {
    throw ConfigError("params.shape", e.what());
  }
  return s;
}

OpticsParams optics_params(const Json& p) {
  OpticsParams s;
  s.n = read_int(p, kP, "n", 40);
  s.radii = read_numbers(p, kP, "radii", default_radii());
  require(s.n >= 0 && s.n <= 200, "params.n", "must lie in 0..200");
  require(radii_ok(s.radii), "params.radii", "entries must lie in [0, 1]");
  return s;
}

BoundsParams bounds_params(const Json& p) {
  BoundsParams s;
  s.remez_n = read_ints(p, kP, "remez_n", range(1, 10));
  s.ratios = read_numbers(p, kP, "ratios", {0.05, 0.1, 0.25, 0.5, 0.875, 1.0});
  s.remez_check_n = read_int(p, kP, "remez_check_n", 6);
  s.remez_samples = read_int(p, kP, "remez_samples", 200);
  s.remez_radius = read_number(p, kP, "remez_radius", 0.5);
  const int seed = read_int(p, kP, "seed", 42);
  s.gap_radius = read_number(p, kP, "gap_radius", 0.5);
  s.gap_n = read_ints(p, kP, "gap_n", range(4, 8));
  s.nikolskii_n = read_ints(p, kP, "nikolskii_n", range(2, 8));
  require(seed >= 0, "params.seed", "must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  for (int n : s.remez_n) require(n >= 0, "params.remez_n", "entries must be >= 0");
  for (double r : s.ratios) require(r > 0.0 && r <= 1.0, "params.ratios", "entries must lie in (0, 1]");
  require(s.remez_check_n >= 0 && s.remez_check_n <= 16, "params.remez_check_n", "must lie in 0..16");
  require(s.remez_samples >= 1, "params.remez_samples", "must be >= 1");
  require(s.remez_radius > 0.0 && s.remez_radius <= 1.0, "params.remez_radius", "must lie in (0, 1]");
  require(s.gap_radius > 0.0 && s.gap_radius < 1.0, "params.gap_radius", "must lie in (0, 1)");
  for (int n : s.gap_n) require(n >= 1 && n <= kMaxPolyDegree, "params.gap_n", "entries must lie in 1..24");
  for (int n : s.nikolskii_n) require(n >= 1 && n <= 60, "params.nikolskii_n", "entries must lie in 1..60");
  return s;
}

VerifyParams verify_params(const Json& p) {
  VerifyParams s;
  s.tolerance = read_number(p, kP, "tolerance", 1e-8);
  require(s.tolerance > 0.0, "params.tolerance", "must be > 0");
  return s;
}

// ---------------------------------------------------------------- library objects

geometry::Domain make_domain(const DomainConfig& c) {
  try {
    if (c.kind == "full_ball") return geometry::Domain::full_ball(c.d);
    if (c.kind == "shell") return geometry::Domain::shell(c.d, c.r1, c.r2);
    if (c.kind == "tesseroid") {
      if (c.d != 3) throw ConfigError("domain.d", "tesseroid requires d = 3 (use sector for d = 2)");
      return geometry::Domain::tesseroid(c.r1, c.r2, c.theta1, c.theta2, c.phi1, c.phi2);
    }
    if (c.kind == "sector") {
      if (c.d != 2) throw ConfigError("domain.d", "sector requires d = 2");
      return geometry::Domain::sector(c.r1, c.r2, c.phi1, c.phi2);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("domain", e.what());
  }
  throw ConfigError("domain.kind", "expected full_ball, shell, tesseroid or sector");
}

basis::EllSequence make_ell(const ExperimentConfig& c, int max_j) {
  try {
    auto ell = basis::EllSequence::parse(c.basis.ell);
    ell.validate(c.domain.d, max_j);
    return ell;
  } catch (const Error& e) {
    throw ConfigError("basis.ell", e.what());
  }
}

basis::IndexSpec make_spec(const ExperimentConfig& c) {
  try {
    return basis::IndexSpec::parse(c.basis.index);
  } catch (const Error& e) {
    throw ConfigError("basis.index", e.what());
  }
}

basis::IndexSet make_set(const basis::IndexSpec& spec, int d, const std::string& key) {
  try {
    return basis::index_set(spec, d);
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

void guard_gram(const basis::IndexSpec& spec, const basis::IndexSet& set, bool force, const std::string& key) {
  if (force) return;
  if (spec.kind == basis::IndexSpec::Kind::PolyDegree && spec.n > kMaxPolyDegree) {
    throw ConfigError(key, "polynomial degree " + std::to_string(spec.n) +
                               " exceeds the default limit 24; pass --force to run anyway");
  }
  if (set.size() > kMaxFjDim) {
    throw ConfigError(key, "basis dimension " + std::to_string(set.size()) +
                               " exceeds the default limit 4000; pass --force to run anyway");
  }
}

concentration::GramOptions gram_options(const ExperimentConfig& c) {
  concentration::GramOptions o;
  o.counts = {c.numeric.radial, c.numeric.polar, c.numeric.azimuthal};
  o.threads = c.numeric.threads;
  return o;
}

std::optional<asymptotics::Notion> notion_for(const basis::IndexSpec& spec, const basis::EllSequence& ell) {
  using K = basis::IndexSpec::Kind;
  if (spec.kind == K::FourierJacobi) return asymptotics::Notion::FourierJacobi;
  if (!ell.is_polynomial_family()) return std::nullopt;
  if (spec.kind == K::PolyDegree) return asymptotics::Notion::PolyDegree;
  if (spec.kind == K::Shape && spec.shape.kind() == basis::SpectralShape::Kind::Triangle)
    return asymptotics::Notion::PolyDegree;
  return std::nullopt;
}

// ---------------------------------------------------------------- CSV

using Cell = std::variant<std::string, double, long long>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  std::string render(const std::string& fmt) const {
    std::string out;
    auto emit_row = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
      }
      out += '\n';
    };
    emit_row(header_);
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      for (const auto& c : row) {
        if (const auto* s = std::get_if<std::string>(&c)) cells.push_back(*s);
        else if (const auto* d = std::get_if<double>(&c)) cells.push_back(format_number(*d, fmt));
        else cells.push_back(std::to_string(std::get<long long>(c)));
      }
      emit_row(cells);
    }
    return out;
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

class Writer {
 public:
  Writer(fs::path dir, std::string fmt) : dir_(std::move(dir)), fmt_(std::move(fmt)) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const CsvTable& t) { text(name, t.render(fmt_)); }

  void text(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + p.string());
    f << body;
    files_.push_back(p);
  }

  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path dir_;
  std::string fmt_;
  std::vector<fs::path> files_;
};

long long ll(std::size_t v) { return static_cast<long long>(v); }

Json num_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// ---------------------------------------------------------------- experiments

Json run_spectrum(const ExperimentConfig& c, Writer& w) {
  const auto p = spectrum_params(c.params);
  const auto dom = make_domain(c.domain);
  const auto spec = make_spec(c);
  Json res;
  res["domain"] = dom.describe();

  auto one = [&](const basis::IndexSpec& sp, bool want_vectors) {
    const auto set = make_set(sp, c.domain.d, "basis.index");
    const auto ell = make_ell(c, set.max_j());
    const auto g = concentration::assemble_gram(dom, set, ell, gram_options(c));
    auto eig = concentration::eigensolve_sym(g, want_vectors);
    return std::make_tuple(set, ell, std::move(eig));
  };

  if (p.n_list.empty()) {
    auto [set, ell, eig] = one(spec, c.numeric.vectors);
    const auto& rep = eig.report;
    CsvTable t({"rank", "eigenvalue"});
    for (std::size_t r = 0; r < rep.dim(); ++r) t.add({ll(r + 1), rep.eigenvalues()[r]});
    w.csv("eigenvalues.csv", t);
    if (c.numeric.vectors) {
      CsvTable v({"rank", "i", "j", "k", "coefficient"});
      for (std::size_t r = 0; r < rep.dim(); ++r)
        for (std::size_t a = 0; a < set.size(); ++a)
          v.add({ll(r + 1), ll(set[a].i), ll(set[a].j), ll(set[a].k), eig.vectors[r * set.size() + a]});
      w.csv("eigenvectors.csv", v);
    }
    res["index"] = spec.to_string();
    res["dim"] = rep.dim();
    res["trace"] = rep.trace();
    res["hs2"] = rep.hs2();
    res["lambda1"] = rep.lambda1();
    res["shannon_empirical"] = rep.shannon_empirical();
    const auto notion = notion_for(spec, ell);
    res["shannon_asymptotic"] =
        notion ? Json(asymptotics::predicted_shannon(dom, *notion).value) : Json(nullptr);
    Json trans = Json::array();
    for (double e : p.eps) {
      const auto st = concentration::spectrum_stats(rep, e, p.tau);
      trans.push_back({{"eps", e}, {"count", st.transition}, {"relative", st.transition_rel}});
    }
    const auto st = concentration::spectrum_stats(rep, p.eps.front(), p.tau);
    res["counts"] = {{"transition", trans},
                     {"concentrated", {{"tau", p.tau}, {"count", st.concentrated}, {"relative", st.concentrated_rel}}}};
    return res;
  }

  CsvTable t({"n", "dim", "eps", "count", "relative"});
  CsvTable s({"n", "dim", "trace", "shannon_empirical", "shannon_asymptotic", "lambda1"});
  Json rows = Json::array();
  for (int n : p.n_list) {
    auto sp = spec;
    sp.n = n;
    auto [set, ell, eig] = one(sp, false);
    const auto& rep = eig.report;
    const auto notion = notion_for(sp, ell);
    const double asym = notion ? asymptotics::predicted_shannon(dom, *notion).value : std::nan("");
    for (double e : p.eps) {
      const auto st = concentration::spectrum_stats(rep, e, p.tau);
      t.add({ll(n), ll(rep.dim()), e, ll(st.transition), st.transition_rel});
    }
    s.add({ll(n), ll(rep.dim()), rep.trace(), rep.shannon_empirical(), asym, rep.lambda1()});
    rows.push_back({{"n", n}, {"dim", rep.dim()}, {"shannon_empirical", rep.shannon_empirical()},
                    {"shannon_asymptotic", num_or_null(asym)}});
  }
  w.csv("transwidth.csv", t);
  w.csv("shannon.csv", s);
  res["index"] = spec.to_string();
  res["rows"] = rows;
  return res;
}

Json run_shannon(const ExperimentConfig& c, Writer& w) {
  const auto p = shannon_params(c.params);
  const auto dom = make_domain(c.domain);
  const int d = c.domain.d;
  Json res;
  res["domain"] = dom.describe();
  Json preds = Json::array();
  for (auto notion : {asymptotics::Notion::PolyDegree, asymptotics::Notion::FourierJacobi}) {
    if (p.notion != "both" && p.notion != asymptotics::to_string(notion)) continue;
    const auto pr = asymptotics::predicted_shannon(dom, notion);
    Json e = {{"notion", asymptotics::to_string(notion)},
              {"value", pr.value},
              {"method", asymptotics::to_string(pr.method)}};
    if (p.quadrature_check) e["quadrature"] = asymptotics::shannon_by_quadrature(dom, notion);
    preds.push_back(e);
  }
  res["predictions"] = preds;
  CsvTable t({"r", "W0", "W0_tilde"});
  for (double r : p.radii) t.add({r, kernels::w0_radial(r, d), kernels::w0_tilde_radial(r, d)});
  w.csv("weights.csv", t);
  return res;
}

Json run_kernel_scan(const ExperimentConfig& c, Writer& w) {
  const auto p = kernel_scan_params(c.params);
  const int d = c.domain.d;
  const auto spec = make_spec(c);
  const auto set = make_set(spec, d, "basis.index");
  const auto ell = make_ell(c, set.max_j());
  const kernels::SumKernel k(set, ell);
  CsvTable t({"r", "value", "reference"});
  for (double r : p.radii) {
    geometry::Point x{0.0, 0.0, 0.0};
    x[d - 1] = r;
    const auto cv = kernels::christoffel_ratio(k, x);
    t.add({r, cv.value, cv.target});
  }
  w.csv("christoffel.csv", t);
  Json res = {{"index", spec.to_string()}, {"dim", set.size()}};
  if (spec.kind == basis::IndexSpec::Kind::PolyDegree && ell.is_polynomial_family() && p.directions > 0) {
    // Offsets v of unit length along fixed, deterministic directions.
    CsvTable u({"direction", "ratio", "reference"});
    geometry::Point x{0.0, 0.0, 0.0};
    x[0] = p.universality_radius;
    std::vector<geometry::Point> offs;
    for (int q = 0; q < p.directions; ++q) {
      const double a = kPi * (q + 0.5) / p.directions;
      geometry::Point v{std::cos(a), std::sin(a), 0.0};
      if (d == 3) v = {std::cos(a) * std::sin(1.0 + q), std::sin(a) * std::sin(1.0 + q), std::cos(1.0 + q)};
      offs.push_back(v);
    }
    const auto samples = kernels::universality_scan_poly(0.5, spec.n, d, x, offs);
    for (std::size_t q = 0; q < samples.size(); ++q)
      u.add({ll(q), samples[q].valid ? samples[q].ratio : std::nan(""), samples[q].reference});
    w.csv("universality.csv", u);
  }
  return res;
}

void emit_curves(Writer& w, const std::string& name, const std::vector<asymptotics::Curve>& curves) {
  CsvTable t({"label", "dim", "r", "value", "reference"});
  for (const auto& cv : curves)
    for (const auto& pt : cv.points) t.add({cv.label, ll(cv.dim), pt.r, pt.value, pt.reference});
  w.csv(name, t);
}

Json run_conjecture(const ExperimentConfig& c, Writer& w) {
  const auto p = conjecture_params(c.params);
  const int d = c.domain.d;
  Json res = {{"mode", p.mode}, {"d", d}};
  const int threads = c.numeric.threads;
  if (p.mode == "kappa") {
    int max_n = 0;
    for (int m : p.m_list) max_n = std::max(max_n, static_cast<int>(std::lround(p.kappa * m)));
    const auto ell = make_ell(c, max_n);
    const auto curves = asymptotics::kappa_scan(ell, d, p.kappa, p.m_list, p.radii, threads);
    emit_curves(w, "curves.csv", curves);
    res["kappa"] = p.kappa;
    res["curves"] = curves.size();
  } else {
    int max_n = 0;
    for (int n : p.n_list) max_n = std::max(max_n, n);
    const auto ell = make_ell(c, 2 * max_n + 2);
    const auto shape = basis::SpectralShape::from_name(p.shape);
    const auto curves = asymptotics::omega_scan(shape, ell, d, p.n_list, p.radii, threads);
    emit_curves(w, "curves.csv", curves);
    res["shape"] = shape.name();
    res["curves"] = curves.size();
  }
  res["note"] = "data only; no convergence is asserted";
  return res;
}

Json run_optics(const ExperimentConfig& c, Writer& w) {
  const auto p = optics_params(c.params);
  require(c.domain.d == 2, "domain.d", "optics requires d = 2");
  const auto cmp = asymptotics::optics_compare(p.n, p.radii, c.numeric.threads);
  CsvTable t({"r", "total", "sum", "reference"});
  for (std::size_t q = 0; q < p.radii.size(); ++q)
    t.add({p.radii[q], cmp.total.points[q].value, cmp.sum.points[q].value, cmp.total.points[q].reference});
  w.csv("optics.csv", t);
  return {{"n", p.n},
          {"dim_total", cmp.total.dim},
          {"dim_sum", cmp.sum.dim},
          {"crossing", cmp.crossing ? Json(*cmp.crossing) : Json(nullptr)}};
}

Json run_bounds(const ExperimentConfig& c, Writer& w) {
  const auto p = bounds_params(c.params);
  const int d = c.domain.d;
  CsvTable t({"n", "ratio", "q", "argument", "t_n", "log_t_n"});
  for (int n : p.remez_n)
    for (double r : p.ratios) {
      const auto b = asymptotics::remez_bound(n, d, r);
      t.add({ll(n), r, b.q, b.argument, b.t_n, b.log_t_n});
    }
  w.csv("remez.csv", t);

  const auto chk = asymptotics::remez_empirical(p.remez_check_n, d, p.remez_radius, p.remez_samples, p.seed,
                                                4000, c.numeric.threads);

  const auto gaps = asymptotics::lambda1_gap_scan(d, p.gap_radius, p.gap_n, c.numeric.threads);
  CsvTable g({"n", "lambda1", "gap", "bound", "fitted_bound", "holds"});
  for (const auto& r : gaps)
    g.add({ll(r.n), r.lambda1, r.gap, r.bound, r.fitted_bound, std::string(r.holds ? "true" : "false")});
  w.csv("gap.csv", g);

  const auto nik = asymptotics::nikolskii_heuristic(d, p.nikolskii_n);
  CsvTable k({"n", "sup_over_l2", "n_factor", "fitted", "holds"});
  for (const auto& r : nik)
    k.add({ll(r.n), r.sup_over_l2, r.n_factor, r.fitted, std::string(r.holds ? "true" : "false")});
  w.csv("nikolskii.csv", k);

  bool gaps_hold = true;
  for (const auto& r : gaps) gaps_hold = gaps_hold && r.holds;
  bool nik_hold = true;
  for (const auto& r : nik) nik_hold = nik_hold && r.holds;
  return {{"remez_check",
           {{"n", chk.n}, {"samples", chk.samples}, {"violations", chk.violations}, {"bound", chk.bound},
            {"max_ratio", chk.max_ratio}}},
          {"gap_fit_holds", gaps_hold},
          {"nikolskii", {{"label", "heuristic"}, {"holds", nik_hold}}}};
}

Json run_verify(const ExperimentConfig& c, Writer& w) {
  const auto p = verify_params(c.params);
  const auto dom = make_domain(c.domain);
  const auto spec = make_spec(c);
  const auto set = make_set(spec, c.domain.d, "basis.index");
  const auto ell = make_ell(c, set.max_j());
  const auto g = concentration::assemble_gram(dom, set, ell, gram_options(c));
  const auto eig = concentration::eigensolve_sym(g, false);
  const auto r = concentration::verify_operator_identities(g, eig.report, c.numeric.threads);
  CsvTable t({"quantity", "value"});
  t.add({std::string("trace_matrix"), r.trace_matrix});
  t.add({std::string("trace_eigen"), r.trace_eigen});
  t.add({std::string("trace_quadrature"), r.trace_quadrature});
  t.add({std::string("hs2_eigen"), r.hs2_eigen});
  t.add({std::string("hs2_frobenius"), r.hs2_frobenius});
  t.add({std::string("trace_residual"), r.trace_residual});
  t.add({std::string("hs_residual"), r.hs_residual});
  w.csv("identities.csv", t);
  const bool ok = r.trace_relative < p.tolerance && r.hs_relative < p.tolerance;
  Json res = {{"domain", dom.describe()},
              {"index", spec.to_string()},
              {"dim", set.size()},
              {"trace_residual", r.trace_residual},
              {"hs_residual", r.hs_residual},
              {"trace_relative", r.trace_relative},
              {"hs_relative", r.hs_relative},
              {"tolerance", p.tolerance},
              {"pass", ok}};
  if (!ok) {
    w.text("summary.partial.json", res.dump(2) + "\n");
    throw NumericalQualityError("operator identity residuals exceed params.tolerance");
  }
  return res;
}

Json domain_json(const DomainConfig& d) {
  Json j = {{"kind", d.kind}, {"d", d.d}};
  if (d.kind == "shell" || d.kind == "tesseroid" || d.kind == "sector") {
    j["r1"] = d.r1;
    j["r2"] = d.r2;
  }
  if (d.kind == "tesseroid") {
    j["theta1"] = d.theta1;
    j["theta2"] = d.theta2;
  }
  if (d.kind == "tesseroid" || d.kind == "sector") {
    j["phi1"] = d.phi1;
    j["phi2"] = d.phi2;
  }
  return j;
}

DomainConfig domain_from_json(const Json& j) {
  DomainConfig d;
  check_keys(j, "domain", {"kind", "d", "r1", "r2", "theta1", "theta2", "phi1", "phi2"});
  d.kind = read_string(j, "domain", "kind", "full_ball");
  d.d = read_int(j, "domain", "d", d.kind == "sector" ? 2 : 3);
  std::set<std::string> allowed = {"kind", "d"};
  std::vector<std::string> needed;
  if (d.kind == "shell") needed = {"r1", "r2"};
  else if (d.kind == "tesseroid") needed = {"r1", "r2", "theta1", "theta2", "phi1", "phi2"};
  else if (d.kind == "sector") needed = {"r1", "r2", "phi1", "phi2"};
  else if (d.kind != "full_ball") throw ConfigError("domain.kind", "expected full_ball, shell, tesseroid or sector");
  for (const auto& k : needed) {
    if (!j.contains(k)) throw ConfigError("domain." + k, "required for domain kind " + d.kind);
    allowed.insert(k);
  }
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("domain." + k, "not used by domain kind " + d.kind);
  d.r1 = read_number(j, "domain", "r1", 0.0);
  d.r2 = read_number(j, "domain", "r2", 1.0);
  d.theta1 = read_number(j, "domain", "theta1", 0.0);
  d.theta2 = read_number(j, "domain", "theta2", d.kind == "tesseroid" ? kPi : 0.0);
  d.phi1 = read_number(j, "domain", "phi1", 0.0);
  d.phi2 = read_number(j, "domain", "phi2", 0.0);
  if (d.kind == "full_ball" || d.kind == "shell") {
    d.theta1 = d.theta2 = d.phi1 = d.phi2 = 0.0;
  }
  if (d.kind == "full_ball") {
    d.r1 = 0.0;
    d.r2 = 1.0;
  }
  if (d.kind == "sector") d.theta1 = d.theta2 = 0.0;
  return d;
}

// ---------------------------------------------------------------- presets

DomainConfig tess(double r1, double r2) {
  return {"tesseroid", 3, r1, r2, 0.3 * kPi, 0.9 * kPi, -0.6 * kPi, 0.9 * kPi};
}

ExperimentConfig make(Kind k, std::string name, DomainConfig dom, BasisConfig b, Json params) {
  ExperimentConfig c;
  c.kind = k;
  c.preset = std::move(name);
  c.domain = dom;
  c.basis = std::move(b);
  c.params = std::move(params);
  return c;
}

}  // namespace

// ---------------------------------------------------------------- public API

const char* to_string(Kind k) {
  for (const auto& [kk, name] : kKindNames)
    if (kk == k) return name;
  return "?";
}

Kind kind_from_string(const std::string& s) {
  for (const auto& [kk, name] : kKindNames)
    if (s == name) return kk;
  throw ConfigError("experiment", "unknown experiment kind '" + s + "'");
}

std::string format_number(double v, const std::string& number_format) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (number_format == "shortest") {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = to_string(c.kind);
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["domain"] = domain_json(c.domain);
  j["basis"] = {{"ell", c.basis.ell}, {"index", c.basis.index}};
  j["numeric"] = {{"radial", c.numeric.radial},
                  {"polar", c.numeric.polar},
                  {"azimuthal", c.numeric.azimuthal},
                  {"vectors", c.numeric.vectors},
                  {"threads", c.numeric.threads}};
  j["params"] = c.params;
  j["output"] = {{"dir", c.output.dir}, {"number_format", c.output.number_format}};
  return j;
}

ExperimentConfig from_json(const Json& j) {
  check_keys(j, "", {"experiment", "preset", "domain", "basis", "numeric", "params", "output"});
  ExperimentConfig c;
  if (!j.contains("experiment")) throw ConfigError("experiment", "required");
  c.kind = kind_from_string(read_string(j, "", "experiment", ""));
  c.preset = read_string(j, "", "preset", "");
  if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
  if (j.contains("basis")) {
    const auto& b = j.at("basis");
    check_keys(b, "basis", {"ell", "index"});
    c.basis.ell = read_string(b, "basis", "ell", c.basis.ell);
    c.basis.index = read_string(b, "basis", "index", c.basis.index);
  }
  if (j.contains("numeric")) {
    const auto& n = j.at("numeric");
    check_keys(n, "numeric", {"radial", "polar", "azimuthal", "vectors", "threads"});
    c.numeric.radial = read_int(n, "numeric", "radial", 0);
    c.numeric.polar = read_int(n, "numeric", "polar", 0);
    c.numeric.azimuthal = read_int(n, "numeric", "azimuthal", 0);
    c.numeric.vectors = read_bool(n, "numeric", "vectors", false);
    c.numeric.threads = read_int(n, "numeric", "threads", 1);
  }
  if (j.contains("params")) {
    c.params = j.at("params");
    check_keys(c.params, "params", param_keys().at(c.kind));
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"dir", "number_format"});
    c.output.dir = read_string(o, "output", "dir", c.output.dir);
    c.output.number_format = read_string(o, "output", "number_format", c.output.number_format);
  }
  return c;
}

void merge_into(Json& base, const Json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [k, v] : patch.items()) {
    if (v.is_object() && base.contains(k) && base[k].is_object()) merge_into(base[k], v);
    else base[k] = v;
  }
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) (*node)[part] = Json::object();
    node = &(*node)[part];
    if (!node->is_object()) throw ConfigError(key, "path goes through a non-object value");
    start = dot + 1;
  }
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    std::vector<Preset> v;
    const auto d1 = tess(0.1, 0.8);
    const auto d2 = tess(0.7, 0.9);
    v.push_back({"fig1-weights", "radial profiles of W_0 and tilde W_0, d = 3",
                 make(Kind::Shannon, "fig1-weights", {"full_ball", 3}, {}, Json::object())});
    v.push_back({"fig2-poly-D1", "eigenvalues on D1, total-degree bandlimit n = 16",
                 make(Kind::Spectrum, "fig2-poly-D1", d1, {"linear(0)", "poly(16)"}, Json::object())});
    v.push_back({"fig2-poly-D2", "eigenvalues on D2, total-degree bandlimit n = 16",
                 make(Kind::Spectrum, "fig2-poly-D2", d2, {"linear(0)", "poly(16)"}, Json::object())});
    v.push_back({"fig2-fj-D1", "eigenvalues on D1, Fourier-Jacobi bandlimit m = 30, n = 10",
                 make(Kind::Spectrum, "fig2-fj-D1", d1, {"linear(0)", "fj(30,10)"}, Json::object())});
    v.push_back({"fig2-fj-D2", "eigenvalues on D2, Fourier-Jacobi bandlimit m = 30, n = 10",
                 make(Kind::Spectrum, "fig2-fj-D2", d2, {"linear(0)", "fj(30,10)"}, Json::object())});
    const Json tw = {{"eps", {0.05, 0.1, 0.2}}, {"n_list", {2, 4, 6, 8, 10, 12, 14, 16}}};
    v.push_back({"fig3-transwidth-D1", "eigenvalue counts in [eps, 1 - eps] on D1 for several n",
                 make(Kind::Spectrum, "fig3-transwidth-D1", d1, {"linear(0)", "poly(16)"}, tw)});
    v.push_back({"fig3-transwidth-D2", "eigenvalue counts in [eps, 1 - eps] on D2 for several n",
                 make(Kind::Spectrum, "fig3-transwidth-D2", d2, {"linear(0)", "poly(16)"}, tw)});
    v.push_back({"fig4-kappa", "K(x,x)/dim for Fourier-Jacobi sets with n = kappa m, d = 2",
                 make(Kind::Conjecture, "fig4-kappa", {"full_ball", 2}, {},
                      {{"mode", "kappa"}, {"kappa", 0.5}, {"m_list", {10, 20, 40}}})});
    v.push_back({"fig5-omega", "K(x,x)/dim for the quarter-disc spectral shape, d = 2",
                 make(Kind::Conjecture, "fig5-omega", {"full_ball", 2}, {},
                      {{"mode", "omega"}, {"shape", "quarter_disc"}, {"n_list", {10, 20, 40}}})});
    v.push_back({"fig6-optics", "total-degree versus i + j <= n bandlimit on the disc, n = 40",
                 make(Kind::Optics, "fig6-optics", {"full_ball", 2}, {}, {{"n", 40}})});
    return v;
  }();
  return list;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

void validate(const ExperimentConfig& c, bool force) {
  check_keys(c.params, "params", param_keys().at(c.kind));
  require(c.numeric.threads >= 0 && c.numeric.threads <= 1024, "numeric.threads", "must lie in 0..1024");
  require(c.numeric.radial >= 0 && c.numeric.polar >= 0 && c.numeric.azimuthal >= 0, "numeric",
          "quadrature orders must be >= 0");
  require(c.output.number_format == "sci17" || c.output.number_format == "shortest", "output.number_format",
          "expected sci17 or shortest");
  require(!c.output.dir.empty(), "output.dir", "must not be empty");
  require(c.domain.d == 2 || c.domain.d == 3, "domain.d", "must be 2 or 3");
  const auto dom = make_domain(c.domain);
  (void)dom;

  switch (c.kind) {
    case Kind::Spectrum:
    case Kind::Verify: {
      const auto spec = make_spec(c);
      std::vector<basis::IndexSpec> specs{spec};
      if (c.kind == Kind::Spectrum) {
        const auto p = spectrum_params(c.params);
        if (!p.n_list.empty()) {
          require(spec.kind == basis::IndexSpec::Kind::PolyDegree ||
                      spec.kind == basis::IndexSpec::Kind::SumDegree,
                  "params.n_list", "requires a poly(n) or sum(n) index set");
          specs.clear();
          for (int n : p.n_list) {
            auto s = spec;
            s.n = n;
            specs.push_back(s);
          }
        }
      } else {
        verify_params(c.params);
      }
      for (const auto& s : specs) {
        const auto set = make_set(s, c.domain.d, "basis.index");
        guard_gram(s, set, force, c.kind == Kind::Spectrum && specs.size() > 1 ? "params.n_list" : "basis.index");
        make_ell(c, set.max_j());
      }
      break;
    }
    case Kind::Shannon:
      shannon_params(c.params);
      break;
    case Kind::KernelScan: {
      kernel_scan_params(c.params);
      const auto set = make_set(make_spec(c), c.domain.d, "basis.index");
      make_ell(c, set.max_j());
      break;
    }
    case Kind::Conjecture:
      require(c.domain.kind == "full_ball", "domain.kind", "conjecture scans run on the full ball");
      conjecture_params(c.params);
      break;
    case Kind::Optics:
      require(c.domain.d == 2, "domain.d", "optics requires d = 2");
      optics_params(c.params);
      break;
    case Kind::Bounds:
      bounds_params(c.params);
      break;
  }
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  Json j = to_json(c);
  j["output"].erase("dir");
  j["numeric"].erase("threads");
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

RunResult run(const ExperimentConfig& c, bool force) {
  validate(c, force);
  const auto t0 = std::chrono::steady_clock::now();
  Writer w(c.output.dir, c.output.number_format);
  Json results;
  switch (c.kind) {
    case Kind::Spectrum: results = run_spectrum(c, w); break;
    case Kind::Shannon: results = run_shannon(c, w); break;
    case Kind::KernelScan: results = run_kernel_scan(c, w); break;
    case Kind::Conjecture: results = run_conjecture(c, w); break;
    case Kind::Optics: results = run_optics(c, w); break;
    case Kind::Bounds: results = run_bounds(c, w); break;
    case Kind::Verify: results = run_verify(c, w); break;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  RunResult out;
  out.summary = {{"schema_version", kSchemaVersion},
                 {"experiment", to_string(c.kind)},
                 {"preset", c.preset.empty() ? Json(nullptr) : Json(c.preset)},
                 {"config_hash", hex64(config_hash(c))},
                 {"library_version", kLibraryVersion},
                 {"config", to_json(c)},
                 {"results", results},
                 {"timing_ms", ms}};
  w.text("summary.json", out.summary.dump(2) + "\n");
  out.files = w.files();
  return out;
}

}  // namespace ballslep::experiment
