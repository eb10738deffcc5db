#include "ballslep/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "ballslep/error.hpp"
#include "ballslep/kernels.hpp"
#include "ballslep/parallel.hpp"
#include "ballslep/specfun.hpp"

namespace ballslep::concentration {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiagSlack = 1e-10;

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-14; }

bool integer_ells(const basis::IndexSet& set, const basis::EllSequence& ell) {
  for (int j = 0; j <= set.max_j(); ++j)
    if (!is_integer(ell(j))) return false;
  return true;
}

// Azimuthal function index: 0 constant, 2m-1 cos(m phi), 2m sin(m phi).
int az_id(const basis::BasisIndex& b, int d) {
  if (d == 3) return b.k - 1;
  if (b.j == 0) return 0;
  return b.k == 1 ? 2 * b.j - 1 : 2 * b.j;
}

int az_freq(const basis::BasisIndex& b, int d) { return d == 3 ? b.k / 2 : b.j; }

double az_value(int id, double phi) {
  if (id == 0) return 1.0 / std::sqrt(2.0 * kPi);
  const int m = (id + 1) / 2;
  return (id % 2 == 1 ? std::cos(m * phi) : std::sin(m * phi)) / std::sqrt(kPi);
}

struct RadialKey {
  int i;
  int j;
  auto operator<=>(const RadialKey&) const = default;
};

struct AngularKey {
  int j;
  int k;
  auto operator<=>(const AngularKey&) const = default;
};

geometry::RuleCounts gram_counts(const geometry::Domain& dom, const basis::IndexSet& set,
                                 const basis::EllSequence& ell, geometry::RuleCounts user) {
  const int maxdeg = max_degree(set, ell);
  const int maxj = set.max_j();
  geometry::RuleCounts c;
  if (dom.r1() == 0.0) {
    c.radial = set.max_i() + 2;
  } else {
    c.radial = maxdeg + 3 + (integer_ells(set, ell) ? 0 : 10);
  }
  c.polar = dom.dim() == 3 ? static_cast<int>(std::ceil(2.5 * maxj)) + 20 : 0;
  c.azimuthal = dom.full_phi() ? 2 * maxj + 2 : 5 * maxj + 20;
  if (user.radial > 0) c.radial = user.radial;
  if (user.polar > 0) c.polar = user.polar;
  if (user.azimuthal > 0) c.azimuthal = user.azimuthal;
  return c;
}

// Radial inner products int_{r1}^{r2} R_p R_q r^{d-1} dr for all key pairs.
std::vector<double> radial_table(const geometry::Domain& dom, const std::vector<RadialKey>& keys,
                                 const basis::EllSequence& ell, int d, int npts, int threads) {
  const std::size_t nk = keys.size();
  std::vector<double> tab(nk * nk, 0.0);

  if (dom.r1() > 0.0) {
    const auto rule = geometry::gauss_legendre(npts, dom.r1(), dom.r2());
    std::vector<double> vals(nk * rule.size());
    parallel_for(nk, threads, [&](std::size_t p) {
      for (std::size_t q = 0; q < rule.size(); ++q) {
        vals[p * rule.size() + q] =
            basis::zernike_radial(keys[p].i, ell(keys[p].j), d, rule.nodes[q]) *
            std::sqrt(rule.weights[q] * std::pow(rule.nodes[q], d - 1));
      }
    });
    parallel_for(nk, threads, [&](std::size_t p) {
      for (std::size_t q = p; q < nk; ++q) {
        double s = 0.0;
        for (std::size_t t = 0; t < rule.size(); ++t) s += vals[p * rule.size() + t] * vals[q * rule.size() + t];
        tab[p * nk + q] = s;
        tab[q * nk + p] = s;
      }
    });
    return tab;
  }

  // r1 = 0: in z = 2r^2 - 1 the weight ((1+z)/2)^beta with
  // beta = (l_a + l_b + d - 2)/2 is handled exactly by Gauss-Jacobi.
  std::map<int, std::vector<std::size_t>> by_j;
  for (std::size_t p = 0; p < nk; ++p) by_j[keys[p].j].push_back(p);
  std::vector<int> js;
  for (const auto& [j, v] : by_j) js.push_back(j);

  const double z2 = 2.0 * dom.r2() * dom.r2() - 1.0;
  const double zlen = z2 + 1.0;
  std::vector<std::pair<int, int>> jpairs;
  for (std::size_t a = 0; a < js.size(); ++a)
    for (std::size_t b = a; b < js.size(); ++b) jpairs.emplace_back(js[a], js[b]);

  parallel_for(jpairs.size(), threads, [&](std::size_t w) {
    const auto [ja, jb] = jpairs[w];
    const double la = ell(ja);
    const double lb = ell(jb);
    const double beta = (la + lb + d - 2) / 2.0;
    const auto gj = geometry::gauss_jacobi(npts, 0.0, beta);
    const double factor = std::pow(zlen / 4.0, beta) * (zlen / 2.0) / 4.0;
    const auto& pa = by_j.at(ja);
    const auto& pb = by_j.at(jb);
    int imax_a = 0;
    int imax_b = 0;
    for (auto p : pa) imax_a = std::max(imax_a, keys[p].i);
    for (auto p : pb) imax_b = std::max(imax_b, keys[p].i);
    const std::size_t nq = gj.size();
    std::vector<double> va((imax_a + 1) * nq);
    std::vector<double> vb((imax_b + 1) * nq);
    std::vector<double> seq(std::max(imax_a, imax_b) + 1);
    const specfun::JacobiParams parA(0.0, la + (d - 2) / 2.0);
    const specfun::JacobiParams parB(0.0, lb + (d - 2) / 2.0);
    for (std::size_t q = 0; q < nq; ++q) {
      const double z = -1.0 + zlen * (1.0 + gj.nodes[q]) / 2.0;
      std::span<double> sa(seq.data(), imax_a + 1);
      specfun::jacobi_sequence(parA, z, sa);
      for (int i = 0; i <= imax_a; ++i) va[i * nq + q] = sa[i] * std::sqrt(4.0 * i + 2.0 * la + d);
      std::span<double> sb(seq.data(), imax_b + 1);
      specfun::jacobi_sequence(parB, z, sb);
      for (int i = 0; i <= imax_b; ++i) vb[i * nq + q] = sb[i] * std::sqrt(4.0 * i + 2.0 * lb + d);
    }
    for (auto p : pa) {
      for (auto q : pb) {
        double s = 0.0;
        const double* x = &va[keys[p].i * nq];
        const double* y = &vb[keys[q].i * nq];
        for (std::size_t t = 0; t < nq; ++t) s += gj.weights[t] * x[t] * y[t];
        s *= factor;
        tab[p * nk + q] = s;
        tab[q * nk + p] = s;
      }
    }
  });
  return tab;
}

// Angular inner products of Y_{j,k} over the domain's angular region.
std::vector<double> angular_table(const geometry::Domain& dom, const std::vector<AngularKey>& keys,
                                  int d, const geometry::RuleCounts& counts, int threads) {
  const std::size_t nk = keys.size();
  std::vector<double> tab(nk * nk, 0.0);
  if (dom.full_angles()) {
    for (std::size_t p = 0; p < nk; ++p) tab[p * nk + p] = 1.0;
    return tab;
  }
  const auto rule =
      geometry::make_rule(dom, geometry::Measure::lebesgue_measure(), {1, std::max(counts.polar, 1), counts.azimuthal});
  int maxj = 0;
  for (const auto& k : keys) maxj = std::max(maxj, k.j);
  const int n_az = 2 * maxj + 1;

  // Azimuthal pair integrals.
  const std::size_t na = rule.azimuthal.size();
  std::vector<double> fvals(n_az * na);
  for (int id = 0; id < n_az; ++id)
    for (std::size_t q = 0; q < na; ++q) fvals[id * na + q] = az_value(id, rule.azimuthal.nodes[q]);
  std::vector<double> az(n_az * n_az);
  for (int a = 0; a < n_az; ++a) {
    for (int b = a; b < n_az; ++b) {
      std::vector<double> terms(na);
      for (std::size_t q = 0; q < na; ++q) terms[q] = rule.azimuthal.weights[q] * fvals[a * na + q] * fvals[b * na + q];
      const double s = geometry::pairwise_sum(terms.data(), na);
      az[a * n_az + b] = s;
      az[b * n_az + a] = s;
    }
  }

  // Polar pair integrals of normalized associated Legendre functions.
  const int w = maxj + 1;
  std::vector<double> pol;
  if (d == 3) {
    const std::size_t np = rule.polar.size();
    std::vector<double> theta(np * w * w);
    std::vector<double> row;
    for (std::size_t q = 0; q < np; ++q) {
      basis::assoc_legendre_table(maxj, rule.polar.nodes[q], rule.polar_sin[q], row);
      std::copy(row.begin(), row.end(), theta.begin() + q * w * w);
    }
    const std::size_t nlm = static_cast<std::size_t>(w) * w;
    pol.assign(nlm * nlm, 0.0);
    parallel_for(nlm, threads, [&](std::size_t a) {
      const int ja = static_cast<int>(a) / w;
      const int ma = static_cast<int>(a) % w;
      if (ma > ja) return;
      std::vector<double> terms(np);
      for (std::size_t b = 0; b < nlm; ++b) {
        const int jb = static_cast<int>(b) / w;
        const int mb = static_cast<int>(b) % w;
        if (mb > jb) continue;
        for (std::size_t q = 0; q < np; ++q)
          terms[q] = rule.polar.weights[q] * theta[q * nlm + a] * theta[q * nlm + b];
        pol[a * nlm + b] = geometry::pairwise_sum(terms.data(), np);
      }
    });
  }

  parallel_for(nk, threads, [&](std::size_t p) {
    const basis::BasisIndex bp{0, keys[p].j, keys[p].k};
    const int ida = az_id(bp, d);
    for (std::size_t q = 0; q < nk; ++q) {
      const basis::BasisIndex bq{0, keys[q].j, keys[q].k};
      const int idb = az_id(bq, d);
      double v = az[ida * n_az + idb];
      if (d == 3) {
        const std::size_t nlm = static_cast<std::size_t>(w) * w;
        const std::size_t a = keys[p].j * w + az_freq(bp, d);
        const std::size_t b = keys[q].j * w + az_freq(bq, d);
        v *= pol[a * nlm + b];
      }
      tab[p * nk + q] = v;
    }
  });
  return tab;
}

}  // namespace

int max_degree(const basis::IndexSet& set, const basis::EllSequence& ell) {
  double m = 0.0;
  for (const auto& b : set) m = std::max(m, 2.0 * b.i + ell(b.j));
  return static_cast<int>(std::ceil(m - 1e-12));
}

GramMatrix assemble_gram(const geometry::Domain& domain, const basis::IndexSet& set,
                         const basis::EllSequence& ell, const GramOptions& opts) {
  const int d = set.dim();
  if (domain.dim() != d) throw ParameterError("assemble_gram: domain and index set dimension differ");
  ell.validate(d, set.max_j());
  const auto counts = gram_counts(domain, set, ell, opts.counts);

  std::map<RadialKey, std::size_t> rmap;
  std::map<AngularKey, std::size_t> amap;
  for (const auto& b : set) {
    rmap.emplace(RadialKey{b.i, b.j}, 0);
    amap.emplace(AngularKey{b.j, b.k}, 0);
  }
  std::vector<RadialKey> rkeys;
  std::vector<AngularKey> akeys;
  for (auto& [k, v] : rmap) {
    v = rkeys.size();
    rkeys.push_back(k);
  }
  for (auto& [k, v] : amap) {
    v = akeys.size();
    akeys.push_back(k);
  }

  const auto rad = radial_table(domain, rkeys, ell, d, counts.radial, opts.threads);
  const auto ang = angular_table(domain, akeys, d, counts, opts.threads);

  const std::size_t n = set.size();
  std::vector<std::size_t> ri(n);
  std::vector<std::size_t> ai(n);
  for (std::size_t a = 0; a < n; ++a) {
    ri[a] = rmap.at({set[a].i, set[a].j});
    ai[a] = amap.at({set[a].j, set[a].k});
  }
  const std::size_t nr = rkeys.size();
  const std::size_t na = akeys.size();

  linalg::SymmetricMatrix g(n);
  parallel_for(n, opts.threads, [&](std::size_t a) {
    for (std::size_t b = a; b < n; ++b) {
      g.set_sym(a, b, rad[ri[a] * nr + ri[b]] * ang[ai[a] * na + ai[b]]);
    }
  });
  for (std::size_t a = 0; a < n; ++a) {
    const double v = g(a, a);
    if (!(v >= -kDiagSlack && v <= 1.0 + kDiagSlack)) {
      std::ostringstream os;
      os << "Gram diagonal entry " << a << " = " << v << " outside [0,1]; quadrature under-resolved";
      throw NumericalQualityError(os.str());
    }
  }
  return GramMatrix{set, ell, domain, counts, std::move(g)};
}

// ---------------------------------------------------------------- spectra

SpectrumReport::SpectrumReport(std::vector<double> raw_desc, double trace, double hs2)
    : raw_(std::move(raw_desc)), trace_(trace), hs2_(hs2) {
  clamped_.resize(raw_.size());
  for (std::size_t i = 0; i < raw_.size(); ++i) clamped_[i] = std::clamp(raw_[i], 0.0, 1.0);
}

std::size_t SpectrumReport::count(double a, double b) const {
  return static_cast<std::size_t>(std::count_if(clamped_.begin(), clamped_.end(),
                                                [&](double l) { return l > a && l <= b; }));
}

Eigensystem eigensolve_sym(const linalg::SymmetricMatrix& m, bool want_vectors) {
  const std::size_t n = m.size();
  double trace = 0.0;
  double hs2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
  for (double v : m.data()) hs2 += v * v;
  auto dec = linalg::eigh(m, want_vectors);
  for (double l : dec.values) {
    if (l < -kEigenSlack || l > 1.0 + kEigenSlack) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << l << " outside [0,1] beyond tolerance; quadrature under-resolved";
      throw NumericalQualityError(os.str());
    }
  }
  std::vector<double> desc(dec.values.rbegin(), dec.values.rend());
  std::vector<double> vecs;
  if (want_vectors) {
    vecs.resize(n * n);
    for (std::size_t r = 0; r < n; ++r)
      std::copy_n(&dec.vectors[(n - 1 - r) * n], n, &vecs[r * n]);
  }
  return Eigensystem{SpectrumReport(std::move(desc), trace, hs2), std::move(vecs)};
}

Eigensystem eigensolve_sym(const GramMatrix& g, bool want_vectors) {
  return eigensolve_sym(g.matrix, want_vectors);
}

SpectrumStats spectrum_stats(const SpectrumReport& report, double eps, double tau) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("spectrum_stats: need 0 < eps < 1/2");
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("spectrum_stats: need 0 < tau < 1");
  SpectrumStats s;
  s.eps = eps;
  s.tau = tau;
  s.transition = report.count(eps, 1.0 - eps);
  s.concentrated = report.count(tau, 1.0);
  const double dim = static_cast<double>(std::max<std::size_t>(report.dim(), 1));
  s.transition_rel = s.transition / dim;
  s.concentrated_rel = s.concentrated / dim;
  s.shannon_empirical = report.shannon_empirical();
  return s;
}

// ---------------------------------------------------------------- identities

double trace_by_quadrature(const geometry::Domain& domain, const basis::IndexSet& set,
                           const basis::EllSequence& ell, int threads) {
  const kernels::SumKernel k(set, ell);
  const int maxdeg = max_degree(set, ell);
  auto counts = geometry::default_counts(domain, maxdeg);
  counts.radial = maxdeg + 3 + (integer_ells(set, ell) ? 0 : 10);
  const int maxj = set.max_j();
  counts.polar = domain.dim() == 3 ? static_cast<int>(std::ceil(2.5 * maxj)) + 20 : 0;
  counts.azimuthal = domain.full_phi() ? 2 * maxj + 2 : 5 * maxj + 20;
  const auto m = geometry::Measure::lebesgue_measure();
  const auto rule = geometry::make_rule(domain, m, counts);
  return geometry::integrate(domain, m, [&](const geometry::Point& x) { return k.diag(x); }, rule,
                             threads);
}

IdentityResiduals verify_operator_identities(const GramMatrix& g, const SpectrumReport& spectrum,
                                             int threads) {
  IdentityResiduals r;
  for (std::size_t i = 0; i < g.matrix.size(); ++i) r.trace_matrix += g.matrix(i, i);
  for (double l : spectrum.raw()) {
    r.trace_eigen += l;
    r.hs2_eigen += l * l;
  }
  for (double v : g.matrix.data()) r.hs2_frobenius += v * v;
  r.trace_quadrature = trace_by_quadrature(g.domain, g.set, g.ell, threads);
  r.trace_residual = std::abs(r.trace_eigen - r.trace_quadrature);
  r.hs_residual = std::abs(r.hs2_eigen - r.hs2_frobenius);
  r.trace_relative = r.trace_residual / std::max(std::abs(r.trace_quadrature), 1e-300);
  r.hs_relative = r.hs_residual / std::max(r.hs2_frobenius, 1e-300);
  return r;
}

IdentityResiduals verify_operator_identities(const geometry::Domain& domain,
                                             const basis::IndexSet& set,
                                             const basis::EllSequence& ell,
                                             const GramOptions& opts) {
  const auto g = assemble_gram(domain, set, ell, opts);
  const auto eig = eigensolve_sym(g, false);
  return verify_operator_identities(g, eig.report, opts.threads);
}

}  // namespace ballslep::concentration
