#include "ballslep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ballslep/error.hpp"

namespace ballslep::linalg {

namespace {

constexpr int kMaxQlIterations = 60;

// Householder reduction of the symmetric matrix held in v (row-major, n x n)
// to tridiagonal form. On return d holds the diagonal and e[1..n-1] the
// sub-diagonal. With accumulate, v holds the orthogonal transform.
void tred2(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
           bool accumulate) {
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k + 1 <= i; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k + 1 <= i; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    // The diagonal survives on V's diagonal; see the accumulation loop below.
    for (std::size_t i = 0; i < n; ++i) d[i] = V(i, i);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). If q is non-empty its rows are
// rotated along (q holds the transposed transform: row k = column k of V).
void tql2(std::size_t n, std::vector<double>& d, std::vector<double>& e, std::vector<double>& q) {
  const bool vec = !q.empty();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations) {
          throw NumericalQualityError("tridiagonal QL failed to converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (vec) {
            double* qi = &q[ii * n];
            double* qi1 = &q[(ii + 1) * n];
            for (std::size_t k = 0; k < n; ++k) {
              const double t = qi1[k];
              qi1[k] = s * qi[k] + c * t;
              qi[k] = c * qi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

EigenDecomposition sorted(std::size_t n, std::vector<double> d, std::vector<double> q) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = d[order[i]];
  if (!q.empty()) {
    out.vectors.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(&q[order[i] * n], n, &out.vectors[i * n]);
    }
  }
  return out;
}

void check_finite(const SymmetricMatrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw InputError("matrix contains non-finite entries");
  }
}

}  // namespace

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

EigenDecomposition eigh(const SymmetricMatrix& a, bool want_vectors) {
  check_finite(a);
  const std::size_t n = a.size();
  if (n == 0) return {};
  if (n == 1) {
    EigenDecomposition out{{a(0, 0)}, {}};
    if (want_vectors) out.vectors = {1.0};
    return out;
  }
  std::vector<double> v = a.data();
  std::vector<double> d(n);
  std::vector<double> e(n);
  tred2(n, v, d, e, want_vectors);
  std::vector<double> q;
  if (want_vectors) {
    q.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) q[i * n + k] = v[k * n + i];
  }
  v.clear();
  v.shrink_to_fit();
  tql2(n, d, e, q);
  return sorted(n, std::move(d), std::move(q));
}

EigenDecomposition eigh_jacobi(const SymmetricMatrix& a, bool want_vectors) {
  check_finite(a);
  const std::size_t n = a.size();
  std::vector<double> m = a.data();
  std::vector<double> q;
  if (want_vectors) {
    q.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  }
  auto M = [&](std::size_t i, std::size_t j) -> double& { return m[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += M(i, j) * M(i, j);
        if (i != j) off += M(i, j) * M(i, j);
      }
    }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apr = M(p, r);
        if (apr == 0.0) continue;
        const double theta = (M(r, r) - M(p, p)) / (2.0 * apr);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = M(k, p);
          const double mkr = M(k, r);
          M(k, p) = c * mkp - s * mkr;
          M(k, r) = s * mkp + c * mkr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = M(p, k);
          const double mrk = M(r, k);
          M(p, k) = c * mpk - s * mrk;
          M(r, k) = s * mpk + c * mrk;
        }
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double qp = q[p * n + k];
            const double qr = q[r * n + k];
            q[p * n + k] = c * qp - s * qr;
            q[r * n + k] = s * qp + c * qr;
          }
        }
      }
    }
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = M(i, i);
  return sorted(n, std::move(d), std::move(q));
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw ParameterError("tridiagonal: off-diagonal length must be n-1");
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = off[i - 1];
  std::vector<double> q;
  tql2(n, diag, e, q);
  std::sort(diag.begin(), diag.end());
  return diag;
}

}  // namespace ballslep::linalg
