#include "dicke/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace dicke {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; size n-1
};

// Q^T A Q = T with Q = H_0 H_1 ... H_{n-3}, H_k = I - tau_k v_k v_k^T acting on
// indices k+1..n-1. Row k of `a` keeps v_k (with v_k[0] == 1) after the call.
struct Reduction {
  std::size_t n = 0;
  std::vector<double> a;
  std::vector<double> tau;
  Tridiagonal t;

  const double* reflector(std::size_t k) const { return a.data() + k * n + k + 1; }
};

double dot(const double* x, const double* y, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < len; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// The row-major matrix is read as column-major with the lower triangle
// significant, so column j of the reduction is the contiguous tail of row j.
// y = A(j0:n, j0:n) x for the trailing block, x and y indexed from j0.
void trailing_symv(const double* a, std::size_t n, std::size_t j0, const double* x, double* y) {
  const std::size_t m = n - j0;
  std::fill(y, y + m, 0.0);
  // col(c)[i] = A(j0 + i, j0 + c) for i >= c. Four columns per pass over y.
  const auto col = [&](std::size_t c) { return a + (j0 + c) * n + j0; };
  std::size_t c = 0;
  for (; c + 4 <= m; c += 4) {
    const double* c0 = col(c);
    const double* c1 = col(c + 1);
    const double* c2 = col(c + 2);
    const double* c3 = col(c + 3);
    const double x0 = x[c], x1 = x[c + 1], x2 = x[c + 2], x3 = x[c + 3];
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
#pragma omp simd reduction(+ : s0, s1, s2, s3)
    for (std::size_t i = c + 4; i < m; ++i) {
      y[i] += (c0[i] * x0 + c1[i] * x1) + (c2[i] * x2 + c3[i] * x3);
      s0 += c0[i] * x[i];
      s1 += c1[i] * x[i];
      s2 += c2[i] * x[i];
      s3 += c3[i] * x[i];
    }
    // 4x4 diagonal block, lower part stored in c0..c3.
    const double* cs[4] = {c0, c1, c2, c3};
    double sums[4] = {s0, s1, s2, s3};
    for (std::size_t q = 0; q < 4; ++q) {
      double acc = sums[q];
      for (std::size_t r = 0; r < 4; ++r) {
        acc += (r >= q ? cs[q][c + r] : cs[r][c + q]) * x[c + r];
      }
      y[c + q] += acc;
    }
  }
  for (; c < m; ++c) {
    const double* c0 = col(c);
    double s = 0.0;
    for (std::size_t i = c + 1; i < m; ++i) {
      y[i] += c0[i] * x[c];
      s += c0[i] * x[i];
    }
    y[c] += c0[c] * x[c] + s;
  }
}

// Generates the reflector annihilating col[j+2..n) and stores v (v[0] = 1) in
// col[j+1..n). Returns tau; off receives the new subdiagonal entry.
double make_reflector(double* x, std::size_t m, double& off) {
  const double alpha = x[0];
  const double xnorm = std::sqrt(dot(x + 1, x + 1, m - 1));
  if (xnorm == 0.0) {
    off = alpha;
    return 0.0;
  }
  const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
  const double scale = 1.0 / (alpha - beta);
  for (std::size_t i = 1; i < m; ++i) x[i] *= scale;
  x[0] = 1.0;
  off = beta;
  return (beta - alpha) / beta;
}

void reduce_unblocked(std::vector<double>& a, std::size_t n, std::size_t k_begin, Reduction& r) {
  std::vector<double> p(n), w(n);
  for (std::size_t k = k_begin; k + 2 < n; ++k) {
    double* v = a.data() + k * n + k + 1;
    const std::size_t m = n - k - 1;
    const double tau = make_reflector(v, m, r.t.off[k]);
    r.tau[k] = tau;
    if (tau == 0.0) continue;

    trailing_symv(a.data(), n, k + 1, v, p.data());
    for (std::size_t i = 0; i < m; ++i) p[i] *= tau;
    const double shift = -0.5 * tau * dot(p.data(), v, m);
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] + shift * v[i];

    // A22 -= v w^T + w v^T
    for (std::size_t c = 0; c < m; ++c) {
      double* col = a.data() + (k + 1 + c) * n + k + 1 + c;
      const std::size_t len = m - c;
      const double vc = v[c];
      const double wc = w[c];
      const double* vv = v + c;
      const double* ww = w.data() + c;
      for (std::size_t i = 0; i < len; ++i) col[i] -= vc * ww[i] + wc * vv[i];
    }
  }
}

constexpr std::size_t kPanel = 32;
constexpr std::size_t kBlockedMin = 192;
constexpr std::size_t kRowChunk = 256;

// A(i, j) -= sum_p V_p[i] W_p[j] + W_p[i] V_p[j] for j0 <= j <= i < n.
// V_p is column (k0 + p) of `a`, W_p is row p of `wbuf`.
void panel_update(double* a, std::size_t n, std::size_t k0, std::size_t ib, const double* wbuf,
                  std::size_t j0) {
  std::vector<const double*> vcol(ib), wcol(ib);
  for (std::size_t p = 0; p < ib; ++p) {
    vcol[p] = a + (k0 + p) * n;
    wcol[p] = wbuf + p * n;
  }
  std::vector<double> cv(ib), cw(ib);
  for (std::size_t r0 = j0; r0 < n; r0 += kRowChunk) {
    const std::size_t r1 = std::min(n, r0 + kRowChunk);
    for (std::size_t j = j0; j < r1; ++j) {
      const std::size_t i0 = std::max(r0, j);
      double* col = a + j * n;
      for (std::size_t p = 0; p < ib; ++p) {
        cv[p] = vcol[p][j];
        cw[p] = wcol[p][j];
      }
      std::size_t p = 0;
      for (; p + 4 <= ib; p += 4) {
        const double *v0 = vcol[p], *v1 = vcol[p + 1], *v2 = vcol[p + 2], *v3 = vcol[p + 3];
        const double *w0 = wcol[p], *w1 = wcol[p + 1], *w2 = wcol[p + 2], *w3 = wcol[p + 3];
        const double a0 = cw[p], a1 = cw[p + 1], a2 = cw[p + 2], a3 = cw[p + 3];
        const double b0 = cv[p], b1 = cv[p + 1], b2 = cv[p + 2], b3 = cv[p + 3];
        for (std::size_t i = i0; i < r1; ++i) {
          col[i] -= ((v0[i] * a0 + w0[i] * b0) + (v1[i] * a1 + w1[i] * b1)) +
                    ((v2[i] * a2 + w2[i] * b2) + (v3[i] * a3 + w3[i] * b3));
        }
      }
      for (; p < ib; ++p) {
        const double* vp = vcol[p];
        const double* wp = wcol[p];
        for (std::size_t i = i0; i < r1; ++i) col[i] -= vp[i] * cw[p] + wp[i] * cv[p];
      }
    }
  }
}

// Blocked Householder reduction to tridiagonal form: each panel of kPanel
// columns is reduced against the un-updated trailing matrix with the usual
// V/W corrections, then applied as one rank-2*kPanel update.
Reduction tridiagonalize(std::vector<double> a, std::size_t n) {
  Reduction r;
  r.n = n;
  r.tau.assign(n, 0.0);
  r.t.diag.assign(n, 0.0);
  r.t.off.assign(n > 0 ? n - 1 : 0, 0.0);

  std::size_t k0 = 0;
  if (n >= kBlockedMin) {
    std::vector<double> wbuf(kPanel * n, 0.0);
    std::vector<double> dots_w(kPanel), dots_v(kPanel);
    for (; n - k0 > kBlockedMin / 2; k0 += kPanel) {
      const std::size_t ib = kPanel;
      std::fill(wbuf.begin(), wbuf.end(), 0.0);
      for (std::size_t c = 0; c < ib; ++c) {
        const std::size_t j = k0 + c;
        double* col = a.data() + j * n;
        for (std::size_t p = 0; p < c; ++p) {
          const double* vp = a.data() + (k0 + p) * n;
          const double* wp = wbuf.data() + p * n;
          const double wj = wp[j];
          const double vj = vp[j];
          for (std::size_t i = j; i < n; ++i) col[i] -= vp[i] * wj + wp[i] * vj;
        }
        double* v = col + j + 1;
        const std::size_t m = n - j - 1;
        const double tau = make_reflector(v, m, r.t.off[j]);
        r.tau[j] = tau;
        double* w = wbuf.data() + c * n;
        if (tau == 0.0) continue;

        trailing_symv(a.data(), n, j + 1, v, w + j + 1);
        for (std::size_t p = 0; p < c; ++p) {
          dots_w[p] = dot(wbuf.data() + p * n + j + 1, v, m);
          dots_v[p] = dot(a.data() + (k0 + p) * n + j + 1, v, m);
        }
        for (std::size_t p = 0; p < c; ++p) {
          const double* vp = a.data() + (k0 + p) * n + j + 1;
          const double* wp = wbuf.data() + p * n + j + 1;
          for (std::size_t i = 0; i < m; ++i) w[j + 1 + i] -= vp[i] * dots_w[p] + wp[i] * dots_v[p];
        }
        for (std::size_t i = 0; i < m; ++i) w[j + 1 + i] *= tau;
        const double shift = -0.5 * tau * dot(w + j + 1, v, m);
        for (std::size_t i = 0; i < m; ++i) w[j + 1 + i] += shift * v[i];
      }
      panel_update(a.data(), n, k0, ib, wbuf.data(), k0 + ib);
    }
  }
  reduce_unblocked(a, n, k0, r);

  for (std::size_t i = 0; i < n; ++i) r.t.diag[i] = a[i * n + i];
  if (n >= 2) r.t.off[n - 2] = a[(n - 2) * n + n - 1];
  r.a = std::move(a);
  return r;
}

// y <- Q y
void apply_q(const Reduction& r, std::span<double> y) {
  const std::size_t n = r.n;
  for (std::size_t k = n >= 3 ? n - 2 : 0; k-- > 0;) {
    if (r.tau[k] == 0.0) continue;
    const double* v = r.reflector(k);
    double* tail = y.data() + k + 1;
    const std::size_t m = n - k - 1;
    const double s = r.tau[k] * dot(v, tail, m);
    for (std::size_t i = 0; i < m; ++i) tail[i] -= s * v[i];
  }
}

// Returns Q^T row-major, i.e. row i is column i of Q.
std::vector<double> form_q_transposed(const Reduction& r) {
  const std::size_t n = r.n;
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  std::vector<double> w(n);
  // Backward accumulation: Q <- H_k Q only touches the trailing block.
  for (std::size_t k = n >= 3 ? n - 2 : 0; k-- > 0;) {
    if (r.tau[k] == 0.0) continue;
    const double* v = r.reflector(k);
    const std::size_t m = n - k - 1;
    const std::size_t off = k + 1;
    std::fill(w.begin(), w.begin() + m, 0.0);
    for (std::size_t row = 0; row < m; ++row) {
      const double vr = v[row];
      const double* qr = q.data() + (off + row) * n + off;
      for (std::size_t c = 0; c < m; ++c) w[c] += vr * qr[c];
    }
    for (std::size_t row = 0; row < m; ++row) {
      const double s = r.tau[k] * v[row];
      double* qr = q.data() + (off + row) * n + off;
      for (std::size_t c = 0; c < m; ++c) qr[c] -= s * w[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) std::swap(q[i * n + k], q[k * n + i]);
  return q;
}

// Implicit QL with Wilkinson-type shifts on (d, e); e[i] couples i and i+1 and
// e must have size n with e[n-1] == 0. rotate(i, c, s) mixes columns i, i+1 of
// the accumulated eigenvector matrix.
template <typename Rotate>
void implicit_ql(std::vector<double>& d, std::vector<double>& e, Rotate&& rotate) {
  const std::size_t n = d.size();
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations) {
          std::ostringstream msg;
          msg << "implicit QL did not converge for eigenvalue " << l << " after "
              << kMaxQlIterations << " iterations (n=" << n << ", d[l]=" << d[l]
              << ", e[l]=" << e[l] << ", norm estimate=" << tst1 << ")";
          throw NumericalError(msg.str());
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
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          rotate(i, c, s);
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

std::vector<double> padded(const std::vector<double>& off, std::size_t n) {
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  return e;
}

void check_input(const SymmetricMatrix& m) {
  if (!m.all_finite()) throw NumericalError("matrix has non-finite entries");
}

void fix_sign(std::span<double> v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (!v.empty() && v[arg] < 0.0)
    for (double& x : v) x = -x;
}

double residual(const SymmetricMatrix& h, double value, std::span<const double> v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const double hv = dot(h.row(i), v.data(), h.dim());
    worst = std::max(worst, std::abs(hv - value * v[i]));
  }
  return worst;
}

// Post-solve verification of residuals and orthonormality.
void verify(const SymmetricMatrix& h, EigenResult& result) {
  const double scale = h.max_abs();
  const std::size_t count = result.vector_count();
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    worst = std::max(worst, residual(h, result.values[i], result.vector(i)));
  }
  result.residual_bound = worst;
  if (!(worst <= kResidualTolerance * scale)) {
    std::ostringstream msg;
    msg << "eigenpair residual " << worst << " exceeds " << kResidualTolerance << " * max|H| ("
        << scale << "), dim=" << h.dim();
    throw NumericalError(msg.str());
  }
  double ortho = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      const double g = dot(result.vector(i).data(), result.vector(k).data(), result.dim);
      ortho = std::max(ortho, std::abs(g - (i == k ? 1.0 : 0.0)));
    }
  }
  if (!(ortho <= kOrthonormalityTolerance)) {
    std::ostringstream msg;
    msg << "eigenvectors deviate from orthonormality by " << ortho << ", dim=" << h.dim();
    throw NumericalError(msg.str());
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// LU with partial pivoting of (T - sigma I). U has two superdiagonals.
class ShiftedTridiagonalLu {
 public:
  ShiftedTridiagonalLu(const Tridiagonal& t, double sigma, double tiny)
      : n_(t.diag.size()), u0_(n_), u1_(n_, 0.0), u2_(n_, 0.0), mult_(n_, 0.0), swapped_(n_, 0) {
    if (n_ == 0) return;
    double a = t.diag[0] - sigma;
    double b = n_ > 1 ? t.off[0] : 0.0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double l = t.off[i];
      const double dd = t.diag[i + 1] - sigma;
      const double cc = i + 2 < n_ ? t.off[i + 1] : 0.0;
      if (std::abs(a) >= std::abs(l)) {
        if (a == 0.0) a = tiny;
        u0_[i] = a;
        u1_[i] = b;
        u2_[i] = 0.0;
        mult_[i] = l / a;
        a = dd - mult_[i] * b;
        b = cc;
      } else {
        u0_[i] = l;
        u1_[i] = dd;
        u2_[i] = cc;
        mult_[i] = a / l;
        swapped_[i] = 1;
        a = b - mult_[i] * dd;
        b = -mult_[i] * cc;
      }
    }
    u0_[n_ - 1] = a == 0.0 ? tiny : a;
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swapped_[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult_[i] * x[i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      if (i + 1 < n_) s -= u1_[i] * x[i + 1];
      if (i + 2 < n_) s -= u2_[i] * x[i + 2];
      x[i] = s / u0_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> u0_, u1_, u2_, mult_;
  std::vector<unsigned char> swapped_;
};

void normalize(std::vector<double>& x) {
  const double norm = std::sqrt(dot(x.data(), x.data(), x.size()));
  for (double& v : x) v /= norm;
}

// Eigenvectors of T for the given ascending eigenvalues, deterministic start
// vectors, Gram-Schmidt against earlier members of the same cluster.
std::vector<std::vector<double>> tridiagonal_vectors(const Tridiagonal& t,
                                                     std::span<const double> values) {
  const std::size_t n = t.diag.size();
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(t.diag[i]);
    if (i > 0) row += std::abs(t.off[i - 1]);
    if (i + 1 < n) row += std::abs(t.off[i]);
    tnorm = std::max(tnorm, row);
  }
  const double tiny = std::max(kEps * tnorm, std::numeric_limits<double>::min());
  const double cluster_gap = 1e-3 * tnorm;
  constexpr int kIterations = 5;

  std::vector<std::vector<double>> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::size_t cluster_begin = k;
    while (cluster_begin > 0 && values[k] - values[cluster_begin - 1] <= cluster_gap) --cluster_begin;

    ShiftedTridiagonalLu lu(t, values[k], tiny);
    std::uint64_t state = 0x5DEECE66DULL + 7919ULL * k;
    std::vector<double> x(n);
    for (double& v : x) v = 2.0 * unit_interval(splitmix64(state)) - 1.0;
    normalize(x);
    for (int it = 0; it < kIterations; ++it) {
      lu.solve(x);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = cluster_begin; c < k; ++c) {
          const double proj = dot(out[c].data(), x.data(), n);
          for (std::size_t i = 0; i < n; ++i) x[i] -= proj * out[c][i];
        }
      }
      normalize(x);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<std::size_t> ascending_order(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return order;
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw std::invalid_argument("off-diagonal must have n-1 entries");
  auto e = padded(off, n);
  implicit_ql(diag, e, [](std::size_t, double, double) {});
  std::sort(diag.begin(), diag.end());
  return diag;
}

std::vector<double> eigvalsh(SymmetricMatrix matrix) {
  check_input(matrix);
  const std::size_t n = matrix.dim();
  if (n == 0) return {};
  auto red = tridiagonalize(std::move(matrix.mutable_data()), n);
  return tridiagonal_eigenvalues(std::move(red.t.diag), std::move(red.t.off));
}

EigenResult eigh(const SymmetricMatrix& matrix) {
  check_input(matrix);
  const std::size_t n = matrix.dim();
  EigenResult result;
  result.dim = n;
  if (n == 0) return result;

  auto red = tridiagonalize(matrix.data(), n);
  std::vector<double> zt = form_q_transposed(red);
  std::vector<double> d = red.t.diag;
  std::vector<double> e = padded(red.t.off, n);
  implicit_ql(d, e, [&](std::size_t i, double c, double s) {
    double* zi = zt.data() + i * n;
    double* zj = zi + n;
    for (std::size_t k = 0; k < n; ++k) {
      const double h = zj[k];
      zj[k] = s * zi[k] + c * h;
      zi[k] = c * zi[k] - s * h;
    }
  });

  const auto order = ascending_order(d);
  result.values.resize(n);
  result.vectors.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    result.values[i] = d[order[i]];
    std::copy_n(zt.begin() + static_cast<std::ptrdiff_t>(order[i] * n), n,
                result.vectors.begin() + static_cast<std::ptrdiff_t>(i * n));
    fix_sign({result.vectors.data() + i * n, n});
  }
  verify(matrix, result);
  return result;
}

EigenResult eigh_lowest(const SymmetricMatrix& matrix, std::size_t count) {
  check_input(matrix);
  const std::size_t n = matrix.dim();
  if (count > n) throw std::invalid_argument("requested more eigenvectors than the dimension");
  EigenResult result;
  result.dim = n;
  if (n == 0) return result;

  auto red = tridiagonalize(matrix.data(), n);
  result.values = tridiagonal_eigenvalues(red.t.diag, red.t.off);
  const auto tvecs = tridiagonal_vectors(red.t, std::span(result.values).first(count));
  result.vectors.resize(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<double> v(result.vectors.data() + i * n, n);
    std::copy(tvecs[i].begin(), tvecs[i].end(), v.begin());
    apply_q(red, v);
    fix_sign(v);
  }
  verify(matrix, result);
  return result;
}

double lowest_eigenvalue(const SparseSymmetric& matrix) {
  const std::size_t n = matrix.dim;
  if (n == 0) throw std::invalid_argument("empty matrix");
  for (double v : matrix.diag)
    if (!std::isfinite(v)) throw NumericalError("matrix has non-finite entries");
  for (double v : matrix.vals)
    if (!std::isfinite(v)) throw NumericalError("matrix has non-finite entries");
  if (!matrix.has_couplings()) return *std::min_element(matrix.diag.begin(), matrix.diag.end());

  const double scale = matrix.max_abs();
  const std::size_t max_steps = std::min<std::size_t>(n, 4000);
  std::vector<std::vector<double>> q;
  Tridiagonal t;
  std::vector<double> w(n);

  std::vector<double> start(n);
  std::uint64_t state = 0x5DEECE66DULL ^ n;
  for (double& v : start) v = unit_interval(splitmix64(state)) - 0.5;
  normalize(start);
  q.push_back(std::move(start));

  for (std::size_t k = 0;; ++k) {
    matrix.multiply(q[k].data(), w.data());
    const double alpha = dot(q[k].data(), w.data(), n);
    t.diag.push_back(alpha);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        const double c = dot(qi.data(), w.data(), n);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * qi[i];
      }
    }
    const double beta = std::sqrt(dot(w.data(), w.data(), n));
    const bool breakdown = beta <= 64 * kEps * scale;
    const bool last = breakdown || k + 1 == max_steps;
    if (last || (k + 1) % 10 == 0) {
      const double theta = tridiagonal_eigenvalues(t.diag, t.off).front();
      const auto s = tridiagonal_vectors(t, std::span(&theta, 1)).front();
      if (last || beta * std::abs(s.back()) <= 1e-10 * scale) {
        std::vector<double> x(n, 0.0);
        for (std::size_t j = 0; j < q.size(); ++j)
          for (std::size_t i = 0; i < n; ++i) x[i] += s[j] * q[j][i];
        normalize(x);
        matrix.multiply(x.data(), w.data());
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(w[i] - theta * x[i]));
        if (res <= kResidualTolerance * scale) return theta;
        if (last) {
          std::ostringstream msg;
          msg << "Lanczos did not converge after " << q.size() << " steps (residual " << res << ", max|H| "
              << scale << ")";
          throw NumericalError(msg.str());
        }
      }
    }
    t.off.push_back(beta);
    for (double& v : w) v /= beta;
    q.push_back(w);
  }
}

const char* to_string(ParityTag p) {
  switch (p) {
    case ParityTag::Even: return "even";
    case ParityTag::Odd: return "odd";
    case ParityTag::Mixed: break;
  }
  return "mixed";
}

ParityTag tag_of(Parity p) { return p == Parity::Even ? ParityTag::Even : ParityTag::Odd; }

ParityTag infer_parity(const Basis& basis, std::span<const double> vector) {
  if (vector.size() != basis.size()) throw std::invalid_argument("vector length does not match basis");
  double w_even = 0.0;
  for (std::size_t i = 0; i < vector.size(); ++i)
    if (basis.parity(i) == Parity::Even) w_even += vector[i] * vector[i];
  if (w_even > 1.0 - kParityWeightTolerance) return ParityTag::Even;
  if (w_even < kParityWeightTolerance) return ParityTag::Odd;
  return ParityTag::Mixed;
}

GroundState ground_state(const SymmetricMatrix& sector_matrix, const SectorBasis& sector) {
  if (sector_matrix.dim() != sector.size()) throw std::invalid_argument("matrix does not match sector size");
  if (sector.size() == 0) throw std::invalid_argument("empty sector");
  auto r = eigh_lowest(sector_matrix, 1);
  auto v = r.vector(0);
  return {r.values[0], {v.begin(), v.end()}, tag_of(sector.parity)};
}

GroundState ground_state(const SymmetricMatrix& full_matrix, const Basis& basis) {
  if (full_matrix.dim() != basis.size()) throw std::invalid_argument("matrix does not match basis size");
  auto r = eigh_lowest(full_matrix, 1);
  auto v = r.vector(0);
  return {r.values[0], {v.begin(), v.end()}, infer_parity(basis, v)};
}

double mix_angle(const MixKey& key) {
  std::uint64_t state = key.seed;
  splitmix64(state);
  state ^= key.point * 0xD1B54A32D192ED03ULL;
  splitmix64(state);
  state ^= static_cast<std::uint64_t>(key.probe) * 0x8CB92BA72F3D8DD7ULL;
  return 2.0 * std::numbers::pi * unit_interval(splitmix64(state));
}

GroundState rotate_pair(const GroundState& g0, const GroundState& g1, double theta) {
  if (g0.vector.size() != g1.vector.size()) throw std::invalid_argument("states live in different spaces");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  GroundState out{g0.energy, std::vector<double>(g0.vector.size()), ParityTag::Mixed};
  for (std::size_t i = 0; i < out.vector.size(); ++i) out.vector[i] = c * g0.vector[i] + s * g1.vector[i];
  return out;
}

GroundState degenerate_mix(const GroundState& g0, const GroundState& g1, double gap_tol,
                           const MixKey& key) {
  const double gap = std::abs(g1.energy - g0.energy);
  if (!(gap < gap_tol)) {
    std::ostringstream msg;
    msg << "degenerate_mix: gap " << gap << " is not below tolerance " << gap_tol;
    throw std::invalid_argument(msg.str());
  }
  return rotate_pair(g0, g1, mix_angle(key));
}

}  // namespace dicke
