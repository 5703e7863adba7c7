#pragma once

// Small dense vector/matrix helpers for low-dimensional state spaces.
// Everything here is value-semantic; dimensions are dynamic but tiny
// (state dimension 1 or 2 in practice, noise dimension a few).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sslab {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  bool empty() const { return rows == 0 || cols == 0; }
};

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec add(const Vec& x, const Vec& y) {
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

inline Vec scale(const Vec& x, double c) {
  Vec r(x);
  for (double& v : r) v *= c;
  return r;
}

inline void axpy(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline Vec mat_vec(const Mat& m, const Vec& x) {
  Vec r(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

// s s^T for a d x r factor; result is d x d symmetric.
inline Mat outer_self(const Mat& s) {
  Mat r(s.rows, s.rows);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = 0.0;
      for (int k = 0; k < s.cols; ++k) v += s(i, k) * s(j, k);
      r(i, j) = v;
      r(j, i) = v;
    }
  return r;
}

inline Mat mat_add(const Mat& a, const Mat& b) {
  Mat r(a);
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

inline double quad_form(const Vec& xi, const Mat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      s += xi[static_cast<std::size_t>(i)] * m(i, j) * xi[static_cast<std::size_t>(j)];
  return s;
}

// tr(h a) for square matrices of equal size.
inline double trace_prod(const Mat& h, const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < h.rows; ++i)
    for (int j = 0; j < h.cols; ++j) s += h(i, j) * a(j, i);
  return s;
}

inline double frobenius(const Mat& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

// Cholesky factor of a symmetric positive semidefinite matrix.
// Zero (or numerically negative) pivots produce zero rows, so rank-deficient
// second-moment matrices factor cleanly.
inline Mat cholesky_psd(const Mat& m) {
  const int n = m.rows;
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 1e-14 * (std::abs(m(j, j)) + 1.0)) {
      l(j, j) = 0.0;
      continue;
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Numerically stable sum with a fixed reduction tree; the result does not
// depend on how the inputs were produced (serial or chunked in parallel).
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace sslab
