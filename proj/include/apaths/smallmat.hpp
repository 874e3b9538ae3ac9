#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace apaths {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline Vec axpy(double alpha, const Vec& x, const Vec& y) {
  Vec r(y);
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += alpha * x[i];
  return r;
}

inline Vec scaled(double alpha, const Vec& x) {
  Vec r(x);
  for (double& v : r) v *= alpha;
  return r;
}

/// Dense square matrix of small fixed size, row-major.
struct Mat {
  int d = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int d) : d(d), a(static_cast<std::size_t>(d) * d, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }

  static Mat identity(int d) {
    Mat m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  Mat transpose() const {
    Mat r(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  double norm_inf() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Mat operator*(const Mat& x, const Mat& y) {
  Mat r(x.d);
  for (int i = 0; i < x.d; ++i)
    for (int k = 0; k < x.d; ++k) {
      double v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < x.d; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  Mat r(x);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  Mat r(x);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

inline Mat operator*(double s, const Mat& x) {
  Mat r(x);
  for (double& v : r.a) v *= s;
  return r;
}

/// Gauss-Jordan inverse with partial pivoting; throws on singular input.
inline Mat inverse(const Mat& m) {
  int d = m.d;
  Mat a(m);
  Mat inv = Mat::identity(d);
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-14) throw std::runtime_error("singular matrix");
    if (piv != col)
      for (int j = 0; j < d; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    double s = 1.0 / a(col, col);
    for (int j = 0; j < d; ++j) {
      a(col, j) *= s;
      inv(col, j) *= s;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < d; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Newton polar iteration projecting onto the orthogonal group.
inline Mat project_orthogonal(const Mat& m) {
  Mat x(m);
  for (int it = 0; it < 12; ++it) {
    Mat xi = inverse(x).transpose();
    Mat next(x.d);
    for (std::size_t i = 0; i < next.a.size(); ++i)
      next.a[i] = 0.5 * (x.a[i] + xi.a[i]);
    double delta = (next - x).norm_inf();
    x = next;
    if (delta < 1e-15) break;
  }
  return x;
}

inline double orthogonality_residual(const Mat& m) {
  return (m.transpose() * m - Mat::identity(m.d)).norm_inf();
}

}  // namespace apaths
