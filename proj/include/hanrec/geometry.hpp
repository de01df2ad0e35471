#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "hanrec/error.hpp"

namespace hanrec {

using Vec2 = std::array<double, 2>;

// Row-major 3x3 homography. h[8] is kept at 1 after normalization.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }

  static Mat3 translation(double dx, double dy) {
    Mat3 t;
    t.m = {1, 0, dx, 0, 1, dy, 0, 0, 1};
    return t;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  Mat3 inverse() const {
    double d = det();
    if (std::abs(d) < 1e-12) fail(Errc::SingularTransform, "matrix not invertible");
    Mat3 r;
    r.m[0] = (m[4] * m[8] - m[5] * m[7]) / d;
    r.m[1] = (m[2] * m[7] - m[1] * m[8]) / d;
    r.m[2] = (m[1] * m[5] - m[2] * m[4]) / d;
    r.m[3] = (m[5] * m[6] - m[3] * m[8]) / d;
    r.m[4] = (m[0] * m[8] - m[2] * m[6]) / d;
    r.m[5] = (m[2] * m[3] - m[0] * m[5]) / d;
    r.m[6] = (m[3] * m[7] - m[4] * m[6]) / d;
    r.m[7] = (m[1] * m[6] - m[0] * m[7]) / d;
    r.m[8] = (m[0] * m[4] - m[1] * m[3]) / d;
    return r;
  }

  // homogeneous apply + dehomogenize
  Vec2 apply(double x, double y) const {
    double wv = m[6] * x + m[7] * y + m[8];
    if (std::abs(wv) < 1e-12) fail(Errc::SingularTransform, "point at infinity");
    return {(m[0] * x + m[1] * y + m[2]) / wv,
            (m[3] * x + m[4] * y + m[5]) / wv};
  }

  void normalize() {
    if (std::abs(m[8]) < 1e-12) fail(Errc::SingularTransform, "h22 ~ 0");
    for (int i = 0; i < 9; ++i) m[i] /= m[8];
    m[8] = 1.0;
  }
};

// Gaussian elimination with partial pivoting; a is n x n, row-major.
// Solves a*x = b in place, returns false on a (near-)singular pivot.
inline bool solve_linear(int n, double* a, double* b) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-12) return false;
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < n; ++k) s -= a[row * n + k] * b[k];
    b[row] = s / a[row * n + row];
  }
  return true;
}

// Homography mapping src[i] -> dst[i] for four point pairs, via the
// standard 8-unknown direct linear system; normalized so h22 == 1.
inline Mat3 homography_from_points(const std::array<Vec2, 4>& src,
                                   const std::array<Vec2, 4>& dst) {
  double a[64] = {0};
  double b[8];
  for (int i = 0; i < 4; ++i) {
    double x = src[i][0], y = src[i][1];
    double u = dst[i][0], v = dst[i][1];
    double* r0 = a + (2 * i) * 8;
    double* r1 = a + (2 * i + 1) * 8;
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -x * u; r0[7] = -y * u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -x * v; r1[7] = -y * v;
    b[2 * i] = u;
    b[2 * i + 1] = v;
  }
  if (!solve_linear(8, a, b))
    fail(Errc::DegenerateQuad, "homography system is singular");
  Mat3 h;
  for (int i = 0; i < 8; ++i) h.m[i] = b[i];
  h.m[8] = 1.0;
  return h;
}

// Strict convexity of a quad given in corner order (all cross products
// of consecutive edges share a sign).
inline bool is_convex_quad(const std::array<Vec2, 4>& q) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec2& p0 = q[i];
    const Vec2& p1 = q[(i + 1) % 4];
    const Vec2& p2 = q[(i + 2) % 4];
    double cross = (p1[0] - p0[0]) * (p2[1] - p1[1]) -
                   (p1[1] - p0[1]) * (p2[0] - p1[0]);
    if (std::abs(cross) < 1e-9) return false;
    int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

}  // namespace hanrec
