// Fixed-size linear algebra for the two-parameter estimation problem.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace htp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  double norm() const { return std::hypot(x, y); }
};

// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  SymMat2& operator+=(const SymMat2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a22 += o.a22;
    return *this;
  }
  friend SymMat2 operator*(double s, const SymMat2& m) {
    return {s * m.a11, s * m.a12, s * m.a22};
  }
  friend SymMat2 operator-(const SymMat2& a, const SymMat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
  }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }

  // Eigenvalues in ascending order.
  std::pair<double, double> eigenvalues() const {
    const double mean = 0.5 * (a11 + a22);
    const double rad = std::hypot(0.5 * (a11 - a22), a12);
    return {mean - rad, mean + rad};
  }

  Vec2 apply(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y};
  }

  SymMat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("SymMat2::inverse: singular matrix");
    return {a22 / d, -a12 / d, a11 / d};
  }

  // Symmetric PD square root: sqrt(M) = (M + sqrt(det) I) / sqrt(trace + 2 sqrt(det)),
  // valid by Cayley-Hamilton for positive definite M.
  SymMat2 sqrt_pd() const {
    const double d = det();
    const double t = trace();
    if (!(d > 0.0) || !(t > 0.0))
      throw std::domain_error("SymMat2::sqrt_pd: matrix not positive definite");
    const double s = std::sqrt(d);
    const double denom = std::sqrt(t + 2.0 * s);
    return {(a11 + s) / denom, a12 / denom, (a22 + s) / denom};
  }

  SymMat2 inv_sqrt_pd() const { return sqrt_pd().inverse(); }
};

}  // namespace htp
