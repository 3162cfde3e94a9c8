#include <doctest.h>

#include "htp/mat2.hpp"

using namespace htp;

TEST_CASE("SymMat2 eigenvalues and inverse") {
  const SymMat2 m{2.0, 0.3, 1.0};
  const auto [lo, hi] = m.eigenvalues();
  // mean 1.5, radius sqrt(0.5^2 + 0.3^2) = sqrt(0.34)
  CHECK(lo == doctest::Approx(1.5 - std::sqrt(0.34)).epsilon(1e-14));
  CHECK(hi == doctest::Approx(1.5 + std::sqrt(0.34)).epsilon(1e-14));

  const SymMat2 inv = m.inverse();
  // m * inv = identity
  CHECK(m.a11 * inv.a11 + m.a12 * inv.a12 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.a11 * inv.a12 + m.a12 * inv.a22 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(m.a12 * inv.a12 + m.a22 * inv.a22 == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS((SymMat2{0.0, 0.0, 0.0}.inverse()), std::domain_error);
}

TEST_CASE("SymMat2 positive-definite square root") {
  const SymMat2 m{2.0, 0.3, 1.0};
  const SymMat2 r = m.sqrt_pd();
  CHECK(r.a11 * r.a11 + r.a12 * r.a12 == doctest::Approx(m.a11).epsilon(1e-14));
  CHECK(r.a11 * r.a12 + r.a12 * r.a22 == doctest::Approx(m.a12).epsilon(1e-14));
  CHECK(r.a12 * r.a12 + r.a22 * r.a22 == doctest::Approx(m.a22).epsilon(1e-14));

  const SymMat2 isr = m.inv_sqrt_pd();
  // isr * m * isr = identity
  const Vec2 col1 = isr.apply(m.apply(isr.apply({1.0, 0.0})));
  const Vec2 col2 = isr.apply(m.apply(isr.apply({0.0, 1.0})));
  CHECK(col1.x == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(col1.y == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(col2.y == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS((SymMat2{1.0, 2.0, 1.0}.sqrt_pd()), std::domain_error);   // indefinite
  CHECK_THROWS_AS((SymMat2{-1.0, 0.0, -1.0}.sqrt_pd()), std::domain_error); // negative definite
}
