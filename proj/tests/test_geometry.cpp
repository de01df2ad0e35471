#include <catch2/catch_amalgamated.hpp>

#include "hanrec/augment.hpp"
#include "hanrec/geometry.hpp"
#include "hanrec/rng.hpp"

using namespace hanrec;

TEST_CASE("uniform corner displacement solves to a pure translation") {
  const double dx = 5.5, dy = -3.25;
  std::array<Vec2, 4> src = {Vec2{0, 0}, Vec2{63, 0}, Vec2{63, 63}, Vec2{0, 63}};
  std::array<Vec2, 4> dst;
  for (int i = 0; i < 4; ++i) dst[i] = {src[i][0] + dx, src[i][1] + dy};
  Mat3 h = homography_from_points(src, dst);
  h.normalize();
  const double expected[9] = {1, 0, dx, 0, 1, dy, 0, 0, 1};
  for (int i = 0; i < 9; ++i) CHECK(std::abs(h.m[i] - expected[i]) < 1e-9);
}

TEST_CASE("solved homography maps every corner onto its target") {
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Vec2, 4> src = {Vec2{0, 0}, Vec2{63, 0}, Vec2{63, 63}, Vec2{0, 63}};
    std::array<Vec2, 4> dst;
    for (int i = 0; i < 4; ++i)
      dst[i] = {src[i][0] + rng.uniform(-9, 9), src[i][1] + rng.uniform(-9, 9)};
    if (!is_convex_quad(dst)) continue;
    Mat3 h = homography_from_points(src, dst);
    h.normalize();
    for (int i = 0; i < 4; ++i) {
      Vec2 p = h.apply(src[i][0], src[i][1]);
      CHECK(std::abs(p[0] - dst[i][0]) < 1e-6);
      CHECK(std::abs(p[1] - dst[i][1]) < 1e-6);
    }
  }
}

TEST_CASE("zero jitter yields the identity") {
  Rng rng(1);
  ProjectiveTransform t = random_homography(rng, 64, 64, 0.0);
  for (int i = 0; i < 9; ++i)
    CHECK(t.h.m[i] == (i % 4 == 0 ? 1.0 : 0.0));
}

TEST_CASE("random homographies are normalized, invertible, corner-accurate") {
  Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    ProjectiveTransform t = random_homography(rng, 64, 64, 0.15);
    CHECK(t.h.m[8] == 1.0);
    CHECK(std::abs(t.h.det()) > 1e-9);
    Mat3 inv = t.h.inverse();
    // h * h^-1 == identity
    Vec2 p = t.h.apply(10.0, 20.0);
    Vec2 q = inv.apply(p[0], p[1]);
    CHECK(std::abs(q[0] - 10.0) < 1e-9);
    CHECK(std::abs(q[1] - 20.0) < 1e-9);
  }
}

TEST_CASE("convexity test rejects crossed quads") {
  std::array<Vec2, 4> square = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
  CHECK(is_convex_quad(square));
  std::array<Vec2, 4> crossed = {Vec2{0, 0}, Vec2{1, 1}, Vec2{1, 0}, Vec2{0, 1}};
  CHECK_FALSE(is_convex_quad(crossed));
  std::array<Vec2, 4> collinear = {Vec2{0, 0}, Vec2{1, 0}, Vec2{2, 0}, Vec2{0, 1}};
  CHECK_FALSE(is_convex_quad(collinear));
}

TEST_CASE("linear solver handles permuted systems") {
  // 3x3 with zero leading pivot forces the pivoting path
  double a[9] = {0, 1, 2, 3, 0, 1, 1, 2, 0};
  double b[3] = {8, 6, 5};  // solution x = (1, 2, 3)
  REQUIRE(solve_linear(3, a, b));
  CHECK(std::abs(b[0] - 1) < 1e-12);
  CHECK(std::abs(b[1] - 2) < 1e-12);
  CHECK(std::abs(b[2] - 3) < 1e-12);

  double s[4] = {1, 2, 2, 4};  // singular
  double sb[2] = {1, 2};
  CHECK_FALSE(solve_linear(2, s, sb));
}
