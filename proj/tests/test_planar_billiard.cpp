#include "doctest.h"

#include <cmath>

#include "billiard_lab/conics.hpp"
#include "billiard_lab/error.hpp"
#include "billiard_lab/planar_billiard.hpp"
#include "support.hpp"

using namespace billiard_lab;
using testing::Rng;

namespace {

Vec2 at(const SampledCurve& c, double t) { return as_vec2(c.point(t)); }

// Second intersection of the ray p + s u with x^2/a^2 + y^2/b^2 = 1 by the quadratic formula.
Vec2 ellipse_ray_hit(double a, double b, const Vec2& p, const Vec2& u) {
  const double qa = u.x() * u.x() / (a * a) + u.y() * u.y() / (b * b);
  const double qb = 2 * (p.x() * u.x() / (a * a) + p.y() * u.y() / (b * b));
  // p is on the curve, so the constant term vanishes and the roots are 0 and -qb/qa.
  return p - (qb / qa) * u;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("next_intersection on the unit circle") {
  const SampledCurve c = testing::circle(1.0, 256);
  const double t1 = next_intersection(c, {0.0, Vec2(-1, 0)});
  CHECK(testing::max_abs_diff(at(c, t1), Vec2(-1, 0)) < 1e-13);
  const double t2 = next_intersection(c, {0.0, Vec2(-1, 1).normalized()});
  CHECK(testing::max_abs_diff(at(c, t2), Vec2(0, 1)) < 1e-13);
}

TEST_CASE("next_intersection on an ellipse against the quadratic oracle") {
  const double a = 2, b = 1;
  const SampledCurve c = testing::ellipse(a, b, 256);
  const Vec2 u = (Vec2(0, 1) - Vec2(2, 0)).normalized();
  const double t = next_intersection(c, {0.0, u});
  CHECK(testing::max_abs_diff(at(c, t), Vec2(0, 1)) < 1e-12);

  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const double t0 = rng.uniform(0, kTwoPi);
    const BilliardState s = start_state(c, t0, rng.uniform(0.05, kPi - 0.05));
    const double t1 = next_intersection(c, s);
    const Vec2 expect = ellipse_ray_hit(a, b, at(c, t0), s.u);
    CHECK(testing::max_abs_diff(at(c, t1), expect) < 1e-12);
    // Chord consistency.
    const Vec2 d = at(c, t1) - at(c, t0);
    CHECK(std::abs(cross2(d, s.u)) / d.norm() < 1e-10);
  }
}

TEST_CASE("next_intersection errors") {
  const SampledCurve c = testing::circle(1.0, 128);
  CHECK(code_of([&] { next_intersection(c, {0.0, Vec2(1, 0)}); }) == ErrorCode::not_inward);
  CHECK(code_of([&] { next_intersection(c, {0.0, Vec2(0, 1)}); }) == ErrorCode::tangency);
}

TEST_CASE("reflect examples") {
  const SampledCurve c = testing::circle(1.0, 256);
  CHECK(testing::max_abs_diff(reflect(c, kPi, Vec2(-1, 0)), Vec2(1, 0)) < 1e-14);
  CHECK(testing::max_abs_diff(reflect(c, kPi / 2, Vec2(-1, 1).normalized()), Vec2(-1, -1).normalized()) < 1e-14);
  const SampledCurve e = testing::ellipse(2, 1, 256);
  for (double alpha : {0.2, 0.9, 1.4}) {
    const Vec2 v = reflect(e, 0.0, Vec2(-std::cos(alpha), std::sin(alpha)));
    CHECK(testing::max_abs_diff(v, Vec2(std::cos(alpha), std::sin(alpha))) < 1e-14);
  }
  CHECK_THROWS_AS(reflect(c, 0.0, Vec2(0, 1)), Error);
}

TEST_CASE("reflection preserves length and the tangential component") {
  const SampledCurve c = testing::wobbly_circle(256);
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const double t = rng.uniform(0, kTwoPi);
    const Vec2 n = inward_normal(c, t);
    Vec2 u = rng.unit2();
    if (std::abs(u.dot(n)) < 1e-3) continue;
    const Vec2 v = reflect(c, t, u);
    const Vec2 tan(-n.y(), n.x());
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
    CHECK(std::abs(v.dot(tan) - u.dot(tan)) < 1e-15);
    CHECK(std::abs(v.dot(n) + u.dot(n)) < 1e-15);
  }
}

TEST_CASE("circle orbit keeps J = -sin phi") {
  const SampledCurve c = testing::circle(1.0, 256);
  const QuadraticForm id = QuadraticForm::ellipse(1, 1);
  for (double phi : {0.3, 1.0, 1.5707963267948966, 2.5}) {
    const OrbitRecord r = orbit(c, start_state(c, 0.7, phi), 100, id);
    REQUIRE(r.complete());
    CHECK(r.states.size() == 101);
    for (double j : r.integral_values) CHECK(std::abs(j + std::sin(phi)) < 1e-12);
  }
}

TEST_CASE("ellipse orbit conserves the Joachimsthal integral") {
  const SampledCurve c = testing::ellipse(2, 1, 256);
  const QuadraticForm form = QuadraticForm::ellipse(2, 1);
  Rng rng(47);
  const OrbitRecord r = orbit(c, start_state(c, rng.uniform(0, kTwoPi), rng.uniform(0.3, 2.8)), 10000, form);
  REQUIRE(r.complete());
  CHECK(integral_drift(r) < 1e-8 * std::abs(r.integral_values.front()));
}

TEST_CASE("Joachimsthal identities hold chord by chord") {
  const double a = 1.5, b = 0.8, rot = 0.3;
  const SampledCurve c = testing::ellipse(a, b, 256, rot);
  const QuadraticForm form = QuadraticForm::ellipse(a, b, rot);
  const OrbitRecord r = orbit(c, start_state(c, 1.1, 0.8), 200);
  REQUIRE(r.complete());
  for (std::size_t k = 0; k + 1 < r.states.size(); ++k) {
    const Vec2 x = at(c, r.states[k].t), y = at(c, r.states[k + 1].t);
    const Vec2 u = r.states[k].u, v = r.states[k + 1].u;
    const Vec2 ax = as_vec2(form.apply(x)), ay = as_vec2(form.apply(y));
    CHECK(std::abs(ax.dot(u) + ay.dot(u)) < 1e-12);
    CHECK(std::abs(ay.dot(u) + ay.dot(v)) < 1e-12);
  }
}

TEST_CASE("superellipse orbit does not conserve J") {
  const SampledCurve c = testing::superellipse(512);
  const OrbitRecord r = orbit(c, start_state(c, 0.4, 1.0), 1000, QuadraticForm::ellipse(1, 1));
  REQUIRE(r.complete());
  CHECK(integral_drift(r) > 1e-2);
}

TEST_CASE("orbit time reversal") {
  // A mild wobble keeps the table close to integrable, so errors grow slowly.
  const SampledCurve c = testing::wobbly_circle(512, 0.01, 3);
  const OrbitRecord fwd = orbit(c, start_state(c, 0.2, 0.9), 100);
  REQUIRE(fwd.complete());
  const BilliardState& last = fwd.states.back();
  // Reverse: from the last foot point, travel back along the incoming chord.
  const double prev = fwd.states[fwd.states.size() - 2].t;
  const Vec2 back = (at(c, prev) - at(c, last.t)).normalized();
  const OrbitRecord bwd = orbit(c, {last.t, back}, 100);
  REQUIRE(bwd.complete());
  for (std::size_t k = 0; k < 100; ++k) {
    const double tf = fwd.states[99 - k].t, tb = bwd.states[k + 1].t;
    CHECK(testing::max_abs_diff(at(c, tf), at(c, tb)) < 1e-8);
  }
}

TEST_CASE("integral_drift edge cases") {
  OrbitRecord single;
  single.states.push_back({0.0, Vec2(-1, 0)});
  single.integral_values.push_back(0.5);
  CHECK(integral_drift(single) == 0.0);
  CHECK_THROWS_AS(integral_drift(OrbitRecord{}), Error);
}

TEST_CASE("pair_residual examples") {
  const QuadraticForm form = QuadraticForm::ellipse(2, 1);
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = rng.uniform(0, kTwoPi), t = rng.uniform(0, kTwoPi);
    const Vec2 x(2 * std::cos(s), std::sin(s)), y(2 * std::cos(t), std::sin(t));
    CHECK(std::abs(pair_residual(as_vec2(form.apply(x)), as_vec2(form.apply(y)), x, y)) < 1e-14);
  }
  CHECK(pair_residual(Vec2(1, 2), Vec2(3, 4), Vec2(0.5, 0.5), Vec2(0.5, 0.5)) == 0.0);
  CHECK(pair_residual(Vec2(1, 0), Vec2(0, 1), Vec2(1, 0), Vec2(0, 1)) == 0.0);
}

TEST_CASE("fit_normal_field recovers Ax on ellipses") {
  const struct {
    double a, b, rot;
  } cases[] = {{2, 1, 0.0}, {1.3, 0.7, 0.5}, {3, 1, 1.2}};
  for (const auto& e : cases) {
    const SampledCurve c = testing::ellipse(e.a, e.b, 256, e.rot);
    const QuadraticForm form = QuadraticForm::ellipse(e.a, e.b, e.rot);
    const NormalFieldFit fit = fit_normal_field(c, 2000, 3);
    CHECK(fit.residual < 1e-9);
    CHECK(fit.admissible);
    double worst = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Vec2 n = fitted_normal(c, fit.field, j);
      const Vec2 ax = as_vec2(form.apply(c.sample(j)));
      worst = std::max(worst, std::atan2(std::abs(cross2(n, ax)), n.dot(ax)));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("fit_normal_field gives a constant profile on the circle") {
  const SampledCurve c = testing::circle(1.0, 128);
  const NormalFieldFit fit = fit_normal_field(c, 500, 9);
  const double f0 = fit.field.f.front();
  for (double f : fit.field.f) CHECK(std::abs(f - f0) < 1e-10);
  CHECK(f0 > 0);
}

TEST_CASE("fit_normal_field separates the superellipse") {
  const NormalFieldFit fit = fit_normal_field(testing::superellipse(256), 2000, 3);
  CHECK(fit.residual > 1e-3);
}

TEST_CASE("fit residual is at roundoff on ellipses and plateaus on the superellipse") {
  for (std::size_t n : {32, 64, 128}) {
    // Non-uniform parameter so the interpolant is not exact.
    const SampledCurve e = SampledCurve::from_function(
        [](double t) -> VecX {
          const double s = t + 0.4 * std::sin(t);
          return Vec2(2 * std::cos(s), std::sin(s));
        },
        2, kTwoPi, n);
    CHECK(fit_normal_field(e, 300, 1).residual < 1e-12);
  }
  const double s128 = fit_normal_field(testing::superellipse(128), 500, 1).residual;
  const double s256 = fit_normal_field(testing::superellipse(256), 500, 1).residual;
  CHECK(s128 > 1e-3);
  CHECK(s256 > 1e-3);
  CHECK(s256 > 0.5 * s128);
}

TEST_CASE("fit_normal_field rejects short curves") {
  CHECK_THROWS_AS(fit_normal_field(testing::circle(1.0, 16), 100, 1), Error);
}
