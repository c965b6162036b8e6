#include "doctest.h"

#include <atomic>
#include <cmath>
#include <set>

#include "billiard_lab/error.hpp"
#include "billiard_lab/roots.hpp"
#include "billiard_lab/trig_series.hpp"
#include "support.hpp"

using namespace billiard_lab;
using testing::Rng;

namespace {

// Cofactor expansion along the first row; independent of the library's triple product.
double det3_cofactor(const Vec3& a, const Vec3& b, const Vec3& c) {
  // columns a, b, c
  return a(0) * (b(1) * c(2) - c(1) * b(2)) - b(0) * (a(1) * c(2) - c(1) * a(2)) + c(0) * (a(1) * b(2) - b(1) * a(2));
}

}  // namespace

TEST_CASE("evaluate_jet on the unit circle") {
  const SampledCurve c = testing::circle(1.0, 64);
  const Jet j0 = evaluate_jet(c, 0.0, 2);
  CHECK(testing::max_abs_diff(j0[0], Vec2(1, 0)) < 1e-14);
  CHECK(testing::max_abs_diff(j0[1], Vec2(0, 1)) < 1e-13);
  CHECK(testing::max_abs_diff(j0[2], Vec2(-1, 0)) < 1e-13);
  const Jet j1 = evaluate_jet(c, kPi / 2, 1);
  CHECK(testing::max_abs_diff(j1.point(), Vec2(0, 1)) < 1e-14);
  CHECK(testing::max_abs_diff(j1[1], Vec2(-1, 0)) < 1e-13);
}

TEST_CASE("evaluate_jet third derivative of (2 cos t, sin t)") {
  // d^3/dt^3 (2 cos t, sin t) = (2 sin t, -cos t)
  const SampledCurve e = testing::ellipse(2, 1, 64);
  const Jet j = evaluate_jet(e, 0.0, 3);
  CHECK(testing::max_abs_diff(j[3], Vec2(0, -1)) < 1e-12);
  const double t = 0.73;
  const Jet k = evaluate_jet(e, t, 5);
  CHECK(k.order() == 5);
  CHECK(testing::max_abs_diff(k[5], Vec2(-2 * std::sin(t), std::cos(t))) < 1e-10);
}

TEST_CASE("evaluate_jet rejects bad requests") {
  const SampledCurve c = testing::circle(1.0, 16);
  CHECK_THROWS_AS(evaluate_jet(c, 0.0, 6), Error);
  CHECK_THROWS_AS(evaluate_jet(c, 0.0, -1), Error);
  MatX open(2, 8);
  for (int j = 0; j < 8; ++j) open.col(j) = Vec2(j, j * j);
  const SampledCurve arc(open, 1.0, false);
  try {
    evaluate_jet(arc, 0.1, 1);
    FAIL("expected not_closed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_closed);
  }
}

TEST_CASE("inner products") {
  CHECK(inner(Vec3(1, 0, 0), Vec3(1, 0, 0), MetricSignature::euclidean) == 1.0);
  CHECK(inner(Vec3(0, 0, 1), Vec3(0, 0, 1), MetricSignature::lorentzian) == -1.0);
  CHECK(inner(Vec3(1, 2, 3), Vec3(4, 5, 6), MetricSignature::lorentzian) == doctest::Approx(4 + 10 - 18));
  try {
    inner(Vec2(1, 0), Vec3(1, 0, 0), MetricSignature::euclidean);
    FAIL("expected dimension_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
}

TEST_CASE("bracket3 examples") {
  const Vec3 e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  CHECK(bracket3(e1, e2, e3) == 1.0);
  CHECK(bracket3(e1, e1, e3) == 0.0);
  const Vec3 a(1, 2, 3), b(0, 1, 4), c(5, 6, 0);
  CHECK(det3_cofactor(a, b, c) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bracket3(a, b, c) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bracket3 is alternating and multilinear") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a = rng.vec3(), b = rng.vec3(), c = rng.vec3(), d = rng.vec3();
    const double s = rng.uniform(-3, 3);
    const double abc = bracket3(a, b, c);
    CHECK(std::abs(abc - det3_cofactor(a, b, c)) < 1e-14);
    CHECK(std::abs(bracket3(b, a, c) + abc) < 1e-14);
    CHECK(std::abs(bracket3(a, c, b) + abc) < 1e-14);
    CHECK(std::abs(bracket3(c, b, a) + abc) < 1e-14);
    CHECK(std::abs(bracket3(a, a, c)) < 1e-15);
    CHECK(std::abs(bracket3(s * a + d, b, c) - (s * abc + bracket3(d, b, c))) < 1e-13);
    CHECK(std::abs(bracket3(a, b, s * c + d) - (s * abc + bracket3(a, b, d))) < 1e-13);
  }
}

TEST_CASE("spectral derivative of sin at 64 samples") {
  std::vector<double> s(64);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(kTwoPi * static_cast<double>(j) / 64.0);
  const TrigSeries ts(s, kTwoPi);
  const auto d = ts.derivative_at_samples(1);
  double err = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) err = std::max(err, std::abs(d[j] - std::cos(kTwoPi * static_cast<double>(j) / 64.0)));
  CHECK(err < 1e-10);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(-10, 10);
    CHECK(std::abs(ts.value(t) - std::sin(t)) < 1e-13);
    CHECK(std::abs(ts.derivative(t, 3) + std::cos(t)) < 1e-12);
  }
}

TEST_CASE("TrigSeries antiderivative") {
  std::vector<double> s(32);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = 1.0 + std::cos(kTwoPi * static_cast<double>(j) / 32.0);
  const TrigSeries ts(s, kTwoPi);
  for (double t : {0.0, 0.4, 3.0, 7.5, -2.0}) CHECK(std::abs(ts.integral(t) - (t + std::sin(t))) < 1e-13);
  CHECK(std::abs(ts.period_integral() - kTwoPi) < 1e-13);
}

TEST_CASE("reparameterize examples") {
  const SampledCurve c = testing::circle(1.0, 128);
  const std::vector<double> ones(128, 1.0);
  const SampledCurve same = reparameterize(c, ones);
  CHECK(same.period() == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK(testing::max_abs_diff(Eigen::Map<const VecX>(same.samples().data(), 256), Eigen::Map<const VecX>(c.samples().data(), 256)) < 1e-12);

  const SampledCurve c2 = testing::circle(2.0, 128);
  const std::vector<double> twos(128, 2.0);
  CHECK(reparameterize(c2, twos).period() == doctest::Approx(4 * kPi).epsilon(1e-14));

  // [gamma', gamma''] = ab = 2 for (2 cos, sin); affine speed 2^(1/3).
  const SampledCurve e = testing::ellipse(2, 1, 128);
  const MatX d1 = e.derivative_samples(1), d2 = e.derivative_samples(2);
  std::vector<double> speed(128);
  for (std::size_t j = 0; j < 128; ++j) speed[j] = std::cbrt(cross2(d1.col(j), d2.col(j)));
  CHECK(reparameterize(e, speed).period() == doctest::Approx(kTwoPi * std::cbrt(2.0)).epsilon(1e-12));
  std::vector<double> bad(128, 1.0);
  bad[5] = 0.0;
  try {
    reparameterize(e, bad);
    FAIL("expected non_positive_speed");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::non_positive_speed);
  }
}

TEST_CASE("reparameterize then invert returns the original samples") {
  const SampledCurve e = testing::ellipse(1.5, 0.7, 256, 0.3);
  std::vector<double> speed(256);
  for (std::size_t j = 0; j < speed.size(); ++j) speed[j] = 1.0 + 0.4 * std::sin(2.0 * e.parameter(j)) + 0.1 * std::cos(5.0 * e.parameter(j));
  const Reparameterization fwd = reparameterize_with_map(e, speed);
  const TrigSeries rate(speed, e.period());
  std::vector<double> back(256);
  for (std::size_t j = 0; j < back.size(); ++j) back[j] = 1.0 / rate.value(fwd.source_parameters[j]);
  const Reparameterization inv = reparameterize_with_map(fwd.curve, back);
  CHECK(inv.curve.period() == doctest::Approx(e.period()).epsilon(1e-12));
  double err = 0.0;
  for (std::size_t j = 0; j < 256; ++j) err = std::max(err, (inv.curve.sample(j) - e.sample(j)).norm());
  CHECK(err < 1e-8);
}

TEST_CASE("signed area and orientation") {
  const SampledCurve e = testing::ellipse(2, 1, 64);
  CHECK(e.signed_area() == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(e.orientation() > 0);
  MatX rev(2, 64);
  for (int j = 0; j < 64; ++j) rev.col(j) = e.samples().col((64 - j) % 64);
  CHECK(SampledCurve(rev, kTwoPi).orientation() < 0);
}

TEST_CASE("find_root") {
  const auto r = roots::find_root([](double x) { return std::cos(x); }, 0.0, 3.0);
  CHECK(r.converged);
  CHECK(std::abs(r.x - kPi / 2) < 1e-15);
  const auto cubic = roots::find_root([](double x) { return x * x * x - 2 * x - 5; }, 2.0, 3.0);
  CHECK(std::abs(cubic.fx) < 1e-12);
  CHECK_THROWS_AS(roots::find_root([](double x) { return x * x + 1; }, -1.0, 1.0), Error);
}

TEST_CASE("wrap_parameter") {
  CHECK(wrap_parameter(7.0, kTwoPi) == doctest::Approx(7.0 - kTwoPi));
  CHECK(wrap_parameter(-1.0, kTwoPi) == doctest::Approx(kTwoPi - 1.0));
  const double w = wrap_parameter(-1e-18, kTwoPi);
  CHECK((w >= 0.0 && w < kTwoPi));
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 57) throw Error(ErrorCode::invalid_argument, "boom");
                  }),
                  Error);
}

TEST_CASE("derive_seed gives distinct streams") {
  std::set<unsigned long long> seen;
  for (unsigned long long i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}
