#pragma once

#include <cmath>
#include <random>

#include "billiard_lab/geometry.hpp"
#include "billiard_lab/sampled_curve.hpp"

namespace testing {

using namespace billiard_lab;

inline SampledCurve ellipse(double a, double b, std::size_t n = 512, double rot = 0.0, Vec2 c = Vec2::Zero()) {
  const double cr = std::cos(rot), sr = std::sin(rot);
  return SampledCurve::from_function(
      [=](double t) -> VecX {
        const double x = a * std::cos(t), y = b * std::sin(t);
        return Vec2(c.x() + cr * x - sr * y, c.y() + sr * x + cr * y);
      },
      2, kTwoPi, n);
}

inline SampledCurve circle(double r = 1.0, std::size_t n = 512) { return ellipse(r, r, n); }

/// x^4 + y^4 = 1 in polar form.
inline SampledCurve superellipse(std::size_t n = 512) {
  return SampledCurve::from_function(
      [](double t) -> VecX {
        const double c = std::cos(t), s = std::sin(t);
        const double r = std::pow(c * c * c * c + s * s * s * s, -0.25);
        return Vec2(r * c, r * s);
      },
      2, kTwoPi, n);
}

/// Circle with a small radial wobble; convex, not a conic.
inline SampledCurve wobbly_circle(std::size_t n = 512, double eps = 0.05, int mode = 3) {
  return SampledCurve::from_function(
      [=](double t) -> VecX {
        const double r = 1.0 + eps * std::cos(mode * t);
        return Vec2(r * std::cos(t), r * std::sin(t));
      },
      2, kTwoPi, n);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed) : gen(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  double normal() { return std::normal_distribution<double>()(gen); }
  Vec2 unit2() {
    const double a = uniform(0.0, kTwoPi);
    return {std::cos(a), std::sin(a)};
  }
  Vec3 unit3() {
    Vec3 v(normal(), normal(), normal());
    return v.normalized();
  }
  Vec3 vec3(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
};

inline double max_abs_diff(const VecX& a, const VecX& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing
