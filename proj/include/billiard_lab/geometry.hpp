#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace billiard_lab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class MetricSignature {
  euclidean,
  lorentzian,  // (+, +, -): the last coordinate is timelike
};

inline Vec2 as_vec2(const VecX& v) { return {v(0), v(1)}; }
inline Vec3 as_vec3(const VecX& v) { return {v(0), v(1), v(2)}; }

/// Euclidean dot product or the Lorentzian form x1*y1 + ... - xn*yn.
double inner(const VecX& u, const VecX& v, MetricSignature sig);

/// det[a b] for planar vectors.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// det[a b c] with the arguments as columns.
inline double bracket3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

/// Counterclockwise quarter turn.
inline Vec2 rotate_ccw(const Vec2& v) { return {-v.y(), v.x()}; }
/// Clockwise quarter turn.
inline Vec2 rotate_cw(const Vec2& v) { return {v.y(), -v.x()}; }

/// Reduce t into [0, period).
double wrap_parameter(double t, double period);

/// Worker count for batch loops; honours BILLIARD_LAB_THREADS.
unsigned thread_budget();

/// Runs body(i) for i in [0, n) on up to thread_budget() threads. Bodies must
/// write only to their own slot of any shared output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Seed for the i-th independent random stream derived from a base seed.
unsigned long long derive_seed(unsigned long long seed, unsigned long long stream);

}  // namespace billiard_lab
