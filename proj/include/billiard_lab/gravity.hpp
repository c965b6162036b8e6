#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "billiard_lab/conics.hpp"
#include "billiard_lab/geometry.hpp"
#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

enum class DensityKind { homeoid, uniform, custom };

std::string_view to_string(DensityKind kind);

/// Linear mass density along a curve, per unit arc length.
struct DensityModel {
  DensityKind kind = DensityKind::uniform;
  std::optional<QuadraticForm> form;                           // homeoid
  std::function<double(const Vec2& x, double t)> profile;      // custom

  static DensityModel homeoid(QuadraticForm form);
  static DensityModel uniform();
  static DensityModel custom(std::function<double(const Vec2&, double)> profile);

  double operator()(const Vec2& x, double t) const;
};

/// 1 / |A (x - c)| on the ellipse A(x - c).(x - c) = 1.
double homeoid_density(const QuadraticForm& form, const Vec2& x, double tol = 1e-8);

struct ForceResult {
  Vec2 force;
  /// |F_N - F_{N/2}| from the even-node subrule.
  double quadrature_error;
  std::size_t nodes;
};

inline constexpr double kBoundaryExclusion = 1e-6;

/// Smallest signed distance from o to the tangent lines at the curve samples;
/// positive inside a counterclockwise convex curve.
double interior_margin(const SampledCurve& curve, const Vec2& o);

/// Integral of rho(x) (x - o) / |x - o|^2 ds by the periodic trapezoid rule
/// (nodes = 0 uses the curve's sample count). For points near the curve the
/// nodes are equally spaced in a periodic variable that clusters them at the
/// closest curve point; far from the curve they are equally spaced in t.
ForceResult net_force(const SampledCurve& curve, const DensityModel& density, const Vec2& o, std::size_t nodes = 0);

std::vector<ForceResult> net_forces(const SampledCurve& curve, const DensityModel& density,
                                    const std::vector<Vec2>& points, std::size_t nodes = 0);

struct PairCancellation {
  Vec2 x;  // intersection in the direction of u
  Vec2 y;  // intersection opposite to u
  Vec2 u;
  /// (N(x) + N(y)).u
  double residual;
  /// Force per unit opening angle from the arcs at x and at y.
  double force_x;
  double force_y;
};

/// Line through o along direction against the ellipse, with N = A(x - c).
PairCancellation pair_cancellation(const QuadraticForm& form, const Vec2& o, const Vec2& direction);

/// Same test on a sampled curve with a supplied normal field N (scaled so N(x).x = 1 on a conic).
PairCancellation pair_cancellation(const SampledCurve& curve, const std::function<Vec2(const Vec2&)>& normal,
                                   const Vec2& o, const Vec2& direction);

/// Uniform random points at least margin inside the convex curve.
std::vector<Vec2> random_interior_points(const SampledCurve& curve, std::size_t count, unsigned long long seed,
                                         double margin = 1e-3);

}  // namespace billiard_lab
