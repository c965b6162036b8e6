#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "billiard_lab/conics.hpp"
#include "billiard_lab/geometry.hpp"
#include "billiard_lab/planar_billiard.hpp"
#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

enum class SpaceKind { sphere, hyperbolic };

std::string_view to_string(SpaceKind kind);

/// Unit sphere, or the upper sheet of x^2 + y^2 - z^2 = -1 with the metric dx^2 + dy^2 - dz^2.
struct SpaceForm {
  SpaceKind kind = SpaceKind::sphere;
  MetricSignature signature = MetricSignature::euclidean;

  static SpaceForm sphere() { return {SpaceKind::sphere, MetricSignature::euclidean}; }
  static SpaceForm hyperbolic() { return {SpaceKind::hyperbolic, MetricSignature::lorentzian}; }

  double pair(const Vec3& u, const Vec3& v) const { return inner(u, v, signature); }
  /// +1 on the sphere, -1 on the hyperboloid.
  double self_pairing() const { return kind == SpaceKind::sphere ? 1.0 : -1.0; }
  bool contains(const Vec3& x, double tol = 1e-10) const;
  /// Pulls a nearby point back onto the surface.
  Vec3 project(const Vec3& x) const;
  /// Unit tangent at x closest to v.
  Vec3 tangent_unit(const Vec3& x, const Vec3& v) const;
};

struct GeodesicTangents {
  Vec3 u;  // at x, towards y
  Vec3 v;  // at y, continuing away from x
  double u_length;  // before normalization
  double v_length;
};

/// Unit tangents of the geodesic segment from x to y.
///
/// Sphere: u ~ y - (x.y) x, v ~ (x.y) y - x.
/// Hyperboloid: u ~ y + <x,y> x, v ~ -x - <x,y> y in the Lorentzian form.
GeodesicTangents geodesic_tangents(const Vec3& x, const Vec3& y, const SpaceForm& space);

/// Point at parameter theta on the geodesic through x with unit tangent u.
Vec3 geodesic_point(const Vec3& x, const Vec3& u, double theta, const SpaceForm& space);
Vec3 geodesic_velocity(const Vec3& x, const Vec3& u, double theta, const SpaceForm& space);

/// A conic on the sphere or hyperboloid: the surface cut by the cone Ax.x = 0.
///
/// The cone must have signature (2,1) up to an overall sign. The region Ax.x < 0
/// around the negative eigendirection is the convex table.
class SphericalConic {
 public:
  SphericalConic(QuadraticForm cone, SpaceForm space = SpaceForm::sphere());

  const QuadraticForm& cone() const { return cone_; }
  const Mat3& matrix() const { return a_; }
  const SpaceForm& space() const { return space_; }

  double value(const Vec3& x) const { return x.dot(a_ * x); }
  bool contains(const Vec3& x, double tol = 1e-9) const;
  /// Outward conic normal in the tangent plane of the surface, unit in the surface metric.
  Vec3 normal(const Vec3& x) const;
  /// Curve point at angle phi; perturbation scales the elliptic part by 1 + eps cos(mode phi).
  Vec3 point(double phi, double eps = 0.0, int mode = 3) const;
  SampledCurve sample(std::size_t n, double eps = 0.0, int mode = 3) const;

 private:
  QuadraticForm cone_;
  Mat3 a_;
  SpaceForm space_;
  Vec3 axis_[3];
  double scale_[3];
};

using HyperbolicConic = SphericalConic;

/// Ax.u, the invariant of billiards inside the conic.
double spherical_joachimsthal(const SphericalConic& conic, const Vec3& x, const Vec3& u);

struct SurfaceState {
  Vec3 x;
  Vec3 u;
};

struct SurfaceStep {
  SurfaceState next;
  Vec3 v_in;     // incoming tangent at the hit point
  double theta;  // geodesic length travelled
};

/// One bounce: follow the geodesic from x along u to the conic and reflect.
SurfaceStep surface_billiard_step(const SphericalConic& conic, const SurfaceState& state);
SurfaceStep spherical_billiard_step(const SphericalConic& conic, const SurfaceState& state);
SurfaceStep hyperbolic_billiard_step(const SphericalConic& conic, const SurfaceState& state);

/// Point at angle phi with unit tangent making the given angle in (0, pi) with the conic.
SurfaceState surface_start_state(const SphericalConic& conic, double phi, double angle);

struct SurfaceOrbit {
  std::vector<SurfaceState> states;
  std::vector<double> invariants;
  std::optional<std::string> abort_reason;
  bool complete() const { return !abort_reason; }
};

SurfaceOrbit surface_orbit(const SphericalConic& conic, const SurfaceState& start, std::size_t steps);
double invariant_drift(const SurfaceOrbit& orbit);

/// Equiaffine curve on the sphere or hyperboloid: [gamma, gamma', gamma''] = 1.
struct EquiaffineCurve3 {
  SampledCurve curve;
  std::vector<double> source_parameters;
  double bracket_defect;
  /// Set when the input orientation had a negative bracket and was reversed.
  bool reversed;
};

EquiaffineCurve3 equiaffine_frame3(const SampledCurve& curve, double degenerate_tolerance = 1e-9);

/// gamma''' = a gamma + b gamma' at the samples of an equiaffine curve.
struct CubicCoeffs {
  std::vector<double> parameters;
  std::vector<double> a;
  std::vector<double> b;
  double period;
  double c_max;
  double reconstruction_residual;
};

CubicCoeffs cubic_coeffs(const EquiaffineCurve3& ec, double c_tolerance = 1e-6);

struct CriterionProfile {
  std::vector<double> values;  // 2a - b'
  double max_abs;
  double mean_abs;
};

CriterionProfile conic_criterion_residual(const CubicCoeffs& coeffs);

/// Fits f with N = f (gamma' x gamma) from f_i [g_i, g'_i, g_j] = f_j [g_j, g'_j, g_i].
NormalFieldFit fit_spherical_normal_field(const SampledCurve& curve, std::size_t pair_budget,
                                          unsigned long long seed, const FitOptions& opt = {});

Vec3 fitted_spherical_normal(const SampledCurve& curve, const NormalFieldCandidate& field, std::size_t j);

/// True when every sample lies strictly on one side of a plane through the origin.
bool in_open_hemisphere(const SampledCurve& curve);

}  // namespace billiard_lab
