#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

/// Planar curve in an equiaffine parameter t, [gamma', gamma''] = 1.
struct AffineParamCurve {
  SampledCurve curve;
  /// Parameter of the source curve at every sample.
  std::vector<double> source_parameters;
  /// max |[gamma', gamma''] - 1| over the samples.
  double bracket_defect = 0.0;
  /// max relative deviation of ds/dt from kappa^(-1/3) over the samples.
  double speed_defect = 0.0;
};

struct ConvexityOptions {
  /// [gamma', gamma''] below this fraction of its maximum counts as vanishing curvature.
  double strict_tolerance = 1e-9;
  /// Allowed defect of the equiaffine invariant after resampling.
  double invariant_tolerance = 1e-8;
};

/// Equiaffine speed profile [gamma', gamma'']^(1/3) at the samples, after the
/// convexity checks. Curves must be counterclockwise.
std::vector<double> affine_speed(const SampledCurve& curve, const ConvexityOptions& opt = {});

/// Resamples a strictly convex planar curve in its equiaffine parameter.
AffineParamCurve affine_reparameterize(const SampledCurve& curve, const ConvexityOptions& opt = {});

/// k = [gamma'', gamma'''] at t, valid when gamma''' = -k gamma' and [gamma', gamma''] = 1.
double affine_curvature(const AffineParamCurve& ac, double t, double tol = 1e-6);
/// k at every sample of the equiaffine curve.
std::vector<double> affine_curvature_profile(const AffineParamCurve& ac);

/// Euclidean curvature and its first three arc-length derivatives at the
/// curve's samples, obtained by differentiating through the parameterisation
/// with truncated Taylor arithmetic.
struct CurvatureProfile {
  std::vector<double> parameters;  // source parameter of each entry
  std::vector<double> s;           // arc length from parameter 0
  std::vector<double> kappa, dkappa, d2kappa, d3kappa;
  double length = 0.0;
};

CurvatureProfile curvature_profile(const SampledCurve& curve);

/// 36 k^4 k' + 9 k^2 k''' - 45 k k' k'' + 40 k'^3 along a curvature profile.
struct KappaOdeResidual {
  std::vector<double> raw;
  /// raw / kbar^6 with kbar = 2 pi / length, the mean curvature of a closed
  /// convex curve. Dimensionless and stays finite at flat points.
  std::vector<double> scaled;
  double scale = 1.0;
  double max_raw = 0.0;
  double max_scaled = 0.0;
};

KappaOdeResidual kappa_ode_residual(const CurvatureProfile& profile);

/// Source-parameter window [begin, end] (taken modulo the period) for
/// reporting statistics on a sub-arc.
struct ParamRange {
  double begin;
  double end;
  bool contains(double t, double period) const;
};

struct ConicTestOptions {
  double tol = 1e-5;
  std::optional<ParamRange> arc;
  ConvexityOptions convexity;
};

struct ConicVerdict {
  bool conic = false;
  std::string reason;
  std::vector<double> k_parameters;  // equiaffine parameter of each k sample
  std::vector<double> k_profile;
  double k_min = 0.0, k_max = 0.0, k_mean = 0.0;
  /// (max k - min k) / |mean k|
  double k_variation = 0.0;
  KappaOdeResidual kappa_residual;
  /// min over max of [gamma', gamma''] on the source samples.
  double curvature_ratio = 0.0;
};

/// Conic iff the affine curvature is constant to relative tolerance tol.
/// Closed curves whose curvature vanishes somewhere are reported non-conic,
/// since every closed conic is an ellipse with positive curvature.
ConicVerdict conic_test(const SampledCurve& curve, const ConicTestOptions& opt = {});

}  // namespace billiard_lab
