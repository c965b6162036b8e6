#pragma once

#include <cstddef>
#include <vector>

#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

/// Area between the arc t1 -> t2 (increasing parameter) and its closing chord,
/// from Green's formula: exact integration of the trigonometric interpolant of
/// [gamma, gamma'] along the arc plus the chord term. Positive on
/// counterclockwise curves.
class ChordAreas {
 public:
  explicit ChordAreas(const SampledCurve& curve);

  double operator()(double t1, double t2) const;
  double total_area() const { return 0.5 * integrand_.period_integral(); }
  const SampledCurve& curve() const { return curve_; }

 private:
  SampledCurve curve_;
  TrigSeries integrand_;
};

double chord_area(const SampledCurve& curve, double t1, double t2);

/// Candidate Poritsky parameter x of a convex curve: the equiaffine parameter
/// rescaled to period 2 pi.
///
/// Isolated flat points (zero curvature) are tolerated so that the candidate can
/// still be built, and refuted, for curves such as x^4 + y^4 = 1.
class PoritskyParam {
 public:
  explicit PoritskyParam(const SampledCurve& base, double strict_tolerance = 1e-9);

  const SampledCurve& base() const { return areas_.curve(); }
  /// Period of x.
  double period() const { return kTwoPi; }
  /// Source parameter at Poritsky parameter x.
  double to_base(double x) const;
  /// Poritsky parameter of source parameter t (unwrapped for t outside a period).
  double from_base(double t) const;

  Vec2 point(double x) const;
  /// d gamma / dx.
  Vec2 velocity(double x) const;
  /// A(x, y) between the points at Poritsky parameters x and y.
  double area(double x, double y) const;

 private:
  ChordAreas areas_;
  TrigSeries speed_;
  std::vector<double> cumulative_;
  double total_;
};

struct PoritskyResult {
  PoritskyParam param;
  /// max_x |A(x, x + c) - mean| / mean for the reference offset.
  double drift;
  double reference_offset;
};

struct PoritskyOptions {
  /// Reference offset as a fraction of the period.
  double offset_fraction = 1.0 / 7.0;
  /// Number of x values checked; 0 uses the base sample count.
  std::size_t grid = 0;
};

PoritskyResult poritsky_parameterize(const SampledCurve& curve, const PoritskyOptions& opt = {});

/// Relative spread of A(x, x + c) over a uniform grid of x.
double area_drift(const PoritskyParam& pp, double c, std::size_t grid = 0);

struct Chord {
  double x;
  double y;  // x + c
  Vec2 p, q, midpoint;
  double area;
  /// dA/dx and dA/dy from the two bracket formulas, 1/2 [gamma(y) - gamma(x), gamma_dot(.)].
  double dA_dx, dA_dy;
};

struct ChordFamily {
  double c;
  std::vector<Chord> chords;  // uniform in x over one period
  double drift;
};

ChordFamily constant_area_chords(const PoritskyParam& pp, double c, std::size_t count = 0);

struct AreaEnvelope {
  /// Midpoint locus, parameterised by x.
  SampledCurve curve;
  /// max |sin| of the angle between midpoint velocity and chord direction.
  double tangency_defect;
};

/// Envelope of the constant-area chords. Throws drift_too_large when the family
/// does not cut constant area to max_drift.
AreaEnvelope area_envelope(const ChordFamily& family, double max_drift = 1e-6);

struct OuterStep {
  Vec2 image;
  double tangency_t;
};

/// Reflects an exterior point in the tangency point of its oriented tangent line
/// (the curve on the left of the line, travelled towards the tangency point).
OuterStep outer_billiard_step(const SampledCurve& gamma, const Vec2& p);
Vec2 outer_billiard_map(const SampledCurve& gamma, const Vec2& p);
std::vector<Vec2> outer_billiard_orbit(const SampledCurve& gamma, const Vec2& p, std::size_t steps);

/// [gamma_dot(x - e) + gamma_dot(x + e), gamma(x + e) - gamma(x - e)] with e = c / 2.
double poritsky_residual_ode(const PoritskyParam& pp, double x, double c);

}  // namespace billiard_lab
