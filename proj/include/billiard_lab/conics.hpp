#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "billiard_lab/geometry.hpp"

namespace billiard_lab {

/// The quadric (x - center)^T A (x - center) = level with A symmetric.
///
/// level 1 gives ellipses/ellipsoids and other central quadrics, level 0 gives
/// cones and, for dim 3 without a center, projective plane conics in
/// homogeneous coordinates (s, t, 1).
class QuadraticForm {
 public:
  /// Symmetrises the matrix; throws if it is not symmetric to 1e-9 relative.
  QuadraticForm(MatX matrix, double level, std::optional<VecX> center = std::nullopt);

  static QuadraticForm diagonal(std::span<const double> diag, double level);
  /// Ellipse with semi-axes a, b, rotated by `rotation` and centred at `center`.
  static QuadraticForm ellipse(double a, double b, double rotation = 0.0, Vec2 center = Vec2::Zero());

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const MatX& matrix() const { return matrix_; }
  double level() const { return level_; }
  const VecX& center() const { return center_; }

  /// A (x - center).
  VecX apply(const VecX& x) const;
  /// (x - center)^T A (x - center).
  double value(const VecX& x) const;
  /// value(x) - level.
  double residual(const VecX& x) const { return value(x) - level_; }
  /// Residual scaled to be comparable across forms: |value - level| / max(1, |level|, ||A|| |x - c|^2).
  double relative_residual(const VecX& x) const;

  bool positive_definite() const;

 private:
  MatX matrix_;
  double level_;
  VecX center_;
};

enum class ConicKind { ellipse, parabola, hyperbola, degenerate };
std::string_view to_string(ConicKind kind);

/// 3x3 symmetric matrix M of the homogeneous conic [s t 1] M [s t 1]^T = 0.
using ProjectiveConic = Mat3;

/// Homogenises a planar quadric (dim 2) into its projective 3x3 matrix.
ProjectiveConic homogenize(const QuadraticForm& planar);
/// Wraps a projective matrix as a level-0 QuadraticForm of dimension 3.
QuadraticForm as_form(const ProjectiveConic& m);
/// Evaluates the homogeneous conic at the affine point p.
double conic_value(const ProjectiveConic& m, const Vec2& p);

/// Normal of the quadric at a point on it: A (x - center).
VecX conic_normal(const QuadraticForm& form, const VecX& x, double tol = 1e-9);

/// Conic through five planar points as the unit-norm null vector of the 5x6
/// incidence matrix. Throws ambiguous_fit when the null space is not 1-dimensional.
QuadraticForm fit_conic_5pts(std::span<const Vec2> points);

struct ClassifyOptions {
  /// Determinants below this times ||M||^2 (quadratic part) or ||M||^3 (full
  /// form) count as zero.
  double tolerance = 1e-10;
};

/// Affine type of a projective conic (QuadraticForm of dim 3, level 0).
ConicKind classify(const QuadraticForm& conic, const ClassifyOptions& opt = {});
ConicKind classify(const ProjectiveConic& conic, const ClassifyOptions& opt = {});
/// Determinant of the quadratic (upper-left 2x2) part.
double quadratic_discriminant(const ProjectiveConic& conic);

/// Affine 2-plane origin + s b1 + t b2 with orthonormal b1, b2.
struct PlaneFrame {
  VecX origin;
  VecX b1;
  VecX b2;

  /// Throws degenerate_frame unless the basis is orthonormal to 1e-12.
  void validate() const;
  VecX at(double s, double t) const { return origin + s * b1 + t * b2; }
  /// Unit normal (dim 3 only).
  Vec3 normal() const;
  /// Distance of x from the plane.
  double distance(const VecX& x) const;
  /// Coordinates (s, t) of the orthogonal projection of x.
  Vec2 coordinates(const VecX& x) const;

  /// Plane in R^3 with the given unit normal at signed offset (n . x = offset).
  static PlaneFrame from_normal(const Vec3& normal, double offset);
};

struct PlaneSection {
  ProjectiveConic conic;
  /// The plane does not meet the quadric in real points.
  bool empty = false;
};

/// Restriction of Q to the plane, expressed in the frame's (s, t) coordinates.
PlaneSection plane_section(const QuadraticForm& quadric, const PlaneFrame& frame);

struct ProjectedPairResidual {
  double projected;  // (nu(x) + nu(y)) . (y - x), nu the in-plane projection of N
  double ambient;    // (N(x) + N(y)) . (y - x)
};

/// Both sides of the projection identity for a pair of points in the plane.
ProjectedPairResidual projected_pair_residual(const VecX& n_x, const VecX& n_y, const VecX& x,
                                              const VecX& y, const PlaneFrame& frame,
                                              double tol = 1e-9);

/// The paraboloid y = sum a_i x_i^2 in homogeneous variables
/// (x_1, ..., x_n, y, w): y w - sum a_i x_i^2 = 0, an (n + 2)-dimensional level-0 form.
///
/// The graph's Hessian at the origin is diag(2 a_i); a_i itself is the second
/// fundamental form in the y = sum a_i x_i^2 normalisation.
QuadraticForm paraboloid_from_jet(std::span<const double> principal_coeffs);
/// Height of the paraboloid over x.
double paraboloid_height(std::span<const double> principal_coeffs, std::span<const double> x);

struct SectionSample {
  std::size_t id;
  Vec3 normal;
  double offset;
  ConicKind kind;
  double discriminant;
};

struct SectionReport {
  std::vector<SectionSample> sections;
  std::map<ConicKind, std::size_t> histogram;
  std::size_t redrawn_empty = 0;
  std::size_t redrawn_near_tangent = 0;
};

struct SectionOptions {
  /// Sections whose projective determinant is below this (relative to the
  /// form's norm cubed) come from planes nearly tangent to the surface; they
  /// are redrawn rather than classified.
  double near_tangent_tolerance = 1e-8;
  /// Half-width of the sampling box for quadrics that are not bounded.
  double unbounded_half_width = 2.0;
  ClassifyOptions classify;
  std::size_t max_redraws = 10000;
};

/// Classifies `trials` random plane sections of a quadric in R^3.
SectionReport all_sections_ellipse_report(const QuadraticForm& quadric, std::size_t trials,
                                          unsigned long long seed, const SectionOptions& opt = {});

}  // namespace billiard_lab
