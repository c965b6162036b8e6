#include "billiard_lab/conics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "billiard_lab/error.hpp"

namespace billiard_lab {

QuadraticForm::QuadraticForm(MatX matrix, double level, std::optional<VecX> center)
    : matrix_(std::move(matrix)), level_(level) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::dimension_mismatch, "QuadraticForm: matrix must be square and nonempty");
  }
  if (!matrix_.allFinite() || !std::isfinite(level)) {
    throw Error(ErrorCode::invalid_argument, "QuadraticForm: non-finite entries");
  }
  const double asym = (matrix_ - matrix_.transpose()).norm();
  if (asym > 1e-9 * std::max(1.0, matrix_.norm())) {
    throw Error(ErrorCode::invalid_argument, "QuadraticForm: matrix is not symmetric");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
  center_ = center.value_or(VecX::Zero(matrix_.rows()));
  if (center_.size() != matrix_.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "QuadraticForm: center dimension differs from matrix");
  }
}

QuadraticForm QuadraticForm::diagonal(std::span<const double> diag, double level) {
  MatX m = MatX::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  return QuadraticForm(std::move(m), level);
}

QuadraticForm QuadraticForm::ellipse(double a, double b, double rotation, Vec2 center) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::invalid_argument, "ellipse: semi-axes must be positive");
  Mat2 r;
  r << std::cos(rotation), -std::sin(rotation), std::sin(rotation), std::cos(rotation);
  const Mat2 d = Eigen::Vector2d(1.0 / (a * a), 1.0 / (b * b)).asDiagonal();
  return QuadraticForm(MatX(r * d * r.transpose()), 1.0, VecX(center));
}

VecX QuadraticForm::apply(const VecX& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::dimension_mismatch, "QuadraticForm: point dimension mismatch");
  return matrix_ * (x - center_);
}

double QuadraticForm::value(const VecX& x) const {
  const VecX w = x - center_;
  return w.dot(apply(x));
}

double QuadraticForm::relative_residual(const VecX& x) const {
  const VecX w = x - center_;
  const double scale = std::max({std::abs(level_), matrix_.norm() * w.squaredNorm(), 1e-300});
  return std::abs(residual(x)) / scale;
}

bool QuadraticForm::positive_definite() const {
  Eigen::SelfAdjointEigenSolver<MatX> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

std::string_view to_string(ConicKind kind) {
  switch (kind) {
    case ConicKind::ellipse: return "ellipse";
    case ConicKind::parabola: return "parabola";
    case ConicKind::hyperbola: return "hyperbola";
    case ConicKind::degenerate: return "degenerate";
  }
  return "unknown";
}

ProjectiveConic homogenize(const QuadraticForm& planar) {
  if (planar.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "homogenize: expected a planar form");
  const Mat2 a = planar.matrix();
  const Vec2 c = as_vec2(planar.center());
  ProjectiveConic m;
  m.topLeftCorner<2, 2>() = a;
  const Vec2 lin = -a * c;
  m.block<2, 1>(0, 2) = lin;
  m.block<1, 2>(2, 0) = lin.transpose();
  m(2, 2) = c.dot(a * c) - planar.level();
  return m;
}

QuadraticForm as_form(const ProjectiveConic& m) { return QuadraticForm(MatX(m), 0.0); }

double conic_value(const ProjectiveConic& m, const Vec2& p) {
  const Vec3 h(p.x(), p.y(), 1.0);
  return h.dot(m * h);
}

VecX conic_normal(const QuadraticForm& form, const VecX& x, double tol) {
  if (form.relative_residual(x) > tol) {
    throw Error(ErrorCode::off_curve, "conic_normal: point is not on the quadric (relative residual " +
                                          std::to_string(form.relative_residual(x)) + ")");
  }
  return form.apply(x);
}

QuadraticForm fit_conic_5pts(std::span<const Vec2> points) {
  if (points.size() != 5) throw Error(ErrorCode::invalid_argument, "fit_conic_5pts: need exactly 5 points");
  MatX rows(5, 6);
  for (int i = 0; i < 5; ++i) {
    const double x = points[static_cast<std::size_t>(i)].x(), y = points[static_cast<std::size_t>(i)].y();
    rows.row(i) << x * x, x * y, y * y, x, y, 1.0;
  }
  Eigen::JacobiSVD<MatX> svd(rows, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(4) <= 1e-10 * s(0)) {
    throw Error(ErrorCode::ambiguous_fit, "fit_conic_5pts: degenerate configuration, conic not unique");
  }
  const VecX v = svd.matrixV().col(5);
  ProjectiveConic m;
  m << v(0), 0.5 * v(1), 0.5 * v(3),
       0.5 * v(1), v(2), 0.5 * v(4),
       0.5 * v(3), 0.5 * v(4), v(5);
  m /= m.norm();
  return as_form(m);
}

double quadratic_discriminant(const ProjectiveConic& conic) {
  return conic(0, 0) * conic(1, 1) - conic(0, 1) * conic(1, 0);
}

ConicKind classify(const ProjectiveConic& conic, const ClassifyOptions& opt) {
  const double norm = conic.norm();
  if (norm == 0.0) throw Error(ErrorCode::invalid_argument, "classify: zero form");
  if (std::abs(conic.determinant()) < opt.tolerance * norm * norm * norm) return ConicKind::degenerate;
  const double disc = quadratic_discriminant(conic);
  if (std::abs(disc) < opt.tolerance * norm * norm) return ConicKind::parabola;
  return disc > 0.0 ? ConicKind::ellipse : ConicKind::hyperbola;
}

ConicKind classify(const QuadraticForm& conic, const ClassifyOptions& opt) {
  if (conic.dim() != 3) throw Error(ErrorCode::dimension_mismatch, "classify: expected a 3x3 projective form");
  return classify(ProjectiveConic(conic.matrix()), opt);
}

void PlaneFrame::validate() const {
  if (origin.size() != b1.size() || b1.size() != b2.size()) {
    throw Error(ErrorCode::dimension_mismatch, "PlaneFrame: inconsistent dimensions");
  }
  if (std::abs(b1.norm() - 1.0) > 1e-12 || std::abs(b2.norm() - 1.0) > 1e-12 || std::abs(b1.dot(b2)) > 1e-12) {
    throw Error(ErrorCode::degenerate_frame, "PlaneFrame: basis is not orthonormal");
  }
}

Vec3 PlaneFrame::normal() const {
  if (b1.size() != 3) throw Error(ErrorCode::dimension_mismatch, "PlaneFrame::normal: only defined in R^3");
  return as_vec3(b1).cross(as_vec3(b2)).normalized();
}

double PlaneFrame::distance(const VecX& x) const {
  const VecX w = x - origin;
  return (w - w.dot(b1) * b1 - w.dot(b2) * b2).norm();
}

Vec2 PlaneFrame::coordinates(const VecX& x) const {
  const VecX w = x - origin;
  return {w.dot(b1), w.dot(b2)};
}

PlaneFrame PlaneFrame::from_normal(const Vec3& normal, double offset) {
  const Vec3 n = normal.normalized();
  Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 b1 = (helper - helper.dot(n) * n).normalized();
  const Vec3 b2 = n.cross(b1);
  return {VecX(offset * n), VecX(b1), VecX(b2)};
}

namespace {

/// True when q(s,t) = [s t 1] M [s t 1]^T has no real zero.
bool section_is_empty(const ProjectiveConic& m) {
  const Mat2 q = m.topLeftCorner<2, 2>();
  const Vec2 g = m.block<2, 1>(0, 2);
  const double f = m(2, 2);
  const double scale = std::max(m.norm(), 1e-300);
  Eigen::SelfAdjointEigenSolver<Mat2> es(q);
  const Vec2 lam = es.eigenvalues();
  const double tiny = 1e-12 * scale;
  if (lam(0) > tiny || lam(1) < -tiny) {
    // Definite quadratic part: compare the extremum with zero.
    const Vec2 p = -q.ldlt().solve(g);
    const double extremum = f + g.dot(p);
    return lam(0) > tiny ? extremum > tiny : extremum < -tiny;
  }
  if (lam(0) < -tiny && lam(1) > tiny) return false;  // indefinite
  // Rank <= 1 quadratic part.
  const Mat2 vecs = es.eigenvectors();
  const int big = std::abs(lam(0)) > std::abs(lam(1)) ? 0 : 1;
  const Vec2 e = vecs.col(big), o = vecs.col(1 - big);
  if (std::abs(g.dot(o)) > tiny) return false;  // parabola or line
  const double l = lam(big);
  const double beta = g.dot(e);
  if (std::abs(l) <= tiny) return std::abs(f) > tiny && std::abs(beta) <= tiny;
  return beta * beta - l * f < -tiny * scale;
}

}  // namespace

PlaneSection plane_section(const QuadraticForm& quadric, const PlaneFrame& frame) {
  frame.validate();
  if (frame.origin.size() != quadric.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "plane_section: frame and quadric dimensions differ");
  }
  const MatX& a = quadric.matrix();
  if (std::abs(a.determinant()) < 1e-14 * std::pow(a.norm(), a.rows())) {
    throw Error(ErrorCode::invalid_argument, "plane_section: quadric is degenerate");
  }
  const VecX w = frame.origin - quadric.center();
  const VecX ab1 = a * frame.b1, ab2 = a * frame.b2, aw = a * w;
  ProjectiveConic m;
  m(0, 0) = frame.b1.dot(ab1);
  m(1, 1) = frame.b2.dot(ab2);
  m(0, 1) = m(1, 0) = frame.b1.dot(ab2);
  m(0, 2) = m(2, 0) = frame.b1.dot(aw);
  m(1, 2) = m(2, 1) = frame.b2.dot(aw);
  m(2, 2) = w.dot(aw) - quadric.level();
  return {m, section_is_empty(m)};
}

ProjectedPairResidual projected_pair_residual(const VecX& n_x, const VecX& n_y, const VecX& x, const VecX& y,
                                              const PlaneFrame& frame, double tol) {
  frame.validate();
  const double scale = std::max(1.0, std::max(x.norm(), y.norm()));
  if (frame.distance(x) > tol * scale || frame.distance(y) > tol * scale) {
    throw Error(ErrorCode::off_curve, "projected_pair_residual: point off the plane");
  }
  auto project = [&](const VecX& v) -> VecX { return v.dot(frame.b1) * frame.b1 + v.dot(frame.b2) * frame.b2; };
  const VecX chord = y - x;
  return {(project(n_x) + project(n_y)).dot(chord), (n_x + n_y).dot(chord)};
}

QuadraticForm paraboloid_from_jet(std::span<const double> principal_coeffs) {
  const auto n = static_cast<Eigen::Index>(principal_coeffs.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "paraboloid_from_jet: need at least one coefficient");
  MatX m = MatX::Zero(n + 2, n + 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = principal_coeffs[static_cast<std::size_t>(i)];
    if (!std::isfinite(a)) throw Error(ErrorCode::invalid_argument, "paraboloid_from_jet: non-finite coefficient");
    m(i, i) = -a;
  }
  // y * w with y at index n and the homogenising w at n + 1
  m(n, n + 1) = m(n + 1, n) = 0.5;
  return QuadraticForm(std::move(m), 0.0);
}

double paraboloid_height(std::span<const double> principal_coeffs, std::span<const double> x) {
  if (x.size() != principal_coeffs.size()) {
    throw Error(ErrorCode::dimension_mismatch, "paraboloid_height: coordinate count mismatch");
  }
  double y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) y += principal_coeffs[i] * x[i] * x[i];
  return y;
}

SectionReport all_sections_ellipse_report(const QuadraticForm& quadric, std::size_t trials,
                                          unsigned long long seed, const SectionOptions& opt) {
  if (quadric.dim() != 3) throw Error(ErrorCode::dimension_mismatch, "section report: quadric must live in R^3");
  Vec3 half = Vec3::Constant(opt.unbounded_half_width);
  if (quadric.level() > 0.0 && quadric.positive_definite()) {
    const MatX inv = quadric.matrix().inverse();
    for (int i = 0; i < 3; ++i) half(i) = std::sqrt(quadric.level() * inv(i, i));
  }
  const Vec3 center = as_vec3(quadric.center());
  const double form_norm = quadric.matrix().norm();

  struct Slot {
    SectionSample sample;
    std::size_t empty = 0, tangent = 0;
    bool ok = false;
  };
  std::vector<Slot> slots(trials);
  parallel_for(trials, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Slot& slot = slots[i];
    for (std::size_t attempt = 0; attempt < opt.max_redraws; ++attempt) {
      Vec3 n(gauss(rng), gauss(rng), gauss(rng));
      if (n.norm() < 1e-12) continue;
      n.normalize();
      const Vec3 p = center + Vec3(unit(rng) * half(0), unit(rng) * half(1), unit(rng) * half(2));
      const double offset = n.dot(p);
      const PlaneFrame frame = PlaneFrame::from_normal(n, offset);
      const PlaneSection sec = plane_section(quadric, frame);
      if (sec.empty) {
        ++slot.empty;
        continue;
      }
      const double scale = std::max(sec.conic.norm(), form_norm);
      if (std::abs(sec.conic.determinant()) < opt.near_tangent_tolerance * scale * scale * scale) {
        ++slot.tangent;
        continue;
      }
      slot.sample = {i, n, offset, classify(sec.conic, opt.classify), quadratic_discriminant(sec.conic)};
      slot.ok = true;
      return;
    }
  });

  SectionReport report;
  for (const auto& slot : slots) {
    report.redrawn_empty += slot.empty;
    report.redrawn_near_tangent += slot.tangent;
    if (!slot.ok) throw Error(ErrorCode::invalid_argument, "section report: no plane met the quadric");
    report.sections.push_back(slot.sample);
    ++report.histogram[slot.sample.kind];
  }
  return report;
}

}  // namespace billiard_lab
