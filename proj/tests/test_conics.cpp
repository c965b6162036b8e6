#include "doctest.h"

#include <array>
#include <cmath>

#include "billiard_lab/conics.hpp"
#include "billiard_lab/error.hpp"
#include "support.hpp"

using namespace billiard_lab;
using testing::Rng;

namespace {

QuadraticForm form3(const Vec3& diag, double level) {
  const std::array<double, 3> d{diag(0), diag(1), diag(2)};
  return QuadraticForm::diagonal(d, level);
}

// Largest |m_ij / ref_ij - ratio| over the nonzero entries of ref, with ratio fixed by the largest entry.
double proportional_defect(const Mat3& m, const Mat3& ref) {
  Eigen::Index i, j;
  ref.cwiseAbs().maxCoeff(&i, &j);
  const double ratio = m(i, j) / ref(i, j);
  return (m - ratio * ref).cwiseAbs().maxCoeff() / std::abs(ratio);
}

Mat3 rotation(const Vec3& axis, double angle) { return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(); }

}  // namespace

TEST_CASE("conic_normal examples") {
  const QuadraticForm circle = QuadraticForm::ellipse(1, 1);
  CHECK(testing::max_abs_diff(conic_normal(circle, Vec2(1, 0)), Vec2(1, 0)) == 0.0);
  const QuadraticForm e = QuadraticForm::ellipse(2, 1);
  CHECK(testing::max_abs_diff(conic_normal(e, Vec2(2, 0)), Vec2(0.5, 0)) < 1e-15);
  try {
    conic_normal(e, Vec2(1, 1));
    FAIL("expected off_curve");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::off_curve);
  }
}

TEST_CASE("conic_normal is orthogonal to the spectral tangent") {
  const double a = 1.7, b = 0.6, rot = 0.4;
  const Vec2 c(0.3, -0.2);
  const QuadraticForm form = QuadraticForm::ellipse(a, b, rot, c);
  const SampledCurve curve = testing::ellipse(a, b, 128, rot, c);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(0, kTwoPi);
    const Jet j = evaluate_jet(curve, t, 1);
    const Vec2 n = as_vec2(conic_normal(form, j.point()));
    const Vec2 tan = as_vec2(j[1]);
    CHECK(std::abs(n.dot(tan)) / (n.norm() * tan.norm()) < 1e-10);
  }
}

TEST_CASE("fit_conic_5pts through points of the unit circle") {
  std::vector<Vec2> pts;
  for (double a : {0.1, 1.3, 2.2, 3.9, 5.0}) pts.emplace_back(std::cos(a), std::sin(a));
  const QuadraticForm q = fit_conic_5pts(pts);
  const Mat3 m = q.matrix();
  CHECK(proportional_defect(m, Vec3(1, 1, -1).asDiagonal()) < 1e-12);
  CHECK(m.norm() == doctest::Approx(1.0).epsilon(1e-14));
  for (const Vec2& p : pts) CHECK(std::abs(conic_value(m, p)) < 1e-12);
  CHECK(classify(m) == ConicKind::ellipse);
}

TEST_CASE("fit_conic_5pts on 4x^2 + y^2 = 4 generalises to further points") {
  std::vector<Vec2> pts;
  for (double a : {0.3, 1.0, 2.5, 4.0, 5.5}) pts.emplace_back(std::cos(a), 2 * std::sin(a));
  const Mat3 m = fit_conic_5pts(pts).matrix();
  CHECK(proportional_defect(m, Vec3(4, 1, -4).asDiagonal()) < 1e-12);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = kTwoPi * k / 100.0 + 0.005;
    worst = std::max(worst, std::abs(conic_value(m, Vec2(std::cos(a), 2 * std::sin(a)))));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("fit_conic_5pts with three collinear points") {
  // Any conic through three collinear points contains their line.
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 2}};
  const Mat3 m = fit_conic_5pts(pts).matrix();
  for (const Vec2& p : pts) CHECK(std::abs(conic_value(m, p)) < 1e-12);
  CHECK(classify(m) == ConicKind::degenerate);
}

TEST_CASE("fit_conic_5pts rejects four collinear points") {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 2}};
  try {
    fit_conic_5pts(pts);
    FAIL("expected ambiguous_fit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ambiguous_fit);
  }
}

TEST_CASE("classify the three model conics") {
  CHECK(classify(ProjectiveConic(Vec3(1, 1, -1).asDiagonal())) == ConicKind::ellipse);
  ProjectiveConic parabola = ProjectiveConic::Zero();  // y - x^2
  parabola(0, 0) = -1;
  parabola(1, 2) = parabola(2, 1) = 0.5;
  CHECK(classify(parabola) == ConicKind::parabola);
  ProjectiveConic hyperbola = ProjectiveConic::Zero();  // xy - 1
  hyperbola(0, 1) = hyperbola(1, 0) = 0.5;
  hyperbola(2, 2) = -1;
  CHECK(classify(hyperbola) == ConicKind::hyperbola);
  CHECK(classify(ProjectiveConic(Vec3(1, 0, -1).asDiagonal())) == ConicKind::degenerate);
}

TEST_CASE("classify is invariant under scaling and frame rotation") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform(-1, 1);
    const ConicKind kind = classify(m);
    double s = rng.uniform(0.01, 100.0);
    if (rng.uniform() < 0.5) s = -s;
    CHECK(classify(ProjectiveConic(s * m)) == kind);
    // Rotating the plane coordinates acts on the first two homogeneous rows/columns.
    Mat3 r = Mat3::Identity();
    r.topLeftCorner<2, 2>() = Eigen::Rotation2Dd(rng.uniform(0, kTwoPi)).toRotationMatrix();
    CHECK(classify(ProjectiveConic(r.transpose() * m * r)) == kind);
  }
}

TEST_CASE("plane sections of the unit sphere") {
  const QuadraticForm sphere = form3(Vec3(1, 1, 1), 1.0);
  const PlaneSection eq = plane_section(sphere, PlaneFrame::from_normal(Vec3(0, 0, 1), 0.0));
  CHECK(!eq.empty);
  CHECK(proportional_defect(eq.conic, Vec3(1, 1, -1).asDiagonal()) < 1e-14);
  CHECK(classify(eq.conic) == ConicKind::ellipse);
  const PlaneSection miss = plane_section(sphere, PlaneFrame::from_normal(Vec3(0, 0, 1), 2.0));
  CHECK(miss.empty);
}

TEST_CASE("sections of an ellipsoid through the origin are ellipses") {
  const QuadraticForm q = form3(Vec3(1, 0.25, 1.0 / 9.0), 1.0);
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec3 n = rng.unit3();
    const double reach = std::sqrt(n.dot(Vec3(1, 4, 9).asDiagonal() * n));  // support function of the ellipsoid
    const PlaneSection s = plane_section(q, PlaneFrame::from_normal(n, rng.uniform(-0.95, 0.95) * reach));
    CHECK(!s.empty);
    CHECK(classify(s.conic) == ConicKind::ellipse);
  }
}

TEST_CASE("projected_pair_residual on an ellipsoid section") {
  const QuadraticForm q = form3(Vec3(1, 0.25, 1.0 / 9.0), 1.0);
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 n = rng.unit3();
    const PlaneFrame f = PlaneFrame::from_normal(n, 0.3 * rng.uniform(-1, 1));
    const PlaneSection s = plane_section(q, f);
    // Two points of the section conic: solve along rays from the section centre.
    const Mat2 a = s.conic.topLeftCorner<2, 2>();
    const Vec2 lin = s.conic.block<2, 1>(0, 2);
    const Vec2 ctr = -a.ldlt().solve(lin);
    const double k = -conic_value(s.conic, ctr);
    auto on = [&](double ang) {
      const Vec2 d(std::cos(ang), std::sin(ang));
      return Vec2(ctr + std::sqrt(k / d.dot(a * d)) * d);
    };
    const Vec2 px = on(rng.uniform(0, kTwoPi)), py = on(rng.uniform(0, kTwoPi));
    const VecX X = f.at(px.x(), px.y()), Y = f.at(py.x(), py.y());
    const auto r = projected_pair_residual(q.apply(X), q.apply(Y), X, Y, f);
    CHECK(std::abs(r.projected) < 1e-10);
    CHECK(std::abs(r.ambient) < 1e-10);
  }
}

TEST_CASE("projected_pair_residual identity for arbitrary vectors") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const PlaneFrame f = PlaneFrame::from_normal(rng.unit3(), rng.uniform(-2, 2));
    const VecX x = f.at(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const VecX y = f.at(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const auto r = projected_pair_residual(rng.vec3(5), rng.vec3(5), x, y, f);
    CHECK(std::abs(r.projected - r.ambient) < 1e-12);
  }
  const PlaneFrame f = PlaneFrame::from_normal(Vec3(0, 0, 1), 0.5);
  const VecX x = f.at(0.2, 0.1);
  const auto zero = projected_pair_residual(Vec3(1, 2, 3), Vec3(4, 5, 6), x, x, f);
  CHECK(zero.projected == 0.0);
  CHECK(zero.ambient == 0.0);
  CHECK_THROWS_AS(projected_pair_residual(Vec3(1, 0, 0), Vec3(1, 0, 0), x, Vec3(0, 0, 0), f), Error);
}

TEST_CASE("paraboloid_from_jet") {
  const std::array<double, 1> a1{1.0};
  const QuadraticForm p1 = paraboloid_from_jet(a1);
  CHECK(p1.dim() == 3);
  CHECK(classify(ProjectiveConic(p1.matrix())) == ConicKind::parabola);
  for (double x : {-1.0, 0.0, 0.5, 2.0}) CHECK(std::abs(p1.value(Vec3(x, x * x, 1.0))) < 1e-14);

  const std::array<double, 2> a2{1.0, 1.0};
  const QuadraticForm p2 = paraboloid_from_jet(a2);
  for (double x : {-1.0, 0.3, 2.0}) {
    VecX h(4);
    h << x, 0.0, x * x, 1.0;
    CHECK(std::abs(p2.value(h)) < 1e-14);
  }

  // Central-difference Hessian of the graph height at 0.
  const std::array<double, 2> a3{2.0, 3.0};
  const double h = 1e-3;
  auto z = [&](double u, double v) {
    const std::array<double, 2> x{u, v};
    return paraboloid_height(a3, x);
  };
  const double hxx = (z(h, 0) - 2 * z(0, 0) + z(-h, 0)) / (h * h);
  const double hyy = (z(0, h) - 2 * z(0, 0) + z(0, -h)) / (h * h);
  const double hxy = (z(h, h) - z(h, -h) - z(-h, h) + z(-h, -h)) / (4 * h * h);
  CHECK(hxx == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(hyy == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(std::abs(hxy) < 1e-8);
}

TEST_CASE("all_sections_ellipse_report") {
  const SectionReport ell = all_sections_ellipse_report(form3(Vec3(1, 0.25, 1.0 / 9.0), 1.0), 100, 7);
  CHECK(ell.sections.size() == 100);
  CHECK(ell.histogram.at(ConicKind::ellipse) == 100);

  const SectionReport sph = all_sections_ellipse_report(form3(Vec3(1, 1, 1), 1.0), 100, 8);
  CHECK(sph.histogram.at(ConicKind::ellipse) == 100);

  const SectionReport hyp = all_sections_ellipse_report(form3(Vec3(1, 1, -1), 1.0), 100, 9);
  const auto it = hyp.histogram.find(ConicKind::ellipse);
  CHECK((it == hyp.histogram.end() || it->second < 100));
}

TEST_CASE("section reports are reproducible from the seed") {
  const QuadraticForm q = form3(Vec3(1, 0.25, 1.0 / 9.0), 1.0);
  const SectionReport a = all_sections_ellipse_report(q, 50, 123);
  const SectionReport b = all_sections_ellipse_report(q, 50, 123);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.sections[i].normal == b.sections[i].normal);
    CHECK(a.sections[i].offset == b.sections[i].offset);
  }
}

TEST_CASE("PlaneFrame validation and classify of rotated ellipsoid sections") {
  PlaneFrame bad{Vec3::Zero(), Vec3(1, 0, 0), Vec3(1, 1e-3, 0)};
  CHECK_THROWS_AS(bad.validate(), Error);
  const Mat3 r = rotation(Vec3(1, 2, 3), 0.7);
  const Mat3 a = r * Vec3(1, 0.25, 1.0 / 9.0).asDiagonal() * r.transpose();
  const SectionReport rep = all_sections_ellipse_report(QuadraticForm(MatX(a), 1.0), 100, 3);
  CHECK(rep.histogram.at(ConicKind::ellipse) == 100);
}
