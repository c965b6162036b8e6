#include "billiard_lab/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "billiard_lab/error.hpp"
#include "billiard_lab/roots.hpp"

namespace billiard_lab {

std::string_view to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::homeoid: return "homeoid";
    case DensityKind::uniform: return "uniform";
    case DensityKind::custom: return "custom";
  }
  return "unknown";
}

DensityModel DensityModel::homeoid(QuadraticForm form) {
  if (form.dim() != 2 || !form.positive_definite() || form.level() <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "homeoid density: form must be a planar ellipse");
  }
  DensityModel d;
  d.kind = DensityKind::homeoid;
  d.form = std::move(form);
  return d;
}

DensityModel DensityModel::uniform() { return {}; }

DensityModel DensityModel::custom(std::function<double(const Vec2&, double)> profile) {
  DensityModel d;
  d.kind = DensityKind::custom;
  d.profile = std::move(profile);
  return d;
}

double DensityModel::operator()(const Vec2& x, double t) const {
  switch (kind) {
    case DensityKind::homeoid: return homeoid_density(*form, x);
    case DensityKind::uniform: return 1.0;
    case DensityKind::custom: {
      const double rho = profile(x, t);
      if (!(rho > 0.0)) throw Error(ErrorCode::invalid_argument, "density must be strictly positive");
      return rho;
    }
  }
  return 1.0;
}

double homeoid_density(const QuadraticForm& form, const Vec2& x, double tol) {
  if (form.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "homeoid_density: form must be planar");
  if (form.relative_residual(x) > tol) throw Error(ErrorCode::off_curve, "homeoid_density: point is off the ellipse");
  // Thin shell between the ellipse and a homothetic copy, for the form rescaled to level 1.
  return form.level() / form.apply(x).norm();
}

double interior_margin(const SampledCurve& curve, const Vec2& o) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "interior test: curve must be planar");
  const MatX d = curve.derivative_samples(1);
  const double sign = curve.orientation() < 0 ? -1.0 : 1.0;
  double margin = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double m = sign * cross2(Vec2(d.col(j)).normalized(), o - Vec2(curve.samples().col(j)));
    margin = j == 0 ? m : std::min(margin, m);
  }
  return margin;
}

namespace {

// Closest curve parameter to o: nearest sample, refined on (gamma - o) . gamma' = 0.
double closest_parameter(const SampledCurve& curve, const Vec2& o) {
  std::size_t best = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double d = (Vec2(curve.sample(j)) - o).squaredNorm();
    if (d < dmin) {
      dmin = d;
      best = j;
    }
  }
  auto g = [&](double t) { return (as_vec2(curve.point(t)) - o).dot(as_vec2(curve.derivative(t, 1))); };
  const double t0 = curve.parameter(best);
  const double a = t0 - curve.spacing(), b = t0 + curve.spacing();
  const double ga = g(a), gb = g(b);
  if (ga < 0.0 && gb > 0.0) return roots::find_root(g, a, b, ga, gb).x;
  return t0;
}

}  // namespace

ForceResult net_force(const SampledCurve& curve, const DensityModel& density, const Vec2& o, std::size_t nodes) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "net_force: curve must be planar");
  if (nodes == 0) nodes = curve.size();
  if (nodes < 4 || nodes % 2 != 0) throw Error(ErrorCode::invalid_argument, "net_force: node count must be even and at least 4");
  const double margin = interior_margin(curve, o);
  if (margin <= kBoundaryExclusion) {
    throw Error(ErrorCode::not_interior, "net_force: point is outside or within 1e-6 of the curve");
  }

  // The integrand is nearly singular at the closest point t*, at imaginary
  // distance delta (in a 2 pi period). The map t = t* + 2 atan(eps tan(u/2))
  // packs nodes near t*; eps = sqrt(tanh(delta/2)) balances the near
  // singularity against the one the map creates opposite t*.
  const double period = curve.period();
  const double to_unit = kTwoPi / period;
  const double tstar = closest_parameter(curve, o);
  const double dist = (as_vec2(curve.point(tstar)) - o).norm();
  const double speed = as_vec2(curve.derivative(tstar, 1)).norm();
  const double delta = dist / speed * to_unit;
  double eps = std::sqrt(std::tanh(0.5 * delta));
  if (eps > 0.5) eps = 1.0;

  const double h = kTwoPi / static_cast<double>(nodes);
  Vec2 full = Vec2::Zero(), half = Vec2::Zero();
  for (std::size_t k = 0; k < nodes; ++k) {
    const double u = -kPi + (static_cast<double>(k) + 0.5) * h;
    const double c = std::cos(0.5 * u), s = std::sin(0.5 * u);
    const double t = tstar + 2.0 * std::atan2(eps * s, c) / to_unit;
    const double jac = eps / (c * c + eps * eps * s * s) / to_unit;
    const Vec2 x = as_vec2(curve.point(t));
    const Vec2 v = as_vec2(curve.derivative(t, 1));
    const Vec2 r = x - o;
    const Vec2 term = density(x, wrap_parameter(t, period)) * v.norm() * jac / r.squaredNorm() * r;
    full += term;
    if (k % 2 == 0) half += term;
  }
  full *= h;
  half *= 2.0 * h;
  return {full, (full - half).norm(), nodes};
}

std::vector<ForceResult> net_forces(const SampledCurve& curve, const DensityModel& density,
                                    const std::vector<Vec2>& points, std::size_t nodes) {
  std::vector<ForceResult> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = net_force(curve, density, points[i], nodes); });
  return out;
}

PairCancellation pair_cancellation(const QuadraticForm& form, const Vec2& o, const Vec2& direction) {
  if (form.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "pair_cancellation: form must be planar");
  if (direction.norm() == 0.0) throw Error(ErrorCode::invalid_argument, "pair_cancellation: zero direction");
  const Vec2 u = direction.normalized();
  const Mat2 a = form.matrix();
  const Vec2 p = o - as_vec2(form.center());
  const double qa = u.dot(a * u);
  const double qb = p.dot(a * u);
  const double qc = p.dot(a * p) - form.level();
  if (!(qc < 0.0) || !(qa > 0.0)) throw Error(ErrorCode::not_interior, "pair_cancellation: point is not inside the ellipse");
  const double disc = std::sqrt(qb * qb - qa * qc);
  const double big = qb >= 0.0 ? -(qb + disc) : -(qb - disc);  // root of larger magnitude
  double lp = big / qa, lm = qc / big;
  if (lp < lm) std::swap(lp, lm);
  PairCancellation out;
  out.u = u;
  out.x = o + lp * u;
  out.y = o + lm * u;
  const Vec2 nx = form.apply(out.x), ny = form.apply(out.y);
  out.residual = (nx + ny).dot(u);
  out.force_x = 1.0 / nx.dot(u);
  out.force_y = -1.0 / ny.dot(u);
  return out;
}

PairCancellation pair_cancellation(const SampledCurve& curve, const std::function<Vec2(const Vec2&)>& normal,
                                   const Vec2& o, const Vec2& direction) {
  if (direction.norm() == 0.0) throw Error(ErrorCode::invalid_argument, "pair_cancellation: zero direction");
  if (interior_margin(curve, o) <= 0.0) throw Error(ErrorCode::not_interior, "pair_cancellation: point is not inside the curve");
  const Vec2 u = direction.normalized();
  auto side = [&](double t) { return cross2(u, as_vec2(curve.point(t)) - o); };
  const std::size_t n = curve.size();
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = cross2(u, Vec2(curve.samples().col(static_cast<Eigen::Index>(j))) - o);
  std::optional<Vec2> fwd, back;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    if (std::signbit(s[j]) == std::signbit(s[k]) && s[j] != 0.0) continue;
    const double a = curve.parameter(j);
    const double t = s[j] == 0.0 ? a : roots::find_root(side, a, a + curve.spacing(), s[j], s[k]).x;
    const Vec2 hit = as_vec2(curve.point(t));
    ((hit - o).dot(u) > 0.0 ? fwd : back) = hit;
  }
  if (!fwd || !back) throw Error(ErrorCode::not_bracketed, "pair_cancellation: line does not cross the curve twice");
  PairCancellation out;
  out.u = u;
  out.x = *fwd;
  out.y = *back;
  const Vec2 nx = normal(out.x), ny = normal(out.y);
  out.residual = (nx + ny).dot(u);
  out.force_x = 1.0 / nx.dot(u);
  out.force_y = -1.0 / ny.dot(u);
  return out;
}

std::vector<Vec2> random_interior_points(const SampledCurve& curve, std::size_t count, unsigned long long seed,
                                         double margin) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "random_interior_points: curve must be planar");
  const MatX& s = curve.samples();
  const Vec2 lo = s.rowwise().minCoeff(), hi = s.rowwise().maxCoeff();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  std::vector<Vec2> pts;
  pts.reserve(count);
  std::size_t attempts = 0;
  while (pts.size() < count) {
    if (++attempts > 1000 * (count + 1)) throw Error(ErrorCode::not_interior, "random_interior_points: curve has no interior");
    const Vec2 p(ux(rng), uy(rng));
    if (interior_margin(curve, p) > margin) pts.push_back(p);
  }
  return pts;
}

}  // namespace billiard_lab
