#include "billiard_lab/constant_curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "billiard_lab/error.hpp"
#include "billiard_lab/trig_series.hpp"

namespace billiard_lab {

std::string_view to_string(SpaceKind kind) { return kind == SpaceKind::sphere ? "sphere" : "hyperbolic"; }

bool SpaceForm::contains(const Vec3& x, double tol) const {
  if (std::abs(pair(x, x) - self_pairing()) > tol * std::max(1.0, x.squaredNorm())) return false;
  return kind == SpaceKind::sphere || x.z() > 0.0;
}

Vec3 SpaceForm::project(const Vec3& x) const {
  if (kind == SpaceKind::sphere) {
    const double r = x.norm();
    if (r == 0.0) throw Error(ErrorCode::invalid_argument, "sphere: cannot project the origin");
    return x / r;
  }
  const double q = pair(x, x);
  if (!(q < 0.0)) throw Error(ErrorCode::invalid_argument, "hyperboloid: point is not timelike");
  const Vec3 y = x / std::sqrt(-q);
  return y.z() > 0.0 ? y : Vec3(-y);
}

Vec3 SpaceForm::tangent_unit(const Vec3& x, const Vec3& v) const {
  const Vec3 w = v - (pair(v, x) / pair(x, x)) * x;
  const double q = pair(w, w);
  if (!(q > 0.0)) throw Error(ErrorCode::degenerate_geodesic, "tangent vector has no spacelike part");
  return w / std::sqrt(q);
}

GeodesicTangents geodesic_tangents(const Vec3& x, const Vec3& y, const SpaceForm& space) {
  const double xy = space.pair(x, y);
  Vec3 u, v;
  if (space.kind == SpaceKind::sphere) {
    u = y - xy * x;
    v = xy * y - x;
  } else {
    u = y + xy * x;
    v = -x - xy * y;
  }
  const double lu = std::sqrt(std::max(space.pair(u, u), 0.0));
  const double lv = std::sqrt(std::max(space.pair(v, v), 0.0));
  const double tiny = 1e-12 * std::max(1.0, std::sqrt(x.squaredNorm() * y.squaredNorm()));
  if (lu <= tiny || lv <= tiny) {
    throw Error(ErrorCode::degenerate_geodesic, "geodesic_tangents: points coincide or are antipodal");
  }
  return {u / lu, v / lv, lu, lv};
}

Vec3 geodesic_point(const Vec3& x, const Vec3& u, double theta, const SpaceForm& space) {
  if (space.kind == SpaceKind::sphere) return std::cos(theta) * x + std::sin(theta) * u;
  return std::cosh(theta) * x + std::sinh(theta) * u;
}

Vec3 geodesic_velocity(const Vec3& x, const Vec3& u, double theta, const SpaceForm& space) {
  if (space.kind == SpaceKind::sphere) return -std::sin(theta) * x + std::cos(theta) * u;
  return std::sinh(theta) * x + std::cosh(theta) * u;
}

SphericalConic::SphericalConic(QuadraticForm cone, SpaceForm space) : cone_(std::move(cone)), space_(space) {
  if (cone_.dim() != 3) throw Error(ErrorCode::dimension_mismatch, "spherical conic: cone must be 3x3");
  if (cone_.level() != 0.0) throw Error(ErrorCode::invalid_argument, "spherical conic: cone level must be 0");
  a_ = cone_.matrix();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(a_);
  Vec3 lambda = eig.eigenvalues();
  Mat3 vecs = eig.eigenvectors();
  const double big = lambda.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * big;
  const int neg = static_cast<int>((lambda.array() < -tol).count());
  const int pos = static_cast<int>((lambda.array() > tol).count());
  if (neg == 2 && pos == 1) {
    a_ = -a_;
    lambda = -lambda.reverse().eval();
    vecs = vecs.rowwise().reverse().eval();
  } else if (!(neg == 1 && pos == 2)) {
    throw Error(ErrorCode::invalid_argument, "spherical conic: cone must have signature (2,1)");
  }
  cone_ = QuadraticForm(a_, 0.0);
  axis_[0] = vecs.col(1);
  axis_[1] = vecs.col(2);
  axis_[2] = vecs.col(0);
  scale_[0] = 1.0 / std::sqrt(lambda(1));
  scale_[1] = 1.0 / std::sqrt(lambda(2));
  scale_[2] = 1.0 / std::sqrt(-lambda(0));
  if (space_.kind == SpaceKind::hyperbolic && axis_[2].z() < 0.0) axis_[2] = -axis_[2];
  if (axis_[0].cross(axis_[1]).dot(axis_[2]) < 0.0) axis_[1] = -axis_[1];
  point(0.0);  // rejects cones that miss the hyperboloid
}

bool SphericalConic::contains(const Vec3& x, double tol) const {
  return space_.contains(x, tol) && std::abs(value(x)) <= tol * a_.norm() * std::max(1.0, x.squaredNorm());
}

Vec3 SphericalConic::normal(const Vec3& x) const {
  Vec3 m = a_ * x;
  if (space_.kind == SpaceKind::hyperbolic) m.z() = -m.z();
  return space_.tangent_unit(x, m);
}

Vec3 SphericalConic::point(double phi, double eps, int mode) const {
  const double r = 1.0 + eps * std::cos(mode * phi);
  const Vec3 w = r * (std::cos(phi) * scale_[0] * axis_[0] + std::sin(phi) * scale_[1] * axis_[1]) +
                 scale_[2] * axis_[2];
  if (space_.kind == SpaceKind::hyperbolic && !(space_.pair(w, w) < 0.0)) {
    throw Error(ErrorCode::invalid_argument, "hyperbolic conic: cone does not meet the hyperboloid in a closed curve");
  }
  return space_.project(w);
}

SampledCurve SphericalConic::sample(std::size_t n, double eps, int mode) const {
  return SampledCurve::from_function([&](double t) -> VecX { return point(t, eps, mode); }, 3, kTwoPi, n);
}

double spherical_joachimsthal(const SphericalConic& conic, const Vec3& x, const Vec3& u) {
  if (!conic.contains(x, 1e-8)) throw Error(ErrorCode::off_curve, "spherical_joachimsthal: point is off the conic");
  const SpaceForm& s = conic.space();
  if (std::abs(s.pair(x, u)) > 1e-8 * std::max(1.0, x.norm() * u.norm())) {
    throw Error(ErrorCode::invalid_argument, "spherical_joachimsthal: direction is not tangent");
  }
  return (conic.matrix() * x).dot(u);
}

namespace {

// Nonzero root of A p.p = 0 along the geodesic. With tau = tan or tanh of the
// length, Auu tau^2 + 2 J tau + Axx = 0; keeping Axx absorbs roundoff in x so
// the error does not compound over an orbit.
double hit_length(const SphericalConic& conic, const SurfaceState& state) {
  const Mat3& a = conic.matrix();
  const double j = (a * state.x).dot(state.u);
  const double auu = state.u.dot(a * state.u);
  const double axx = conic.value(state.x);
  const double scale = a.norm() * std::max(1.0, state.x.squaredNorm());
  if (std::abs(j) <= kGrazingTolerance * scale) throw Error(ErrorCode::tangency, "surface billiard: grazing direction");
  if (j > 0.0) throw Error(ErrorCode::not_inward, "surface billiard: direction points out of the conic");
  const double num = -j + std::sqrt(std::max(j * j - auu * axx, 0.0));
  if (conic.space().kind == SpaceKind::sphere) return std::atan2(num, auu);
  const double r = num / auu;
  if (!(auu > 0.0) || !(r < 1.0)) {
    throw Error(ErrorCode::degenerate_geodesic, "hyperbolic billiard: geodesic does not return to the conic");
  }
  return std::atanh(r);
}

}  // namespace

SurfaceStep surface_billiard_step(const SphericalConic& conic, const SurfaceState& state) {
  const SpaceForm& s = conic.space();
  const double theta = hit_length(conic, state);
  const Vec3 y = s.project(geodesic_point(state.x, state.u, theta, s));
  const Vec3 v_in = s.tangent_unit(y, geodesic_velocity(state.x, state.u, theta, s));
  const Vec3 n = conic.normal(y);
  const Vec3 v_out = s.tangent_unit(y, v_in - 2.0 * s.pair(v_in, n) * n);
  return {{y, v_out}, v_in, theta};
}

SurfaceStep spherical_billiard_step(const SphericalConic& conic, const SurfaceState& state) {
  if (conic.space().kind != SpaceKind::sphere) throw Error(ErrorCode::invalid_argument, "spherical_billiard_step: conic is not spherical");
  return surface_billiard_step(conic, state);
}

SurfaceStep hyperbolic_billiard_step(const SphericalConic& conic, const SurfaceState& state) {
  if (conic.space().kind != SpaceKind::hyperbolic) throw Error(ErrorCode::invalid_argument, "hyperbolic_billiard_step: conic is not hyperbolic");
  return surface_billiard_step(conic, state);
}

SurfaceState surface_start_state(const SphericalConic& conic, double phi, double angle) {
  if (!(angle > 0.0 && angle < kPi)) throw Error(ErrorCode::invalid_argument, "surface_start_state: angle must lie in (0, pi)");
  const SpaceForm& s = conic.space();
  const Vec3 x = conic.point(phi);
  Vec3 gx = x;
  if (s.kind == SpaceKind::hyperbolic) gx.z() = -gx.z();
  Vec3 t = s.tangent_unit(x, gx.cross(conic.matrix() * x));
  const double h = 1e-6;
  if (t.dot(conic.point(phi + h) - conic.point(phi - h)) < 0.0) t = -t;
  const Vec3 n = conic.normal(x);
  return {x, s.tangent_unit(x, std::cos(angle) * t - std::sin(angle) * n)};
}

SurfaceOrbit surface_orbit(const SphericalConic& conic, const SurfaceState& start, std::size_t steps) {
  SurfaceOrbit orbit;
  orbit.states.reserve(steps + 1);
  orbit.invariants.reserve(steps + 1);
  orbit.states.push_back(start);
  orbit.invariants.push_back((conic.matrix() * start.x).dot(start.u));
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      const SurfaceStep step = surface_billiard_step(conic, orbit.states.back());
      orbit.states.push_back(step.next);
      orbit.invariants.push_back((conic.matrix() * step.next.x).dot(step.next.u));
    } catch (const Error& e) {
      orbit.abort_reason = e.what();
      break;
    }
  }
  return orbit;
}

double invariant_drift(const SurfaceOrbit& orbit) {
  if (orbit.invariants.empty()) throw Error(ErrorCode::empty_dataset, "invariant_drift: empty orbit");
  const double j0 = orbit.invariants.front();
  double drift = 0.0;
  for (double j : orbit.invariants) drift = std::max(drift, std::abs(j - j0));
  return drift / std::abs(j0);
}

namespace {

std::vector<double> bracket_profile(const SampledCurve& curve) {
  const MatX d1 = curve.derivative_samples(1);
  const MatX d2 = curve.derivative_samples(2);
  std::vector<double> out(curve.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out[j] = bracket3(curve.samples().col(jj), d1.col(jj), d2.col(jj));
  }
  return out;
}

// Largest |g| |g'| |g''|, the size a non-degenerate bracket is compared against.
double bracket_scale(const SampledCurve& curve) {
  const MatX d1 = curve.derivative_samples(1);
  const MatX d2 = curve.derivative_samples(2);
  double scale = 0.0;
  for (Eigen::Index j = 0; j < d1.cols(); ++j)
    scale = std::max(scale, curve.samples().col(j).norm() * d1.col(j).norm() * d2.col(j).norm());
  return scale;
}

}  // namespace

EquiaffineCurve3 equiaffine_frame3(const SampledCurve& curve, double degenerate_tolerance) {
  if (curve.dimension() != 3) throw Error(ErrorCode::dimension_mismatch, "equiaffine_frame3: curve must be in 3-space");
  if (!curve.closed()) throw Error(ErrorCode::not_closed, "equiaffine_frame3: curve must be closed");
  std::vector<double> d = bracket_profile(curve);
  const double hi = *std::max_element(d.begin(), d.end());
  const double lo = *std::min_element(d.begin(), d.end());
  const double big = std::max(hi, -lo);
  const bool reversed = hi < 0.0;
  if (big <= degenerate_tolerance * bracket_scale(curve) || (reversed ? hi : lo) * (reversed ? -1.0 : 1.0) <= degenerate_tolerance * big) {
    throw Error(ErrorCode::degenerate_frame, "equiaffine_frame3: bracket [g, g', g''] vanishes");
  }

  const SampledCurve* source = &curve;
  std::optional<SampledCurve> flipped;
  if (reversed) {
    const auto n = static_cast<Eigen::Index>(curve.size());
    MatX s(3, n);
    for (Eigen::Index j = 0; j < n; ++j) s.col(j) = curve.samples().col((n - j) % n);
    flipped.emplace(std::move(s), curve.period(), true, curve.noise_floor());
    source = &*flipped;
    d = bracket_profile(*source);
  }
  for (double& v : d) v = std::cbrt(v);
  Reparameterization rp = reparameterize_with_map(*source, d);
  if (reversed) {
    for (double& t : rp.source_parameters) t = wrap_parameter(-t, curve.period());
  }

  double defect = 0.0;
  for (double b : bracket_profile(rp.curve)) defect = std::max(defect, std::abs(b - 1.0));
  if (defect > 1e-8) {
    throw Error(ErrorCode::invariant_violated,
                "equiaffine_frame3: bracket differs from 1 by " + std::to_string(defect));
  }
  return {std::move(rp.curve), std::move(rp.source_parameters), defect, reversed};
}

CubicCoeffs cubic_coeffs(const EquiaffineCurve3& ec, double c_tolerance) {
  const SampledCurve& g = ec.curve;
  const MatX d1 = g.derivative_samples(1);
  const MatX d2 = g.derivative_samples(2);
  const MatX d3 = g.derivative_samples(3);
  CubicCoeffs out;
  out.period = g.period();
  out.c_max = 0.0;
  out.reconstruction_residual = 0.0;
  const std::size_t n = g.size();
  out.parameters.resize(n);
  out.a.resize(n);
  out.b.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    Mat3 m;
    m.col(0) = g.samples().col(jj);
    m.col(1) = d1.col(jj);
    m.col(2) = d2.col(jj);
    const Vec3 rhs = d3.col(jj);
    const Vec3 abc = m.partialPivLu().solve(rhs);
    out.parameters[j] = g.parameter(j);
    out.a[j] = abc(0);
    out.b[j] = abc(1);
    out.c_max = std::max(out.c_max, std::abs(abc(2)) / std::max(1.0, rhs.norm()));
    out.reconstruction_residual =
        std::max(out.reconstruction_residual, (rhs - abc(0) * m.col(0) - abc(1) * m.col(1)).norm());
  }
  if (out.c_max > c_tolerance) {
    throw Error(ErrorCode::invariant_violated,
                "cubic_coeffs: gamma'' coefficient " + std::to_string(out.c_max) + " is not negligible");
  }
  return out;
}

CriterionProfile conic_criterion_residual(const CubicCoeffs& coeffs) {
  const TrigSeries b(coeffs.b, coeffs.period);
  const std::vector<double> db = b.derivative_at_samples(1);
  CriterionProfile out;
  out.values.resize(db.size());
  out.max_abs = 0.0;
  out.mean_abs = 0.0;
  for (std::size_t j = 0; j < db.size(); ++j) {
    out.values[j] = 2.0 * coeffs.a[j] - db[j];
    out.max_abs = std::max(out.max_abs, std::abs(out.values[j]));
    out.mean_abs += std::abs(out.values[j]);
  }
  if (!db.empty()) out.mean_abs /= static_cast<double>(db.size());
  return out;
}

NormalFieldFit fit_spherical_normal_field(const SampledCurve& curve, std::size_t pair_budget,
                                          unsigned long long seed, const FitOptions& opt) {
  if (curve.dimension() != 3) throw Error(ErrorCode::dimension_mismatch, "fit_spherical_normal_field: curve must be in 3-space");
  const std::size_t n = curve.size();
  if (n < opt.min_samples) {
    throw Error(ErrorCode::invalid_argument,
                "fit_spherical_normal_field: need at least " + std::to_string(opt.min_samples) + " samples");
  }
  const MatX& g = curve.samples();
  const MatX d = curve.derivative_samples(1);
  const auto pairs = fit_pairs(n, pair_budget, seed);
  MatX system = MatX::Zero(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const auto rr = static_cast<Eigen::Index>(r);
    system(rr, ii) += bracket3(g.col(ii), d.col(ii), g.col(jj));
    system(rr, jj) -= bracket3(g.col(jj), d.col(jj), g.col(ii));
  }
  return solve_field_system(system, curve);
}

Vec3 fitted_spherical_normal(const SampledCurve& curve, const NormalFieldCandidate& field, std::size_t j) {
  const auto jj = static_cast<Eigen::Index>(j);
  const Vec3 g = curve.samples().col(jj);
  const Vec3 d = curve.derivative(curve.parameter(j), 1);
  return field.f.at(j) * d.cross(g);
}

bool in_open_hemisphere(const SampledCurve& curve) {
  if (curve.dimension() != 3) return false;
  const Vec3 c = curve.samples().rowwise().sum();
  if (c.norm() == 0.0) return false;
  for (Eigen::Index j = 0; j < curve.samples().cols(); ++j) {
    if (curve.samples().col(j).dot(c) <= 0.0) return false;
  }
  return true;
}

}  // namespace billiard_lab
