#include "billiard_lab/poritsky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "billiard_lab/error.hpp"
#include "billiard_lab/roots.hpp"

namespace billiard_lab {

namespace {

TrigSeries green_integrand(const SampledCurve& curve) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "chord areas: curve must be planar");
  const MatX d = curve.derivative_samples(1);
  const MatX& g = curve.samples();
  std::vector<double> vals(curve.size());
  for (std::size_t j = 0; j < vals.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    vals[j] = cross2(g.col(jj), d.col(jj));
  }
  return TrigSeries(vals, curve.period(), curve.noise_floor());
}

}  // namespace

ChordAreas::ChordAreas(const SampledCurve& curve) : curve_(curve), integrand_(green_integrand(curve)) {}

double ChordAreas::operator()(double t1, double t2) const {
  const double period = curve_.period();
  const double span = wrap_parameter(t2 - t1, period);
  if (span == 0.0) return 0.0;
  const double end = t1 + span;
  const Vec2 p = as_vec2(curve_.point(t1));
  const Vec2 q = as_vec2(curve_.point(end));
  return 0.5 * (integrand_.integral(end) - integrand_.integral(t1)) + 0.5 * cross2(q, p);
}

double chord_area(const SampledCurve& curve, double t1, double t2) { return ChordAreas(curve)(t1, t2); }

namespace {

TrigSeries poritsky_speed(const SampledCurve& curve, double strict_tolerance) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "PoritskyParam: curve must be planar");
  if (curve.orientation() < 0) throw Error(ErrorCode::invalid_argument, "PoritskyParam: curve must be counterclockwise");
  const MatX d1 = curve.derivative_samples(1);
  const MatX d2 = curve.derivative_samples(2);
  std::vector<double> speed(curve.size());
  double hi = 0.0, lo = 0.0;
  for (std::size_t j = 0; j < speed.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    speed[j] = cross2(d1.col(jj), d2.col(jj));
    hi = std::max(hi, speed[j]);
    lo = std::min(lo, speed[j]);
  }
  if (lo < -strict_tolerance * hi) throw Error(ErrorCode::not_convex, "PoritskyParam: curve has an inflection");
  for (double& s : speed) s = std::cbrt(std::max(s, 0.0));
  return TrigSeries(speed, curve.period(), curve.noise_floor());
}

}  // namespace

PoritskyParam::PoritskyParam(const SampledCurve& base, double strict_tolerance)
    : areas_(base), speed_(poritsky_speed(base, strict_tolerance)) {
  const std::size_t n = base.size();
  cumulative_.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) cumulative_[j] = speed_.integral(static_cast<double>(j) * base.spacing());
  total_ = cumulative_[n];
}

double PoritskyParam::to_base(double x) const {
  const double turns = std::floor(x / kTwoPi);
  const double frac = x - turns * kTwoPi;
  const double t = invert_cumulative(speed_, cumulative_, frac / kTwoPi * total_);
  return turns * base().period() + t;
}

double PoritskyParam::from_base(double t) const { return kTwoPi * speed_.integral(t) / total_; }

Vec2 PoritskyParam::point(double x) const { return as_vec2(base().point(to_base(x))); }

Vec2 PoritskyParam::velocity(double x) const {
  const double t = to_base(x);
  const double rate = kTwoPi * std::max(speed_.value(t), 1e-300) / total_;
  return as_vec2(base().derivative(t, 1)) / rate;
}

double PoritskyParam::area(double x, double y) const { return areas_(to_base(x), to_base(y)); }

double area_drift(const PoritskyParam& pp, double c, std::size_t grid) {
  if (grid == 0) grid = pp.base().size();
  std::vector<double> areas(grid);
  double mean = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
    areas[i] = pp.area(x, x + c);
    mean += areas[i];
  }
  mean /= static_cast<double>(grid);
  double drift = 0.0;
  for (double a : areas) drift = std::max(drift, std::abs(a - mean));
  return drift / mean;
}

PoritskyResult poritsky_parameterize(const SampledCurve& curve, const PoritskyOptions& opt) {
  PoritskyParam pp(curve);
  const double c = opt.offset_fraction * pp.period();
  const double drift = area_drift(pp, c, opt.grid);
  return {std::move(pp), drift, c};
}

ChordFamily constant_area_chords(const PoritskyParam& pp, double c, std::size_t count) {
  if (!(c > 0.0 && c < pp.period())) throw Error(ErrorCode::invalid_argument, "constant_area_chords: offset outside (0, period)");
  if (count == 0) count = pp.base().size();
  ChordFamily fam;
  fam.c = c;
  fam.chords.reserve(count);
  double mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    Chord ch;
    ch.x = pp.period() * static_cast<double>(i) / static_cast<double>(count);
    ch.y = ch.x + c;
    ch.p = pp.point(ch.x);
    ch.q = pp.point(ch.y);
    ch.midpoint = 0.5 * (ch.p + ch.q);
    ch.area = pp.area(ch.x, ch.y);
    const Vec2 chord = ch.q - ch.p;
    ch.dA_dx = 0.5 * cross2(chord, pp.velocity(ch.x));
    ch.dA_dy = 0.5 * cross2(chord, pp.velocity(ch.y));
    mean += ch.area;
    fam.chords.push_back(ch);
  }
  mean /= static_cast<double>(count);
  fam.drift = 0.0;
  for (const auto& ch : fam.chords) fam.drift = std::max(fam.drift, std::abs(ch.area - mean));
  fam.drift /= mean;
  return fam;
}

AreaEnvelope area_envelope(const ChordFamily& family, double max_drift) {
  if (family.chords.size() < 4) throw Error(ErrorCode::empty_dataset, "area_envelope: too few chords");
  if (family.drift > max_drift) {
    throw Error(ErrorCode::drift_too_large,
                "area_envelope: chord areas drift by " + std::to_string(family.drift) + ", envelope undefined");
  }
  MatX mids(2, static_cast<Eigen::Index>(family.chords.size()));
  for (std::size_t i = 0; i < family.chords.size(); ++i) mids.col(static_cast<Eigen::Index>(i)) = family.chords[i].midpoint;
  SampledCurve env(std::move(mids), kTwoPi);
  const MatX vel = env.derivative_samples(1);
  double defect = 0.0;
  for (std::size_t i = 0; i < family.chords.size(); ++i) {
    const Vec2 v = vel.col(static_cast<Eigen::Index>(i));
    const Vec2 dir = family.chords[i].q - family.chords[i].p;
    defect = std::max(defect, std::abs(cross2(v, dir)) / (v.norm() * dir.norm()));
  }
  return {std::move(env), defect};
}

OuterStep outer_billiard_step(const SampledCurve& gamma, const Vec2& p) {
  if (gamma.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "outer billiard: curve must be planar");
  if (gamma.orientation() < 0) throw Error(ErrorCode::invalid_argument, "outer billiard: curve must be counterclockwise");
  const std::size_t n = gamma.size();
  const MatX& g = gamma.samples();
  const MatX d = gamma.derivative_samples(1);

  double scale = 0.0;
  double outside = -1.0;  // most negative signed offset from a tangent line
  std::vector<double> h(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const Vec2 gj = g.col(jj), dj = d.col(jj);
    scale = std::max(scale, gj.norm());
    outside = j == 0 ? cross2(dj.normalized(), p - gj) : std::min(outside, cross2(dj.normalized(), p - gj));
    h[j] = cross2(gj - p, dj);
  }
  if (outside >= -1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorCode::not_exterior, "outer billiard: point is not strictly outside the curve");
  }

  auto fn = [&](double t) { return cross2(as_vec2(gamma.point(t)) - p, as_vec2(gamma.derivative(t, 1))); };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    if (std::signbit(h[j]) == std::signbit(h[k]) && h[j] != 0.0) continue;
    const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
    // The oriented tangency: gamma - p runs along gamma'.
    if ((g.col(jj) - p).dot(d.col(jj)) <= 0.0 && (g.col(kk) - p).dot(d.col(kk)) <= 0.0) continue;
    const double a = gamma.parameter(j);
    const double b = a + gamma.spacing();
    const double t = h[j] == 0.0 ? a : roots::find_root(fn, a, b, h[j], h[k]).x;
    const Vec2 touch = as_vec2(gamma.point(t));
    if ((touch - p).dot(as_vec2(gamma.derivative(t, 1))) <= 0.0) continue;
    return {2.0 * touch - p, wrap_parameter(t, gamma.period())};
  }
  throw Error(ErrorCode::not_bracketed, "outer billiard: tangency point not bracketed");
}

Vec2 outer_billiard_map(const SampledCurve& gamma, const Vec2& p) { return outer_billiard_step(gamma, p).image; }

std::vector<Vec2> outer_billiard_orbit(const SampledCurve& gamma, const Vec2& p, std::size_t steps) {
  std::vector<Vec2> pts{p};
  pts.reserve(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) pts.push_back(outer_billiard_map(gamma, pts.back()));
  return pts;
}

double poritsky_residual_ode(const PoritskyParam& pp, double x, double c) {
  const double e = 0.5 * c;
  return cross2(pp.velocity(x - e) + pp.velocity(x + e), pp.point(x + e) - pp.point(x - e));
}

}  // namespace billiard_lab
