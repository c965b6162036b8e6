#include "billiard_lab/affine_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "billiard_lab/error.hpp"

namespace billiard_lab {

namespace {

// Truncated Taylor series c[0] + c[1] h + ... + c[5] h^5.
constexpr std::size_t kTerms = 6;
using Series = std::array<double, kTerms>;

Series operator+(const Series& a, const Series& b) {
  Series r{};
  for (std::size_t i = 0; i < kTerms; ++i) r[i] = a[i] + b[i];
  return r;
}

Series operator-(const Series& a, const Series& b) {
  Series r{};
  for (std::size_t i = 0; i < kTerms; ++i) r[i] = a[i] - b[i];
  return r;
}

Series operator*(const Series& a, const Series& b) {
  Series r{};
  for (std::size_t i = 0; i < kTerms; ++i)
    for (std::size_t j = 0; i + j < kTerms; ++j) r[i + j] += a[i] * b[j];
  return r;
}

Series differentiate(const Series& a) {
  Series r{};
  for (std::size_t k = 1; k < kTerms; ++k) r[k - 1] = static_cast<double>(k) * a[k];
  return r;
}

// a^p by the recurrence from a (a^p)' = p a' a^p.
Series power(const Series& a, double p) {
  Series r{};
  r[0] = std::pow(a[0], p);
  for (std::size_t n = 1; n < kTerms; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      acc += (p * static_cast<double>(k) - static_cast<double>(n - k)) * a[k] * r[n - k];
    }
    r[n] = acc / (static_cast<double>(n) * a[0]);
  }
  return r;
}

void require_ccw_planar(const SampledCurve& curve, const char* where) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, std::string(where) + ": curve must be planar");
  if (curve.orientation() < 0) {
    throw Error(ErrorCode::invalid_argument, std::string(where) + ": curve must be counterclockwise");
  }
}

std::vector<double> speed_brackets(const SampledCurve& curve) {
  const MatX d1 = curve.derivative_samples(1);
  const MatX d2 = curve.derivative_samples(2);
  std::vector<double> out(curve.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out[j] = cross2(d1.col(jj), d2.col(jj));
  }
  return out;
}

}  // namespace

std::vector<double> affine_speed(const SampledCurve& curve, const ConvexityOptions& opt) {
  require_ccw_planar(curve, "affine_speed");
  auto brackets = speed_brackets(curve);
  const auto [lo, hi] = std::minmax_element(brackets.begin(), brackets.end());
  if (*lo < -opt.strict_tolerance * *hi) {
    throw Error(ErrorCode::not_convex, "affine_speed: curvature changes sign (inflection)");
  }
  if (*lo <= opt.strict_tolerance * *hi) {
    throw Error(ErrorCode::not_strictly_convex, "affine_speed: curvature vanishes at a sample (ratio " +
                                                    std::to_string(*lo / *hi) + ")");
  }
  for (double& b : brackets) b = std::cbrt(b);
  return brackets;
}

AffineParamCurve affine_reparameterize(const SampledCurve& curve, const ConvexityOptions& opt) {
  const auto speed = affine_speed(curve, opt);
  auto map = reparameterize_with_map(curve, speed);
  AffineParamCurve ac{std::move(map.curve), std::move(map.source_parameters)};

  const MatX d1 = ac.curve.derivative_samples(1);
  const MatX d2 = ac.curve.derivative_samples(2);
  for (std::size_t j = 0; j < ac.curve.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double bracket = cross2(d1.col(jj), d2.col(jj));
    ac.bracket_defect = std::max(ac.bracket_defect, std::abs(bracket - 1.0));
    // Euclidean curvature from the source parameterisation at the same point.
    const double sigma = ac.source_parameters[j];
    const Vec2 g1 = as_vec2(curve.derivative(sigma, 1));
    const Vec2 g2 = as_vec2(curve.derivative(sigma, 2));
    const double kappa = cross2(g1, g2) / std::pow(g1.norm(), 3);
    const double expected = std::cbrt(1.0 / kappa);
    ac.speed_defect = std::max(ac.speed_defect, std::abs(d1.col(jj).norm() - expected) / expected);
  }
  if (ac.bracket_defect > opt.invariant_tolerance || ac.speed_defect > opt.invariant_tolerance) {
    throw Error(ErrorCode::invariant_violated,
                "affine_reparameterize: equiaffine invariant defect " + std::to_string(ac.bracket_defect) +
                    ", speed defect " + std::to_string(ac.speed_defect));
  }
  return ac;
}

double affine_curvature(const AffineParamCurve& ac, double t, double tol) {
  const Jet jet = evaluate_jet(ac.curve, t, 3);
  const double bracket = cross2(as_vec2(jet[1]), as_vec2(jet[2]));
  if (std::abs(bracket - 1.0) > tol) {
    throw Error(ErrorCode::invariant_violated,
                "affine_curvature: [gamma', gamma''] = " + std::to_string(bracket) + " at t = " + std::to_string(t));
  }
  return cross2(as_vec2(jet[2]), as_vec2(jet[3]));
}

std::vector<double> affine_curvature_profile(const AffineParamCurve& ac) {
  const MatX d2 = ac.curve.derivative_samples(2);
  const MatX d3 = ac.curve.derivative_samples(3);
  std::vector<double> k(ac.curve.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    k[j] = cross2(d2.col(jj), d3.col(jj));
  }
  return k;
}

CurvatureProfile curvature_profile(const SampledCurve& curve) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "curvature_profile: curve must be planar");
  const std::size_t n = curve.size();
  std::array<MatX, kTerms> derivs;
  for (std::size_t m = 0; m < kTerms; ++m) derivs[m] = curve.derivative_samples(static_cast<int>(m));

  CurvatureProfile out;
  out.parameters.resize(n);
  out.s.resize(n);
  out.kappa.resize(n);
  out.dkappa.resize(n);
  out.d2kappa.resize(n);
  out.d3kappa.resize(n);

  std::vector<double> speed(n);
  for (std::size_t j = 0; j < n; ++j) speed[j] = derivs[1].col(static_cast<Eigen::Index>(j)).norm();
  const TrigSeries speed_series(speed, curve.period(), curve.noise_floor());
  out.length = speed_series.period_integral();

  double factorial = 1.0;
  std::array<double, kTerms> inv_fact{};
  for (std::size_t m = 0; m < kTerms; ++m) {
    if (m > 0) factorial *= static_cast<double>(m);
    inv_fact[m] = 1.0 / factorial;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    Series x{}, y{};
    for (std::size_t m = 0; m < kTerms; ++m) {
      x[m] = derivs[m](0, jj) * inv_fact[m];
      y[m] = derivs[m](1, jj) * inv_fact[m];
    }
    const Series x1 = differentiate(x), y1 = differentiate(y);
    const Series x2 = differentiate(x1), y2 = differentiate(y1);
    const Series v2 = x1 * x1 + y1 * y1;
    const Series inv_speed = power(v2, -0.5);
    const Series kappa = (x1 * y2 - y1 * x2) * power(v2, -1.5);
    // d/ds = (1 / |gamma'|) d/dsigma
    const Series k1 = differentiate(kappa) * inv_speed;
    const Series k2 = differentiate(k1) * inv_speed;
    const Series k3 = differentiate(k2) * inv_speed;
    out.parameters[j] = curve.parameter(j);
    out.s[j] = speed_series.integral(out.parameters[j]);
    out.kappa[j] = kappa[0];
    out.dkappa[j] = k1[0];
    out.d2kappa[j] = k2[0];
    out.d3kappa[j] = k3[0];
  }
  return out;
}

KappaOdeResidual kappa_ode_residual(const CurvatureProfile& p) {
  KappaOdeResidual r;
  const std::size_t n = p.kappa.size();
  r.raw.resize(n);
  r.scaled.resize(n);
  const double kbar = p.length > 0.0 ? kTwoPi / p.length : 1.0;
  r.scale = std::pow(kbar, 6);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = p.kappa[j], k1 = p.dkappa[j], k2 = p.d2kappa[j], k3 = p.d3kappa[j];
    r.raw[j] = 36.0 * k * k * k * k * k1 + 9.0 * k * k * k3 - 45.0 * k * k1 * k2 + 40.0 * k1 * k1 * k1;
    r.scaled[j] = r.raw[j] / r.scale;
    r.max_raw = std::max(r.max_raw, std::abs(r.raw[j]));
    r.max_scaled = std::max(r.max_scaled, std::abs(r.scaled[j]));
  }
  return r;
}

bool ParamRange::contains(double t, double period) const {
  const double b = wrap_parameter(begin, period);
  if (end - begin >= period) return true;
  const double len = wrap_parameter(end - begin, period);
  return wrap_parameter(t - b, period) <= len;
}

ConicVerdict conic_test(const SampledCurve& curve, const ConicTestOptions& opt) {
  ConicVerdict v;
  const CurvatureProfile profile = curvature_profile(curve);
  v.kappa_residual = kappa_ode_residual(profile);
  if (opt.arc) {
    double m = 0.0;
    for (std::size_t j = 0; j < profile.parameters.size(); ++j) {
      if (opt.arc->contains(profile.parameters[j], curve.period())) m = std::max(m, std::abs(v.kappa_residual.scaled[j]));
    }
    v.kappa_residual.max_scaled = m;
  }
  {
    const auto brackets = speed_brackets(curve);
    const auto [lo, hi] = std::minmax_element(brackets.begin(), brackets.end());
    v.curvature_ratio = *lo / *hi;
  }

  std::optional<AffineParamCurve> ac;
  try {
    ac = affine_reparameterize(curve, opt.convexity);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_strictly_convex) throw;
    v.conic = false;
    v.reason = "curvature vanishes on the closed curve";
    return v;
  }

  const auto k = affine_curvature_profile(*ac);
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (opt.arc && !opt.arc->contains(ac->source_parameters[j], curve.period())) continue;
    v.k_parameters.push_back(ac->curve.parameter(j));
    v.k_profile.push_back(k[j]);
  }
  if (v.k_profile.empty()) throw Error(ErrorCode::empty_dataset, "conic_test: sub-arc contains no samples");
  const auto [lo, hi] = std::minmax_element(v.k_profile.begin(), v.k_profile.end());
  v.k_min = *lo;
  v.k_max = *hi;
  v.k_mean = std::accumulate(v.k_profile.begin(), v.k_profile.end(), 0.0) / static_cast<double>(v.k_profile.size());
  v.k_variation = (v.k_max - v.k_min) / std::max(std::abs(v.k_mean), 1e-300);
  v.conic = v.k_variation < opt.tol;
  v.reason = v.conic ? "affine curvature constant" : "affine curvature varies";
  return v;
}

}  // namespace billiard_lab
