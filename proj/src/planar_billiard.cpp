#include "billiard_lab/planar_billiard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "billiard_lab/error.hpp"
#include "billiard_lab/roots.hpp"

namespace billiard_lab {

namespace {

void require_planar(const SampledCurve& curve, const char* where) {
  if (curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, std::string(where) + ": curve must be planar");
}

}  // namespace

Vec2 inward_normal(const SampledCurve& curve, double t) {
  require_planar(curve, "inward_normal");
  const Vec2 d = as_vec2(curve.derivative(t, 1));
  const Vec2 n = rotate_ccw(d).normalized();
  return curve.orientation() > 0 ? n : Vec2(-n);
}

double next_intersection(const SampledCurve& curve, const BilliardState& state) {
  require_planar(curve, "next_intersection");
  const double period = curve.period();
  const double t0 = wrap_parameter(state.t, period);
  const Vec2 u = state.u;
  const Jet jet = evaluate_jet(curve, t0, 1);
  const Vec2 p0 = as_vec2(jet[0]);
  const Vec2 tangent = as_vec2(jet[1]);
  const Vec2 n_in = inward_normal(curve, t0);
  const double incidence = u.dot(n_in) / u.norm();
  if (std::abs(incidence) < kGrazingTolerance) {
    throw Error(ErrorCode::tangency, "next_intersection: direction is tangent to the curve");
  }
  if (incidence < 0.0) throw Error(ErrorCode::not_inward, "next_intersection: direction points outward");

  const double w = kPi / period;
  // Limits of the quotient at delta -> 0+ and delta -> period-.
  const double q_start = cross2(u, tangent) / w;
  auto quotient = [&](double delta) {
    if (delta <= 0.0) return q_start;
    if (delta >= period) return -q_start;
    const Vec2 p = as_vec2(curve.point(t0 + delta));
    return cross2(u, p - p0) / std::sin(w * delta);
  };

  // Scan the stored samples in parameter order after t0.
  const std::size_t n = curve.size();
  const double h = curve.spacing();
  const double guard = 1e-9 * period;
  const auto first = static_cast<std::size_t>(std::floor(t0 / h)) + 1;
  double prev_delta = 0.0, prev_q = q_start;
  double lo = 0.0, hi = period, flo = prev_q, fhi = -prev_q;
  bool found = false;
  for (std::size_t m = 0; m < n && !found; ++m) {
    const std::size_t j = (first + m) % n;
    double delta = curve.parameter(j) - t0;
    if (delta < 0.0) delta += period;
    if (delta < guard || delta > period - guard) continue;
    const Vec2 p = as_vec2(curve.sample(j));
    const double q = cross2(u, p - p0) / std::sin(w * delta);
    if (q == 0.0) return wrap_parameter(t0 + delta, period);
    if (std::signbit(q) != std::signbit(prev_q)) {
      lo = prev_delta; flo = prev_q; hi = delta; fhi = q;
      found = true;
    }
    prev_delta = delta;
    prev_q = q;
  }
  if (!found) {
    lo = prev_delta; flo = prev_q; hi = period; fhi = -q_start;
  }
  const auto root = roots::find_root(quotient, lo, hi, flo, fhi);
  return wrap_parameter(t0 + root.x, period);
}

Vec2 reflect(const SampledCurve& curve, double t, const Vec2& u_in) {
  const Vec2 n = inward_normal(curve, t);
  const double c = u_in.dot(n);
  if (std::abs(c) < kGrazingTolerance * u_in.norm()) {
    throw Error(ErrorCode::tangency, "reflect: tangential incidence");
  }
  return (u_in - 2.0 * c * n).normalized();
}

OrbitRecord orbit(const SampledCurve& curve, const BilliardState& start, std::size_t steps,
                  const std::optional<QuadraticForm>& form) {
  if (steps < 1) throw Error(ErrorCode::invalid_argument, "orbit: need at least one step");
  OrbitRecord rec;
  rec.states.reserve(steps + 1);
  auto record = [&](const BilliardState& s) {
    rec.states.push_back(s);
    if (form) rec.integral_values.push_back(form->apply(curve.point(s.t)).dot(s.u));
  };
  BilliardState state{wrap_parameter(start.t, curve.period()), start.u.normalized()};
  record(state);
  try {
    for (std::size_t k = 0; k < steps; ++k) {
      const double next = next_intersection(curve, state);
      state = {next, reflect(curve, next, state.u)};
      record(state);
    }
    rec.terminal_t = next_intersection(curve, state);
  } catch (const Error& e) {
    if (rec.states.size() < steps + 1) rec.abort_reason = e.what();
  }
  return rec;
}

BilliardState start_state(const SampledCurve& curve, double t, double angle) {
  if (!(angle > 0.0 && angle < kPi)) throw Error(ErrorCode::invalid_argument, "start_state: angle must lie in (0, pi)");
  const Vec2 tangent = as_vec2(curve.derivative(t, 1)).normalized();
  const Vec2 n_in = inward_normal(curve, t);
  return {wrap_parameter(t, curve.period()), (std::cos(angle) * tangent + std::sin(angle) * n_in).normalized()};
}

double pair_residual(const Vec2& n_x, const Vec2& n_y, const Vec2& x, const Vec2& y) {
  return (n_x + n_y).dot(y - x);
}

double integral_drift(const OrbitRecord& record) {
  if (record.integral_values.empty()) throw Error(ErrorCode::empty_dataset, "integral_drift: record has no integral values");
  const double j0 = record.integral_values.front();
  double drift = 0.0;
  for (double j : record.integral_values) drift = std::max(drift, std::abs(j - j0));
  return drift;
}

std::vector<std::size_t> fit_separations(std::size_t n) {
  std::vector<std::size_t> wanted{1, 2, 3, 5, 8, n / 8, n / 4, n / 2};
  std::set<std::size_t> used;
  std::vector<std::size_t> out;
  std::size_t filler = 4;
  for (std::size_t s : wanted) {
    while (s == 0 || used.count(s) || s >= n) s = filler++;
    used.insert(s);
    out.push_back(s);
  }
  return out;
}

Vec2 fitted_normal(const SampledCurve& curve, const NormalFieldCandidate& field, std::size_t j) {
  const Vec2 d = as_vec2(curve.derivative(field.parameters.at(j), 1));
  return field.f.at(j) * rotate_cw(d);
}

std::vector<std::pair<std::size_t, std::size_t>> fit_pairs(std::size_t n, std::size_t pair_budget,
                                                            unsigned long long seed) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t sep : fit_separations(n)) {
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, (i + sep) % n);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (pairs.size() < 8 * n + pair_budget) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i != j) pairs.emplace_back(i, j);
  }
  return pairs;
}

NormalFieldFit solve_field_system(const MatX& system, const SampledCurve& curve) {
  const auto n = system.cols();
  if (system.rows() < n) throw Error(ErrorCode::invalid_argument, "normal field fit: underdetermined system");
  // Reduce to the square triangular factor before the SVD.
  Eigen::HouseholderQR<MatX> qr(system);
  const MatX r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  Eigen::BDCSVD<MatX> svd(r, Eigen::ComputeThinV);
  const VecX& s = svd.singularValues();
  VecX f = svd.matrixV().col(n - 1);
  if (f.sum() < 0.0) f = -f;

  NormalFieldFit fit;
  fit.residual = s(s.size() - 1) / s(0);
  fit.equations = static_cast<std::size_t>(system.rows());
  fit.admissible = f.minCoeff() > 0.0;
  fit.field.f.assign(f.data(), f.data() + f.size());
  fit.field.parameters.resize(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < fit.field.parameters.size(); ++j) fit.field.parameters[j] = curve.parameter(j);
  return fit;
}

NormalFieldFit fit_normal_field(const SampledCurve& curve, std::size_t pair_budget, unsigned long long seed,
                                const FitOptions& opt) {
  require_planar(curve, "fit_normal_field");
  const std::size_t n = curve.size();
  if (n < opt.min_samples) {
    throw Error(ErrorCode::invalid_argument, "fit_normal_field: need at least " + std::to_string(opt.min_samples) + " samples");
  }
  const MatX& g = curve.samples();
  const MatX d = curve.derivative_samples(1);

  const auto pairs = fit_pairs(n, pair_budget, seed);
  MatX system = MatX::Zero(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const Vec2 chord = g.col(jj) - g.col(ii);
    const auto rr = static_cast<Eigen::Index>(r);
    system(rr, ii) += cross2(d.col(ii), chord);
    system(rr, jj) += cross2(d.col(jj), chord);
  }
  return solve_field_system(system, curve);
}

}  // namespace billiard_lab
