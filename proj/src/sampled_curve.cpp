#include "billiard_lab/sampled_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "billiard_lab/error.hpp"
#include "billiard_lab/roots.hpp"

namespace billiard_lab {

SampledCurve::SampledCurve(MatX samples, double period, bool closed, double noise_floor)
    : samples_(std::move(samples)), period_(period), closed_(closed), noise_floor_(noise_floor) {
  if (samples_.rows() != 2 && samples_.rows() != 3) {
    throw Error(ErrorCode::dimension_mismatch, "SampledCurve: dimension must be 2 or 3");
  }
  if (samples_.cols() < 4) throw Error(ErrorCode::invalid_argument, "SampledCurve: need at least 4 samples");
  if (!(period > 0.0)) throw Error(ErrorCode::invalid_argument, "SampledCurve: period must be positive");
  if (!samples_.allFinite()) throw Error(ErrorCode::invalid_argument, "SampledCurve: non-finite sample");

  const std::size_t n = size();
  coords_.reserve(static_cast<std::size_t>(samples_.rows()));
  std::vector<double> row(n);
  for (Eigen::Index i = 0; i < samples_.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = samples_(i, static_cast<Eigen::Index>(j));
    coords_.emplace_back(row, period_, noise_floor_);
  }
  if (dimension() == 2 && closed_) {
    // Trapezoid rule on the periodic integrand x y' - y x'.
    const auto dx = coords_[0].derivative_at_samples(1);
    const auto dy = coords_[1].derivative_at_samples(1);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += samples_(0, static_cast<Eigen::Index>(j)) * dy[j] - samples_(1, static_cast<Eigen::Index>(j)) * dx[j];
    }
    signed_area_ = 0.5 * acc * spacing();
  }
}

SampledCurve SampledCurve::from_function(const std::function<VecX(double)>& f, int dim, double period,
                                         std::size_t n, double noise_floor) {
  MatX samples(dim, static_cast<Eigen::Index>(n));
  const double h = period / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const VecX p = f(static_cast<double>(j) * h);
    if (p.size() != dim) throw Error(ErrorCode::dimension_mismatch, "from_function: wrong point dimension");
    samples.col(static_cast<Eigen::Index>(j)) = p;
  }
  return SampledCurve(std::move(samples), period, true, noise_floor);
}

VecX SampledCurve::derivative(double t, int order) const {
  VecX out(dimension());
  for (int i = 0; i < dimension(); ++i) out(i) = coords_[static_cast<std::size_t>(i)].derivative(t, order);
  return out;
}

MatX SampledCurve::derivative_samples(int order) const {
  MatX out(dimension(), static_cast<Eigen::Index>(size()));
  for (int i = 0; i < dimension(); ++i) {
    const auto d = coords_[static_cast<std::size_t>(i)].derivative_at_samples(order);
    for (std::size_t j = 0; j < d.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = d[j];
  }
  return out;
}

Jet evaluate_jet(const SampledCurve& curve, double t, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw Error(ErrorCode::invalid_argument,
                "evaluate_jet: order " + std::to_string(order) + " outside [0, 5]");
  }
  if (order > 0 && !curve.closed()) {
    throw Error(ErrorCode::not_closed, "evaluate_jet: periodic differentiation of an open curve");
  }
  const int dim = curve.dimension();
  Jet jet;
  jet.derivatives.assign(static_cast<std::size_t>(order) + 1, VecX::Zero(dim));
  double buf[kMaxJetOrder + 1];
  for (int i = 0; i < dim; ++i) {
    curve.coordinate(i).derivatives(t, std::span<double>(buf, static_cast<std::size_t>(order) + 1));
    for (int k = 0; k <= order; ++k) jet.derivatives[static_cast<std::size_t>(k)](i) = buf[k];
  }
  return jet;
}

double invert_cumulative(const TrigSeries& rate, std::span<const double> cumulative, double target) {
  const std::size_t n = rate.sample_count();
  const double h = rate.period() / static_cast<double>(n);
  // cumulative has n + 1 entries, the last one being the period integral.
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  std::size_t j = (it == cumulative.begin()) ? 0 : static_cast<std::size_t>(it - cumulative.begin()) - 1;
  j = std::min(j, n - 1);
  const double lo = static_cast<double>(j) * h;
  const double hi = static_cast<double>(j + 1) * h;
  const double flo = cumulative[j] - target;
  const double fhi = cumulative[j + 1] - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo > 0.0 || fhi < 0.0) {
    // Rate dips below zero somewhere; fall back to the nearest sample.
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
  }
  const auto res = roots::find_root([&](double t) { return rate.integral(t) - target; }, lo, hi, flo, fhi);
  return res.x;
}

Reparameterization reparameterize_with_map(const SampledCurve& curve, std::span<const double> speed) {
  const std::size_t n = curve.size();
  if (speed.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "reparameterize: speed profile length differs from sample count");
  }
  for (double s : speed) {
    if (!(s > 0.0)) throw Error(ErrorCode::non_positive_speed, "reparameterize: speed profile must be strictly positive");
  }
  const TrigSeries rate(speed, curve.period(), curve.noise_floor());
  std::vector<double> cumulative(n + 1);
  for (std::size_t j = 0; j <= n; ++j) cumulative[j] = rate.integral(static_cast<double>(j) * curve.spacing());
  const double total = cumulative[n];
  if (!(total > 0.0)) throw Error(ErrorCode::non_positive_speed, "reparameterize: total length not positive");

  MatX samples(curve.dimension(), static_cast<Eigen::Index>(n));
  std::vector<double> sources(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(n);
    const double t = invert_cumulative(rate, cumulative, target);
    sources[j] = t;
    samples.col(static_cast<Eigen::Index>(j)) = curve.point(t);
  }
  return {SampledCurve(std::move(samples), total, curve.closed(), curve.noise_floor()), std::move(sources)};
}

SampledCurve reparameterize(const SampledCurve& curve, std::span<const double> speed) {
  return reparameterize_with_map(curve, speed).curve;
}

}  // namespace billiard_lab
