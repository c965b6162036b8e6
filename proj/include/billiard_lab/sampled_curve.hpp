#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "billiard_lab/geometry.hpp"
#include "billiard_lab/trig_series.hpp"

namespace billiard_lab {

inline constexpr int kMaxJetOrder = 5;
inline constexpr std::size_t kDefaultSampleCount = 512;

/// A point together with its parameter derivatives up to some order.
struct Jet {
  std::vector<VecX> derivatives;  // derivatives[0] is the point

  int order() const { return static_cast<int>(derivatives.size()) - 1; }
  const VecX& operator[](int k) const { return derivatives.at(static_cast<std::size_t>(k)); }
  const VecX& point() const { return derivatives.front(); }
};

/// Closed curve in R^2 or R^3 stored as uniform samples over one period.
///
/// Derivatives come from the trigonometric interpolant of each coordinate, so
/// for analytic curves they converge faster than any power of the sample count.
/// Instances are immutable.
class SampledCurve {
 public:
  /// samples is dim x n, column j taken at parameter j * period / n.
  SampledCurve(MatX samples, double period, bool closed = true,
               double noise_floor = kDefaultNoiseFloor);

  /// Samples f at n uniform parameters of [0, period).
  static SampledCurve from_function(const std::function<VecX(double)>& f, int dim, double period,
                                    std::size_t n = kDefaultSampleCount,
                                    double noise_floor = kDefaultNoiseFloor);

  int dimension() const { return static_cast<int>(samples_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(samples_.cols()); }
  double period() const { return period_; }
  bool closed() const { return closed_; }
  double noise_floor() const { return noise_floor_; }
  double spacing() const { return period_ / static_cast<double>(size()); }
  double parameter(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  const MatX& samples() const { return samples_; }
  VecX sample(std::size_t j) const { return samples_.col(static_cast<Eigen::Index>(j)); }
  const TrigSeries& coordinate(int i) const { return coords_.at(static_cast<std::size_t>(i)); }

  VecX point(double t) const { return derivative(t, 0); }
  VecX derivative(double t, int order) const;
  /// order-th derivative at every sample, dim x n.
  MatX derivative_samples(int order) const;

  /// Signed area enclosed (planar curves only; positive when counterclockwise).
  double signed_area() const { return signed_area_; }
  /// +1 for counterclockwise planar curves, -1 otherwise.
  int orientation() const { return signed_area() >= 0.0 ? 1 : -1; }

 private:
  MatX samples_;
  double period_;
  bool closed_;
  double noise_floor_;
  std::vector<TrigSeries> coords_;
  double signed_area_ = 0.0;
};

/// Point and derivatives up to `order` at t. Throws for order outside [0, 5]
/// or, when derivatives are requested, for a curve not marked closed.
Jet evaluate_jet(const SampledCurve& curve, double t, int order);

struct Reparameterization {
  SampledCurve curve;
  /// Old parameter of every new sample.
  std::vector<double> source_parameters;
};

/// Resamples the curve uniformly in a new parameter tau with d tau / d t = speed(t).
/// speed holds one strictly positive value per existing sample. The new period
/// is the integral of speed over the old one.
SampledCurve reparameterize(const SampledCurve& curve, std::span<const double> speed);
Reparameterization reparameterize_with_map(const SampledCurve& curve, std::span<const double> speed);

/// Inverse of a monotone cumulative map: the parameter t in [0, series period)
/// with integral(t) == target, for a positive periodic rate series.
double invert_cumulative(const TrigSeries& rate, std::span<const double> cumulative_at_samples,
                         double target);

}  // namespace billiard_lab
