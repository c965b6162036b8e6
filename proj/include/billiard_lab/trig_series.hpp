#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace billiard_lab {

/// Relative amplitude below which Fourier modes are treated as roundoff and
/// dropped. High-order derivatives amplify mode k by k^m, so leaving the
/// noise floor in place swamps fifth derivatives.
inline constexpr double kDefaultNoiseFloor = 1e-15;

/// Real trigonometric interpolant of uniformly spaced periodic samples.
///
/// The series is a0 + sum_k (a_k cos(k w t) + b_k sin(k w t)), w = 2 pi / period,
/// built from the discrete Fourier transform of the samples. The Nyquist mode
/// of an even sample count is discarded, and modes whose amplitude falls below
/// noise_floor times the largest amplitude (mean included) are zeroed.
class TrigSeries {
 public:
  TrigSeries() = default;
  TrigSeries(std::span<const double> samples, double period, double noise_floor = kDefaultNoiseFloor);

  double period() const { return period_; }
  std::size_t sample_count() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  /// Highest retained mode.
  std::size_t bandwidth() const { return cos_.empty() ? 0 : cos_.size() - 1; }

  double mean() const { return cos_.empty() ? 0.0 : cos_[0]; }

  double value(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;
  /// Writes derivatives 0..out.size()-1 at t.
  void derivatives(double t, std::span<double> out) const;
  /// The order-th derivative at every sample point.
  std::vector<double> derivative_at_samples(int order) const;

  /// Integral of the series from 0 to t (unbounded t allowed).
  double integral(double t) const;
  /// Integral over one period.
  double period_integral() const { return mean() * period_; }

 private:
  double period_ = 1.0;
  double omega_ = 1.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> samples_;
};

}  // namespace billiard_lab
