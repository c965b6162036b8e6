#include "billiard_lab/trig_series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "billiard_lab/error.hpp"
#include "billiard_lab/geometry.hpp"

namespace billiard_lab {

TrigSeries::TrigSeries(std::span<const double> samples, double period, double noise_floor)
    : period_(period), omega_(kTwoPi / period), samples_(samples.begin(), samples.end()) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "TrigSeries: no samples");
  if (!(period > 0.0)) throw Error(ErrorCode::invalid_argument, "TrigSeries: period must be positive");

  const std::size_t n = samples.size();
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, samples_);

  // Modes strictly below Nyquist.
  const std::size_t kmax = (n - 1) / 2;
  const double inv_n = 1.0 / static_cast<double>(n);
  cos_.assign(kmax + 1, 0.0);
  sin_.assign(kmax + 1, 0.0);
  cos_[0] = spectrum[0].real() * inv_n;
  double largest = std::abs(cos_[0]);
  for (std::size_t k = 1; k <= kmax; ++k) {
    cos_[k] = 2.0 * spectrum[k].real() * inv_n;
    sin_[k] = -2.0 * spectrum[k].imag() * inv_n;
    largest = std::max(largest, std::hypot(cos_[k], sin_[k]));
  }
  const double cut = noise_floor * largest;
  std::size_t last = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    if (std::hypot(cos_[k], sin_[k]) < cut) {
      cos_[k] = sin_[k] = 0.0;
    } else {
      last = k;
    }
  }
  cos_.resize(last + 1);
  sin_.resize(last + 1);
}

void TrigSeries::derivatives(double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (out.empty() || cos_.empty()) return;
  out[0] = cos_[0];
  const std::size_t orders = out.size();
  const double theta = omega_ * t;
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> z = 1.0;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    // Re-seed periodically to keep the recurrence at full accuracy.
    z = (k % 32 == 0) ? std::polar(1.0, theta * static_cast<double>(k)) : z * step;
    const double a = cos_[k], b = sin_[k];
    if (a == 0.0 && b == 0.0) continue;
    const double c = z.real(), s = z.imag();
    // d^m/dt^m [a cos + b sin] cycles through four phases.
    const double phase[4] = {a * c + b * s, -a * s + b * c, -a * c - b * s, a * s - b * c};
    const double kw = omega_ * static_cast<double>(k);
    double scale = 1.0;
    for (std::size_t m = 0; m < orders; ++m) {
      out[m] += scale * phase[m % 4];
      scale *= kw;
    }
  }
}

double TrigSeries::derivative(double t, int order) const {
  if (order < 0) throw Error(ErrorCode::invalid_argument, "TrigSeries: negative derivative order");
  double buf[16];
  if (order >= 16) throw Error(ErrorCode::invalid_argument, "TrigSeries: derivative order too high");
  derivatives(t, std::span<double>(buf, static_cast<std::size_t>(order) + 1));
  return buf[order];
}

std::vector<double> TrigSeries::derivative_at_samples(int order) const {
  const std::size_t n = samples_.size();
  std::vector<double> out(n);
  const double h = period_ / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = derivative(static_cast<double>(j) * h, order);
  return out;
}

double TrigSeries::integral(double t) const {
  if (cos_.empty()) return 0.0;
  double acc = cos_[0] * t;
  const double theta = omega_ * t;
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> z = 1.0;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    z = (k % 32 == 0) ? std::polar(1.0, theta * static_cast<double>(k)) : z * step;
    const double kw = omega_ * static_cast<double>(k);
    acc += (cos_[k] * z.imag() - sin_[k] * (z.real() - 1.0)) / kw;
  }
  return acc;
}

}  // namespace billiard_lab
