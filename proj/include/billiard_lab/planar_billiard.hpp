#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "billiard_lab/conics.hpp"
#include "billiard_lab/sampled_curve.hpp"

namespace billiard_lab {

/// Phase point of the billiard map: foot parameter and inward unit direction.
struct BilliardState {
  double t;
  Vec2 u;
};

struct OrbitRecord {
  std::vector<BilliardState> states;
  /// A (x_k - c) . u_k for every state, when a form was supplied.
  std::vector<double> integral_values;
  /// Foot parameter of the chord leaving the last state.
  std::optional<double> terminal_t;
  /// Empty when all requested steps completed.
  std::string abort_reason;

  bool complete() const { return abort_reason.empty(); }
};

/// Grazing threshold on |u . n|.
inline constexpr double kGrazingTolerance = 1e-9;

/// Unit normal pointing into the region bounded by a planar curve.
Vec2 inward_normal(const SampledCurve& curve, double t);

/// Parameter of the point where the chord from gamma(t) along u meets the curve again.
///
/// The signed offset g(s) = [u, gamma(s) - gamma(t)] vanishes at s = t and at the
/// answer. Dividing by sin(pi (s - t) / period) removes the trivial zero, so the
/// quotient changes sign exactly once over one period after t; that change is
/// bracketed from the samples and refined with a safeguarded secant/bisection.
double next_intersection(const SampledCurve& curve, const BilliardState& state);

/// Mirror image of u_in in the tangent line at t.
Vec2 reflect(const SampledCurve& curve, double t, const Vec2& u_in);

/// n billiard steps from start. A failing step stops the orbit and leaves the
/// states computed so far in the record.
OrbitRecord orbit(const SampledCurve& curve, const BilliardState& start, std::size_t steps,
                  const std::optional<QuadraticForm>& form = std::nullopt);

/// Start state at parameter t whose direction makes `angle` in (0, pi) with the
/// positively oriented tangent, turning inward.
BilliardState start_state(const SampledCurve& curve, double t, double angle);

/// (N_x + N_y) . (y - x).
double pair_residual(const Vec2& n_x, const Vec2& n_y, const Vec2& x, const Vec2& y);

/// max_k |J_k - J_0|.
double integral_drift(const OrbitRecord& record);

enum class FieldNormalization {
  unit_vector,  // sampled profile has unit Euclidean norm, sign chosen so sum f > 0
};

/// N(t) is f(t) times the clockwise quarter turn of gamma'(t); for a
/// counterclockwise curve and positive f that normal points outward.
struct NormalFieldCandidate {
  std::vector<double> parameters;
  std::vector<double> f;
  FieldNormalization normalization = FieldNormalization::unit_vector;
};

struct NormalFieldFit {
  NormalFieldCandidate field;
  /// Smallest over largest singular value of the chord system.
  double residual;
  /// false when the fitted profile changes sign.
  bool admissible;
  std::size_t equations;
};

struct FitOptions {
  /// Minimum sample count.
  std::size_t min_samples = 32;
};

/// Least-squares normal field satisfying N(x).(y - x) = -N(y).(y - x) on chord pairs.
///
/// Unknowns are f at the curve's samples; every pair (i, j) contributes
/// f_i [gamma'_i, d] + f_j [gamma'_j, d] = 0 with d = gamma_j - gamma_i. Pairs are
/// all samples at 8 fixed index separations plus pair_budget random pairs.
NormalFieldFit fit_normal_field(const SampledCurve& curve, std::size_t pair_budget,
                                unsigned long long seed, const FitOptions& opt = {});

/// The fitted normal vector at sample j.
Vec2 fitted_normal(const SampledCurve& curve, const NormalFieldCandidate& field, std::size_t j);

/// Index separations used by fit_normal_field for n samples.
std::vector<std::size_t> fit_separations(std::size_t n);

/// Sample index pairs: every sample at each fit separation, topped up with random pairs.
std::vector<std::pair<std::size_t, std::size_t>> fit_pairs(std::size_t n, std::size_t pair_budget,
                                                            unsigned long long seed);

/// Null vector of a homogeneous system with one column per curve sample.
NormalFieldFit solve_field_system(const MatX& system, const SampledCurve& curve);

}  // namespace billiard_lab
