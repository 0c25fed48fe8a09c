/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/**
 * @file    labeling.hpp
 * @brief   Weighted temporal labeling.
 *
 * Experiment i starts from its own diagonal deviation state D_i, applies the
 * population permutation P_i (which fixes the ground state g and cycles the
 * rest), and the results are summed with weights w_i:
 *
 *   rho_eff = sum_i w_i P_i D_i P_i^T
 *
 * The weights are chosen so that every non-ground population of rho_eff
 * takes one common value c. That gives 2 equalization rows for 3 weights;
 * the third row is the normalization convention. The result then has the
 * form q1 I + q2 |g><g| with q1 = c and q2 = rho_eff[g] - c.
 */

#ifndef XENQC_LABELING_HPP
#define XENQC_LABELING_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/dense_solve.hpp"
#include "quantum_core.hpp"
#include "spin_system.hpp"

namespace xenqc {

enum class Normalization { FirstWeightOne, SumEqualsCount };

inline const char *to_string(Normalization n) {
  return n == Normalization::FirstWeightOne ? "FIRST_WEIGHT_ONE" : "SUM_EQUALS_COUNT";
}

inline constexpr double kPivotTol = 1e-12;
inline constexpr double kResidualRelTol = 1e-9;
inline constexpr double kTracelessTol = 1e-9;

struct LabelingPlan {
  std::size_t ground = 0;
  std::vector<Perm> perms = {Perm::Identity, Perm::Cycle, Perm::Cycle2};
  Normalization normalization = Normalization::FirstWeightOne;

  void validate() const {
    check_ground(ground);
    if (perms.size() != kTwoSpinDim - 1)
      throw std::invalid_argument("LabelingPlan: need exactly 3 permutations");
    for (std::size_t i = 0; i < perms.size(); ++i)
      for (std::size_t j = i + 1; j < perms.size(); ++j)
        if (perms[i] == perms[j])
          throw std::invalid_argument("LabelingPlan: permutations must be distinct");
  }
};

class SingularSystemError : public std::runtime_error {
public:
  SingularSystemError(const std::string &what, detail::SolveDiagnostics diag)
      : std::runtime_error(what), diagnostics(diag) {}
  detail::SolveDiagnostics diagnostics;
};

class DegenerateInputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Moves the content of the non-ground states along the ascending cycle
/// n0 -> n1 -> n2 -> n0 (CYCLE) or its inverse (CYCLE2). For ground |00>
/// the CYCLE maps (g, a, b, c) to (g, c, a, b).
inline Populations permute_populations(const Populations &diag, Perm perm, std::size_t ground) {
  if (diag.size() != kTwoSpinDim)
    throw std::invalid_argument("permute_populations: expected 4 populations");
  const auto ng = non_ground_states(ground);
  const std::size_t shift = static_cast<std::size_t>(perm);
  Populations out = diag;
  for (std::size_t k = 0; k < ng.size(); ++k)
    out[ng[(k + shift) % ng.size()]] = diag[ng[k]];
  return out;
}

struct WeightSolution {
  std::vector<double> weights;
  double residual = 0.0; // max - min of the assembled non-ground populations
};

namespace detail {

inline void check_diags(const std::vector<Populations> &diags, std::size_t expected) {
  if (diags.size() != expected)
    throw std::invalid_argument("labeling: expected " + std::to_string(expected) + " input diagonals, got " +
                                std::to_string(diags.size()));
  for (const auto &d : diags)
    if (d.size() != kTwoSpinDim)
      throw std::invalid_argument("labeling: every diagonal must have 4 entries");
}

inline double max_abs(const std::vector<Populations> &diags) {
  double m = 0.0;
  for (const auto &d : diags)
    for (double v : d)
      m = std::max(m, std::abs(v));
  return m;
}

inline Populations weighted_sum(const std::vector<Populations> &diags, const LabelingPlan &plan,
                                const std::vector<double> &weights) {
  Populations acc(kTwoSpinDim, 0.0);
  for (std::size_t i = 0; i < diags.size(); ++i) {
    const Populations p = permute_populations(diags[i], plan.perms[i], plan.ground);
    for (std::size_t s = 0; s < kTwoSpinDim; ++s)
      acc[s] += weights[i] * p[s];
  }
  return acc;
}

inline double non_ground_spread(const Populations &acc, std::size_t ground) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s : non_ground_states(ground)) {
    lo = std::min(lo, acc[s]);
    hi = std::max(hi, acc[s]);
  }
  return hi - lo;
}

} // namespace detail

inline WeightSolution solve_weights(const std::vector<Populations> &diags, const LabelingPlan &plan) {
  plan.validate();
  const std::size_t n = plan.perms.size();
  detail::check_diags(diags, n);

  std::vector<std::vector<double>> permuted(n);
  for (std::size_t i = 0; i < n; ++i)
    permuted[i] = permute_populations(diags[i], plan.perms[i], plan.ground);

  // Rows 0..n-2: population of non-ground state k_{j+1} equals that of k_0.
  // Row n-1: normalization.
  const auto ng = non_ground_states(plan.ground);
  std::vector<double> a(n * n, 0.0), b(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      a[j * n + i] = permuted[i][ng[j + 1]] - permuted[i][ng[0]];
  if (plan.normalization == Normalization::FirstWeightOne) {
    a[(n - 1) * n + 0] = 1.0;
    b[n - 1] = 1.0;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      a[(n - 1) * n + i] = 1.0;
    b[n - 1] = static_cast<double>(n);
  }

  detail::SolveDiagnostics diag;
  auto x = detail::solve_partial_pivot(a, b, n, kPivotTol, &diag);
  if (!x) {
    std::ostringstream msg;
    msg << "solve_weights: labeling system is singular for ground " << plan.ground << " (pivot "
        << diag.min_pivot << " at step " << diag.failed_row << ", matrix scale " << diag.scale << ")";
    throw SingularSystemError(msg.str(), diag);
  }
  WeightSolution sol;
  sol.weights = std::move(*x);
  sol.residual = detail::non_ground_spread(detail::weighted_sum(diags, plan, sol.weights), plan.ground);
  return sol;
}

struct EffectivePureResult {
  std::size_t ground = 0;
  Populations diagonal; // weighted sum, not unit trace
  std::vector<double> weights;
  double q1 = 0.0;
  double q2 = 0.0;
  double residual = 0.0;
  bool within_tolerance = true;

  DensityMatrix rho_eff() const { return DensityMatrix::from_diagonal(diagonal); }

  /// Weight rescaling that makes the weights sum to their count.
  double normalization_factor() const {
    double s = 0.0;
    for (double w : weights)
      s += w;
    if (s == 0.0)
      throw std::invalid_argument("EffectivePureResult: weights sum to zero");
    return static_cast<double>(weights.size()) / s;
  }

  /// q2 after rescaling weights to sum to their count.
  double normalized_q2() const { return q2 * normalization_factor(); }
};

inline EffectivePureResult assemble_effective_pure(const std::vector<Populations> &diags, const LabelingPlan &plan,
                                                   const std::vector<double> &weights) {
  plan.validate();
  detail::check_diags(diags, plan.perms.size());
  if (weights.size() != plan.perms.size())
    throw std::invalid_argument("assemble_effective_pure: weight count mismatch");

  EffectivePureResult r;
  r.ground = plan.ground;
  r.weights = weights;
  r.diagonal = detail::weighted_sum(diags, plan, weights);
  const auto ng = non_ground_states(plan.ground);
  double c = 0.0;
  for (std::size_t s : ng)
    c += r.diagonal[s];
  c /= static_cast<double>(ng.size());
  r.q1 = c;
  r.q2 = r.diagonal[plan.ground] - c;
  r.residual = detail::non_ground_spread(r.diagonal, plan.ground);
  double scale = 0.0;
  for (double v : r.diagonal)
    scale = std::max(scale, std::abs(v));
  r.within_tolerance = r.residual <= kResidualRelTol * scale;
  return r;
}

/// Solve and assemble in one step.
inline EffectivePureResult label(const std::vector<Populations> &diags, const LabelingPlan &plan) {
  const WeightSolution sol = solve_weights(diags, plan);
  return assemble_effective_pure(diags, plan, sol.weights);
}

/// Ground state giving the largest |q2| once weights are rescaled to sum to
/// the experiment count (equal noise per experiment, fixed experiment
/// count). Near-ties prefer a positive q2, then the lowest index.
inline std::size_t choose_ground(const std::vector<Populations> &diags) {
  detail::check_diags(diags, kTwoSpinDim - 1);
  const double scale = detail::max_abs(diags);
  for (const auto &d : diags) {
    double tr = 0.0;
    for (double v : d)
      tr += v;
    if (std::abs(tr) > kTracelessTol * std::max(scale, 1.0))
      throw std::invalid_argument("choose_ground: inputs must be traceless deviation diagonals");
  }

  std::optional<std::size_t> best;
  double best_q2 = 0.0;
  for (std::size_t g = 0; g < kTwoSpinDim; ++g) {
    LabelingPlan plan;
    plan.ground = g;
    double q2 = 0.0;
    try {
      const EffectivePureResult r = label(diags, plan);
      double wsum = 0.0;
      for (double w : r.weights)
        wsum += w;
      if (!(wsum > 0.0))
        continue;
      q2 = r.normalized_q2();
    } catch (const SingularSystemError &) {
      continue;
    }
    const double tie = 1e-12 * std::max(std::abs(q2), std::abs(best_q2));
    if (!best || std::abs(q2) > std::abs(best_q2) + tie ||
        (std::abs(std::abs(q2) - std::abs(best_q2)) <= tie && q2 > 0.0 && best_q2 < 0.0)) {
      best = g;
      best_q2 = q2;
    }
  }
  if (!best || best_q2 == 0.0 || std::abs(best_q2) <= 1e-12 * scale)
    throw DegenerateInputError("choose_ground: every candidate ground yields q2 = 0");
  return *best;
}

/// Ratio of pure-part amplitudes with both weight sets rescaled to sum to
/// the experiment count.
inline double enhancement_factor(const EffectivePureResult &enh, const EffectivePureResult &thermal_ref) {
  const double ref = thermal_ref.normalized_q2();
  if (ref == 0.0)
    throw std::invalid_argument("enhancement_factor: thermal reference has q2 = 0");
  return std::abs(enh.normalized_q2()) / std::abs(ref);
}

} // namespace xenqc

#endif // XENQC_LABELING_HPP
