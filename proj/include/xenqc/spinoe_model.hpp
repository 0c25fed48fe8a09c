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
 * @file    spinoe_model.hpp
 * @brief   Phenomenological Xe-induced enhancement trajectory and the
 *          experiment schedules that sample it.
 *
 * The quasi-equilibrium enhancement of each nucleus relaxes toward the
 * thermal value 1 on the Xe T1 timescale:
 *
 *   eps(t) = 1 + (eps0 - 1) exp(-t / T1_Xe)
 *
 * After every experiment the solute is assumed back at quasi-equilibrium
 * once the scheduled recovery gap has elapsed, so only eps(t) is needed to
 * know the state at any scheduled time. Experiments do not deplete Xe.
 */

#ifndef XENQC_SPINOE_MODEL_HPP
#define XENQC_SPINOE_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "quantum_core.hpp"
#include "spin_system.hpp"

namespace xenqc {

struct SpinoeParams {
  double eps0_h = -11.0;
  double eps0_c = 18.0;
  double t1_xe_s = 900.0;
  double t1_ch_s = 24.0; // recovery of 2 min is 5 T1
  double jitter = 0.05;  // relative std-dev of eps between fresh samples
  std::uint64_t seed = 42;

  void validate() const {
    if (!(t1_xe_s > 0.0))
      throw std::invalid_argument("SpinoeParams: t1_xe_s must be > 0");
    if (!(t1_ch_s > 0.0))
      throw std::invalid_argument("SpinoeParams: t1_ch_s must be > 0");
    if (!(jitter >= 0.0))
      throw std::invalid_argument("SpinoeParams: jitter must be >= 0");
  }

  double default_recovery_s() const { return 5.0 * t1_ch_s; }

  /// Same decay constants, thermal enhancement, no jitter.
  SpinoeParams thermal() const {
    SpinoeParams p = *this;
    p.eps0_h = 1.0;
    p.eps0_c = 1.0;
    p.jitter = 0.0;
    return p;
  }
};

struct Enhancement {
  double h = 1.0;
  double c = 1.0;
  friend bool operator==(const Enhancement &, const Enhancement &) = default;
};

inline Enhancement enhancement_at(const SpinoeParams &p, double t_s) {
  p.validate();
  if (!(t_s >= 0.0))
    throw std::invalid_argument("enhancement_at: t must be >= 0");
  const double decay = std::exp(-t_s / p.t1_xe_s);
  return {1.0 + (p.eps0_h - 1.0) * decay, 1.0 + (p.eps0_c - 1.0) * decay};
}

/// Enhancement actually realized by one sample. Fresh samples get an
/// independent multiplicative Gaussian draw per nucleus, seeded from
/// (seed, sample_index) so the result is a pure function of its inputs.
inline Enhancement sampled_enhancement(const SpinoeParams &p, double t_s, bool fresh_sample,
                                       std::uint64_t sample_index = 0) {
  Enhancement e = enhancement_at(p, t_s);
  if (fresh_sample && p.jitter > 0.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(sample_index),
                      static_cast<std::uint32_t>(sample_index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> draw(0.0, p.jitter);
    const double jh = draw(rng);
    const double jc = draw(rng);
    e.h *= 1.0 + jh;
    e.c *= 1.0 + jc;
  }
  return e;
}

inline DensityMatrix sample_initial_state(const SpinoeParams &p, const SpinSystemConfig &cfg, double t_s,
                                          bool fresh_sample, std::uint64_t sample_index = 0) {
  const Enhancement e = sampled_enhancement(p, t_s, fresh_sample, sample_index);
  return enhanced_state(cfg, e.h, e.c);
}

//============================================================================
// Scheduling
//============================================================================

enum class SampleMode { MultiSample, SingleSample };

inline const char *to_string(SampleMode m) { return m == SampleMode::MultiSample ? "multi" : "single"; }

/// Start times of the permutation experiments. Each experiment is preceded
/// by a probe `probe_lead` seconds earlier. In multi-sample mode every time
/// is measured on the clock of its own freshly prepared sample.
struct ExperimentSchedule {
  SampleMode mode = SampleMode::SingleSample;
  std::vector<double> times;
  double probe_lead = 25.0;
  std::vector<bool> fresh;
  std::vector<std::uint64_t> sample_index;

  std::size_t size() const { return times.size(); }
  double probe_time(std::size_t i) const { return times.at(i) - probe_lead; }
};

inline ExperimentSchedule make_schedule(const SpinoeParams &p, SampleMode mode, std::size_t k, double r1_s,
                                        double recovery_s) {
  p.validate();
  if (k < 1)
    throw std::invalid_argument("make_schedule: need at least one experiment");
  if (!(r1_s > 0.0))
    throw std::invalid_argument("make_schedule: r1 must be > 0");
  ExperimentSchedule s;
  s.mode = mode;
  s.probe_lead = r1_s;
  if (mode == SampleMode::MultiSample) {
    for (std::size_t i = 0; i < k; ++i) {
      s.times.push_back(r1_s);
      s.fresh.push_back(true);
      s.sample_index.push_back(i);
    }
  } else {
    if (!(recovery_s > 0.0))
      throw std::invalid_argument("make_schedule: recovery must be > 0 in single-sample mode");
    for (std::size_t i = 0; i < k; ++i) {
      s.times.push_back(r1_s + static_cast<double>(i) * recovery_s);
      s.fresh.push_back(false);
      s.sample_index.push_back(0);
    }
  }
  return s;
}

} // namespace xenqc

#endif // XENQC_SPINOE_MODEL_HPP
