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
 * @file    experiments.hpp
 * @brief   End-to-end runs: effective pure state preparation and the
 *          two-qubit Grover search on polarization-enhanced samples.
 *
 * Every permutation experiment is preceded by a small-tip probe r1 seconds
 * earlier. The probed diagonals fix the labeling weights; the permutation
 * (and, for Grover, the algorithm) acts on the state present at the
 * experiment time. The ground state is chosen from the first probe of a
 * series, since the permutation of the first experiment has to be known
 * before the later probes exist.
 */

#ifndef XENQC_EXPERIMENTS_HPP
#define XENQC_EXPERIMENTS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "labeling.hpp"
#include "quantum_core.hpp"
#include "readout.hpp"
#include "spin_system.hpp"
#include "spinoe_model.hpp"

namespace xenqc {

struct PipelineConfig {
  SpinSystemConfig spin;
  SpinoeParams spinoe;
  ReadoutConfig readout;
  double r1_s = 25.0;
  double recovery_s = 120.0;
  double probe_tip_deg = 15.0;
  std::vector<Perm> perm_order = {Perm::Identity, Perm::Cycle, Perm::Cycle2};

  void validate() const {
    spin.validate();
    spinoe.validate();
    readout.validate();
    if (!(r1_s > 0.0))
      throw std::invalid_argument("PipelineConfig: r1_s must be > 0");
    if (!(recovery_s > 0.0))
      throw std::invalid_argument("PipelineConfig: recovery_s must be > 0");
    if (!(probe_tip_deg > 0.0 && probe_tip_deg <= kMaxProbeTipDeg))
      throw std::invalid_argument("PipelineConfig: probe tip must lie in (0, 25] degrees");
    LabelingPlan plan;
    plan.perms = perm_order;
    plan.validate();
  }

  PipelineConfig thermal() const {
    PipelineConfig c = *this;
    c.spinoe = spinoe.thermal();
    return c;
  }
};

class ReconstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentRecord {
  std::size_t slot = 0;          // position in the sample's time line
  std::uint64_t sample_index = 0;
  double probe_time = 0.0;       // seconds on the sample clock
  double schedule_time = 0.0;    // start of the permutation experiment
  Enhancement eps_probe;         // model truth at the probe
  Enhancement eps_experiment;    // model truth at the experiment
  Populations probed_diagonal;
  double probe_residual = 0.0;
  Perm perm = Perm::Identity;
  Spectrum readout_h;
  Spectrum readout_c;
  double weight_used = 0.0;      // rescaled so the series' weights sum to 3
};

//============================================================================
// Grover pieces
//============================================================================

struct GroverCase {
  std::size_t target = 0;

  static GroverCase parse(const std::string &bits) {
    if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1'))
      throw std::invalid_argument("GroverCase: target must be one of 00, 01, 10, 11 (got \"" + bits + "\")");
    return {basis_index(bits[0] - '0', bits[1] - '0')};
  }

  std::string label() const {
    return std::string{static_cast<char>('0' + h_bit(target)), static_cast<char>('0' + c_bit(target))};
  }

  friend bool operator==(const GroverCase &, const GroverCase &) = default;
};

inline std::array<GroverCase, 4> all_grover_cases() { return {GroverCase{0}, GroverCase{1}, GroverCase{2}, GroverCase{3}}; }

/// Phase oracle: -1 on the marked state.
inline Unitary grover_oracle(const GroverCase &gc) {
  check_ground(gc.target);
  CMatrix m = CMatrix::identity(kTwoSpinDim);
  m(gc.target, gc.target) = -1.0;
  return Unitary(std::move(m));
}

/// (H(x)H)(2|00><00| - I)(H(x)H).
inline Unitary grover_diffusion() {
  CMatrix reflect = CMatrix::identity(kTwoSpinDim) * complex_t(-1.0);
  reflect(0, 0) = 1.0;
  const Unitary hh = gates::hadamard_both();
  return hh * Unitary(std::move(reflect)) * hh;
}

/// One Grover iteration on the uniform superposition prepared from |00>.
inline Unitary grover_circuit(const GroverCase &gc) {
  return grover_diffusion() * grover_oracle(gc) * gates::hadamard_both();
}

struct DecodeResult {
  std::optional<GroverCase> decoded;
  bool ambiguous = false;
  std::string reason;
};

/// Reads the answer from the line sign pattern: the dominant H line names
/// the C bit through its partner state and the H bit through its sign
/// (positive = |0>); the C channel mirrors it. Both channels must agree.
inline DecodeResult decode_grover(const PeakTable &peaks_h, const PeakTable &peaks_c, double noise_floor = 0.0) {
  DecodeResult out;
  auto dominant = [&](const PeakTable &pt, int &partner, int &bit) -> bool {
    const double i0 = pt.integral_for_partner(0), i1 = pt.integral_for_partner(1);
    partner = std::abs(i0) >= std::abs(i1) ? 0 : 1;
    const double big = partner == 0 ? i0 : i1;
    const double small = partner == 0 ? i1 : i0;
    bit = big > 0.0 ? 0 : 1;
    return std::abs(big) > noise_floor && std::abs(big) > 2.0 * std::abs(small);
  };
  int partner_h = 0, bit_h = 0, partner_c = 0, bit_c = 0;
  const bool ok_h = dominant(peaks_h, partner_h, bit_h);
  const bool ok_c = dominant(peaks_c, partner_c, bit_c);
  if (!ok_h || !ok_c) {
    out.ambiguous = true;
    out.reason = "no dominant line above the noise floor";
    return out;
  }
  // H channel: partner = C bit, sign = H bit. C channel: partner = H bit, sign = C bit.
  if (partner_h != bit_c || partner_c != bit_h) {
    out.ambiguous = true;
    out.reason = "H and C channels disagree";
    return out;
  }
  out.decoded = GroverCase{basis_index(bit_h, bit_c)};
  return out;
}

//============================================================================
// Labeled series
//============================================================================

struct Slot {
  double probe_time = 0.0;
  double experiment_time = 0.0;
  bool fresh = false;
  std::uint64_t sample_index = 0;
};

inline std::vector<Slot> slots_from(const ExperimentSchedule &s) {
  std::vector<Slot> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    out.push_back({s.probe_time(i), s.times[i], s.fresh[i], s.sample_index[i]});
  return out;
}

enum class Payload { EffectivePure, Grover };

struct SeriesOutcome {
  std::size_t ground = 0;
  std::vector<ExperimentRecord> records;
  EffectivePureResult labeled; // from the probed diagonals
  Spectrum sum_h;              // weighted readout sums, weights summing to 3
  Spectrum sum_c;
};

namespace detail {

inline constexpr std::uint64_t kCalibrationStream = 0xCA11B;

/// Probe calibration against the thermal state of the same spin system.
inline Calibration thermal_probe_calibration(const PipelineConfig &cfg) {
  const DensityMatrix ref = thermal_state(cfg.spin);
  const ChannelSpectra sp = probe(ref, cfg.spin, cfg.readout, cfg.probe_tip_deg, kCalibrationStream);
  return calibrate(integrate_peaks(sp.h, cfg.spin), integrate_peaks(sp.c, cfg.spin), cfg.probe_tip_deg,
                   deviation_diagonal(ref), PulseMode::Simultaneous);
}

inline SeriesOutcome run_series(const PipelineConfig &cfg, const std::vector<Slot> &slots, Payload payload,
                                const std::optional<GroverCase> &gcase, const Calibration &cal,
                                std::uint64_t stream_base) {
  if (slots.size() != cfg.perm_order.size())
    throw std::invalid_argument("run_series: slot count must match the permutation count");
  SeriesOutcome out;
  std::vector<Populations> diags;

  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot &sl = slots[i];
    ExperimentRecord rec;
    rec.slot = i;
    rec.sample_index = sl.sample_index;
    rec.probe_time = sl.probe_time;
    rec.schedule_time = sl.experiment_time;
    rec.perm = cfg.perm_order[i];
    rec.eps_probe = sampled_enhancement(cfg.spinoe, sl.probe_time, sl.fresh, sl.sample_index);
    rec.eps_experiment = sampled_enhancement(cfg.spinoe, sl.experiment_time, sl.fresh, sl.sample_index);

    const std::uint64_t stream = stream_base + 2 * i;
    const DensityMatrix at_probe = enhanced_state(cfg.spin, rec.eps_probe.h, rec.eps_probe.c);
    const ChannelSpectra ps = probe(at_probe, cfg.spin, cfg.readout, cfg.probe_tip_deg, stream);
    const Reconstruction rc = reconstruct_diagonal(integrate_peaks(ps.h, cfg.spin), integrate_peaks(ps.c, cfg.spin),
                                                   cfg.probe_tip_deg, cal, PulseMode::Simultaneous);
    if (!rc.consistent)
      throw ReconstructionError("probe reconstruction residual " + std::to_string(rc.residual) +
                                " exceeds threshold at slot " + std::to_string(i));
    rec.probed_diagonal = rc.diagonal;
    rec.probe_residual = rc.residual;
    diags.push_back(rc.diagonal);

    if (i == 0)
      out.ground = choose_ground({rc.diagonal, rc.diagonal, rc.diagonal});

    DensityMatrix state = enhanced_state(cfg.spin, rec.eps_experiment.h, rec.eps_experiment.c);
    state = apply_unitary(state, permutation_pulse_sequence(rec.perm, out.ground));
    if (payload == Payload::Grover) {
      state = apply_unitary(state, gates::relabel_to_zero(out.ground));
      state = apply_unitary(state, grover_circuit(*gcase));
      const ChannelSpectra rs = readout_selective(state, cfg.spin, cfg.readout, 90.0, stream + 1);
      rec.readout_h = rs.h;
      rec.readout_c = rs.c;
    } else {
      const ChannelSpectra rs = probe(state, cfg.spin, cfg.readout, cfg.probe_tip_deg, stream + 1);
      rec.readout_h = rs.h;
      rec.readout_c = rs.c;
    }
    out.records.push_back(std::move(rec));
  }

  LabelingPlan plan;
  plan.ground = out.ground;
  plan.perms = cfg.perm_order;
  out.labeled = label(diags, plan);
  const double norm = out.labeled.normalization_factor();
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto &rec = out.records[i];
    rec.weight_used = out.labeled.weights[i] * norm;
    const Spectrum wh = rec.readout_h.scaled(rec.weight_used);
    const Spectrum wc = rec.readout_c.scaled(rec.weight_used);
    if (i == 0) {
      out.sum_h = wh;
      out.sum_c = wc;
    } else {
      out.sum_h += wh;
      out.sum_c += wc;
    }
  }
  return out;
}

} // namespace detail

//============================================================================
// Effective pure state
//============================================================================

struct EffectivePureRun {
  SampleMode mode = SampleMode::SingleSample;
  ExperimentSchedule schedule;
  Calibration calibration;
  std::vector<ExperimentRecord> records;
  EffectivePureResult result;         // from the probed diagonals
  EffectivePureResult thermal_result; // same pipeline on thermal samples
  double enhancement = 0.0;
  Populations realized_diagonal;      // weighted readout of the permuted states
  double realized_q2 = 0.0;
  double realized_spread = 0.0;       // max - min of realized non-ground populations
};

inline EffectivePureRun run_effective_pure_pipeline(const PipelineConfig &cfg, SampleMode mode) {
  cfg.validate();
  EffectivePureRun run;
  run.mode = mode;
  run.schedule = make_schedule(cfg.spinoe, mode, cfg.perm_order.size(), cfg.r1_s, cfg.recovery_s);
  run.calibration = detail::thermal_probe_calibration(cfg);
  const auto slots = slots_from(run.schedule);

  const SeriesOutcome enh = detail::run_series(cfg, slots, Payload::EffectivePure, std::nullopt, run.calibration, 0);
  const SeriesOutcome thr =
      detail::run_series(cfg.thermal(), slots, Payload::EffectivePure, std::nullopt, run.calibration, 1000);

  run.records = enh.records;
  run.result = enh.labeled;
  run.thermal_result = thr.labeled;
  run.enhancement = enhancement_factor(run.result, run.thermal_result);

  const Reconstruction realized =
      reconstruct_diagonal(integrate_peaks(enh.sum_h, cfg.spin), integrate_peaks(enh.sum_c, cfg.spin),
                           cfg.probe_tip_deg, run.calibration, PulseMode::Simultaneous);
  run.realized_diagonal = realized.diagonal;
  const auto ng = non_ground_states(run.result.ground);
  double lo = realized.diagonal[ng[0]], hi = lo, mean = 0.0;
  for (std::size_t s : ng) {
    lo = std::min(lo, realized.diagonal[s]);
    hi = std::max(hi, realized.diagonal[s]);
    mean += realized.diagonal[s] / 3.0;
  }
  run.realized_spread = hi - lo;
  run.realized_q2 = realized.diagonal[run.result.ground] - mean;
  return run;
}

//============================================================================
// Grover
//============================================================================

struct GroverRun {
  GroverCase gcase;
  std::size_t ground = 0;
  std::vector<ExperimentRecord> records;
  EffectivePureResult labeled;
  Spectrum sum_h, sum_c;
  PeakTable peaks_h, peaks_c;
  PeakTable thermal_peaks_h, thermal_peaks_c;
  DecodeResult decode;
  double enhancement_h = 0.0;
  double enhancement_c = 0.0;
  double enhancement = 0.0; // mean of the two channels

  bool success() const { return decode.decoded && *decode.decoded == gcase; }
};

enum class SeriesOrder {
  CaseMajor,       // all three permutations of one case, then the next case
  PermutationMajor // first permutation for all four cases, then the second, ...
};

inline const char *to_string(SeriesOrder o) { return o == SeriesOrder::CaseMajor ? "case-major" : "permutation-major"; }

namespace detail {

inline double noise_floor(const PipelineConfig &cfg) {
  if (cfg.readout.noise_amp <= 0.0)
    return 0.0;
  // Std-dev of a window integral of one noisy acquisition, summed over three
  // experiments, with a factor 5 margin.
  const double n = static_cast<double>(cfg.readout.n_points);
  const double df = 1.0 / (n * cfg.readout.dwell_s);
  const double bins = 0.5 * cfg.spin.j_coupling_hz / df;
  const double per_bin = cfg.readout.noise_amp * cfg.readout.dwell_s * std::sqrt(n);
  return 5.0 * per_bin * std::sqrt(bins) * df * std::sqrt(3.0);
}

inline double line_ratio(const PeakTable &enh, const PeakTable &thr, int partner) {
  const double t = thr.integral_for_partner(partner);
  return t == 0.0 ? 0.0 : std::abs(enh.integral_for_partner(partner)) / std::abs(t);
}

inline GroverRun finish_grover(const PipelineConfig &cfg, const GroverCase &gc, SeriesOutcome enh,
                               const SeriesOutcome &thr) {
  GroverRun run;
  run.gcase = gc;
  run.ground = enh.ground;
  run.labeled = enh.labeled;
  run.records = std::move(enh.records);
  run.sum_h = std::move(enh.sum_h);
  run.sum_c = std::move(enh.sum_c);
  run.peaks_h = integrate_peaks(run.sum_h, cfg.spin);
  run.peaks_c = integrate_peaks(run.sum_c, cfg.spin);
  run.thermal_peaks_h = integrate_peaks(thr.sum_h, cfg.spin);
  run.thermal_peaks_c = integrate_peaks(thr.sum_c, cfg.spin);
  // A negative pure part inverts every line; its sign is known from the probes.
  if (run.labeled.q2 < 0.0) {
    PeakTable h = run.peaks_h, c = run.peaks_c;
    for (auto *pt : {&h, &c})
      for (auto &l : pt->lines) {
        l.integral = -l.integral;
        l.integral_imag = -l.integral_imag;
      }
    run.decode = decode_grover(h, c, noise_floor(cfg));
  } else {
    run.decode = decode_grover(run.peaks_h, run.peaks_c, noise_floor(cfg));
  }
  // Compare the lines that carry the answer.
  const std::size_t answer = run.decode.decoded ? run.decode.decoded->target : gc.target;
  run.enhancement_h = line_ratio(run.peaks_h, run.thermal_peaks_h, c_bit(answer));
  run.enhancement_c = line_ratio(run.peaks_c, run.thermal_peaks_c, h_bit(answer));
  run.enhancement = 0.5 * (run.enhancement_h + run.enhancement_c);
  return run;
}

} // namespace detail

/// One Grover case on its own sample(s), scheduled like the effective pure
/// state preparation.
inline GroverRun run_grover_pipeline(const PipelineConfig &cfg, const GroverCase &gc, SampleMode mode) {
  cfg.validate();
  const ExperimentSchedule sched = make_schedule(cfg.spinoe, mode, cfg.perm_order.size(), cfg.r1_s, cfg.recovery_s);
  const Calibration cal = detail::thermal_probe_calibration(cfg);
  const auto slots = slots_from(sched);
  const std::uint64_t base = 10000 * (gc.target + 1);
  SeriesOutcome enh = detail::run_series(cfg, slots, Payload::Grover, gc, cal, base);
  const SeriesOutcome thr = detail::run_series(cfg.thermal(), slots, Payload::Grover, gc, cal, base + 5000);
  return detail::finish_grover(cfg, gc, std::move(enh), thr);
}

/// All four cases on a single sample: twelve permutation experiments spaced
/// by the recovery time, in the requested order.
inline std::vector<GroverRun> run_grover_series(const PipelineConfig &cfg, SeriesOrder order) {
  cfg.validate();
  const Calibration cal = detail::thermal_probe_calibration(cfg);
  const std::size_t nperm = cfg.perm_order.size();
  const auto cases = all_grover_cases();
  std::vector<GroverRun> runs;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    std::vector<Slot> slots;
    for (std::size_t r = 0; r < nperm; ++r) {
      const std::size_t global = order == SeriesOrder::CaseMajor ? k * nperm + r : r * cases.size() + k;
      const double t = cfg.r1_s + static_cast<double>(global) * cfg.recovery_s;
      slots.push_back({t - cfg.r1_s, t, false, 0});
    }
    const std::uint64_t base = 10000 * (k + 1);
    SeriesOutcome enh = detail::run_series(cfg, slots, Payload::Grover, cases[k], cal, base);
    const SeriesOutcome thr = detail::run_series(cfg.thermal(), slots, Payload::Grover, cases[k], cal, base + 5000);
    runs.push_back(detail::finish_grover(cfg, cases[k], std::move(enh), thr));
  }
  return runs;
}

} // namespace xenqc

#endif // XENQC_EXPERIMENTS_HPP
