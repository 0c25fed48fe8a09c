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
 * @file    readout.hpp
 * @brief   Simulated detection: pulses, FID synthesis, spectra, doublet
 *          integration and reconstruction of the deviation diagonal.
 *
 * Each channel sees two single-quantum lines. For the H channel the line
 * with the C partner in |c> has amplitude 2 rho(|1c>,|0c>) and precesses at
 * +J/2 for c = 0 and -J/2 for c = 1; the C channel is the mirror image.
 * A positive line therefore means the observed spin has more population
 * in |0> than |1> for that partner state.
 *
 * Writing the deviation diagonal as
 *
 *   d = a (Z (x) I) + b (I (x) Z) + g (Z (x) Z)
 *
 * a y pulse of angle t on both spins gives line integrals
 *
 *   H_c = K_H 2 sin(t) (a + (-1)^c g cos(t))
 *   C_h = K_C 2 sin(t) (b + (-1)^h g cos(t))
 *
 * and a pulse on the observed spin alone drops the cos(t) factor. The
 * reconstruction inverts these relations exactly.
 */

#ifndef XENQC_READOUT_HPP
#define XENQC_READOUT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/fft.hpp"
#include "quantum_core.hpp"
#include "spin_system.hpp"

namespace xenqc {

struct ReadoutConfig {
  std::size_t n_points = 4096;
  double dwell_s = 1e-3;
  double noise_amp = 0.0; // std-dev of additive complex Gaussian noise per FID sample
  std::uint64_t noise_seed = 7;

  void validate() const {
    if (n_points < 256)
      throw std::invalid_argument("ReadoutConfig: n_points must be >= 256");
    if (!(dwell_s > 0.0))
      throw std::invalid_argument("ReadoutConfig: dwell_s must be > 0");
    if (!(noise_amp >= 0.0))
      throw std::invalid_argument("ReadoutConfig: noise_amp must be >= 0");
  }
};

inline constexpr double kMaxProbeTipDeg = 25.0;
inline constexpr double kReconstructionResidualTol = 0.05;
// Deviation entries below this (in polarization units) read as zero.
inline constexpr double kDetectionFloor = 1e-12;

enum class PulseMode {
  Simultaneous, // one pulse on both spins
  Selective     // pulse on the observed spin only
};

struct Fid {
  Nucleus channel = Nucleus::H;
  double dt = 1e-3;
  std::vector<complex_t> samples;
};

struct Spectrum {
  Nucleus channel = Nucleus::H;
  std::vector<double> freqs;
  std::vector<complex_t> values;

  double df() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }

  Spectrum &operator+=(const Spectrum &o) {
    if (o.values.size() != values.size() || o.channel != channel)
      throw std::invalid_argument("Spectrum: cannot add spectra of different shape or channel");
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] += o.values[i];
    return *this;
  }

  Spectrum scaled(double s) const {
    Spectrum out = *this;
    for (auto &v : out.values)
      v *= s;
    return out;
  }
};

struct PeakLine {
  double freq_hz = 0.0;
  double integral = 0.0;      // real (absorption) part
  double integral_imag = 0.0; // dispersion part, ~0 for exact phasing
  int partner_state = 0;
};

struct PeakTable {
  Nucleus channel = Nucleus::H;
  std::array<PeakLine, 2> lines{}; // [0]: +J/2, partner |0>; [1]: -J/2, partner |1>

  double integral_for_partner(int partner) const {
    for (const auto &l : lines)
      if (l.partner_state == partner)
        return l.integral;
    throw std::out_of_range("PeakTable: no line for partner state");
  }

  double max_abs_integral() const {
    return std::max(std::abs(lines[0].integral), std::abs(lines[1].integral));
  }
};

//============================================================================
// FID and spectrum
//============================================================================

/// Complex amplitudes and frequencies of the two lines seen on `channel`,
/// indexed by partner state.
struct LineSet {
  std::array<complex_t, 2> amplitude{};
  std::array<double, 2> freq_hz{};
};

inline LineSet single_quantum_lines(const DensityMatrix &rho, const SpinSystemConfig &cfg, Nucleus channel) {
  if (rho.dim() != kTwoSpinDim)
    throw std::invalid_argument("single_quantum_lines: two-spin state expected");
  const auto e = j_energies(cfg);
  LineSet ls;
  for (int partner = 0; partner < 2; ++partner) {
    const std::size_t up = channel == Nucleus::H ? basis_index(0, partner) : basis_index(partner, 0);
    const std::size_t down = channel == Nucleus::H ? basis_index(1, partner) : basis_index(partner, 1);
    ls.amplitude[partner] = 2.0 * rho(down, up);
    ls.freq_hz[partner] = (e[up] - e[down]) / (2.0 * std::numbers::pi);
  }
  return ls;
}

/// s(t_k) = sum_lines A exp(2 pi i f t_k) exp(-t_k / T2), noiseless.
inline Fid synthesize_fid(const DensityMatrix &rho_after_pulse, const SpinSystemConfig &cfg, Nucleus channel,
                          std::size_t n_samples, double dt) {
  cfg.validate();
  if (!(dt > 0.0))
    throw std::invalid_argument("synthesize_fid: dt must be > 0");
  const LineSet ls = single_quantum_lines(rho_after_pulse, cfg, channel);
  Fid fid;
  fid.channel = channel;
  fid.dt = dt;
  fid.samples.assign(n_samples, complex_t{});
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double decay = std::exp(-t / cfg.t2_s);
    complex_t s{};
    for (int line = 0; line < 2; ++line)
      if (ls.amplitude[line] != complex_t{})
        s += ls.amplitude[line] * std::polar(decay, 2.0 * std::numbers::pi * ls.freq_hz[line] * t);
    fid.samples[k] = s;
  }
  return fid;
}

inline void add_noise(Fid &fid, double amplitude, std::uint64_t seed, std::uint64_t stream) {
  if (amplitude <= 0.0)
    return;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(fid.channel)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> draw(0.0, amplitude);
  for (auto &s : fid.samples) {
    const double re = draw(rng);
    const double im = draw(rng);
    s += complex_t(re, im);
  }
}

/// Discrete transform scaled by dt with the first sample halved, ordered
/// from -SW/2 upward. A positive-amplitude line becomes a positive real
/// peak and the sum of Re(S) df over all bins equals Re(s_0) / 2.
inline Spectrum spectrum(const Fid &fid) {
  const std::size_t n = fid.samples.size();
  Spectrum sp;
  sp.channel = fid.channel;
  if (n == 0)
    return sp;
  std::vector<complex_t> x = fid.samples;
  x[0] *= 0.5;
  const std::vector<complex_t> big = detail::dft(std::move(x));
  const double df = 1.0 / (static_cast<double>(n) * fid.dt);
  const std::size_t half = n / 2;
  sp.freqs.resize(n);
  sp.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (k + n - half) % n;
    sp.freqs[k] = (static_cast<double>(k) - static_cast<double>(half)) * df;
    sp.values[k] = big[src] * fid.dt;
  }
  return sp;
}

/// Integrates Re and Im over windows of width J/2 centred on +-J/2.
inline PeakTable integrate_peaks(const Spectrum &spec, const SpinSystemConfig &cfg) {
  cfg.validate();
  const double j = cfg.j_coupling_hz;
  const double df = spec.df();
  if (spec.freqs.size() < 2 || !(df > 0.0))
    throw std::invalid_argument("integrate_peaks: empty spectrum");
  const double half_width = 0.25 * j;
  if (df > half_width)
    throw std::invalid_argument("integrate_peaks: peak windows overlap (bin " + std::to_string(df) +
                                " Hz is coarser than J/4)");
  if (spec.freqs.front() > -0.75 * j || spec.freqs.back() < 0.75 * j)
    throw std::invalid_argument("integrate_peaks: spectral width does not cover the +-J/2 windows");

  PeakTable pt;
  pt.channel = spec.channel;
  const std::array<double, 2> centres = {0.5 * j, -0.5 * j};
  for (int line = 0; line < 2; ++line) {
    PeakLine pl;
    pl.freq_hz = centres[line];
    pl.partner_state = line;
    for (std::size_t k = 0; k < spec.freqs.size(); ++k)
      if (std::abs(spec.freqs[k] - centres[line]) <= half_width) {
        pl.integral += spec.values[k].real() * df;
        pl.integral_imag += spec.values[k].imag() * df;
      }
    pt.lines[line] = pl;
  }
  return pt;
}

//============================================================================
// Probing and readout
//============================================================================

struct ChannelSpectra {
  Spectrum h;
  Spectrum c;
  double tip_deg = 0.0;
  PulseMode mode = PulseMode::Simultaneous;
};

inline Spectrum detect(const DensityMatrix &rho_after_pulse, const SpinSystemConfig &cfg, const ReadoutConfig &ro,
                       Nucleus channel, std::uint64_t noise_stream) {
  Fid fid = synthesize_fid(rho_after_pulse, cfg, channel, ro.n_points, ro.dwell_s);
  add_noise(fid, ro.noise_amp, ro.noise_seed, noise_stream);
  return spectrum(fid);
}

/// Small simultaneous y pulse on both spins, both channels recorded.
inline ChannelSpectra probe(const DensityMatrix &rho, const SpinSystemConfig &cfg, const ReadoutConfig &ro,
                            double tip_deg, std::uint64_t noise_stream = 0) {
  ro.validate();
  if (!(tip_deg > 0.0 && tip_deg <= kMaxProbeTipDeg))
    throw std::invalid_argument("probe: tip angle must lie in (0, 25] degrees, got " + std::to_string(tip_deg));
  const DensityMatrix after = apply_unitary(rho, pulse_unitary(cfg, {PulseTarget::Both, tip_deg, 90.0}));
  ChannelSpectra out;
  out.tip_deg = tip_deg;
  out.mode = PulseMode::Simultaneous;
  out.h = detect(after, cfg, ro, Nucleus::H, 2 * noise_stream);
  out.c = detect(after, cfg, ro, Nucleus::C, 2 * noise_stream + 1);
  return out;
}

/// Separate y pulses on each spin (one acquisition per channel). A 90 deg
/// tip converts population differences into lines one-to-one.
inline ChannelSpectra readout_selective(const DensityMatrix &rho, const SpinSystemConfig &cfg,
                                        const ReadoutConfig &ro, double tip_deg = 90.0,
                                        std::uint64_t noise_stream = 0) {
  ro.validate();
  ChannelSpectra out;
  out.tip_deg = tip_deg;
  out.mode = PulseMode::Selective;
  const DensityMatrix after_h = apply_unitary(rho, pulse_unitary(cfg, {PulseTarget::H, tip_deg, 90.0}));
  const DensityMatrix after_c = apply_unitary(rho, pulse_unitary(cfg, {PulseTarget::C, tip_deg, 90.0}));
  out.h = detect(after_h, cfg, ro, Nucleus::H, 2 * noise_stream);
  out.c = detect(after_c, cfg, ro, Nucleus::C, 2 * noise_stream + 1);
  return out;
}

//============================================================================
// Reconstruction
//============================================================================

/// Product-operator coefficients of a traceless 4-entry diagonal.
struct ZCoefficients {
  double a = 0.0; // Z (x) I
  double b = 0.0; // I (x) Z
  double g = 0.0; // Z (x) Z

  static ZCoefficients of(const Populations &d) {
    if (d.size() != kTwoSpinDim)
      throw std::invalid_argument("ZCoefficients: expected 4 entries");
    return {(d[0] + d[1] - d[2] - d[3]) / 4.0, (d[0] - d[1] + d[2] - d[3]) / 4.0,
            (d[0] - d[1] - d[2] + d[3]) / 4.0};
  }

  Populations diagonal() const { return {a + b + g, a - b - g, -a + b - g, -a - b + g}; }
};

/// Per-channel receiver scale K fixed against a run on a known state.
struct Calibration {
  double scale_h = 1.0;
  double scale_c = 1.0;
};

namespace detail {

inline double partner_factor(double tip_deg, PulseMode mode) {
  return mode == PulseMode::Simultaneous ? std::cos(deg_to_rad(tip_deg)) : 1.0;
}

/// Expected line integrals (H0, H1, C0, C1) for unit receiver scale.
inline std::array<double, 4> model_integrals(const ZCoefficients &z, double tip_deg, PulseMode mode) {
  const double s2 = 2.0 * std::sin(deg_to_rad(tip_deg));
  const double cg = partner_factor(tip_deg, mode) * z.g;
  return {s2 * (z.a + cg), s2 * (z.a - cg), s2 * (z.b + cg), s2 * (z.b - cg)};
}

} // namespace detail

inline Calibration calibrate(const PeakTable &peaks_h, const PeakTable &peaks_c, double tip_deg,
                             const Populations &known_diagonal, PulseMode mode = PulseMode::Simultaneous) {
  const ZCoefficients z = ZCoefficients::of(known_diagonal);
  const auto m = detail::model_integrals(z, tip_deg, mode);
  const double model_h = m[0] + m[1];
  const double model_c = m[2] + m[3];
  if (std::abs(model_h) < 1e-300 || std::abs(model_c) < 1e-300)
    throw std::invalid_argument("calibrate: reference state has no net polarization on one spin");
  Calibration cal;
  cal.scale_h = (peaks_h.lines[0].integral + peaks_h.lines[1].integral) / model_h;
  cal.scale_c = (peaks_c.lines[0].integral + peaks_c.lines[1].integral) / model_c;
  return cal;
}

struct Reconstruction {
  Populations diagonal;
  double residual = 0.0; // max |model - observed| / max |observed|
  bool consistent = true;
};

/// Least-squares inversion of the four line integrals for the traceless
/// diagonal (three unknowns).
inline Reconstruction reconstruct_diagonal(const PeakTable &peaks_h, const PeakTable &peaks_c, double tip_deg,
                                           const Calibration &cal, PulseMode mode = PulseMode::Simultaneous) {
  if (peaks_h.channel != Nucleus::H || peaks_c.channel != Nucleus::C)
    throw std::invalid_argument("reconstruct_diagonal: peak tables must be (H, C)");
  if (cal.scale_h == 0.0 || cal.scale_c == 0.0)
    throw std::invalid_argument("reconstruct_diagonal: zero calibration scale");
  const std::array<double, 4> obs = {peaks_h.integral_for_partner(0), peaks_h.integral_for_partner(1),
                                     peaks_c.integral_for_partner(0), peaks_c.integral_for_partner(1)};
  const double h0 = obs[0] / cal.scale_h, h1 = obs[1] / cal.scale_h;
  const double c0 = obs[2] / cal.scale_c, c1 = obs[3] / cal.scale_c;
  const double s2 = 2.0 * std::sin(deg_to_rad(tip_deg));
  const double pf = detail::partner_factor(tip_deg, mode);
  if (s2 == 0.0 || pf == 0.0)
    throw std::invalid_argument("reconstruct_diagonal: tip angle leaves the diagonal unobservable");

  Reconstruction r;
  if (std::max({std::abs(h0), std::abs(h1), std::abs(c0), std::abs(c1)}) < kDetectionFloor * s2) {
    r.diagonal.assign(kTwoSpinDim, 0.0);
    return r;
  }

  ZCoefficients z;
  z.a = (h0 + h1) / (2.0 * s2);
  z.b = (c0 + c1) / (2.0 * s2);
  z.g = (h0 - h1 + c0 - c1) / (4.0 * s2 * pf);

  r.diagonal = z.diagonal();
  const auto m = detail::model_integrals(z, tip_deg, mode);
  const std::array<double, 4> scale = {cal.scale_h, cal.scale_h, cal.scale_c, cal.scale_c};
  double worst = 0.0, biggest = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    worst = std::max(worst, std::abs(m[i] * scale[i] - obs[i]));
    biggest = std::max(biggest, std::abs(obs[i]));
  }
  r.residual = biggest > 0.0 ? worst / biggest : 0.0;
  r.consistent = r.residual <= kReconstructionResidualTol;
  return r;
}

} // namespace xenqc

#endif // XENQC_READOUT_HPP
