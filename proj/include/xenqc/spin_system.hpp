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
 * @file    spin_system.hpp
 * @brief   {1H, 13C} spin pair: initial states, RF pulses, J evolution,
 *          population permutations and the gate set built on them.
 *
 * Rotating frame with both chemical-shift offsets at zero; only the scalar
 * J coupling drives free evolution. Pulses are ideal and instantaneous.
 */

#ifndef XENQC_SPIN_SYSTEM_HPP
#define XENQC_SPIN_SYSTEM_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "quantum_core.hpp"

namespace xenqc {

inline constexpr std::size_t kTwoSpinDim = 4;

enum class Nucleus { H, C };

inline const char *to_string(Nucleus n) { return n == Nucleus::H ? "H" : "C"; }

/// Basis index of |h c>.
constexpr std::size_t basis_index(int h, int c) { return static_cast<std::size_t>(2 * h + c); }
constexpr int h_bit(std::size_t index) { return static_cast<int>(index >> 1) & 1; }
constexpr int c_bit(std::size_t index) { return static_cast<int>(index) & 1; }

struct SpinSystemConfig {
  double gamma_ratio = 4.0;       // gamma_H / gamma_C
  double j_coupling_hz = 215.0;   // J_CH; literature value for chloroform
  double t2_s = 0.5;              // transverse decay used for readout
  double polarization_unit = 1.0; // overall scale u of the thermal deviation

  void validate() const {
    if (!(gamma_ratio > 0.0))
      throw std::invalid_argument("SpinSystemConfig: gamma_ratio must be > 0");
    if (!(j_coupling_hz > 0.0))
      throw std::invalid_argument("SpinSystemConfig: j_coupling_hz must be > 0");
    if (!(t2_s > 0.0))
      throw std::invalid_argument("SpinSystemConfig: t2_s must be > 0");
  }
};

enum class PulseTarget { H, C, Both };

struct PulseSpec {
  PulseTarget target = PulseTarget::Both;
  double tip_deg = 90.0;
  double phase_deg = 0.0;

  void validate() const {
    if (!(tip_deg > 0.0 && tip_deg <= 180.0))
      throw std::invalid_argument("PulseSpec: tip angle must lie in (0, 180] degrees, got " +
                                  std::to_string(tip_deg));
  }
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

//============================================================================
// Initial states
//============================================================================

/// rho = I/4 + (u/2) (eps_H * gr * Z_H + eps_C * Z_C), with Z = diag(1, -1)
/// on the respective spin. Off-diagonal elements are exactly zero.
inline DensityMatrix enhanced_state(const SpinSystemConfig &cfg, double eps_h, double eps_c) {
  cfg.validate();
  const double h = eps_h * cfg.gamma_ratio;
  const double c = eps_c;
  const double half_u = 0.5 * cfg.polarization_unit;
  const std::array<double, 4> diag = {
      0.25 + half_u * (h + c),
      0.25 + half_u * (h - c),
      0.25 + half_u * (-h + c),
      0.25 + half_u * (-h - c),
  };
  return DensityMatrix::from_diagonal(diag);
}

inline DensityMatrix thermal_state(const SpinSystemConfig &cfg) { return enhanced_state(cfg, 1.0, 1.0); }

//============================================================================
// Single-spin operators and embedding
//============================================================================

namespace ops {

inline CMatrix identity2() { return CMatrix::identity(2); }

inline CMatrix sigma_x() {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline CMatrix sigma_y() {
  CMatrix m(2);
  m(0, 1) = complex_t(0.0, -1.0);
  m(1, 0) = complex_t(0.0, 1.0);
  return m;
}

inline CMatrix sigma_z() {
  CMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline CMatrix hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  CMatrix m(2);
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}

/// exp(-i theta/2 (cos(phi) X + sin(phi) Y)).
inline CMatrix rotation(double theta_rad, double phi_rad) {
  const double c = std::cos(0.5 * theta_rad);
  const double s = std::sin(0.5 * theta_rad);
  const complex_t minus_i(0.0, -1.0);
  CMatrix m(2);
  m(0, 0) = c;
  m(1, 1) = c;
  // -i s (cos phi - i sin phi) = -i s e^{-i phi}
  m(0, 1) = minus_i * s * std::polar(1.0, -phi_rad);
  m(1, 0) = minus_i * s * std::polar(1.0, phi_rad);
  return m;
}

/// Places a 2x2 operator on one nucleus of the |H C> pair.
inline CMatrix on(Nucleus n, const CMatrix &op) {
  return n == Nucleus::H ? kron(op, identity2()) : kron(identity2(), op);
}

} // namespace ops

//============================================================================
// Pulses and free evolution
//============================================================================

inline Unitary pulse_unitary(const SpinSystemConfig &cfg, const PulseSpec &p) {
  cfg.validate();
  p.validate();
  const CMatrix r = ops::rotation(deg_to_rad(p.tip_deg), deg_to_rad(p.phase_deg));
  switch (p.target) {
  case PulseTarget::H:
    return Unitary(ops::on(Nucleus::H, r));
  case PulseTarget::C:
    return Unitary(ops::on(Nucleus::C, r));
  case PulseTarget::Both:
    return Unitary(kron(r, r));
  }
  throw std::invalid_argument("pulse_unitary: unknown target");
}

/// Eigenvalues of 2 pi J Iz(x)Iz in rad/s, Iz = Z/2.
inline std::array<double, 4> j_energies(const SpinSystemConfig &cfg) {
  const double w = 2.0 * std::numbers::pi * cfg.j_coupling_hz * 0.25;
  return {w, -w, -w, w};
}

/// exp(-i 2 pi J t Iz(x)Iz).
inline Unitary j_evolution(const SpinSystemConfig &cfg, double duration_s) {
  cfg.validate();
  if (!(duration_s >= 0.0))
    throw std::invalid_argument("j_evolution: duration must be >= 0");
  const auto e = j_energies(cfg);
  std::array<complex_t, 4> diag{};
  for (std::size_t i = 0; i < 4; ++i)
    diag[i] = std::polar(1.0, -e[i] * duration_s);
  return Unitary(CMatrix::diagonal(std::span<const complex_t>(diag)));
}

//============================================================================
// Gates
//============================================================================

namespace gates {

inline Unitary x(Nucleus n) { return Unitary(ops::on(n, ops::sigma_x())); }
inline Unitary hadamard(Nucleus n) { return Unitary(ops::on(n, ops::hadamard())); }
inline Unitary hadamard_both() { return Unitary(kron(ops::hadamard(), ops::hadamard())); }

/// Controlled-NOT between the two spins.
inline Unitary cnot(Nucleus control, Nucleus target) {
  if (control == target)
    throw std::invalid_argument("cnot: control and target must differ");
  CMatrix m(kTwoSpinDim);
  for (std::size_t s = 0; s < kTwoSpinDim; ++s) {
    int h = h_bit(s), c = c_bit(s);
    const int ctl = control == Nucleus::H ? h : c;
    if (ctl == 1) {
      if (target == Nucleus::H)
        h ^= 1;
      else
        c ^= 1;
    }
    m(basis_index(h, c), s) = 1.0;
  }
  return Unitary(std::move(m));
}

/// Bit flips mapping basis state `ground` onto |00>.
inline Unitary relabel_to_zero(std::size_t ground) {
  Unitary u = Unitary::identity(kTwoSpinDim);
  if (h_bit(ground))
    u = x(Nucleus::H) * u;
  if (c_bit(ground))
    u = x(Nucleus::C) * u;
  return u;
}

/// Hadamard built from a 90 deg y rotation followed by a 180 deg x
/// rotation; equals the matrix Hadamard up to a global phase.
inline Unitary hadamard_from_pulses(const SpinSystemConfig &cfg, Nucleus n) {
  const PulseTarget t = n == Nucleus::H ? PulseTarget::H : PulseTarget::C;
  const Unitary y90 = pulse_unitary(cfg, {t, 90.0, 90.0});
  const Unitary x180 = pulse_unitary(cfg, {t, 180.0, 0.0});
  return x180 * y90;
}

} // namespace gates

//============================================================================
// Population permutations
//============================================================================

enum class Perm { Identity = 0, Cycle = 1, Cycle2 = 2 };

inline const char *to_string(Perm p) {
  switch (p) {
  case Perm::Identity:
    return "IDENTITY";
  case Perm::Cycle:
    return "CYCLE";
  case Perm::Cycle2:
    return "CYCLE2";
  }
  return "?";
}

inline void check_ground(std::size_t ground) {
  if (ground >= kTwoSpinDim)
    throw std::invalid_argument("ground state index must be in 0..3, got " + std::to_string(ground));
}

/// The three non-ground states in ascending index order.
inline std::array<std::size_t, 3> non_ground_states(std::size_t ground) {
  check_ground(ground);
  std::array<std::size_t, 3> out{};
  std::size_t k = 0;
  for (std::size_t s = 0; s < kTwoSpinDim; ++s)
    if (s != ground)
      out[k++] = s;
  return out;
}

/// CNOT realization of the cyclic permutation. For ground |00> the CYCLE
/// sends |01> -> |10> -> |11> -> |01> and is CNOT(H->C) after CNOT(C->H);
/// other grounds conjugate that by the flips taking ground to |00>, using
/// the inverse cycle when the ground has its C bit set so the ascending
/// order of the non-ground triple is preserved.
inline Unitary permutation_pulse_sequence(Perm perm, std::size_t ground) {
  check_ground(ground);
  if (perm == Perm::Identity)
    return Unitary::identity(kTwoSpinDim);

  const Unitary forward = gates::cnot(Nucleus::H, Nucleus::C) * gates::cnot(Nucleus::C, Nucleus::H);
  const Unitary backward = gates::cnot(Nucleus::C, Nucleus::H) * gates::cnot(Nucleus::H, Nucleus::C);
  bool use_forward = perm == Perm::Cycle;
  if (c_bit(ground))
    use_forward = !use_forward;
  const Unitary flip = gates::relabel_to_zero(ground);
  return flip * (use_forward ? forward : backward) * flip;
}

} // namespace xenqc

#endif // XENQC_SPIN_SYSTEM_HPP
