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
 * @file    quantum_core.hpp
 * @brief   Dense density-matrix state, unitaries and the deviation split.
 *
 * Basis ordering for the two-spin system is |H C>, index = 2*H + C, with
 * |0> = spin up. Everything here is dimension-generic (dim = 2^n).
 */

#ifndef XENQC_QUANTUM_CORE_HPP
#define XENQC_QUANTUM_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xenqc {

using complex_t = std::complex<double>;
using Populations = std::vector<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;

//============================================================================
// CMatrix: square dense complex matrix, row-major
//============================================================================

class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, complex_t{}) {}

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
      m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const double> diag) {
    CMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
      m(i, i) = diag[i];
    return m;
  }

  static CMatrix diagonal(std::span<const complex_t> diag) {
    CMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
      m(i, i) = diag[i];
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  complex_t &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const complex_t &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  std::span<const complex_t> data() const noexcept { return data_; }

  CMatrix adjoint() const {
    CMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  complex_t trace() const {
    complex_t t{};
    for (std::size_t i = 0; i < dim_; ++i)
      t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto &z : data_)
      m = std::max(m, std::abs(z));
    return m;
  }

  /// Largest |A(j,k) - conj(A(k,j))| over all index pairs.
  double hermitian_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
  }

  CMatrix &operator+=(const CMatrix &o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] += o.data_[i];
    return *this;
  }

  CMatrix &operator-=(const CMatrix &o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] -= o.data_[i];
    return *this;
  }

  CMatrix &operator*=(complex_t s) {
    for (auto &z : data_)
      z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, complex_t s) { return a *= s; }
  friend CMatrix operator*(complex_t s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    a.check_same_dim(b);
    const std::size_t n = a.dim_;
    CMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        const complex_t ark = a(r, k);
        if (ark == complex_t{})
          continue;
        for (std::size_t c = 0; c < n; ++c)
          out(r, c) += ark * b(k, c);
      }
    return out;
  }

  friend bool operator==(const CMatrix &, const CMatrix &) = default;

private:
  void check_same_dim(const CMatrix &o) const {
    if (o.dim_ != dim_)
      throw std::invalid_argument("CMatrix: dimension mismatch (" + std::to_string(dim_) +
                                  " vs " + std::to_string(o.dim_) + ")");
  }

  std::size_t dim_ = 0;
  std::vector<complex_t> data_;
};

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
  const std::size_t na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t ra = 0; ra < na; ++ra)
    for (std::size_t ca = 0; ca < na; ++ca)
      for (std::size_t rb = 0; rb < nb; ++rb)
        for (std::size_t cb = 0; cb < nb; ++cb)
          out(ra * nb + rb, ca * nb + cb) = a(ra, ca) * b(rb, cb);
  return out;
}

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

//============================================================================
// DensityMatrix
//============================================================================

class DensityMatrix {
public:
  /// Takes ownership of a Hermitian matrix; asymmetry above 1e-10 is
  /// rejected and nothing is symmetrized.
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (!is_power_of_two(m_.dim()))
      throw std::invalid_argument("DensityMatrix: dimension must be a power of two");
    const double defect = m_.hermitian_defect();
    if (defect > kHermitianTol)
      throw std::invalid_argument("DensityMatrix: input not Hermitian (defect " +
                                  std::to_string(defect) + ")");
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    CMatrix m = CMatrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix from_diagonal(std::span<const double> diag) {
    return DensityMatrix(CMatrix::diagonal(diag));
  }

  static DensityMatrix basis_state(std::size_t dim, std::size_t index) {
    CMatrix m(dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
  }

  std::size_t dim() const noexcept { return m_.dim(); }
  const CMatrix &matrix() const noexcept { return m_; }
  complex_t operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

  /// True when every off-diagonal element is exactly zero.
  bool is_diagonal() const {
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 0; c < dim(); ++c)
        if (r != c && m_(r, c) != complex_t{})
          return false;
    return true;
  }

private:
  CMatrix m_;
};

//============================================================================
// DeviationPart: rho = q I + dev
//============================================================================

struct DeviationPart {
  std::size_t dim = 0;
  double q = 0.0;
  CMatrix dev;

  CMatrix reconstruct() const {
    CMatrix out = dev;
    for (std::size_t i = 0; i < dim; ++i)
      out(i, i) += q;
    return out;
  }

  Populations diagonal() const {
    Populations d(dim);
    for (std::size_t i = 0; i < dim; ++i)
      d[i] = dev(i, i).real();
    return d;
  }
};

inline DeviationPart deviation_decompose(const CMatrix &rho) {
  const double defect = rho.hermitian_defect();
  if (defect > kHermitianTol)
    throw std::invalid_argument("deviation_decompose: input not Hermitian (defect " +
                                std::to_string(defect) + ")");
  DeviationPart out;
  out.dim = rho.dim();
  out.q = rho.trace().real() / static_cast<double>(rho.dim());
  out.dev = rho;
  for (std::size_t i = 0; i < out.dim; ++i)
    out.dev(i, i) -= out.q;
  return out;
}

inline DeviationPart deviation_decompose(const DensityMatrix &rho) {
  return deviation_decompose(rho.matrix());
}

/// Real diagonal of rho.
inline Populations populations(const DensityMatrix &rho) {
  Populations p(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i)
    p[i] = rho(i, i).real();
  return p;
}

/// Diagonal of the traceless deviation part.
inline Populations deviation_diagonal(const DensityMatrix &rho) {
  return deviation_decompose(rho).diagonal();
}

//============================================================================
// Unitary
//============================================================================

class Unitary {
public:
  explicit Unitary(CMatrix m) : m_(std::move(m)) {
    const CMatrix prod = m_ * m_.adjoint();
    const double err = max_abs_diff(prod, CMatrix::identity(m_.dim()));
    if (err > kUnitaryTol)
      throw std::invalid_argument("Unitary: U U^dagger deviates from I by " + std::to_string(err));
  }

  static Unitary identity(std::size_t dim) { return Unitary(CMatrix::identity(dim)); }

  std::size_t dim() const noexcept { return m_.dim(); }
  const CMatrix &matrix() const noexcept { return m_; }
  complex_t operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  Unitary adjoint() const { return Unitary(m_.adjoint()); }

  /// Operator product; `a * b` applies b first.
  friend Unitary operator*(const Unitary &a, const Unitary &b) { return Unitary(a.m_ * b.m_); }

private:
  CMatrix m_;
};

/// Equality of unitaries up to a global phase.
inline bool equal_up_to_phase(const Unitary &a, const Unitary &b, double tol = 1e-12) {
  if (a.dim() != b.dim())
    return false;
  // Phase from the largest element of b.
  std::size_t best = 0;
  const auto bd = b.matrix().data();
  for (std::size_t i = 1; i < bd.size(); ++i)
    if (std::abs(bd[i]) > std::abs(bd[best]))
      best = i;
  const complex_t ratio = a.matrix().data()[best] / bd[best];
  if (std::abs(std::abs(ratio) - 1.0) > tol)
    return false;
  return max_abs_diff(a.matrix(), b.matrix() * ratio) <= tol;
}

/// U rho U^dagger. Only the upper triangle is computed and mirrored, so the
/// result is Hermitian exactly.
inline DensityMatrix apply_unitary(const DensityMatrix &rho, const Unitary &u) {
  if (rho.dim() != u.dim())
    throw std::invalid_argument("apply_unitary: dimension mismatch (rho " +
                                std::to_string(rho.dim()) + ", U " + std::to_string(u.dim()) + ")");
  const std::size_t n = rho.dim();
  const CMatrix ur = u.matrix() * rho.matrix();
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      complex_t acc{};
      for (std::size_t k = 0; k < n; ++k)
        acc += ur(r, k) * std::conj(u(c, k));
      if (r == c) {
        out(r, r) = acc.real();
      } else {
        out(r, c) = acc;
        out(c, r) = std::conj(acc);
      }
    }
  return DensityMatrix(std::move(out));
}

} // namespace xenqc

#endif // XENQC_QUANTUM_CORE_HPP
