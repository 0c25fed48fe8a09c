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

#ifndef XENQC_DETAIL_FFT_HPP
#define XENQC_DETAIL_FFT_HPP

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace xenqc::detail {

/// Forward transform X_k = sum_n x_n exp(-2 pi i k n / N). Radix-2 for
/// power-of-two lengths, direct summation otherwise.
inline std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x) {
  const std::size_t n = x.size();
  if (n < 2)
    return x;

  if ((n & (n - 1)) != 0) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc{};
      for (std::size_t j = 0; j < n; ++j)
        acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                                          static_cast<double>(n));
      out[k] = acc;
    }
    return out;
  }

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddle evaluated directly rather than by recurrence.
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
      }
  }
  return x;
}

} // namespace xenqc::detail

#endif // XENQC_DETAIL_FFT_HPP
