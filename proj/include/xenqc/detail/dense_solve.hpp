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

#ifndef XENQC_DETAIL_DENSE_SOLVE_HPP
#define XENQC_DETAIL_DENSE_SOLVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace xenqc::detail {

struct SolveDiagnostics {
  double scale = 0.0;         // max |a_ij| of the input matrix
  double min_pivot = 0.0;     // smallest |pivot| met during elimination
  std::size_t failed_row = 0; // elimination step where the pivot vanished
};

/// Solves a x = b for a row-major n x n system by Gaussian elimination with
/// partial pivoting. Returns nullopt when a pivot falls below
/// rel_tol * max|a_ij|.
inline std::optional<std::vector<double>> solve_partial_pivot(std::vector<double> a, std::vector<double> b,
                                                              std::size_t n, double rel_tol,
                                                              SolveDiagnostics *diag = nullptr) {
  SolveDiagnostics d;
  for (double v : a)
    d.scale = std::max(d.scale, std::abs(v));
  d.min_pivot = d.scale;
  const double threshold = rel_tol * d.scale;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col]))
        piv = r;
    const double pv = std::abs(a[piv * n + col]);
    d.min_pivot = std::min(d.min_pivot, pv);
    if (d.scale == 0.0 || pv <= threshold) {
      d.failed_row = col;
      if (diag)
        *diag = d;
      return std::nullopt;
    }
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0)
        continue;
      for (std::size_t c = col; c < n; ++c)
        a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c)
      acc -= a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }
  if (diag)
    *diag = d;
  return x;
}

} // namespace xenqc::detail

#endif // XENQC_DETAIL_DENSE_SOLVE_HPP
