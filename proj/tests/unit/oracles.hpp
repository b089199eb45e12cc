#pragma once

// Test-side reference computations. None of these call into the library's
// numerical code; they rebuild the quantities from first principles.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

/// Singular values of the circulant of x - e on Z/N: |exp(2 pi i k/N) - 1|.
inline std::vector<double> circulant_shift_minus_identity(std::size_t N) {
  std::vector<double> v;
  for (std::size_t k = 0; k < N; ++k) {
    v.push_back(2.0 * std::abs(std::sin(std::numbers::pi * static_cast<double>(k) /
                                        static_cast<double>(N))));
  }
  return v;
}

/// Number of orbits of the group generated by the given permutations.
inline std::size_t orbit_count(const std::vector<std::vector<std::uint32_t>>& gens,
                               std::size_t d) {
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens) {
    for (std::size_t x = 0; x < d; ++x) parent[find(x)] = find(g[x]);
  }
  std::size_t count = 0;
  for (std::size_t x = 0; x < d; ++x) count += find(x) == x;
  return count;
}

/// Central binomial coefficient C(2k, k): the e-coefficient of (x + x^-1)^(2k).
inline double central_binomial(std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(k + i) / static_cast<double>(i);
  }
  return c;
}

/// Trace of powers of a symmetric matrix given densely, by repeated products.
inline double trace_power(const std::vector<std::vector<double>>& g, std::size_t k) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1.0;
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (p[i][l] != 0.0)
          for (std::size_t j = 0; j < n; ++j) q[i][j] += p[i][l] * g[l][j];
    p = std::move(q);
  }
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += p[i][i];
  return t;
}

}  // namespace oracle
