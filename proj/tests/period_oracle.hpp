#pragma once

// Test-only reference for attractor classification. It answers the same
// question as classify_attractor by a different route: a period m matches when
// every residue class {t : t = r mod m} is pairwise within tol.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "coda/analysis.hpp"

namespace oracle {

inline double max_norm(const coda::StateSample& a, const coda::StateSample& b) {
  double d = std::fabs(a.pollution - b.pollution);
  for (std::size_t i = 0; i < a.opinions.size(); ++i) {
    d = std::max(d, std::fabs(a.opinions[i] - b.opinions[i]));
  }
  return d;
}

// Smallest matching period <= max_period, or 0 when none matches.
inline std::size_t brute_force_period(const std::vector<coda::StateSample>& xs, double tol,
                                      std::size_t max_period) {
  for (std::size_t m = 1; m <= max_period; ++m) {
    bool ok = true;
    for (std::size_t r = 0; r < m && ok; ++r) {
      for (std::size_t a = r; a < xs.size() && ok; a += m) {
        for (std::size_t b = a + m; b < xs.size() && ok; b += m) {
          ok = max_norm(xs[a], xs[b]) < tol;
        }
      }
    }
    if (ok) return m;
  }
  return 0;
}

// `length` samples repeating a random pattern of `period` states, each entry
// perturbed by uniform noise of magnitude below tol / 10.
inline std::vector<coda::StateSample> planted_sequence(std::mt19937_64& gen, std::size_t period,
                                                       std::size_t length, std::size_t dim,
                                                       double tol) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<coda::StateSample> pattern(period);
  for (auto& s : pattern) {
    s.opinions.resize(dim);
    for (double& x : s.opinions) x = unit(gen);
    s.pollution = 50.0 * (unit(gen) + 1.0);
  }
  std::vector<coda::StateSample> out(length);
  for (std::size_t t = 0; t < length; ++t) {
    out[t] = pattern[t % period];
    for (double& x : out[t].opinions) x += 0.099 * tol * unit(gen);
    out[t].pollution += 0.099 * tol * unit(gen);
  }
  return out;
}

}  // namespace oracle
