#ifndef BILINPDO_PROBE_HPP
#define BILINPDO_PROBE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bilinpdo/bilinear.hpp"
#include "bilinpdo/norms.hpp"
#include "bilinpdo/rng.hpp"

namespace bilinpdo {

enum class ProbeSpace { L1, L2, h1, bmo };

inline const char* probe_space_name(ProbeSpace s) {
  switch (s) {
    case ProbeSpace::L1: return "L1";
    case ProbeSpace::L2: return "L2";
    case ProbeSpace::h1: return "h1";
    case ProbeSpace::bmo: return "bmo";
  }
  return "?";
}

inline double probe_norm(const Field& f, ProbeSpace s) {
  switch (s) {
    case ProbeSpace::L1: return lp_norm(f, 1.0).value;
    case ProbeSpace::L2: return lp_norm(f, 2.0).value;
    case ProbeSpace::h1: return h1_norm(f).value;
    case ProbeSpace::bmo: return bmo_norms(f).first.value;
  }
  return 0.0;
}

struct ProbeResult {
  std::vector<double> ratios;  // in trial order
  double max_ratio = 0.0;
  double median = 0.0;
  double q25 = 0.0, q75 = 0.0;
};

/// Randomized boundedness probe: over seeded band-limited pairs (f, g),
/// collects ||T_sigma(f,g)||_out / (||f||_in1 ||g||_in2).
inline ProbeResult ratio_probe(const Symbol& sigma, ProbeSpace in1,
                               ProbeSpace in2, ProbeSpace out, int trials,
                               std::uint64_t seed, const GridSpec& grid,
                               double band_radius,
                               const ApplyOptions& opt = {}) {
  if (trials < 1) throw std::invalid_argument("ratio_probe: trials >= 1");
  Rng rng(seed);
  ProbeResult res;
  res.ratios.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    Field f = random_band_limited(grid, band_radius, rng);
    Field g = random_band_limited(grid, band_radius, rng);
    double nf = probe_norm(f, in1);
    double ng = probe_norm(g, in2);
    int guard = 0;
    while ((nf == 0.0 || ng == 0.0) && guard++ < 16) {
      f = random_band_limited(grid, band_radius, rng);
      g = random_band_limited(grid, band_radius, rng);
      nf = probe_norm(f, in1);
      ng = probe_norm(g, in2);
    }
    Field tf = apply(sigma, f, g, opt);
    res.ratios.push_back(probe_norm(tf, out) / (nf * ng));
  }
  std::vector<double> sorted = res.ratios;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    double pos = q * (sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - lo;
    return sorted[lo] * (1 - frac) + sorted[hi] * frac;
  };
  res.max_ratio = sorted.back();
  res.median = quantile(0.5);
  res.q25 = quantile(0.25);
  res.q75 = quantile(0.75);
  return res;
}

}  // namespace bilinpdo

#endif
