#ifndef BILINPDO_NORMS_HPP
#define BILINPDO_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bilinpdo/field.hpp"
#include "bilinpdo/grid.hpp"
#include "bilinpdo/partitions.hpp"
#include "bilinpdo/reduction.hpp"

namespace bilinpdo {

enum class SpaceTag { Lp, L2ul, Besov, H1, bmo, BMO, SquareFn, BS };

inline const char* space_tag_name(SpaceTag t) {
  switch (t) {
    case SpaceTag::Lp: return "Lp";
    case SpaceTag::L2ul: return "L2ul";
    case SpaceTag::Besov: return "Besov";
    case SpaceTag::H1: return "h1";
    case SpaceTag::bmo: return "bmo";
    case SpaceTag::BMO: return "BMO";
    case SpaceTag::SquareFn: return "SquareFn";
    case SpaceTag::BS: return "BS";
  }
  return "?";
}

/// A norm value together with the parameters that produced it.
struct NormReport {
  double value = 0.0;
  SpaceTag tag = SpaceTag::Lp;
  std::vector<std::pair<std::string, double>> params;

  void note(const std::string& k, double v) { params.emplace_back(k, v); }
  void note_grid(const GridSpec& g) {
    note("grid_T", g.extent);
    note("grid_N", g.pts);
  }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Riemann-sum L^p norm of a physical-space field; p = inf is the sample max.
inline NormReport lp_norm(const Field& f, double p) {
  require_space(f, Space::physical);
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  NormReport r;
  r.tag = SpaceTag::Lp;
  r.note("p", p);
  r.note_grid(f.grid);
  if (p == kInf) {
    r.value = max_abs(f);
    return r;
  }
  Accum acc;
  for (const auto& z : f.v) acc.add(std::pow(std::abs(z), p));
  r.value = std::pow(acc.value() * std::pow(f.grid.step(), f.grid.dim), 1.0 / p);
  return r;
}

namespace detail {

/// Accumulates |f|^2-mass into the unit cubes tiling the box; requires an
/// integer extent. Returns per-cube masses in lexicographic order.
inline std::vector<double> unit_cube_masses(const Field& f) {
  const GridSpec& g = f.grid;
  if (!g.integer_extent())
    throw std::invalid_argument("uniformly local norm needs integer extent");
  int cubes_per_axis = static_cast<int>(std::round(g.extent));
  std::size_t ncubes = 1;
  for (int a = 0; a < g.dim; ++a) ncubes *= cubes_per_axis;
  std::vector<Accum> acc(ncubes);
  double w = std::pow(g.step(), g.dim);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Point x = g.x_of(i);
    std::size_t cid = 0;
    for (int a = 0; a < g.dim; ++a) {
      int c = static_cast<int>(std::floor(x[a] + g.extent / 2));
      c = std::clamp(c, 0, cubes_per_axis - 1);
      cid = cid * cubes_per_axis + static_cast<std::size_t>(c);
    }
    acc[cid].add(std::norm(f.v[i]) * w);
  }
  std::vector<double> m(ncubes);
  for (std::size_t c = 0; c < ncubes; ++c) m[c] = acc[c].value();
  return m;
}

}  // namespace detail

/// Uniformly local L^2: sup over the unit cubes tiling the box of the
/// cube-restricted L^2 norm.
inline NormReport ul2_norm(const Field& f) {
  require_space(f, Space::physical);
  auto masses = detail::unit_cube_masses(f);
  double m = 0.0;
  for (double c : masses) m = std::max(m, c);
  NormReport r;
  r.tag = SpaceTag::L2ul;
  r.note_grid(f.grid);
  r.value = std::sqrt(m);
  return r;
}

/// Besov norm: weighted l^q aggregation over k of dyadic-block L^p norms.
inline NormReport besov_norm(const Field& f, double s, double p, double q,
                             const LittlewoodPaley& lp) {
  require_space(f, Space::physical);
  double nyq_rad = f.grid.nyquist() * std::sqrt(static_cast<double>(f.grid.dim));
  if (lp.k_max < lp.cover_index(nyq_rad))
    throw std::invalid_argument("besov_norm: family does not cover Nyquist");
  NormReport r;
  r.tag = SpaceTag::Besov;
  r.note("s", s);
  r.note("p", p);
  r.note("q", q);
  r.note("k_max", lp.k_max);
  r.note_grid(f.grid);
  Accum acc;
  double mx = 0.0;
  for (int k = 0; k <= lp.k_max; ++k) {
    double bk = lp_norm(lp_block(lp, k, f), p).value;
    double term = std::pow(2.0, k * s) * bk;
    if (q == kInf)
      mx = std::max(mx, term);
    else
      acc.add(std::pow(term, q));
  }
  r.value = (q == kInf) ? mx : std::pow(acc.value(), 1.0 / q);
  return r;
}

namespace detail {

/// Normalized smooth bump used by the h^1 maximal function; support radius
/// 1/2, discrete mass pinned to 1 at each scale.
inline Field h1_test_kernel(const GridSpec& g, double t) {
  MollifierBump prof{0.5, 1.0};
  Field k(g, Space::physical);
  Accum mass;
  for (std::size_t i = 0; i < k.size(); ++i) {
    Point x = g.x_of(i);
    double v = prof(norm2(x, g.dim) / t);
    k.v[i] = v;
    mass.add(v);
  }
  double total = mass.value() * std::pow(g.step(), g.dim);
  if (total <= 0.0) throw std::runtime_error("h1 kernel underresolved");
  for (auto& z : k.v) z /= total;
  return k;
}

}  // namespace detail

/// Local Hardy norm: L^1 of the maximal function sup_{0<t<1} |phi_t * f|
/// over a dyadic t-grid (`per_octave` samples per octave, from 1/2 down to
/// twice the grid spacing).
inline NormReport h1_norm(const Field& f, int per_octave = 4) {
  require_space(f, Space::physical);
  if (per_octave < 1) throw std::invalid_argument("h1_norm: per_octave >= 1");
  const GridSpec& g = f.grid;
  std::vector<double> maximal(f.size(), 0.0);
  double t_min = 2.0 * g.step();
  int levels = 0;
  for (int i = 0;; ++i) {
    double t = 0.5 * std::pow(2.0, -static_cast<double>(i) / per_octave);
    if (t < t_min || i > 400) break;
    Field conv = convolve(detail::h1_test_kernel(g, t), f);
    for (std::size_t s = 0; s < f.size(); ++s)
      maximal[s] = std::max(maximal[s], std::abs(conv.v[s]));
    ++levels;
  }
  Accum acc;
  for (double m : maximal) acc.add(m);
  NormReport r;
  r.tag = SpaceTag::H1;
  r.note("per_octave", per_octave);
  r.note("t_levels", levels);
  r.note_grid(g);
  r.value = acc.value() * std::pow(g.step(), g.dim);
  return r;
}

namespace detail {

struct CubeScan {
  double max_osc_small = 0.0;  // side <= 1
  double max_osc_large = 0.0;  // side >= 1
  double max_mean_large = 0.0; // mean of |f| over side >= 1
};

/// Scans the dyadic cube hierarchy of the box plus half-offset translates.
inline CubeScan scan_cubes(const Field& f) {
  const GridSpec& g = f.grid;
  if (!g.integer_extent())
    throw std::invalid_argument("bmo norms need integer extent");
  CubeScan out;
  int N = g.pts;
  for (int side_pts = N; side_pts >= 2; side_pts /= 2) {
    double side = side_pts * g.step();
    int cubes_per_axis = N / side_pts;
    for (int half = 0; half < 2; ++half) {
      if (half == 1 && cubes_per_axis == 1)
        continue;  // shifting a single-cube tiling reproduces it
      int shift = half * side_pts / 2;
      std::size_t ncubes = 1;
      for (int a = 0; a < g.dim; ++a)
        ncubes *= static_cast<std::size_t>(cubes_per_axis);
      std::vector<CplxAccum> sums(ncubes);
      std::vector<std::size_t> counts(ncubes, 0);
      auto cube_of = [&](std::size_t i) {
        auto c = g.coords(i);
        std::size_t cid = 0;
        for (int a = 0; a < g.dim; ++a) {
          int cc = ((c[a] + shift) % N) / side_pts;
          cid = cid * cubes_per_axis + static_cast<std::size_t>(cc);
        }
        return cid;
      };
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t cid = cube_of(i);
        sums[cid].add(f.v[i]);
        counts[cid]++;
      }
      std::vector<cplx> mean(ncubes);
      for (std::size_t c = 0; c < ncubes; ++c)
        mean[c] = sums[c].value() / static_cast<double>(counts[c]);
      std::vector<Accum> dev(ncubes), absmean(ncubes);
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t cid = cube_of(i);
        dev[cid].add(std::abs(f.v[i] - mean[cid]));
        absmean[cid].add(std::abs(f.v[i]));
      }
      for (std::size_t c = 0; c < ncubes; ++c) {
        double osc = dev[c].value() / static_cast<double>(counts[c]);
        double am = absmean[c].value() / static_cast<double>(counts[c]);
        if (side <= 1.0 + 1e-12) out.max_osc_small = std::max(out.max_osc_small, osc);
        if (side >= 1.0 - 1e-12) {
          out.max_osc_large = std::max(out.max_osc_large, osc);
          out.max_mean_large = std::max(out.max_mean_large, am);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// (bmo, BMO) pair. The cube family is the dyadic hierarchy of the box plus
/// half-offset translates -- a bounded-distortion surrogate for all cubes.
inline std::pair<NormReport, NormReport> bmo_norms(const Field& f) {
  require_space(f, Space::physical);
  auto scan = detail::scan_cubes(f);
  NormReport small, big;
  small.tag = SpaceTag::bmo;
  big.tag = SpaceTag::BMO;
  small.note_grid(f.grid);
  big.note_grid(f.grid);
  small.note("cube_family_dyadic_half_offset", 1);
  big.note("cube_family_dyadic_half_offset", 1);
  small.value = std::max(scan.max_osc_small, scan.max_mean_large);
  big.value = std::max(scan.max_osc_small, scan.max_osc_large);
  return {small, big};
}

}  // namespace bilinpdo

#endif
