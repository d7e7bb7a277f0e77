#ifndef BILINPDO_SYMBOL_NORMS_HPP
#define BILINPDO_SYMBOL_NORMS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "bilinpdo/norms.hpp"
#include "bilinpdo/slope.hpp"
#include "bilinpdo/symbol.hpp"

namespace bilinpdo {

enum class BsVariant { plain, star, dagger };

inline const char* bs_variant_name(BsVariant v) {
  switch (v) {
    case BsVariant::plain: return "plain";
    case BsVariant::star: return "star";
    case BsVariant::dagger: return "dagger";
  }
  return "?";
}

/// Sampling and truncation controls for the symbol-class norms.
struct BsTruncation {
  int j_max = -1;      // required if the symbol has no support radius
  int v_pts = 64;      // frequency-variable samples per axis
  int x_pts = 32;      // x samples per axis (x-dependent symbols)
  double x_extent = 8.0;
  double quiet_tol = 1e-9;
  int quiet_shells = 8;
  bool cap_spacing = true;  // keep unit cubes resolved (uniformly local norms)
};

struct BlockNormRow {
  int j;
  std::array<int, 3> k;
  double ul2;
  double linf;
};

struct BlockTensor {
  std::vector<BlockNormRow> rows;
  int j_max = 0;
  std::array<int, 3> k_cap{0, 0, 0};
  bool quiet_truncated = false;
};

inline int bs_auto_jmax(const Symbol& sigma, double rho) {
  if (sigma.freq_support_radius <= 0.0) return -1;
  double l = std::log2(sigma.freq_support_radius);
  int j = static_cast<int>(std::ceil(std::max(0.0, l) / (1.0 - rho))) + 2;
  return j;
}

/// Frequency-variable grid fitted to the rescaled shell of level j. With
/// `cap_spacing` the sample spacing never exceeds 1; coarser grids bias
/// the unit-cube masses (harmless for sup-norm aggregation only).
inline GridSpec bs_block_grid(const LittlewoodPaley& lp2n, int j, double rho,
                              int v_pts, bool cap_spacing = true) {
  double shell_hi = lp2n.base.support * std::pow(2.0, j * (1.0 - rho));
  double e = 8.0;
  while (e / 2 < shell_hi) e *= 2.0;
  int pts = v_pts;
  if (cap_spacing)
    while (e / pts > 1.0) pts *= 2;
  return GridSpec(1, e, pts);  // dim patched by caller
}

/// All block norms ||Delta_k[sigma_j^rho]|| for j up to the truncation
/// limit. Per-axis k ranges stop where the sampled dual box is exhausted
/// (higher blocks vanish identically) or after `quiet_shells` consecutive
/// negligible shells.
inline BlockTensor compute_block_tensor(const Symbol& sigma, double rho,
                                        const BsTruncation& tr,
                                        const LittlewoodPaley& lp2n,
                                        const LittlewoodPaley& lp1) {
  if (lp2n.ambient_dim != 2 * sigma.dim || lp1.ambient_dim != sigma.dim)
    throw std::invalid_argument("compute_block_tensor: family dims mismatch");
  int j_max = tr.j_max >= 0 ? tr.j_max : bs_auto_jmax(sigma, rho);
  if (j_max < 0)
    throw std::invalid_argument(
        "compute_block_tensor: unbounded symbol needs an explicit j_max");
  BlockTensor out;
  out.j_max = j_max;
  GridSpec xg(1, tr.x_extent, tr.x_pts);
  xg.dim = sigma.dim;
  for (int j = 0; j <= j_max; ++j) {
    // skip levels whose rescaled shell misses the support
    if (sigma.freq_support_radius > 0.0 && j >= 1) {
      double shell_lo = lp2n.base.plateau / 2.0 * std::pow(2.0, j);
      if (shell_lo > sigma.freq_support_radius * std::pow(2.0, j * rho) *
                         (1.0 + 1e-12))
        continue;
    }
    GridSpec vg = bs_block_grid(lp2n, j, rho, tr.v_pts, tr.cap_spacing);
    vg.dim = sigma.dim;
    SampledSymbol loc = localize(sigma, j, rho, lp2n, vg, xg);
    double scale0 = 0.0;
    for (const auto& z : loc.v) scale0 = std::max(scale0, std::abs(z));
    if (scale0 == 0.0) continue;
    // per-axis caps: blocks beyond the sampled dual box vanish identically
    auto cap_of = [&](const GridSpec& g) {
      double half = g.nyquist() * std::sqrt(static_cast<double>(g.dim));
      return std::max(0, static_cast<int>(std::ceil(std::log2(half))));
    };
    std::array<int, 3> cap;
    cap[0] = (sigma.x_independent) ? 0 : cap_of(xg);
    cap[1] = cap_of(vg);
    cap[2] = cap[1];
    for (int a = 0; a < 3; ++a) out.k_cap[a] = std::max(out.k_cap[a], cap[a]);

    double running_max = 0.0;
    int quiet0 = 0;
    for (int k0 = 0; k0 <= cap[0]; ++k0) {
      double slice0_max = 0.0;
      int quiet1 = 0;
      for (int k1 = 0; k1 <= cap[1]; ++k1) {
        double slice1_max = 0.0;
        int quiet2 = 0;
        for (int k2 = 0; k2 <= cap[2]; ++k2) {
          auto blk = triple_block(loc, {k0, k1, k2}, lp1);
          out.rows.push_back(
              {j, {k0, k1, k2}, blk.block_norm_ul2, blk.block_norm_linf});
          double v = blk.block_norm_ul2;
          running_max = std::max(running_max, v);
          slice1_max = std::max(slice1_max, v);
          slice0_max = std::max(slice0_max, v);
          if (k2 >= tr.quiet_shells && v < tr.quiet_tol * running_max) {
            if (++quiet2 >= tr.quiet_shells) {
              out.quiet_truncated = true;
              break;
            }
          } else {
            quiet2 = 0;
          }
        }
        if (k1 >= tr.quiet_shells &&
            slice1_max < tr.quiet_tol * running_max) {
          if (++quiet1 >= tr.quiet_shells) {
            out.quiet_truncated = true;
            break;
          }
        } else {
          quiet1 = 0;
        }
      }
      if (k0 >= tr.quiet_shells && slice0_max < tr.quiet_tol * running_max) {
        if (++quiet0 >= tr.quiet_shells) {
          out.quiet_truncated = true;
          break;
        }
      } else {
        quiet0 = 0;
      }
    }
  }
  return out;
}

/// Aggregates a block tensor into one of the three symbol-class norms.
inline double aggregate_bs(const BlockTensor& t, double m,
                           const std::array<double, 3>& s, BsVariant variant) {
  auto weight = [&](const BlockNormRow& r) {
    return std::pow(2.0, -r.j * m + r.k[0] * s[0] + r.k[1] * s[1] +
                             r.k[2] * s[2]);
  };
  if (variant == BsVariant::dagger) {
    double v = 0.0;
    for (const auto& r : t.rows) v = std::max(v, weight(r) * r.linf);
    return v;
  }
  if (variant == BsVariant::plain) {
    std::map<int, Accum> per_j;
    for (const auto& r : t.rows) per_j[r.j].add(weight(r) * r.ul2);
    double v = 0.0;
    for (auto& [j, acc] : per_j) v = std::max(v, acc.value());
    return v;
  }
  // star: sum over k0 of sup over j of the (k1,k2) sums
  std::map<std::pair<int, int>, Accum> per_jk0;  // (k0, j)
  for (const auto& r : t.rows)
    per_jk0[{r.k[0], r.j}].add(weight(r) * r.ul2);
  std::map<int, double> sup_j;
  for (auto& [key, acc] : per_jk0) {
    double v = acc.value();
    auto it = sup_j.find(key.first);
    if (it == sup_j.end())
      sup_j[key.first] = v;
    else
      it->second = std::max(it->second, v);
  }
  Accum total;
  for (auto& [k0, v] : sup_j) total.add(v);
  return total.value();
}

struct BsNormResult {
  NormReport report;
  BlockTensor tensor;
};

inline BsNormResult bs_norm(const Symbol& sigma, double m, double rho,
                            const std::array<double, 3>& s, BsVariant variant,
                            const BsTruncation& tr, const LittlewoodPaley& lp2n,
                            const LittlewoodPaley& lp1) {
  BsNormResult res;
  res.tensor = compute_block_tensor(sigma, rho, tr, lp2n, lp1);
  res.report.tag = SpaceTag::BS;
  res.report.value = aggregate_bs(res.tensor, m, s, variant);
  res.report.note("m", m);
  res.report.note("rho", rho);
  res.report.note("s0", s[0]);
  res.report.note("s1", s[1]);
  res.report.note("s2", s[2]);
  res.report.note("variant", static_cast<double>(variant));
  res.report.note("j_max", res.tensor.j_max);
  res.report.note("v_pts", tr.v_pts);
  res.report.note("quiet_truncated", res.tensor.quiet_truncated ? 1.0 : 0.0);
  return res;
}

inline BsNormResult bs_norm(const Symbol& sigma, double m, double rho,
                            const std::array<double, 3>& s, BsVariant variant,
                            const BsTruncation& tr) {
  LittlewoodPaley lp2n = make_lp(2 * sigma.dim, 64);
  LittlewoodPaley lp1 = make_lp(sigma.dim, 64);
  return bs_norm(sigma, m, rho, s, variant, tr, lp2n, lp1);
}

/// Marginal decay slopes of log2 block norms: the j axis is fitted at
/// k = 0, each k axis at a middle j with the other k fixed to zero. Axes
/// whose blocks all vanish (x-independent symbols on the x axis) are
/// flagged instead of fitted.
struct DecayReport {
  double j_slope = 0.0;
  std::array<double, 3> k_slopes{0.0, 0.0, 0.0};
  std::array<bool, 3> k_axis_all_zero{false, false, false};
  int j_lo = 2, j_hi = 8;
  int j_mid = 5;
};

inline DecayReport hormander_decay_check(const Symbol& sigma, double m,
                                         double rho,
                                         const std::array<int, 3>& orders,
                                         int j_lo = 2, int j_hi = 8,
                                         int k_hi = 6, int v_pts = 128) {
  (void)orders;  // thresholds applied by callers, recorded for reports
  LittlewoodPaley lp2n = make_lp(2 * sigma.dim, 64);
  LittlewoodPaley lp1 = make_lp(sigma.dim, 64);
  GridSpec xg(1, 8.0, 32);
  xg.dim = sigma.dim;
  DecayReport rep;
  rep.j_lo = j_lo;
  rep.j_hi = j_hi;
  rep.j_mid = (j_lo + j_hi) / 2;

  auto block_norm = [&](int j, std::array<int, 3> k) {
    GridSpec vg = bs_block_grid(lp2n, j, rho, v_pts);
    vg.dim = sigma.dim;
    SampledSymbol loc = localize(sigma, j, rho, lp2n, vg, xg);
    return triple_block(loc, k, lp1).block_norm_ul2;
  };

  std::vector<double> xs, ys;
  for (int j = j_lo; j <= j_hi; ++j) {
    double v = block_norm(j, {0, 0, 0});
    if (v <= 0.0) throw std::runtime_error("decay check: empty j block");
    xs.push_back(j);
    ys.push_back(std::log2(v));
  }
  rep.j_slope = fit_slope(xs, ys);

  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> kx, ky, raw;
    for (int k = 1; k <= k_hi; ++k) {
      std::array<int, 3> kk{0, 0, 0};
      kk[axis] = k;
      raw.push_back(block_norm(rep.j_mid, kk));
    }
    double axis_max = 0.0;
    for (double v : raw) axis_max = std::max(axis_max, v);
    if (axis_max <= 1e-13 * std::abs(block_norm(rep.j_mid, {0, 0, 0}))) {
      rep.k_axis_all_zero[axis] = true;
      rep.k_slopes[axis] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    for (int k = 1; k <= k_hi; ++k) {
      double v = raw[k - 1];
      if (v >= 1e-11 * axis_max) {
        kx.push_back(k);
        ky.push_back(std::log2(v));
      }
    }
    if (kx.size() < 3)
      throw std::runtime_error("decay check: fewer than 3 usable shells");
    rep.k_slopes[axis] = fit_slope(kx, ky);
  }
  return rep;
}

}  // namespace bilinpdo

#endif
