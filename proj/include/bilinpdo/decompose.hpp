#ifndef BILINPDO_DECOMPOSE_HPP
#define BILINPDO_DECOMPOSE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bilinpdo/bilinear.hpp"
#include "bilinpdo/field.hpp"
#include "bilinpdo/partitions.hpp"
#include "bilinpdo/symbol.hpp"

namespace bilinpdo {

enum class PieceTag { I0 = 0, I1 = 1, I2 = 2, I3 = 3 };

inline const char* piece_tag_name(PieceTag t) {
  switch (t) {
    case PieceTag::I0: return "I0";
    case PieceTag::I1: return "I1";
    case PieceTag::I2: return "I2";
    case PieceTag::I3: return "I3";
  }
  return "?";
}

struct BlockEntry {
  PieceTag tag;
  int j;
  std::array<int, 3> k;
  std::array<int, 2> nu1{0, 0};
  std::array<int, 2> nu2{0, 0};
  cplx value;
};

struct DecomposeOptions {
  int split_threshold = 8;  // j <= threshold routes through the low piece
  int j_max = -1;           // derived from the symbol support when < 0
  double drop_tol = 1e-13;  // k-slices identically below this are skipped
  int x_pts = 16;           // x resolution for x-dependent symbols
};

struct NuAuditRow {
  PieceTag tag;
  int j;
  double nu1_len, nu2_len;
  double nu1_lo, nu1_hi, nu2_lo, nu2_hi;
  bool ok;
};

/// Bookkeeping for one dual-form evaluation: the four routed pieces, every
/// (j, k, nu) block, and the truncation that produced them.
struct DualFormLedger {
  cplx direct_value{};
  std::array<cplx, 4> parts{};
  std::vector<BlockEntry> blocks;
  int j_max = 0;
  int split_threshold = 0;
  double rho = 0.0;
  std::vector<std::pair<int, int>> snap_exponents;  // (j, round(j rho))
  std::size_t dropped_slices = 0;
  double dropped_bound = 0.0;
  std::vector<NuAuditRow> nu_audit;

  cplx parts_total() const { return parts[0] + parts[1] + parts[2] + parts[3]; }

  bool audit_passed() const {
    for (const auto& r : nu_audit)
      if (!r.ok) return false;
    return true;
  }
};

namespace detail {

/// kappa/chi evaluations for one frequency-lattice axis: each lattice
/// point meets at most a few integer windows.
struct NuCandidates {
  std::vector<int> nu;           // candidate offsets
  std::vector<double> kappa_chi; // kappa(z) * chi(z) at z = coord - nu
};

inline NuCandidates axis_candidates(double coord, const UniformPair& up) {
  NuCandidates out;
  int lo = static_cast<int>(std::floor(coord)) - 1;
  for (int nu = lo; nu <= lo + 3; ++nu) {
    double z = coord - nu;
    double k = up.kappa1(z);
    if (k != 0.0) {
      out.nu.push_back(nu);
      out.kappa_chi.push_back(k * up.chi1(z));
    }
  }
  return out;
}

struct RouteSpec {
  PieceTag tag;
  // radial input multipliers at level j (original frequency coordinates)
  std::function<double(double)> mf, mg;
};

}  // namespace detail

/// Splits the dual form of T_sigma(f, g) by frequency level, routes each
/// level through the low/split multipliers, rescales by the snapped
/// power-of-two factor, and resolves every piece into (k, nu) blocks via
/// the triple dyadic blocks and the integer-lattice window pair.
/// x-independent symbols only; sigma must be band-limited.
inline DualFormLedger decompose(const Symbol& sigma, const Field& f,
                                const Field& g, const Field& h, double rho,
                                const LittlewoodPaley& lp2n,
                                const AppendixSplit& split,
                                const UniformPair& up,
                                const LittlewoodPaley& lp1,
                                const DecomposeOptions& opt = {}) {
  require_same_grid(f, g);
  require_same_grid(f, h);
  require_space(f, Space::physical);
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("decompose: rho must be in [0, 1)");
  if (!sigma.x_independent)
    throw std::invalid_argument(
        "decompose: blockwise path expects an x-independent symbol; use "
        "decompose_xdep for the small-grid general path");
  if (sigma.freq_support_radius <= 0.0 && opt.j_max < 0)
    throw std::invalid_argument("decompose: need a band limit or j_max");
  (void)lp1;

  const GridSpec& gr = f.grid;
  DualFormLedger led;
  led.rho = rho;
  led.split_threshold = opt.split_threshold;
  led.direct_value = dual_pairing(sigma, f, g, h);

  int j_max = opt.j_max;
  if (j_max < 0) {
    double radius = sigma.freq_support_radius;
    j_max = static_cast<int>(std::ceil(
                std::log2(2.0 * radius / lp2n.base.plateau))) +
            1;
  }
  led.j_max = j_max;

  Field Fh = dft(f);
  Field Gh = dft(g);
  Field Hh = dft(h);
  const int N = gr.pts;
  const std::size_t vtot = gr.total();

  for (int j = 0; j <= j_max; ++j) {
    if (sigma.freq_support_radius > 0.0 && j >= 1) {
      double shell_lo = lp2n.base.plateau / 2.0 * std::pow(2.0, j);
      if (shell_lo > sigma.freq_support_radius * (1.0 + 1e-12)) continue;
    }
    int r_j = static_cast<int>(std::lround(j * rho));
    led.snap_exponents.emplace_back(j, r_j);
    double rescale = std::ldexp(1.0, r_j);
    double Tj = gr.extent * rescale;

    // sigma Psi_j on the lattice (rescaled variables share the samples)
    std::vector<cplx> Sj(vtot * vtot);
    bool any = false;
    for (std::size_t a = 0; a < vtot; ++a) {
      Point xi = gr.xi_of(a);
      for (std::size_t b = 0; b < vtot; ++b) {
        Point eta = gr.xi_of(b);
        double w = lp2n.piece(j, norm2_pair(xi, eta, gr.dim));
        cplx v = w == 0.0 ? cplx{} : sigma(Point{0, 0}, xi, eta) * w;
        Sj[a * vtot + b] = v;
        any = any || v != cplx{};
      }
    }
    if (!any) continue;

    // nu-window tables per axis index, in rescaled coordinates
    std::vector<detail::NuCandidates> cands(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      double coord = gr.freq_step() * (i - N / 2) / rescale;
      cands[static_cast<std::size_t>(i)] = detail::axis_candidates(coord, up);
    }

    // routes at this level
    std::vector<detail::RouteSpec> routes;
    if (j <= opt.split_threshold || j == 0) {
      auto m = [&split, j](double r) { return split.phi_route_j(j, r); };
      routes.push_back({PieceTag::I0, m, m});
    } else {
      routes.push_back({PieceTag::I1,
                        [&split, j](double r) { return split.phi_prime_j(j, r); },
                        [&split, j](double r) { return split.psi_prime_j(j, r); }});
      routes.push_back({PieceTag::I2,
                        [&split, j](double r) { return split.psi_prime_j(j, r); },
                        [&split, j](double r) { return split.phi_prime_j(j, r); }});
      routes.push_back({PieceTag::I3,
                        [&split, j](double r) { return split.psi_dprime_j(j, r); },
                        [&split, j](double r) { return split.psi_dprime_j(j, r); }});
    }

    // per-axis k caps: blocks beyond the sampled dual box vanish
    int cap = std::max(
        0, static_cast<int>(std::ceil(std::log2(
               Tj / 2.0 * std::sqrt(static_cast<double>(gr.dim))))));

    double base = std::pow(1.0 / gr.extent, 2 * gr.dim);
    std::vector<int> shape(2 * gr.dim, N);

    for (const auto& route : routes) {
      // routed input spectra
      std::vector<cplx> Fr(vtot), Gr(vtot);
      bool any_f = false, any_g = false;
      for (std::size_t a = 0; a < vtot; ++a) {
        double r = norm2(gr.xi_of(a), gr.dim);
        Fr[a] = Fh.v[a] * route.mf(r);
        Gr[a] = Gh.v[a] * route.mg(r);
        any_f = any_f || Fr[a] != cplx{};
        any_g = any_g || Gr[a] != cplx{};
      }
      if (!any_f || !any_g) continue;

      // pair weights W[a,b] = base * Fr[a] Gr[b] Hh[-(xi_a+eta_b)]
      // folded exactly on the lattice
      auto fold_neg = [&](std::size_t a, std::size_t b) {
        auto ca = gr.coords(a);
        auto cb = gr.coords(b);
        std::array<int, 2> c{0, 0};
        for (int ax = 0; ax < gr.dim; ++ax) {
          int k = -((ca[ax] - N / 2) + (cb[ax] - N / 2));
          c[ax] = ((k + N / 2) % N + N) % N;
        }
        return gr.flat(c);
      };

      double sup_S = 0.0;
      for (const auto& z : Sj) sup_S = std::max(sup_S, std::abs(z));

      for (int k1 = 0; k1 <= cap; ++k1) {
        for (int k2 = 0; k2 <= cap; ++k2) {
          // Delta_k of sigma_j^r on the rescaled lattice
          std::vector<cplx> B = Sj;
          auto block_axis_group = [&](int group, int kk) {
            int first = (group == 1 ? 0 : gr.dim);
            for (int a = 0; a < gr.dim; ++a)
              detail::fft_axis_shaped(B, shape, first + a, -1);
            std::vector<std::size_t> stride(shape.size(), 1);
            for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d)
              stride[d] = stride[d + 1] * static_cast<std::size_t>(shape[d + 1]);
            double dual_step = Tj / N;
            for (std::size_t i = 0; i < B.size(); ++i) {
              double r2 = 0.0;
              for (int a = 0; a < gr.dim; ++a) {
                int idx = static_cast<int>(
                    (i / stride[first + a]) % static_cast<std::size_t>(N));
                int kw = idx <= N / 2 ? idx : idx - N;
                double d = kw * dual_step;
                r2 += d * d;
              }
              B[i] *= lp1.piece(kk, std::sqrt(r2));
            }
            for (int a = 0; a < gr.dim; ++a)
              detail::fft_axis_shaped(B, shape, first + a, +1);
            double sc = std::pow(1.0 / N, gr.dim);
            for (auto& z : B) z *= sc;
          };
          block_axis_group(1, k1);
          block_axis_group(2, k2);

          double sup_B = 0.0;
          for (const auto& z : B) sup_B = std::max(sup_B, std::abs(z));
          if (sup_B <= opt.drop_tol * sup_S) {
            led.dropped_slices++;
            led.dropped_bound += sup_B;
            continue;
          }

          // resolve the slice into nu blocks
          std::map<std::array<int, 4>, CplxAccum> slice;
          for (std::size_t a = 0; a < vtot; ++a) {
            if (Fr[a] == cplx{}) continue;
            auto ca = gr.coords(a);
            for (std::size_t b = 0; b < vtot; ++b) {
              if (Gr[b] == cplx{}) continue;
              cplx Bv = B[a * vtot + b];
              if (Bv == cplx{}) continue;
              cplx w = base * Bv * Fr[a] * Gr[b] * Hh.v[fold_neg(a, b)];
              auto cb = gr.coords(b);
              // loop the window candidates of every axis
              const auto& c1x = cands[static_cast<std::size_t>(ca[0])];
              const auto& c2x = cands[static_cast<std::size_t>(cb[0])];
              if (gr.dim == 1) {
                for (std::size_t u = 0; u < c1x.nu.size(); ++u)
                  for (std::size_t v = 0; v < c2x.nu.size(); ++v) {
                    std::array<int, 4> key{c1x.nu[u], 0, c2x.nu[v], 0};
                    slice[key].add(w * c1x.kappa_chi[u] * c2x.kappa_chi[v]);
                  }
              } else {
                const auto& c1y = cands[static_cast<std::size_t>(ca[1])];
                const auto& c2y = cands[static_cast<std::size_t>(cb[1])];
                for (std::size_t u0 = 0; u0 < c1x.nu.size(); ++u0)
                  for (std::size_t u1 = 0; u1 < c1y.nu.size(); ++u1)
                    for (std::size_t v0 = 0; v0 < c2x.nu.size(); ++v0)
                      for (std::size_t v1 = 0; v1 < c2y.nu.size(); ++v1) {
                        std::array<int, 4> key{c1x.nu[u0], c1y.nu[u1],
                                               c2x.nu[v0], c2y.nu[v1]};
                        slice[key].add(w * c1x.kappa_chi[u0] *
                                       c1y.kappa_chi[u1] *
                                       c2x.kappa_chi[v0] *
                                       c2y.kappa_chi[v1]);
                      }
              }
            }
          }
          for (const auto& [key, acc] : slice) {
            BlockEntry e;
            e.tag = route.tag;
            e.j = j;
            e.k = {0, k1, k2};
            e.nu1 = {key[0], key[1]};
            e.nu2 = {key[2], key[3]};
            e.value = acc.value();
            led.blocks.push_back(e);
            led.parts[static_cast<int>(route.tag)] += e.value;
          }
        }
      }
    }
  }

  // nu support audit against the routed support boxes (the kappa window
  // widens each box by at most pad lattice steps)
  for (const auto& e : led.blocks) {
    if (e.value == cplx{}) continue;
    int r_j = static_cast<int>(std::lround(e.j * rho));
    double scale = std::ldexp(1.0, e.j - r_j);
    double pad = 2.0 * std::sqrt(static_cast<double>(gr.dim));
    double low_hi = scale / 32.0 + pad;            // phi' support
    double ann_lo = std::max(0.0, scale / 16.0 - pad);   // psi' annulus
    double ann3_lo = std::max(0.0, scale / 64.0 - pad);  // psi'' annulus
    double full_hi = scale * 4.0 + pad;
    NuAuditRow row;
    row.tag = e.tag;
    row.j = e.j;
    row.nu1_len = std::hypot(static_cast<double>(e.nu1[0]),
                             static_cast<double>(e.nu1[1]));
    row.nu2_len = std::hypot(static_cast<double>(e.nu2[0]),
                             static_cast<double>(e.nu2[1]));
    switch (e.tag) {
      case PieceTag::I0:
        row.nu1_lo = 0.0;      row.nu1_hi = full_hi;
        row.nu2_lo = 0.0;      row.nu2_hi = full_hi;
        break;
      case PieceTag::I1:
        row.nu1_lo = 0.0;      row.nu1_hi = low_hi;
        row.nu2_lo = ann_lo;   row.nu2_hi = full_hi;
        break;
      case PieceTag::I2:
        row.nu1_lo = ann_lo;   row.nu1_hi = full_hi;
        row.nu2_lo = 0.0;      row.nu2_hi = low_hi;
        break;
      case PieceTag::I3:
        row.nu1_lo = ann3_lo;  row.nu1_hi = full_hi;
        row.nu2_lo = ann3_lo;  row.nu2_hi = full_hi;
        break;
    }
    row.ok = row.nu1_len >= row.nu1_lo && row.nu1_len <= row.nu1_hi &&
             row.nu2_len >= row.nu2_lo && row.nu2_len <= row.nu2_hi;
    if (!row.ok || led.nu_audit.size() < 4096) led.nu_audit.push_back(row);
  }
  return led;
}

}  // namespace bilinpdo

#endif
