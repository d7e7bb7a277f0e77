#ifndef BILINPDO_SYMBOL_HPP
#define BILINPDO_SYMBOL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bilinpdo/fft.hpp"
#include "bilinpdo/grid.hpp"
#include "bilinpdo/partitions.hpp"
#include "bilinpdo/reduction.hpp"

namespace bilinpdo {

/// A three-slot symbol sigma(x, xi, eta). Lazy: dense sampling happens per
/// localized block on a block-fitted grid.
struct Symbol {
  std::function<cplx(const Point&, const Point&, const Point&)> eval_fn;
  int dim = 1;
  bool x_independent = true;
  double freq_support_radius = -1.0;  // < 0: unbounded
  std::string label;

  cplx operator()(const Point& x, const Point& xi, const Point& eta) const {
    return eval_fn(x, xi, eta);
  }
};

inline Symbol constant_symbol(cplx c, int dim = 1) {
  Symbol s;
  s.dim = dim;
  s.eval_fn = [c](const Point&, const Point&, const Point&) { return c; };
  s.label = "constant";
  return s;
}

template <class Fn>
Symbol multiplier_symbol(Fn&& fn, int dim = 1, double support_radius = -1.0,
                         std::string label = "multiplier") {
  Symbol s;
  s.dim = dim;
  s.x_independent = true;
  s.freq_support_radius = support_radius;
  s.label = std::move(label);
  s.eval_fn = [f = std::forward<Fn>(fn)](const Point&, const Point& xi,
                                         const Point& eta) {
    return cplx(f(xi, eta));
  };
  return s;
}

/// Dense samples of a localized symbol over (x, xi, eta). The xi and eta
/// slots share `vgrid`; x uses `xgrid` and is dropped for x-independent
/// symbols. Row-major layout: ((x) * vtot + xi) * vtot + eta.
struct SampledSymbol {
  int dim = 1;
  bool x_independent = true;
  int j = 0;
  double rho = 0.0;
  GridSpec xgrid;
  GridSpec vgrid;
  std::vector<cplx> v;

  std::size_t vtot() const { return vgrid.total(); }
  std::size_t xtot() const { return x_independent ? 1 : xgrid.total(); }
  std::size_t size() const { return xtot() * vtot() * vtot(); }

  std::vector<int> shape() const {
    std::vector<int> sh;
    if (!x_independent)
      for (int a = 0; a < dim; ++a) sh.push_back(xgrid.pts);
    for (int a = 0; a < 2 * dim; ++a) sh.push_back(vgrid.pts);
    return sh;
  }
};

namespace detail {

/// Applies a radial Fourier multiplier along one variable group of a
/// sampled symbol. Group 0 is x, 1 is xi, 2 is eta.
template <class Prof>
void group_multiplier(SampledSymbol& s, int group, const Prof& prof) {
  if (group == 0 && s.x_independent) {
    // constant in x: only the zero frequency is present
    double w = prof(0.0);
    for (auto& z : s.v) z *= w;
    return;
  }
  auto sh = s.shape();
  int x_axes = s.x_independent ? 0 : s.dim;
  int first = (group == 0) ? 0 : x_axes + (group - 1) * s.dim;
  const GridSpec& g = (group == 0) ? s.xgrid : s.vgrid;
  for (int a = 0; a < s.dim; ++a)
    fft_axis_shaped(s.v, sh, first + a, -1);
  // strides of the group axes
  std::vector<std::size_t> stride(sh.size(), 1);
  for (int d = static_cast<int>(sh.size()) - 2; d >= 0; --d)
    stride[d] = stride[d + 1] * static_cast<std::size_t>(sh[d + 1]);
  double fs = g.freq_step();
  int N = g.pts;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < s.dim; ++a) {
      int idx = static_cast<int>((i / stride[first + a]) %
                                 static_cast<std::size_t>(N));
      int k = idx <= N / 2 ? idx : idx - N;  // wrapped dual index
      double d = k * fs;
      r2 += d * d;
    }
    s.v[i] *= prof(std::sqrt(r2));
  }
  for (int a = 0; a < s.dim; ++a)
    fft_axis_shaped(s.v, sh, first + a, +1);
  double scale = std::pow(1.0 / N, s.dim);
  for (auto& z : s.v) z *= scale;
}

}  // namespace detail

/// Uniformly local L^2 over all sampled variables: sup over unit-cube
/// products of the cube-restricted L^2 mass. For x-independent symbols the
/// x factor contributes 1 per unit cube.
inline double sampled_ul2(const SampledSymbol& s) {
  if (!s.vgrid.integer_extent() ||
      (!s.x_independent && !s.xgrid.integer_extent()))
    throw std::invalid_argument("sampled_ul2: grids need integer extents");
  int vc = static_cast<int>(std::round(s.vgrid.extent));
  int xc = s.x_independent ? 1 : static_cast<int>(std::round(s.xgrid.extent));
  std::size_t ncubes = 1;
  for (int a = 0; a < (s.x_independent ? 0 : s.dim); ++a) ncubes *= xc;
  for (int a = 0; a < 2 * s.dim; ++a) ncubes *= vc;
  std::vector<double> mass(ncubes, 0.0);
  double w = std::pow(s.vgrid.step(), 2 * s.dim) *
             (s.x_independent ? 1.0 : std::pow(s.xgrid.step(), s.dim));

  std::size_t vtot = s.vtot();
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    std::size_t eta_i = i % vtot;
    std::size_t xi_i = (i / vtot) % vtot;
    std::size_t x_i = i / (vtot * vtot);
    std::size_t cid = 0;
    if (!s.x_independent) {
      Point px = s.xgrid.x_of(x_i);
      for (int a = 0; a < s.dim; ++a) {
        int c = static_cast<int>(std::floor(px[a] + s.xgrid.extent / 2));
        cid = cid * xc + static_cast<std::size_t>(std::clamp(c, 0, xc - 1));
      }
    }
    for (std::size_t part : {xi_i, eta_i}) {
      Point pv = s.vgrid.x_of(part);
      for (int a = 0; a < s.dim; ++a) {
        int c = static_cast<int>(std::floor(pv[a] + s.vgrid.extent / 2));
        cid = cid * vc + static_cast<std::size_t>(std::clamp(c, 0, vc - 1));
      }
    }
    mass[cid] += std::norm(s.v[i]) * w;
  }
  double m = 0.0;
  for (double c : mass) m = std::max(m, c);
  return std::sqrt(m);
}

inline double sampled_linf(const SampledSymbol& s) {
  double m = 0.0;
  for (const auto& z : s.v) m = std::max(m, std::abs(z));
  return m;
}

/// sigma_j^rho sampled on (xgrid, vgrid, vgrid):
///   sigma(2^{-j rho} x, 2^{j rho} xi, 2^{j rho} eta)
///     Psi_j(2^{j rho} xi, 2^{j rho} eta).
inline SampledSymbol localize(const Symbol& sigma, int j, double rho,
                              const LittlewoodPaley& lp2n,
                              const GridSpec& vgrid,
                              const GridSpec& xgrid = GridSpec(1, 8.0, 32)) {
  if (lp2n.ambient_dim != 2 * sigma.dim)
    throw std::invalid_argument("localize: family dimension mismatch");
  double scale = std::pow(2.0, j * rho);
  double shell_hi = lp2n.base.support * std::pow(2.0, j) / scale;
  if (sigma.freq_support_radius > 0.0)
    shell_hi = std::min(shell_hi, sigma.freq_support_radius / scale);
  if (vgrid.extent / 2 < shell_hi * (1.0 - 1e-12))
    throw std::invalid_argument("localize: grid too small for the shell");
  SampledSymbol out;
  out.dim = sigma.dim;
  out.x_independent = sigma.x_independent;
  out.j = j;
  out.rho = rho;
  out.xgrid = xgrid;
  out.vgrid = vgrid;
  out.v.resize(out.size());
  std::size_t vtot = out.vtot();
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    std::size_t eta_i = i % vtot;
    std::size_t xi_i = (i / vtot) % vtot;
    std::size_t x_i = i / (vtot * vtot);
    Point x = sigma.x_independent ? Point{0.0, 0.0} : xgrid.x_of(x_i);
    Point xi = vgrid.x_of(xi_i);
    Point eta = vgrid.x_of(eta_i);
    Point xs{x[0] / scale, x[1] / scale};
    Point xis{xi[0] * scale, xi[1] * scale};
    Point etas{eta[0] * scale, eta[1] * scale};
    double r2n = norm2_pair(xis, etas, sigma.dim);
    double weight = lp2n.piece(j, r2n);
    out.v[i] = weight == 0.0 ? cplx{} : sigma(xs, xis, etas) * weight;
  }
  return out;
}

/// One triple dyadic block Delta_k = psi_{k0}(D_x) psi_{k1}(D_xi)
/// psi_{k2}(D_eta) of a localized symbol, with its uniformly local L^2 and
/// sup norms.
struct LocalizedSymbolBlock {
  std::array<int, 3> k{0, 0, 0};
  SampledSymbol samples;
  double block_norm_ul2 = 0.0;
  double block_norm_linf = 0.0;
};

inline LocalizedSymbolBlock triple_block(const SampledSymbol& s,
                                         const std::array<int, 3>& k,
                                         const LittlewoodPaley& lp) {
  if (lp.ambient_dim != s.dim)
    throw std::invalid_argument("triple_block: family dimension mismatch");
  LocalizedSymbolBlock blk;
  blk.k = k;
  blk.samples = s;
  if (s.x_independent && k[0] >= 1) {
    // psi_{k0} vanishes at the origin: x-constant symbols have no such block
    for (auto& z : blk.samples.v) z = cplx{};
    return blk;
  }
  for (int group = 0; group < 3; ++group) {
    detail::group_multiplier(blk.samples, group, [&](double r) {
      return lp.piece(k[group], r);
    });
  }
  blk.block_norm_ul2 = sampled_ul2(blk.samples);
  blk.block_norm_linf = sampled_linf(blk.samples);
  return blk;
}

}  // namespace bilinpdo

#endif
