#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bilinpdo/field.hpp"
#include "bilinpdo/norms.hpp"
#include "bilinpdo/rng.hpp"

#include "bilinpdo/slope.hpp"
#include "bilinpdo/symbol.hpp"
#include "bilinpdo/symbol_norms.hpp"

using namespace bilinpdo;

namespace {

Symbol eps_family_symbol(double eps) {
  RadialBump uhat(0.5, 1.0);
  AnnularBump vhat(0.9, 0.95, 1.05, 1.1);
  return multiplier_symbol(
      [=](const Point& xi, const Point& eta) {
        return uhat(std::abs(xi[0]) / eps) * vhat(std::abs(eta[0]));
      },
      1, std::sqrt(eps * eps + 1.21), "eps-family");
}

}  // namespace

TEST(Localize, NarrowFamilyKeepsOnlyLevelZero) {
  auto lp2 = make_lp_narrow(2, 16, 0.05);
  Symbol sig = eps_family_symbol(1.0 / 64);
  GridSpec vg(1, 8.0, 64);
  for (int j = 0; j <= 4; ++j) {
    SampledSymbol loc = localize(sig, j, 0.25, lp2, vg);
    double peak = sampled_linf(loc);
    if (j == 0)
      EXPECT_GT(peak, 0.5);
    else
      EXPECT_LE(peak, 1e-13) << "j=" << j;
  }
}

TEST(Localize, ConstantSymbolReproducesPartitionPiece) {
  auto lp2 = make_lp(2, 16);
  Symbol one = constant_symbol(1.0);
  GridSpec vg(1, 32.0, 64);
  for (int j : {0, 2, 3}) {
    SampledSymbol loc = localize(one, j, 0.0, lp2, vg);
    double worst = 0.0;
    for (std::size_t i = 0; i < loc.v.size(); ++i) {
      std::size_t eta_i = i % loc.vtot();
      std::size_t xi_i = (i / loc.vtot()) % loc.vtot();
      double r = norm2_pair(vg.x_of(xi_i), vg.x_of(eta_i), 1);
      worst = std::max(worst, std::abs(loc.v[i] - cplx(lp2.piece(j, r))));
    }
    EXPECT_LE(worst, 1e-14) << "j=" << j;
  }
}

TEST(Localize, LevelsReassembleBandLimitedSymbol) {
  auto lp2 = make_lp(2, 16);
  Symbol sig = multiplier_symbol(
      [](const Point& xi, const Point& eta) {
        double r = std::sqrt(xi[0] * xi[0] + eta[0] * eta[0]);
        return std::exp(-r * r / 8.0) * (r <= 12.0 ? 1.0 : 0.0);
      },
      1, 12.0);
  GridSpec vg(1, 32.0, 64);
  SampledSymbol sum;
  for (int j = 0; j <= 5; ++j) {
    SampledSymbol loc = localize(sig, j, 0.0, lp2, vg);
    if (j == 0)
      sum = loc;
    else
      for (std::size_t i = 0; i < sum.v.size(); ++i) sum.v[i] += loc.v[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < sum.v.size(); ++i) {
    std::size_t eta_i = i % sum.vtot();
    std::size_t xi_i = (i / sum.vtot()) % sum.vtot();
    Point xi = vg.x_of(xi_i), eta = vg.x_of(eta_i);
    worst = std::max(worst,
                     std::abs(sum.v[i] - sig(Point{0, 0}, xi, eta)));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Localize, RejectsUndersizedGrid) {
  auto lp2 = make_lp(2, 16);
  Symbol one = constant_symbol(1.0);
  GridSpec vg(1, 8.0, 32);
  EXPECT_THROW(localize(one, 4, 0.0, lp2, vg), std::invalid_argument);
}

TEST(TripleBlock, XIndependentSymbolsHaveNoXBlocks) {
  auto lp2 = make_lp(2, 16);
  auto lp1 = make_lp(1, 16);
  Symbol sig = multiplier_symbol(
      [](const Point& xi, const Point& eta) {
        return std::exp(-(xi[0] * xi[0] + eta[0] * eta[0]) / 4.0);
      },
      1, -1.0);
  GridSpec vg(1, 16.0, 32);
  SampledSymbol loc = localize(sig, 1, 0.0, lp2, vg);
  for (int k0 : {1, 2}) {
    auto blk = triple_block(loc, {k0, 0, 0}, lp1);
    EXPECT_LE(blk.block_norm_ul2, 1e-12);
  }
}

TEST(TripleBlock, BlocksTelescopeBackToSymbol) {
  auto lp2 = make_lp(2, 16);
  auto lp1 = make_lp(1, 16);
  Rng rng(400);
  Symbol sig = multiplier_symbol(
      [&](const Point& xi, const Point& eta) {
        return std::cos(xi[0]) * std::exp(-(xi[0] * xi[0] + eta[0] * eta[0]) / 6.0);
      },
      1, -1.0);
  GridSpec vg(1, 16.0, 32);
  SampledSymbol loc = localize(sig, 2, 0.0, lp2, vg);
  int cap = static_cast<int>(std::ceil(std::log2(vg.nyquist()))) + 1;
  SampledSymbol sum = loc;
  for (auto& z : sum.v) z = cplx{};
  for (int k1 = 0; k1 <= cap; ++k1)
    for (int k2 = 0; k2 <= cap; ++k2) {
      auto blk = triple_block(loc, {0, k1, k2}, lp1);
      for (std::size_t i = 0; i < sum.v.size(); ++i)
        sum.v[i] += blk.samples.v[i];
    }
  double peak = sampled_linf(loc);
  double worst = 0.0;
  for (std::size_t i = 0; i < sum.v.size(); ++i)
    worst = std::max(worst, std::abs(sum.v[i] - loc.v[i]));
  EXPECT_LE(worst, 1e-10 * peak);
}

TEST(TripleBlock, SeparableBlockNormFactorizes) {
  auto lp1 = make_lp(1, 16);
  GridSpec xg(1, 8.0, 32);
  GridSpec vg(1, 16.0, 32);
  auto a = [](double x) { return std::exp(-x * x); };
  auto b = [](double t) { return std::cos(t) * std::exp(-t * t / 8.0); };
  auto c = [](double t) { return std::sin(t) * std::exp(-t * t / 10.0); };
  SampledSymbol s;
  s.dim = 1;
  s.x_independent = false;
  s.xgrid = xg;
  s.vgrid = vg;
  s.v.resize(s.size());
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    std::size_t eta_i = i % s.vtot();
    std::size_t xi_i = (i / s.vtot()) % s.vtot();
    std::size_t x_i = i / (s.vtot() * s.vtot());
    s.v[i] = a(xg.x_of(x_i)[0]) * b(vg.x_of(xi_i)[0]) * c(vg.x_of(eta_i)[0]);
  }
  std::array<int, 3> k{1, 2, 1};
  auto blk = triple_block(s, k, lp1);

  // one-variable route
  auto block_1d = [&](const GridSpec& g, auto fn, int kk) {
    Field f = make_field(g, Space::physical,
                         [&](const Point& p) { return cplx(fn(p[0]), 0.0); });
    Field blk1 = lp_block(lp1, kk, f);
    return ul2_norm(blk1).value;
  };
  double want = block_1d(xg, a, k[0]) * block_1d(vg, b, k[1]) *
                block_1d(vg, c, k[2]);
  EXPECT_NEAR(blk.block_norm_ul2, want, 1e-9 * want);
}

TEST(BsNorm, ZeroSymbolHasZeroNorm) {
  Symbol zero = constant_symbol(0.0);
  zero.freq_support_radius = 4.0;
  BsTruncation tr;
  tr.v_pts = 16;
  auto res = bs_norm(zero, -0.5, 0.0, {0.5, 0.5, 0.5}, BsVariant::plain, tr);
  EXPECT_DOUBLE_EQ(res.report.value, 0.0);
}

TEST(BsNorm, RejectsUnboundedSymbolWithoutJmax) {
  Symbol sig = constant_symbol(1.0);
  BsTruncation tr;
  EXPECT_THROW(bs_norm(sig, 0.0, 0.0, {0, 0, 0}, BsVariant::plain, tr),
               std::invalid_argument);
}

// Independent direct-summation oracle on a tiny symbol: brute-force DFTs,
// hand-rolled cube binning, no truncation.
TEST(BsNorm, TinySymbolMatchesDirectOracle) {
  auto lp2 = make_lp(2, 16);
  auto lp1 = make_lp(1, 16);
  Symbol sig = multiplier_symbol(
      [](const Point& xi, const Point& eta) {
        double r2 = xi[0] * xi[0] + eta[0] * eta[0];
        return std::exp(-r2 / 2.0);
      },
      1, -1.0);
  double m = -0.3, rho = 0.0;
  std::array<double, 3> s{0.4, 0.6, 0.2};
  BsTruncation tr;
  tr.j_max = 2;
  tr.v_pts = 16;
  auto res = bs_norm(sig, m, rho, s, BsVariant::plain, tr, lp2, lp1);

  // oracle
  const int N = 16;
  const double E = 16.0;  // must match bs_block_grid for j <= 2
  double sup_j = 0.0;
  for (int j = 0; j <= 2; ++j) {
    double ebox = 8.0;
    while (ebox / 2 < 2.0 * std::pow(2.0, j)) ebox *= 2.0;
    int cap = static_cast<int>(
        std::ceil(std::log2(kPi * N / ebox * std::sqrt(1.0))));
    std::vector<cplx> loc(N * N);
    auto coord = [&](int i) { return -ebox / 2 + i * (ebox / N); };
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        double r = std::sqrt(coord(a) * coord(a) + coord(b) * coord(b));
        loc[a * N + b] = sig(Point{0, 0}, Point{coord(a), 0},
                             Point{coord(b), 0}) *
                         lp2.piece(j, r);
      }
    double j_total = 0.0;
    for (int k1 = 0; k1 <= cap; ++k1)
      for (int k2 = 0; k2 <= cap; ++k2) {
        // brute-force 2-d block via direct DFT sums per axis
        std::vector<cplx> blk = loc;
        for (int axis = 0; axis < 2; ++axis) {
          std::vector<cplx> next(N * N, cplx{});
          for (int out = 0; out < N; ++out) {
            for (int dual = 0; dual < N; ++dual) {
              int kw = dual <= N / 2 ? dual : dual - N;
              double y = kw * kTwoPi / ebox;
              double w = lp1.piece(axis == 0 ? k1 : k2, std::abs(y));
              if (w == 0.0) continue;
              for (int in = 0; in < N; ++in) {
                cplx ph = std::polar(1.0, kTwoPi * dual * (out - in) / N);
                for (int other = 0; other < N; ++other) {
                  std::size_t oi = axis == 0 ? out * N + other : other * N + out;
                  std::size_t ii = axis == 0 ? in * N + other : other * N + in;
                  next[oi] += blk[ii] * ph * w / static_cast<double>(N);
                }
              }
            }
          }
          blk = next;
        }
        // cube binning by hand
        int cubes = static_cast<int>(ebox);
        std::vector<double> mass(cubes * cubes, 0.0);
        double wcell = (ebox / N) * (ebox / N);
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) {
            int ca = static_cast<int>(std::floor(coord(a) + ebox / 2));
            int cb = static_cast<int>(std::floor(coord(b) + ebox / 2));
            mass[ca * cubes + cb] += std::norm(blk[a * N + b]) * wcell;
          }
        double ul2 = 0.0;
        for (double mm : mass) ul2 = std::max(ul2, mm);
        ul2 = std::sqrt(ul2);
        j_total += std::pow(2.0, -j * m + k1 * s[1] + k2 * s[2]) * ul2;
      }
    sup_j = std::max(sup_j, j_total);
  }
  (void)E;
  EXPECT_NEAR(res.report.value, sup_j, 1e-9 * sup_j);
}

TEST(BsNorm, PlainNeverExceedsStar) {
  auto lp2 = make_lp(2, 16);
  auto lp1 = make_lp(1, 16);
  Rng rng(401);
  for (int trial = 0; trial < 3; ++trial) {
    double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 3.0);
    Symbol sig = multiplier_symbol(
        [=](const Point& xi, const Point& eta) {
          double r2 = xi[0] * xi[0] + eta[0] * eta[0];
          return std::cos(a * xi[0] + b * eta[0]) * std::exp(-r2 / 9.0);
        },
        1, -1.0);
    BsTruncation tr;
    tr.j_max = 3;
    tr.v_pts = 32;
    auto tensor = compute_block_tensor(sig, 0.5, tr, lp2, lp1);
    std::array<double, 3> s{0.6, 0.5, 0.5};
    double plain = aggregate_bs(tensor, -0.25, s, BsVariant::plain);
    double star = aggregate_bs(tensor, -0.25, s, BsVariant::star);
    EXPECT_LE(plain, star * (1.0 + 1e-12));
  }
}

TEST(BsNorm, AbsolutelyHomogeneous) {
  Symbol sig = multiplier_symbol(
      [](const Point& xi, const Point& eta) {
        return std::exp(-(xi[0] * xi[0] + eta[0] * eta[0]) / 4.0);
      },
      1, -1.0);
  Symbol scaled = sig;
  cplx alpha(0.3, 1.7);
  scaled.eval_fn = [s = sig.eval_fn, alpha](const Point& x, const Point& xi,
                                            const Point& eta) {
    return alpha * s(x, xi, eta);
  };
  BsTruncation tr;
  tr.j_max = 2;
  tr.v_pts = 16;
  for (auto variant : {BsVariant::plain, BsVariant::star, BsVariant::dagger}) {
    double v0 = bs_norm(sig, -0.5, 0.0, {0.5, 0.5, 0.5}, variant, tr)
                    .report.value;
    double v1 = bs_norm(scaled, -0.5, 0.0, {0.5, 0.5, 0.5}, variant, tr)
                    .report.value;
    EXPECT_NEAR(v1, std::abs(alpha) * v0, 1e-12 * v1);
  }
}

// Plain norm of the eps-family scales like eps^{1/2 - s1}; the separable
// structure lets the two frequency slots be handled by one-variable fields.
TEST(BsNorm, EpsFamilySlopeMatchesTheory) {
  auto lp1 = make_lp(1, 40);
  GridSpec g(1, 16.0, 1 << 15);
  RadialBump uhat(0.5, 1.0);
  AnnularBump vhat(0.9, 0.95, 1.05, 1.1);
  Field vfield = make_field(g, Space::physical, [&](const Point& t) {
    return cplx(vhat(std::abs(t[0])), 0.0);
  });
  auto besov_ul2_sum = [&](const Field& f, double s) {
    double total = 0.0;
    int cap = static_cast<int>(std::ceil(std::log2(g.nyquist()))) + 1;
    for (int k = 0; k <= cap; ++k) {
      double bn = ul2_norm(lp_block(lp1, k, f)).value;
      total += std::pow(2.0, k * s) * bn;
    }
    return total;
  };
  for (double s1 : {0.0, 0.25, 0.5}) {
    double vfac = besov_ul2_sum(vfield, 0.5);
    std::vector<double> eps_list, norms;
    for (int e = 2; e <= 6; ++e) {
      double eps = std::pow(2.0, -e);
      Field ufield = make_field(g, Space::physical, [&](const Point& t) {
        return cplx(uhat(std::abs(t[0]) / eps), 0.0);
      });
      eps_list.push_back(eps);
      norms.push_back(besov_ul2_sum(ufield, s1) * vfac);
    }
    double slope = fit_loglog_slope(eps_list, norms);
    EXPECT_NEAR(slope, 0.5 - s1, 0.1) << "s1=" << s1;
  }
}

TEST(DecayCheck, SuiteSymbolSlopes) {
  double rho = 0.5, m = -0.5;
  Symbol sig = multiplier_symbol(
      [=](const Point& xi, const Point& eta) {
        return std::pow(1.0 + xi[0] * xi[0] + eta[0] * eta[0], m / 2.0);
      },
      1, -1.0, "hormander-suite");
  auto rep = hormander_decay_check(sig, m, rho, {2, 2, 2});
  EXPECT_NEAR(rep.j_slope, m, 0.15);
  EXPECT_TRUE(rep.k_axis_all_zero[0]);  // x-independent
  EXPECT_LE(rep.k_slopes[1], -1.5);
  EXPECT_LE(rep.k_slopes[2], -1.5);
}

TEST(DecayCheck, ConstantScalingLeavesSlopesAlone) {
  double rho = 0.5, m = -0.5;
  auto base_fn = [=](const Point& xi, const Point& eta) {
    return std::pow(1.0 + xi[0] * xi[0] + eta[0] * eta[0], m / 2.0);
  };
  Symbol sig = multiplier_symbol(base_fn, 1, -1.0);
  Symbol scaled = multiplier_symbol(
      [=](const Point& xi, const Point& eta) { return 32.0 * base_fn(xi, eta); },
      1, -1.0);
  auto r0 = hormander_decay_check(sig, m, rho, {2, 2, 2}, 2, 6);
  auto r1 = hormander_decay_check(scaled, m, rho, {2, 2, 2}, 2, 6);
  EXPECT_NEAR(r0.j_slope, r1.j_slope, 1e-9);
  EXPECT_NEAR(r0.k_slopes[1], r1.k_slopes[1], 1e-9);
}

TEST(DecayCheck, DegenerateFitIsAnError) {
  Symbol sig = multiplier_symbol(
      [](const Point& xi, const Point& eta) {
        return std::exp(-(xi[0] * xi[0] + eta[0] * eta[0]));
      },
      1, -1.0);
  EXPECT_THROW(hormander_decay_check(sig, -0.5, 0.5, {2, 2, 2}, 2, 8, 2),
               std::runtime_error);
}

// sup_k 2^{k.s} sup-norm blocks of a product are controlled by the product
// of the factors' seminorms.
TEST(DaggerSeminorm, ProductInequality) {
  auto lp1 = make_lp(1, 16);
  Rng rng(402);
  GridSpec vg(1, 16.0, 32);
  auto dagger2 = [&](const SampledSymbol& s, double s1, double s2) {
    int cap = static_cast<int>(std::ceil(std::log2(vg.nyquist()))) + 1;
    double v = 0.0;
    for (int k1 = 0; k1 <= cap; ++k1)
      for (int k2 = 0; k2 <= cap; ++k2) {
        auto blk = triple_block(s, {0, k1, k2}, lp1);
        v = std::max(v, std::pow(2.0, k1 * s1 + k2 * s2) *
                            blk.block_norm_linf);
      }
    return v;
  };
  auto sample = [&](auto fn) {
    SampledSymbol s;
    s.dim = 1;
    s.x_independent = true;
    s.vgrid = vg;
    s.v.resize(s.size());
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      std::size_t eta_i = i % s.vtot();
      std::size_t xi_i = (i / s.vtot()) % s.vtot();
      s.v[i] = fn(vg.x_of(xi_i)[0], vg.x_of(eta_i)[0]);
    }
    return s;
  };
  for (int trial = 0; trial < 3; ++trial) {
    double a = rng.uniform(0.3, 1.5), b = rng.uniform(0.3, 1.5);
    auto f1 = sample([&](double xi, double eta) {
      return cplx(std::cos(a * xi) * std::exp(-(xi * xi + eta * eta) / 16.0));
    });
    auto f2 = sample([&](double xi, double eta) {
      return cplx(std::sin(b * eta) * std::exp(-(xi * xi + eta * eta) / 20.0));
    });
    SampledSymbol prod = f1;
    for (std::size_t i = 0; i < prod.v.size(); ++i) prod.v[i] *= f2.v[i];
    double s1 = 0.7, s2 = 0.7;
    double lhs = dagger2(prod, s1, s2);
    double rhs = dagger2(f1, s1, s2) * dagger2(f2, s1, s2);
    EXPECT_LE(lhs, 32.0 * rhs);
  }
}

TEST(DaggerSeminorm, DilationInequality) {
  auto lp1 = make_lp(1, 16);
  GridSpec vg(1, 32.0, 64);
  auto fn = [](double xi, double eta) {
    return cplx(std::exp(-(xi * xi + 2.0 * eta * eta) / 6.0) *
                std::cos(xi + 0.5 * eta));
  };
  auto dagger2 = [&](auto g, double s1, double s2) {
    SampledSymbol s;
    s.dim = 1;
    s.x_independent = true;
    s.vgrid = vg;
    s.v.resize(s.size());
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      std::size_t eta_i = i % s.vtot();
      std::size_t xi_i = (i / s.vtot()) % s.vtot();
      s.v[i] = g(vg.x_of(xi_i)[0], vg.x_of(eta_i)[0]);
    }
    int cap = static_cast<int>(std::ceil(std::log2(vg.nyquist()))) + 1;
    double v = 0.0;
    for (int k1 = 0; k1 <= cap; ++k1)
      for (int k2 = 0; k2 <= cap; ++k2) {
        auto blk = triple_block(s, {0, k1, k2}, lp1);
        v = std::max(v, std::pow(2.0, k1 * s1 + k2 * s2) *
                            blk.block_norm_linf);
      }
    return v;
  };
  double s1 = 0.6, s2 = 0.8;
  double base = dagger2(fn, s1, s2);
  for (double l1 : {0.5, 1.0, 2.0, 4.0}) {
    for (double l2 : {0.5, 2.0}) {
      double got = dagger2(
          [&](double xi, double eta) { return fn(l1 * xi, l2 * eta); }, s1,
          s2);
      double bound = std::max(1.0, std::pow(l1, s1)) *
                     std::max(1.0, std::pow(l2, s2)) * base;
      EXPECT_LE(got, 16.0 * bound) << "l1=" << l1 << " l2=" << l2;
    }
  }
}
