#ifndef BILINPDO_ACCEPTANCE_HPP
#define BILINPDO_ACCEPTANCE_HPP

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "bilinpdo/bilinear.hpp"
#include "bilinpdo/decompose.hpp"
#include "bilinpdo/norms.hpp"
#include "bilinpdo/partitions.hpp"
#include "bilinpdo/probe.hpp"
#include "bilinpdo/rng.hpp"
#include "bilinpdo/sharpness.hpp"
#include "bilinpdo/slope.hpp"
#include "bilinpdo/smoothing.hpp"
#include "bilinpdo/symbol_norms.hpp"

namespace bilinpdo {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string module;
  bool pass = false;
  std::string detail;  // governing tolerance and the measured value
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string filter;              // substring of the module name
  bool corrupt_partitions = false; // negative-path injection for selftest
  std::uint64_t seed = 2024;
};

namespace detail_acc {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

template <class Fn>
void run_criterion(std::vector<CriterionResult>& out, int id,
                   const std::string& name, const std::string& module,
                   const AcceptanceOptions& opt, Fn&& fn) {
  if (!opt.filter.empty() && module.find(opt.filter) == std::string::npos)
    return;
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.module = module;
  auto t0 = std::chrono::steady_clock::now();
  try {
    fn(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
  out.push_back(std::move(r));
}

// --- criterion bodies ------------------------------------------------

inline void c1_dft_oracle(CriterionResult& r, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    int N = (trial % 3 == 0) ? 16 : (trial % 3 == 1) ? 32 : 64;
    GridSpec g(1, 8.0, N);
    Field f(g, Space::physical);
    for (auto& z : f.v) z = rng.cgauss();
    Field fast = dft(f);
    Field slow(g, Space::frequency);
    double w = g.step();
    for (std::size_t k = 0; k < slow.size(); ++k) {
      double xi = g.xi_of(k)[0];
      CplxAccum acc;
      for (std::size_t j = 0; j < f.size(); ++j)
        acc.add(f.v[j] * std::polar(1.0, -g.x_of(j)[0] * xi));
      slow.v[k] = acc.value() * w;
    }
    worst = std::max(worst, max_abs_diff(fast, slow) / max_abs(slow));
  }
  r.pass = worst <= 1e-10;
  r.detail = "max rel err " + fmt(worst) + " (tol 1e-10, 20 fields)";
}

inline void c2_partition_identity(CriterionResult& r, std::uint64_t seed) {
  Rng rng(seed + 1);
  double worst = 0.0;
  for (int dim : {1, 2}) {
    auto lp = make_lp(dim, 10);
    for (int t = 0; t < 10000; ++t) {
      Point xi{rng.uniform(-40.0, 40.0),
               dim == 2 ? rng.uniform(-40.0, 40.0) : 0.0};
      double rad = norm2(xi, dim);
      int K = lp.cover_index(rad) + 1;
      if (K > lp.k_max) continue;
      worst = std::max(worst, std::abs(lp.partial_sum(K, rad) - 1.0));
    }
  }
  r.pass = worst <= 1e-12;
  r.detail = "max residual " + fmt(worst) + " (tol 1e-12, n in {1,2})";
}

inline void c3_uniform_pair(CriterionResult& r, std::uint64_t seed) {
  Rng rng(seed + 2);
  double worst = 0.0;
  for (int dim : {1, 2}) {
    UniformPair up(dim);
    int trials = dim == 1 ? 10000 : 2000;
    for (int t = 0; t < trials; ++t) {
      Point xi{rng.uniform(-30.0, 30.0),
               dim == 2 ? rng.uniform(-30.0, 30.0) : 0.0};
      worst = std::max(worst, std::abs(up.partition_sum(xi) - 1.0));
    }
  }
  bool side = true;
  UniformPair up1(1);
  side = side && up1.kappa(Point{1.25, 0.0}) == 0.0;
  double chi_min = kInf;
  for (int i = 0; i <= 64; ++i)
    chi_min = std::min(chi_min, up1.chi1(-1.0 + 2.0 * i / 64));
  side = side && chi_min > 0.0;
  {
    GridSpec g(1, UniformPair::kPeriod, 4096);
    Field chi = make_field(g, Space::physical, [&](const Point& x) {
      return cplx(up1.chi1(x[0]), 0.0);
    });
    Field spec = dft(chi);
    double peak = max_abs(spec), leak = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
      if (std::abs(g.xi_of(i)[0]) > 1.0)
        leak = std::max(leak, std::abs(spec.v[i]));
    side = side && leak <= 1e-10 * peak;
  }
  r.pass = worst <= 1e-8 && side;
  r.detail = "max deviation " + fmt(worst) +
             " (tol 1e-8); support/positivity/band-limit " +
             (side ? "ok" : "VIOLATED");
}

inline void c4_appendix_split(CriterionResult& r, bool corrupt) {
  auto lp2 = make_lp(2, 16);
  auto split = make_appendix_split(lp2);
  double worst = 0.0;
  for (int j = 1; j <= 6; ++j) {
    double R = std::ldexp(1.0, j + 1) * 1.05;
    const int M = 256;
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) {
        double xi = -R + 2 * R * a / M;
        double eta = -R + 2 * R * b / M;
        double Psi = lp2.piece(j, std::hypot(xi, eta));
        double fp = corrupt ? 1.02 : 1.0;  // injected profile corruption
        double rhs =
            Psi * split.phi_prime_j(j, xi) * split.psi_prime_j(j, eta) * fp +
            Psi * split.psi_prime_j(j, xi) * split.phi_prime_j(j, eta) +
            Psi * split.psi_dprime_j(j, xi) * split.psi_dprime_j(j, eta);
        worst = std::max(worst, std::abs(Psi - rhs));
      }
  }
  bool boxes = split.phi_prime(std::exp2(-5.0) * 1.001) == 0.0 &&
               split.psi_prime(std::exp2(-4.0) * 0.999) == 0.0 &&
               split.psi_prime(4.001) == 0.0 &&
               split.psi_dprime(std::exp2(-6.0) * 0.999) == 0.0 &&
               split.psi_dprime(4.001) == 0.0;
  r.pass = worst <= 1e-12 && boxes;
  r.detail = "max residual " + fmt(worst) + " (tol 1e-12, j in 1..6); boxes " +
             (boxes ? "ok" : "VIOLATED");
}

inline void c5_operator_laws(CriterionResult& r, std::uint64_t seed) {
  Rng rng(seed + 3);
  double worst_triv = 0.0;
  {
    GridSpec g(1, 8.0, 128);
    Field f = random_band_limited(g, 20.0, rng);
    Field h = random_band_limited(g, 20.0, rng);
    Field got = apply(constant_symbol(1.0), f, h);
    worst_triv = std::max(
        worst_triv, max_abs_diff(got, pointwise(f, h)) / max_abs(got));
    auto m1 = [](double rr) { return 1.0 / (1.0 + rr * rr); };
    auto m2 = [](double rr) { return std::exp(-rr * rr / 50.0); };
    Symbol sep = multiplier_symbol(
        [&](const Point& xi, const Point& eta) {
          return m1(std::abs(xi[0])) * m2(std::abs(eta[0]));
        },
        1, -1.0);
    Field got2 = apply(sep, f, h);
    Field want2 = pointwise(
        multiplier_apply([&](const Point& xi) { return m1(std::abs(xi[0])); },
                         f),
        multiplier_apply([&](const Point& xi) { return m2(std::abs(xi[0])); },
                         h));
    worst_triv =
        std::max(worst_triv, max_abs_diff(got2, want2) / max_abs(want2));
  }
  double worst_eps = 0.0;
  {
    double eps = 0.125, p = 2.0, q = 2.0;
    GridSpec g(1, 4096.0, 8192);
    RadialBump uhat(0.5, 1.0);
    AnnularBump vhat(0.75, 0.86, 1.14, 1.25);  // plateau covers supp ghat
    Symbol sig = multiplier_symbol(
        [&](const Point& xi, const Point& eta) {
          return uhat(std::abs(xi[0]) / eps) * vhat(std::abs(eta[0]));
        },
        1, 2.0);
    Field fh(g, Space::frequency), gh(g, Space::frequency);
    for (std::size_t i = 0; i < fh.size(); ++i) {
      double xi = g.xi_of(i)[0];
      fh.v[i] = std::pow(eps, 1.0 / p - 1.0) * uhat(std::abs(xi) / eps);
      gh.v[i] =
          std::pow(eps, 1.0 / q - 1.0) * uhat(std::abs(xi - 1.0) / eps);
    }
    Field got = apply(sig, idft(fh), idft(gh));
    auto quad = [&](double y, bool square) {
      const int M = 1024;
      double acc = 0.0, dxi = 2.0 / M;
      for (int m = 0; m < M; ++m) {
        double xi = -1.0 + (m + 0.5) * dxi;
        double w = uhat(std::abs(xi));
        acc += (square ? w * w : w) * std::cos(y * xi);
      }
      return acc * dxi / kTwoPi;
    };
    for (std::size_t i = 0; i < got.size(); i += 17) {
      double x = g.x_of(i)[0];
      cplx want = std::pow(eps, 1.0 / p + 1.0 / q) * quad(eps * x, true) *
                  std::polar(1.0, x) * quad(eps * x, false);
      worst_eps = std::max(worst_eps, std::abs(got.v[i] - want));
    }
  }
  r.pass = worst_triv <= 1e-9 && worst_eps <= 1e-8;
  r.detail = "trivial laws " + fmt(worst_triv) +
             " (tol 1e-9); closed form at eps=1/8 " + fmt(worst_eps) +
             " (tol 1e-8)";
}

inline void c6_decompose(CriterionResult& r, std::uint64_t seed) {
  LittlewoodPaley lp2 = make_lp(2, 24);
  AppendixSplit split = make_appendix_split(lp2);
  UniformPair up(1);
  LittlewoodPaley lp1 = make_lp(1, 24);
  Rng rng(seed + 4);
  double worst = 0.0;
  bool audits = true;
  for (int j0 : {3, 5, 7}) {
    for (double rho : {0.0, 0.5}) {
      GridSpec g(1, 2.0, 256);
      Symbol sig = multiplier_symbol(
          [&lp2, j0](const Point& xi, const Point& eta) {
            return lp2.piece(j0, std::hypot(xi[0], eta[0]));
          },
          1, lp2.base.support * std::pow(2.0, j0), "shell");
      Field f = random_band_limited(g, 0.9 * g.nyquist(), rng);
      Field gg = random_band_limited(g, 0.9 * g.nyquist(), rng);
      Field h = random_band_limited(g, 0.9 * g.nyquist(), rng);
      DecomposeOptions opt;
      opt.split_threshold = 1;
      auto led = decompose(sig, f, gg, h, rho, lp2, split, up, lp1, opt);
      worst = std::max(worst,
                       std::abs(led.parts_total() - led.direct_value) /
                           std::abs(led.direct_value));
      audits = audits && led.audit_passed();
    }
  }
  r.pass = worst <= 1e-6 && audits;
  r.detail = "max |sum parts - direct|/|direct| " + fmt(worst) +
             " (tol 1e-6, j0 in {3,5,7}, rho in {0, 1/2}); nu audits " +
             (audits ? "pass" : "FAIL");
}

inline void c7_decay_signature(CriterionResult& r) {
  double rho = 0.5, m = -(1.0 - rho) * 0.5;  // n = 1
  Symbol sig = multiplier_symbol(
      [m](const Point& xi, const Point& eta) {
        return std::pow(1.0 + xi[0] * xi[0] + eta[0] * eta[0], m / 2.0);
      },
      1, -1.0, "suite");
  auto rep = hormander_decay_check(sig, m, rho, {2, 2, 2});
  bool jok = std::abs(rep.j_slope - m) <= 0.15;
  bool kok = rep.k_axis_all_zero[0] && rep.k_slopes[1] <= -1.5 &&
             rep.k_slopes[2] <= -1.5;
  r.pass = jok && kok;
  r.detail = "j-slope " + fmt(rep.j_slope) + " (target " + fmt(m) +
             " +-0.15); k-slopes " + fmt(rep.k_slopes[1]) + ", " +
             fmt(rep.k_slopes[2]) + " (<= -1.5); x-axis all-zero " +
             (rep.k_axis_all_zero[0] ? "yes" : "NO");
}

inline void c8_square_function_scaling(CriterionResult& r,
                                       std::uint64_t seed) {
  Rng rng(seed + 5);
  GridSpec g(1, 8.0, 256);
  Field f = random_band_limited(g, 30.0, rng);
  RadialBump window(1.0, 2.0);
  bool ok = true;
  std::string detail;
  for (double p : {2.0, 4.0, kInf}) {
    std::vector<double> Rs, vals;
    for (double R : {1.0, 2.0, 4.0, 8.0}) {
      auto rep = square_function(
          f, R, [&](double rr) { return window(rr); }, false, p);
      Rs.push_back(R);
      vals.push_back(rep.value);
    }
    double slope = fit_loglog_slope(Rs, vals);
    ok = ok && std::abs(slope - 0.5) <= 0.2;
    detail += fmt(slope) + " ";
  }
  r.pass = ok;
  r.detail = "value-vs-R slopes (p = 2, 4, inf): " + detail +
             "(target 0.5 +- 0.2)";
}

inline void c9_boundedness_shadow(CriterionResult& r, std::uint64_t seed) {
  const int j_hi = 8, trials = 50;
  LittlewoodPaley lp2 = make_lp(2, 64);
  LittlewoodPaley lp1 = make_lp(1, 64);
  GridSpec g(1, 2.0, 1024);
  Rng rng(seed + 6);
  std::vector<double> js, mh1, ml2, ml1;
  for (int j = 0; j <= j_hi; ++j) {
    Symbol shell = multiplier_symbol(
        [&lp2, j](const Point& xi, const Point& eta) {
          return lp2.piece(j, std::hypot(xi[0], eta[0]));
        },
        1, lp2.base.support * std::pow(2.0, j), "shell");
    BsTruncation tr;
    tr.v_pts = 512;
    auto tensor = compute_block_tensor(shell, 0.0, tr, lp2, lp1);
    double m = -0.5;  // -(1-rho) n/2 at rho = 0, n = 1
    double norm_eps = aggregate_bs(tensor, m, {0.6, 0.5, 0.5}, BsVariant::star);
    double norm_crit = aggregate_bs(tensor, m, {0.5, 0.5, 0.5}, BsVariant::star);
    double band = std::min(0.9 * g.nyquist(),
                           lp2.base.support * std::pow(2.0, j) * 1.1);
    std::vector<double> rh1, rl2, rl1;
    for (int t = 0; t < trials; ++t) {
      Field f = random_band_limited(g, band, rng);
      Field gg = random_band_limited(g, band, rng);
      double l2f = lp_norm(f, 2.0).value;
      double l2g = lp_norm(gg, 2.0).value;
      double bmog = bmo_norms(gg).first.value;
      if (l2f == 0.0 || l2g == 0.0 || bmog == 0.0) continue;
      Field tf = apply(shell, f, gg);
      rh1.push_back(h1_norm(tf).value / (norm_eps * l2f * l2g));
      rl2.push_back(lp_norm(tf, 2.0).value / (norm_eps * l2f * bmog));
      rl1.push_back(lp_norm(tf, 1.0).value / (norm_crit * l2f * l2g));
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    js.push_back(j);
    mh1.push_back(median(rh1));
    ml2.push_back(median(rl2));
    ml1.push_back(median(rl1));
  }
  double s1 = fit_slope(js, [&] {
    std::vector<double> l;
    for (double v : mh1) l.push_back(std::log2(v));
    return l;
  }());
  double s2 = fit_slope(js, [&] {
    std::vector<double> l;
    for (double v : ml2) l.push_back(std::log2(v));
    return l;
  }());
  double s3 = fit_slope(js, [&] {
    std::vector<double> l;
    for (double v : ml1) l.push_back(std::log2(v));
    return l;
  }());
  r.pass = std::abs(s1) <= 0.05 && std::abs(s2) <= 0.05 && std::abs(s3) <= 0.05;
  bool no_growth = s1 <= 0.05 && s2 <= 0.05 && s3 <= 0.05;
  r.detail = "ratio trend slopes vs j: h1 " + fmt(s1) + ", L2 " + fmt(s2) +
             ", L1 " + fmt(s3) + " (|slope| <= 0.05); no-growth side " +
             (no_growth ? "holds" : "VIOLATED") +
             "; negative slopes reflect class-norm growth the generic "
             "random probe cannot saturate";
}

inline void c10_eps_slope(CriterionResult& r) {
  bool ok = true;
  std::string detail;
  for (double s1 : {0.0, 0.25, 0.5}) {
    std::vector<double> eps, ratio;
    for (int e = 6; e <= 10; ++e) {
      auto row = family_s12(std::pow(2.0, -e), 2.0, 2.0, 1.0, s1);
      eps.push_back(row.eps);
      ratio.push_back(row.ratio);
    }
    double slope = fit_loglog_slope(eps, ratio);
    ok = ok && std::abs(slope - (s1 - 0.5)) <= 0.1;
    detail += fmt(slope) + " ";
  }
  r.pass = ok;
  r.detail = "ratio slopes (s1 = 0, 0.25, 0.5): " + detail +
             "(targets -0.5, -0.25, 0 +- 0.1)";
}

inline void c11_wainger_threshold(CriterionResult& r) {
  double a = 0.5, p = 4.0;
  double thr = 1.0 - a / 2 - 1.0 / p + a / p;
  std::vector<double> above;
  for (int e = 6; e <= 10; ++e)
    above.push_back(wainger(a, thr + 0.1, std::pow(2.0, -e), p).norm.value);
  double lo = kInf, hi = 0.0;
  bool shrinking = true;
  for (double v : above) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (std::size_t i = 2; i < above.size(); ++i)
    shrinking =
        shrinking && (above[i] - above[i - 1] <= above[i - 1] - above[i - 2]);
  bool bounded = hi / lo <= 2.0 && shrinking;
  double early = wainger(a, thr - 0.2, std::pow(2.0, -2), p).norm.value;
  double late = wainger(a, thr - 0.2, std::pow(2.0, -10), p).norm.value;
  bool divergent = late >= 2.0 * early;
  r.pass = bounded && divergent;
  r.detail = "above threshold: spread " + fmt(hi / lo) +
             " (<= 2, saturating); below: growth " + fmt(late / early) +
             " (>= 2)";
}

inline void c12_s0_construction(CriterionResult& r) {
  double b = 0.725, m = -0.5;
  double worst_match = 0.0;
  for (double t : {2.0, 1.5}) {
    auto row = family_s0(0.5, 0.6, b, b, m, 0.5, t, 1.0, true);
    worst_match = std::max(
        worst_match, std::abs(row.t_norm_numeric / row.t_norm_closed - 1.0));
  }
  double s0_stable = m - 2 * b + 1.0 + 3.0;
  std::vector<double> stable;
  for (int e = 6; e <= 10; e += 2)
    stable.push_back(
        family_s0(0.5, 0.6, b, b, m, s0_stable, std::pow(2.0, -e)).closed_sum);
  double lo = kInf, hi = 0.0;
  for (double v : stable) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool stable_ok = hi / lo <= 1.10;
  double s0_div = m - 2 * b + 1.0 + 0.8;
  double early =
      family_s0(0.5, 0.6, b, b, m, s0_div, std::pow(2.0, -4)).closed_sum;
  double late =
      family_s0(0.5, 0.6, b, b, m, s0_div, std::pow(2.0, -10)).closed_sum;
  bool div_ok = late >= 2.0 * early;

  double rho = 0.5, m_prime = -0.25, m_rho = -0.5;
  Symbol sig = multiplier_symbol(
      [m_prime](const Point& xi, const Point& eta) {
        return std::pow(1.0 + xi[0] * xi[0] + eta[0] * eta[0], m_prime / 2.0);
      },
      1, -1.0);
  auto rows = dilation_transfer(sig, m_rho, m_prime, rho, {0.5, 0.5, 0.5},
                                {1, 2, 3, 4, 5, 6});
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    xs.push_back(row.ell);
    ys.push_back(std::log2(row.ratio));
  }
  double slope = fit_slope(xs, ys);
  bool slope_ok = slope <= (m_prime - m_rho / (1.0 - rho)) + 0.15;

  r.pass = worst_match <= 1e-6 && stable_ok && div_ok && slope_ok;
  r.detail = "closed-form match " + fmt(worst_match) +
             " (tol 1e-6); t-sweep stable x" + fmt(hi / lo) +
             ", divergent x" + fmt(late / early) + "; transfer slope " +
             fmt(slope) + " (<= " + fmt(m_prime - m_rho / (1.0 - rho) + 0.15) +
             ")";
}

}  // namespace detail_acc

/// Runs the acceptance suite (optionally filtered by module substring) and
/// returns one result per criterion.
inline std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opt = {}) {
  using namespace detail_acc;
  std::vector<CriterionResult> out;
  run_criterion(out, 1, "dft-oracle-equivalence", "field_core", opt,
                [&](CriterionResult& r) { c1_dft_oracle(r, opt.seed); });
  run_criterion(out, 2, "partition-identity", "partitions", opt,
                [&](CriterionResult& r) { c2_partition_identity(r, opt.seed); });
  run_criterion(out, 3, "uniform-window-identity", "partitions", opt,
                [&](CriterionResult& r) { c3_uniform_pair(r, opt.seed); });
  run_criterion(out, 4, "three-way-split-identity", "partitions", opt,
                [&](CriterionResult& r) {
                  c4_appendix_split(r, opt.corrupt_partitions);
                });
  run_criterion(out, 5, "operator-trivial-laws", "bilinear", opt,
                [&](CriterionResult& r) { c5_operator_laws(r, opt.seed); });
  run_criterion(out, 6, "decomposition-exactness", "bilinear", opt,
                [&](CriterionResult& r) { c6_decompose(r, opt.seed); });
  run_criterion(out, 7, "block-decay-signature", "symbols", opt,
                [&](CriterionResult& r) { c7_decay_signature(r); });
  run_criterion(out, 8, "square-function-scaling", "spaces", opt,
                [&](CriterionResult& r) {
                  c8_square_function_scaling(r, opt.seed);
                });
  run_criterion(out, 9, "boundedness-shadow", "bilinear", opt,
                [&](CriterionResult& r) { c9_boundedness_shadow(r, opt.seed); });
  run_criterion(out, 10, "eps-family-sharpness", "sharpness", opt,
                [&](CriterionResult& r) { c10_eps_slope(r); });
  run_criterion(out, 11, "lattice-sum-threshold", "sharpness", opt,
                [&](CriterionResult& r) { c11_wainger_threshold(r); });
  run_criterion(out, 12, "x-slot-construction", "sharpness", opt,
                [&](CriterionResult& r) { c12_s0_construction(r); });
  return out;
}

inline int print_acceptance(const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%2d/12] %-6s %-26s (%s) %s [%.1fs]\n", r.id,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.module.c_str(),
                r.detail.c_str(), r.seconds);
    if (!r.pass) ++failures;
  }
  return failures;
}

}  // namespace bilinpdo

#endif
