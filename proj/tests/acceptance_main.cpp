// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance runs. Each numbered check prints one PASS/FAIL
// line with the measured quantities; the process exits nonzero if any
// fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "core/channel.hpp"
#include "core/constellation.hpp"
#include "core/metrics.hpp"
#include "core/precoders.hpp"
#include "core/qp.hpp"
#include "core/quantizer.hpp"
#include "core/sim.hpp"
#include "support/oracles.hpp"

using namespace slpcr;

namespace {

int g_failures = 0;

void report(int number, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] %d. %s (%s)\n", pass ? "PASS" : "FAIL", number,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  }
};

// Shared-CSI instance for the standalone precoder checks.
struct Instance {
  SystemDims dims;
  ChannelSet channels;
  PskConstellation constellation = psk_points(4);
  VectorXcd s_p, s_c, x_p;
};

Instance make_instance(std::uint64_t seed) {
  Instance in;
  Rng rng = make_stream(seed, 0);
  in.channels = sample_channels(in.dims, rng);
  in.s_p.resize(in.dims.N_p);
  in.s_c.resize(in.dims.N_c);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int k = 0; k < in.dims.N_p; ++k) {
    in.s_p(k) = in.constellation.points[pick(rng)];
  }
  for (int j = 0; j < in.dims.N_c; ++j) {
    in.s_c(j) = in.constellation.points[pick(rng)];
  }
  const MatrixXcd w = zf_precoder(in.channels.H_pp);
  const VectorXcd raw = w * in.s_p;
  in.x_p = (std::sqrt(in.dims.P_p) / raw.norm()) * raw;
  return in;
}

// --------------------------------------------------------------- 1

void criterion1_table1() {
  Timer timer;
  const double table[6] = {0.0, 0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
  double worst_low = 0.0, worst_high = 0.0;
  bool pass = true;
  double analytic_gap = 0.0;
  for (int b = 1; b <= 5; ++b) {
    const auto cb = lloyd_max_train(b);
    const double rel = std::abs(cb.mse - table[b]) / table[b];
    if (b <= 3) {
      worst_low = std::max(worst_low, rel);
      pass = pass && rel < 0.01;
    } else {
      worst_high = std::max(worst_high, rel);
      pass = pass && rel < 0.10;
    }
    if (b == 1) {
      analytic_gap = std::abs(cb.mse - (1.0 - 2.0 / std::numbers::pi));
      pass = pass && analytic_gap < 1e-6;
    }
  }
  pass = pass && timer.seconds() < 60.0;
  report(1, pass, "Lloyd-Max distortion factors match Table 1",
         fmt("max rel err b<=3: %.3g, b in {4,5}: %.3g, |b=1 - (1-2/pi)|: "
             "%.2g, %.1fs",
             worst_low, worst_high, analytic_gap, timer.seconds()));
}

// --------------------------------------------------------------- 2

void criterion2_fig5() {
  Timer timer;
  const std::uint64_t seed = 7001;

  auto base = []() {
    SimConfig cfg;
    cfg.realizations = 200;
    cfg.T = 50;
    cfg.seed = 7001;
    return cfg;
  };

  SimConfig po = base();
  po.precoder = Precoder::primary_only;
  const double baseline_pu = run(po).ber_pu;

  double pmslp_power = std::numeric_limits<double>::infinity();
  bool pu_never_worse = true;
  double worst_pu_gap = 0.0;
  for (double dc : {0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7}) {
    SimConfig cfg = base();
    cfg.precoder = Precoder::pmslp_perfect;
    cfg.delta_p0 = 1.9;
    cfg.delta_c0 = dc;
    const SimResult r = run(cfg);
    if (r.ber_cu <= 1e-2) pmslp_power = std::min(pmslp_power, r.power_dbw);
    if (r.ber_pu > baseline_pu) pu_never_worse = false;
    worst_pu_gap = std::max(worst_pu_gap, r.ber_pu - baseline_pu);
  }

  double crpalp_power = std::numeric_limits<double>::infinity();
  for (double pc : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0}) {
    SimConfig cfg = base();
    cfg.precoder = Precoder::crpalp;
    cfg.P_c = std::pow(10.0, pc / 10.0);
    const SimResult r = run(cfg);
    if (r.ber_cu <= 1e-2) {
      crpalp_power = std::min(crpalp_power, r.power_dbw);
    }
  }

  const bool reached = std::isfinite(pmslp_power);
  const double gap = crpalp_power - pmslp_power;  // inf if crpalp never hit
  const bool pass = reached && gap >= 10.0 && pu_never_worse &&
                    timer.seconds() < 600.0;
  report(2, pass, "power-minimizing SLP beats CR-PALP by >= 10 dBW at CU "
                  "BER 1e-2 and never hurts the PUs",
         fmt("pmslp: %.2f dBW, crpalp: %.2f dBW, gap: %.2f dBW, "
             "primary-only PU BER: %.3g, worst PU excess: %.2g, %.0fs",
             pmslp_power, crpalp_power, gap, baseline_pu, worst_pu_gap,
             timer.seconds()));
  (void)seed;
}

// --------------------------------------------------------------- 3

void criterion3_norm_bounded() {
  Timer timer;
  const double eps = 0.3, delta = 1.5;
  long violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  int solved = 0;
  for (std::uint64_t seed = 3000; seed < 3050; ++seed) {
    const Instance in = make_instance(seed);
    const PrecodeProblem pb = build_norm_bounded(
        in.channels, in.s_p, in.s_c, in.x_p, delta, delta,
        VectorXd::Constant(in.dims.N_p, eps),
        VectorXd::Constant(in.dims.N_c, eps), in.constellation.theta);
    const QpSolution sol = solve_min_norm(pb.G, pb.g);
    if (sol.status != QpStatus::optimal) continue;
    ++solved;
    const VectorXcd x_c = unrealify(sol.x);
    Rng rng = make_stream(seed, 1);
    for (int trial = 0; trial < 500; ++trial) {
      for (int k = 0; k < in.dims.N_p; ++k) {
        const VectorXcd e =
            sample_bounded_error(in.dims.M_p, eps, ErrorSampling::sphere, rng);
        const cxd r =
            ((in.channels.H_pp.row(k).transpose() + e).transpose() * in.x_p)(
                0) +
            (in.channels.H_cp.row(k) * x_c)(0);
        const double m =
            safety_margin(r * std::conj(in.s_p(k)), in.constellation.theta);
        min_margin = std::min(min_margin, m);
        if (m < delta - 1e-9) ++violations;
      }
      for (int j = 0; j < in.dims.N_c; ++j) {
        const VectorXcd e =
            sample_bounded_error(in.dims.M_p, eps, ErrorSampling::sphere, rng);
        const cxd r =
            ((in.channels.H_pc.row(j).transpose() + e).transpose() * in.x_p)(
                0) +
            (in.channels.H_cc.row(j) * x_c)(0);
        const double m =
            safety_margin(r * std::conj(in.s_c(j)), in.constellation.theta);
        min_margin = std::min(min_margin, m);
        if (m < delta - 1e-9) ++violations;
      }
    }
  }
  const bool pass = solved == 50 && violations == 0;
  report(3, pass, "worst-case margins hold for all adversarial sphere errors",
         fmt("instances: %d/50, violations: %ld, min margin: %.4f vs "
             "delta 1.5, %.0fs",
             solved, violations, min_margin, timer.seconds()));
}

// --------------------------------------------------------------- 4

void criterion4_chance_coverage() {
  Timer timer;
  const double v = 0.9, delta = 1.5;
  const auto cb = lloyd_max_train(2);
  const AqnmParams ap = AqnmParams::from_codebook(cb, 1.0);
  double min_coverage = 1.0;
  int solved = 0;
  for (std::uint64_t seed = 4000; seed < 4050; ++seed) {
    const Instance in = make_instance(seed);
    ChannelSet shared = in.channels;
    for (int k = 0; k < in.dims.N_p; ++k) {
      shared.H_pp.row(k) =
          quantize_channel(in.channels.H_pp.row(k).transpose(), cb, 1.0)
              .transpose();
    }
    for (int j = 0; j < in.dims.N_c; ++j) {
      shared.H_pc.row(j) =
          quantize_channel(in.channels.H_pc.row(j).transpose(), cb, 1.0)
              .transpose();
    }
    const PrecodeProblem pb =
        build_aqnm(shared, in.s_p, in.s_c, in.x_p, delta, delta, ap, ap, v, v,
                   in.constellation.theta, in.dims.P_p);
    const QpSolution sol = solve_min_norm(pb.G, pb.g);
    if (sol.status != QpStatus::optimal) continue;
    ++solved;
    const VectorXd xp_r = realify(in.x_p);
    Rng rng = make_stream(seed, 2);
    const int draws = 10000;

    auto coverage = [&](const VectorXcd& h_cbs, const VectorXcd& h_q,
                        cxd symbol, double alpha) {
      const Vector2d w =
          alpha * (mho(rotated_channel(h_cbs, symbol),
                       in.constellation.theta) *
                   sol.x) +
          mho(rotated_channel(h_q, symbol), in.constellation.theta) * xp_r -
          Vector2d::Constant(alpha * delta);
      int ok = 0;
      for (int t = 0; t < draws; ++t) {
        const VectorXcd nq = complex_gaussian(
            in.dims.M_p, ap.alpha * ap.rho * ap.beta, rng);
        const Vector2d q = mho(rotated_channel(nq, symbol),
                               in.constellation.theta) *
                           xp_r;
        if (w(0) >= q(0) && w(1) >= q(1)) ++ok;
      }
      return double(ok) / draws;
    };

    for (int k = 0; k < in.dims.N_p; ++k) {
      min_coverage = std::min(
          min_coverage,
          coverage(shared.H_cp.row(k).transpose(),
                   shared.H_pp.row(k).transpose(), in.s_p(k), ap.alpha));
    }
    for (int j = 0; j < in.dims.N_c; ++j) {
      min_coverage = std::min(
          min_coverage,
          coverage(shared.H_cc.row(j).transpose(),
                   shared.H_pc.row(j).transpose(), in.s_c(j), ap.alpha));
    }
  }
  const bool pass = solved == 50 && min_coverage >= 0.88;
  report(4, pass, "chance-constraint empirical coverage stays above v - 0.02",
         fmt("instances: %d/50, min coverage: %.4f vs 0.88, %.0fs", solved,
             min_coverage, timer.seconds()));
}

// --------------------------------------------------------------- 5

void criterion5_solver() {
  Timer timer;
  std::mt19937_64 rng(5001);
  std::normal_distribution<double> normal(0.0, 1.0);
  int optimal = 0, infeasible = 0, mismatches = 0, kkt_failures = 0;
  double worst_x_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + int(rng() % 7);
    const int m = 1 + int(rng() % 10);
    MatrixXd G(m, n);
    VectorXd g(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) G(i, j) = normal(rng);
      g(i) = normal(rng);
    }
    const QpSolution sol = solve_min_norm(G, g);
    if (sol.status == QpStatus::optimal) {
      ++optimal;
      if (!kkt_pass(G, g, sol)) ++kkt_failures;
      const auto oracle = oracles::qp_enumeration_oracle(G, g);
      if (!oracle.feasible) {
        ++mismatches;
        continue;
      }
      const double err = (sol.x - oracle.x).cwiseAbs().maxCoeff();
      worst_x_err = std::max(worst_x_err, err);
      if (err > 1e-5) ++mismatches;
    } else if (sol.status == QpStatus::infeasible) {
      ++infeasible;
      const bool cert_ok =
          sol.farkas.minCoeff() >= 0.0 &&
          (G.transpose() * sol.farkas).cwiseAbs().maxCoeff() <
              1e-6 * (1.0 + sol.farkas.norm()) &&
          g.dot(sol.farkas) > 0.0;
      if (!cert_ok) ++mismatches;
      if (oracles::qp_enumeration_oracle(G, g, 1e-12).feasible) ++mismatches;
    } else {
      ++mismatches;
    }
  }
  const bool pass = mismatches == 0 && kkt_failures == 0;
  report(5, pass, "min-norm QP matches the active-set enumeration oracle",
         fmt("1000 instances (%d optimal / %d infeasible), worst |x| err: "
             "%.2g, oracle mismatches: %d, KKT failures: %d, %.0fs",
             optimal, infeasible, worst_x_err, mismatches, kkt_failures,
             timer.seconds()));
}

// --------------------------------------------------------------- 6

void criterion6_geometry() {
  Timer timer;
  std::mt19937_64 rng(6001);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uth(0.05,
                                             std::numbers::pi / 2 - 0.05);
  double worst = 0.0, worst_hom = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + int(rng() % 8);
    VectorXcd h(m), x(m);
    for (int i = 0; i < m; ++i) {
      h(i) = cxd(normal(rng), normal(rng));
      x(i) = cxd(normal(rng), normal(rng));
    }
    const double th = uth(rng);
    const cxd hx = (h.transpose() * x)(0);
    const Vector2d lhs = mho(h, th) * realify(x);
    const double st = std::sin(th), ct = std::cos(th);
    worst = std::max(worst,
                     std::abs(lhs(0) - (hx.real() * st - hx.imag() * ct)));
    worst = std::max(worst,
                     std::abs(lhs(1) - (hx.real() * st + hx.imag() * ct)));
    worst = std::max(worst, std::abs(lhs.minCoeff() - safety_margin(hx, th)));

    const double c = 0.01 + 10.0 * std::abs(normal(rng));
    worst_hom = std::max(
        worst_hom, std::abs(safety_margin(c * hx, th) -
                            c * safety_margin(hx, th)) /
                       (1.0 + c * std::abs(hx)));
  }
  const bool pass = worst < 1e-12 && worst_hom < 1e-12;
  report(6, pass, "lift identity and margin homogeneity hold to 1e-12",
         fmt("worst identity residual: %.2g, worst homogeneity residual: "
             "%.2g, %.1fs",
             worst, worst_hom, timer.seconds()));
}

// --------------------------------------------------------------- 7

void criterion7_bit_allocation() {
  Timer timer;
  auto spread_of = [&](bool robust) {
    std::vector<double> ee;
    for (int bp : {1, 2, 3, 4}) {
      SimConfig cfg;
      cfg.realizations = 200;
      cfg.T = 50;
      cfg.seed = 7013;
      cfg.delta_p0 = 1.5;
      cfg.delta_c0 = 1.5;
      cfg.b_p = bp;
      cfg.b_c = 5 - bp;
      if (robust) {
        cfg.precoder = Precoder::pmslp_aqnm;
        cfg.v1 = cfg.v2 = 0.9;
      } else {
        cfg.precoder = Precoder::nonrobust_on_impaired;
        cfg.csi = CsiModel::quantized;
      }
      ee.push_back(run(cfg).ee);
    }
    const double max = *std::max_element(ee.begin(), ee.end());
    const double min = *std::min_element(ee.begin(), ee.end());
    const double mean =
        (ee[0] + ee[1] + ee[2] + ee[3]) / 4.0;
    return mean > 0.0 ? (max - min) / mean
                      : std::numeric_limits<double>::infinity();
  };
  const double robust_spread = spread_of(true);
  const double nonrobust_spread = spread_of(false);
  const bool pass =
      robust_spread < nonrobust_spread && timer.seconds() < 900.0;
  report(7, pass,
         "robust SLP is less sensitive to the quantization bit split",
         fmt("relative EE spread across b_p+b_c=5 allocations: robust "
             "%.3f < non-robust %.3f, %.0fs",
             robust_spread, nonrobust_spread, timer.seconds()));
}

// --------------------------------------------------------------- 8

void criterion8_monotone() {
  Timer timer;
  int delta_violations = 0, eps_violations = 0;
  for (std::uint64_t seed = 8000; seed < 8050; ++seed) {
    const Instance in = make_instance(seed);
    double prev = -1.0;
    for (double delta : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      const PrecodeProblem pb =
          build_perfect(in.channels, in.s_p, in.s_c, in.x_p, delta, delta,
                        in.constellation.theta);
      const QpSolution sol = solve_min_norm(pb.G, pb.g);
      if (sol.status != QpStatus::optimal) continue;
      const double p = sol.x.squaredNorm();
      if (p < prev - 1e-9) ++delta_violations;
      prev = p;
    }
    prev = -1.0;
    for (double eps : {0.0, 0.1, 0.2, 0.4, 0.6}) {
      const PrecodeProblem pb = build_norm_bounded(
          in.channels, in.s_p, in.s_c, in.x_p, 1.5, 1.5,
          VectorXd::Constant(in.dims.N_p, eps),
          VectorXd::Constant(in.dims.N_c, eps), in.constellation.theta);
      const QpSolution sol = solve_min_norm(pb.G, pb.g);
      if (sol.status != QpStatus::optimal) continue;
      const double p = sol.x.squaredNorm();
      if (p < prev - 1e-9) ++eps_violations;
      prev = p;
    }
  }
  const bool pass = delta_violations == 0 && eps_violations == 0;
  report(8, pass, "optimal CBS power is monotone in delta0 and epsilon",
         fmt("50 instances each; counterexamples: delta %d, eps %d, %.0fs",
             delta_violations, eps_violations, timer.seconds()));
}

}  // namespace

int main() {
  std::printf("slpcr acceptance suite\n");
  criterion1_table1();
  criterion2_fig5();
  criterion3_norm_bounded();
  criterion4_chance_coverage();
  criterion5_solver();
  criterion6_geometry();
  criterion7_bit_allocation();
  criterion8_monotone();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
