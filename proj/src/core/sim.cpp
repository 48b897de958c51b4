// SPDX-License-Identifier: Apache-2.0
#include "sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "constellation.hpp"
#include "metrics.hpp"
#include "precoders.hpp"
#include "qp.hpp"

namespace slpcr {

std::string to_string(Precoder p) {
  switch (p) {
    case Precoder::pmslp_perfect: return "pmslp-perfect";
    case Precoder::pmslp_normbounded: return "pmslp-normbounded";
    case Precoder::pmslp_aqnm: return "pmslp-aqnm";
    case Precoder::nonrobust_on_impaired: return "nonrobust-on-impaired";
    case Precoder::crpalp: return "crpalp";
    case Precoder::primary_only: return "primary-only";
  }
  return "?";
}

std::string to_string(CsiModel m) {
  switch (m) {
    case CsiModel::exact: return "exact";
    case CsiModel::norm_bounded: return "normbounded";
    case CsiModel::quantized: return "quantized";
  }
  return "?";
}

namespace {

Precoder parse_precoder(const std::string& s) {
  if (s == "pmslp-perfect") return Precoder::pmslp_perfect;
  if (s == "pmslp-normbounded") return Precoder::pmslp_normbounded;
  if (s == "pmslp-aqnm") return Precoder::pmslp_aqnm;
  if (s == "nonrobust-on-impaired") return Precoder::nonrobust_on_impaired;
  if (s == "crpalp") return Precoder::crpalp;
  if (s == "primary-only") return Precoder::primary_only;
  throw Error(ErrorCode::config, "unknown precoder '" + s + "'");
}

CsiModel parse_csi(const std::string& s) {
  if (s == "exact") return CsiModel::exact;
  if (s == "normbounded") return CsiModel::norm_bounded;
  if (s == "quantized") return CsiModel::quantized;
  throw Error(ErrorCode::config, "unknown csi model '" + s + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::config, "bad numeric value for " + key + ": '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long l = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return l;
  } catch (const std::exception&) {
    throw Error(ErrorCode::config, "bad integer value for " + key + ": '" + v + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
double watts_to_dbw(double w) { return 10.0 * std::log10(w); }

}  // namespace

void SimConfig::set(const std::string& key, const std::string& value) {
  if (key == "precoder") {
    precoder = parse_precoder(value);
  } else if (key == "csi") {
    csi = parse_csi(value);
  } else if (key == "D") {
    D = int(parse_long(key, value));
  } else if (key == "T") {
    T = parse_long(key, value);
  } else if (key == "realizations") {
    realizations = int(parse_long(key, value));
  } else if (key == "M_p") {
    dims.M_p = int(parse_long(key, value));
  } else if (key == "M_c") {
    dims.M_c = int(parse_long(key, value));
  } else if (key == "N_p") {
    dims.N_p = int(parse_long(key, value));
  } else if (key == "N_c") {
    dims.N_c = int(parse_long(key, value));
  } else if (key == "P_p_dbw") {
    dims.P_p = dbw_to_watts(parse_double(key, value));
  } else if (key == "P_c_dbw") {
    P_c = dbw_to_watts(parse_double(key, value));
  } else if (key == "sigma2_p") {
    dims.sigma2_p = parse_double(key, value);
  } else if (key == "sigma2_c") {
    dims.sigma2_c = parse_double(key, value);
  } else if (key == "delta_p0") {
    delta_p0 = parse_double(key, value);
  } else if (key == "delta_c0") {
    delta_c0 = parse_double(key, value);
  } else if (key == "eps_p") {
    eps_p = parse_double(key, value);
  } else if (key == "eps_c") {
    eps_c = parse_double(key, value);
  } else if (key == "b_p") {
    b_p = int(parse_long(key, value));
  } else if (key == "b_c") {
    b_c = int(parse_long(key, value));
  } else if (key == "v1") {
    v1 = parse_double(key, value);
  } else if (key == "v2") {
    v2 = parse_double(key, value);
  } else if (key == "beta_p") {
    beta_p = parse_double(key, value);
  } else if (key == "beta_c") {
    beta_c = parse_double(key, value);
  } else if (key == "Q") {
    Q = parse_long(key, value);
  } else if (key == "seed") {
    seed = std::uint64_t(parse_long(key, value));
  } else if (key == "threads") {
    threads = int(parse_long(key, value));
  } else if (key == "pbs_mode") {
    if (value == "zf") pbs_mode = PbsMode::zf;
    else if (value == "white") pbs_mode = PbsMode::white;
    else throw Error(ErrorCode::config, "pbs_mode must be zf or white");
  } else if (key == "error_sampling") {
    if (value == "sphere") error_sampling = ErrorSampling::sphere;
    else if (value == "ball") error_sampling = ErrorSampling::ball;
    else throw Error(ErrorCode::config, "error_sampling must be sphere or ball");
  } else {
    throw Error(ErrorCode::config, "unknown config key '" + key + "'");
  }
  set_keys_.insert(key);
}

CsiModel SimConfig::effective_csi() const {
  switch (precoder) {
    case Precoder::pmslp_perfect:
    case Precoder::crpalp:
    case Precoder::primary_only:
      return CsiModel::exact;
    case Precoder::pmslp_normbounded:
      return CsiModel::norm_bounded;
    case Precoder::pmslp_aqnm:
      return CsiModel::quantized;
    case Precoder::nonrobust_on_impaired:
      return csi.value_or(CsiModel::exact);
  }
  return CsiModel::exact;
}

void SimConfig::validate() const {
  try {
    dims.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
  if (D < 2 || (D & (D - 1)) != 0) {
    throw Error(ErrorCode::config, "D must be a power of two >= 2");
  }
  if (T < 1 || realizations < 1) {
    throw Error(ErrorCode::config, "T and realizations must be >= 1");
  }
  if (Q < 0 || threads < 0) {
    throw Error(ErrorCode::config, "Q and threads must be nonnegative");
  }
  if (delta_p0 < 0.0 || delta_c0 < 0.0) {
    throw Error(ErrorCode::config, "safety margins must be nonnegative");
  }

  const auto has = [&](const char* k) { return set_keys_.count(k) > 0; };
  const CsiModel model = effective_csi();

  if (csi.has_value() && precoder != Precoder::nonrobust_on_impaired) {
    throw Error(ErrorCode::config,
                "csi may only be set for nonrobust-on-impaired");
  }
  if (precoder == Precoder::nonrobust_on_impaired &&
      (!csi.has_value() || *csi == CsiModel::exact)) {
    throw Error(ErrorCode::config,
                "nonrobust-on-impaired requires csi = normbounded or "
                "quantized");
  }
  if (model != CsiModel::norm_bounded &&
      (has("eps_p") || has("eps_c") || has("error_sampling"))) {
    throw Error(ErrorCode::config,
                "eps_p/eps_c/error_sampling apply only to the "
                "norm-bounded CSI model");
  }
  if (model != CsiModel::quantized &&
      (has("b_p") || has("b_c") || has("beta_p") || has("beta_c"))) {
    throw Error(ErrorCode::config,
                "b_p/b_c/beta_p/beta_c apply only to the quantized CSI "
                "model");
  }
  if (precoder != Precoder::pmslp_aqnm && (has("v1") || has("v2"))) {
    throw Error(ErrorCode::config, "v1/v2 apply only to pmslp-aqnm");
  }
  if (precoder != Precoder::crpalp && has("P_c_dbw")) {
    throw Error(ErrorCode::config, "P_c_dbw applies only to crpalp");
  }
  if (precoder == Precoder::crpalp && pbs_mode != PbsMode::zf) {
    throw Error(ErrorCode::config, "crpalp requires pbs_mode = zf");
  }

  if (model == CsiModel::norm_bounded && (eps_p < 0.0 || eps_c < 0.0)) {
    throw Error(ErrorCode::config, "error bounds must be nonnegative");
  }
  if (model == CsiModel::quantized) {
    if (b_p < 1 || b_p > 5 || b_c < 1 || b_c > 5) {
      throw Error(ErrorCode::config, "bit widths must lie in 1..5");
    }
    if (beta_p <= 0.0 || beta_c <= 0.0) {
      throw Error(ErrorCode::config, "betas must be positive");
    }
  }
  if (precoder == Precoder::pmslp_aqnm) {
    if (!(v1 > 0.5 && v1 <= 1.0) || !(v2 > 0.5 && v2 <= 1.0)) {
      throw Error(ErrorCode::config, "v1/v2 must lie in (0.5, 1]");
    }
    if (D < 4) {
      throw Error(ErrorCode::config, "pmslp-aqnm requires D >= 4");
    }
  }
  if (precoder == Precoder::crpalp) {
    if (!(P_c > 0.0)) {
      throw Error(ErrorCode::config, "P_c must be positive");
    }
    if (dims.N_p + dims.N_c > dims.M_c) {
      throw Error(ErrorCode::config,
                  "crpalp requires M_c >= N_p + N_c");
    }
  }
}

SimConfig SimConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::config, "cannot open config file '" + path + "'");
  }
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::config,
                  path + ":" + std::to_string(lineno) +
                      ": expected 'key = value'");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

namespace {

// Everything one realization contributes to the aggregate.
struct Tally {
  long pu_bit_errors = 0;
  long cu_bit_errors = 0;
  long outage_slots = 0;
  double energy = 0.0;  // sum over slots of ||x_c||^2
};

struct Engine {
  const SimConfig& cfg;
  PskConstellation constellation;
  LloydMaxCodebook cb_p, cb_c;  // quantized model only
  AqnmParams aq_p, aq_c;

  explicit Engine(const SimConfig& c) : cfg(c) {
    constellation = psk_points(c.D);
    if (c.effective_csi() == CsiModel::quantized) {
      cb_p = lloyd_max_train(c.b_p);
      cb_c = c.b_c == c.b_p ? cb_p : lloyd_max_train(c.b_c);
      aq_p = AqnmParams::from_codebook(cb_p, c.beta_p);
      aq_c = AqnmParams::from_codebook(cb_c, c.beta_c);
    }
  }

  Tally realization(int r) const {
    const SystemDims& d = cfg.dims;
    Rng rng = make_stream(cfg.seed, std::uint64_t(r));
    const ChannelSet truth = sample_channels(d, rng);

    // CSI as shared with the CBS: only the primary-side channels are
    // impaired.
    ChannelSet shared = truth;
    const CsiModel model = cfg.effective_csi();
    if (model == CsiModel::norm_bounded) {
      for (int k = 0; k < d.N_p; ++k) {
        shared.H_pp.row(k) -= sample_bounded_error(d.M_p, cfg.eps_p,
                                                   cfg.error_sampling, rng)
                                  .transpose();
      }
      for (int j = 0; j < d.N_c; ++j) {
        shared.H_pc.row(j) -= sample_bounded_error(d.M_p, cfg.eps_c,
                                                   cfg.error_sampling, rng)
                                  .transpose();
      }
    } else if (model == CsiModel::quantized) {
      for (int k = 0; k < d.N_p; ++k) {
        shared.H_pp.row(k) =
            quantize_channel(truth.H_pp.row(k).transpose(), cb_p, cfg.beta_p)
                .transpose();
      }
      for (int j = 0; j < d.N_c; ++j) {
        shared.H_pc.row(j) =
            quantize_channel(truth.H_pc.row(j).transpose(), cb_c, cfg.beta_c)
                .transpose();
      }
    }

    MatrixXcd W_p;  // unnormalized ZF at the PBS
    if (cfg.pbs_mode == PbsMode::zf) W_p = zf_precoder(truth.H_pp);

    const double theta = constellation.theta;
    std::uniform_int_distribution<int> pick(0, cfg.D - 1);
    const VectorXd eps_pu = VectorXd::Constant(d.N_p, cfg.eps_p);
    const VectorXd eps_cu = VectorXd::Constant(d.N_c, cfg.eps_c);

    Tally tally;
    std::vector<int> idx_p(d.N_p), idx_c(d.N_c);
    for (long t = 0; t < cfg.T; ++t) {
      VectorXcd s_p(d.N_p), s_c(d.N_c);
      for (int k = 0; k < d.N_p; ++k) {
        idx_p[k] = pick(rng);
        s_p(k) = constellation.points[idx_p[k]];
      }
      for (int j = 0; j < d.N_c; ++j) {
        idx_c[j] = pick(rng);
        s_c(j) = constellation.points[idx_c[j]];
      }

      VectorXcd x_p;
      if (cfg.pbs_mode == PbsMode::zf) {
        const VectorXcd raw = W_p * s_p;
        x_p = (std::sqrt(d.P_p) / raw.norm()) * raw;
      } else {
        x_p = complex_gaussian(d.M_p, d.P_p / double(d.M_p), rng);
      }

      VectorXcd x_c = VectorXcd::Zero(d.M_c);
      bool outage = false;
      switch (cfg.precoder) {
        case Precoder::primary_only:
          break;
        case Precoder::crpalp: {
          const CrPalpResult res =
              crpalp_precode(truth, W_p, s_p, s_c, d.P_p, cfg.P_c);
          x_c = res.x_c;
          break;
        }
        default: {
          PrecodeProblem pb;
          if (cfg.precoder == Precoder::pmslp_normbounded) {
            pb = build_norm_bounded(shared, s_p, s_c, x_p, cfg.delta_p0,
                                    cfg.delta_c0, eps_pu, eps_cu, theta);
          } else if (cfg.precoder == Precoder::pmslp_aqnm) {
            pb = build_aqnm(shared, s_p, s_c, x_p, cfg.delta_p0, cfg.delta_c0,
                            aq_p, aq_c, cfg.v1, cfg.v2, theta, d.P_p);
          } else {
            // pmslp-perfect on the true channels, or the non-robust
            // design fed the impaired ones.
            pb = build_perfect(shared, s_p, s_c, x_p, cfg.delta_p0,
                               cfg.delta_c0, theta);
          }
          const QpSolution sol = solve_min_norm(pb.G, pb.g);
          if (sol.status == QpStatus::optimal) {
            x_c = unrealify(sol.x);
          } else {
            outage = true;
          }
          break;
        }
      }

      const VectorXcd n_p = complex_gaussian(d.N_p, d.sigma2_p, rng);
      const VectorXcd n_c = complex_gaussian(d.N_c, d.sigma2_c, rng);

      if (outage) {
        ++tally.outage_slots;
        const int c_bits = constellation.bits_per_symbol();
        tally.pu_bit_errors += long(c_bits) * d.N_p;
        tally.cu_bit_errors += long(c_bits) * d.N_c;
        continue;
      }

      tally.energy += x_c.squaredNorm();
      const VectorXcd y_p = truth.H_pp * x_p + truth.H_cp * x_c + n_p;
      const VectorXcd y_c = truth.H_cc * x_c + truth.H_pc * x_p + n_c;
      for (int k = 0; k < d.N_p; ++k) {
        tally.pu_bit_errors +=
            bit_errors(idx_p[k], detect(y_p(k), constellation).index);
      }
      for (int j = 0; j < d.N_c; ++j) {
        tally.cu_bit_errors +=
            bit_errors(idx_c[j], detect(y_c(j), constellation).index);
      }
    }
    return tally;
  }
};

double ci_halfwidth(double p, double n) {
  if (n <= 0.0) return 0.0;
  return 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

}  // namespace

SimResult run(const SimConfig& config) {
  config.validate();
  if (config.dims.feasibility_warning()) {
    std::fprintf(stderr,
                 "slpcr: warning: M_c = %d < N_p + N_c = %d; per-slot "
                 "problems may be infeasible and will count as outages\n",
                 config.dims.M_c, config.dims.N_p + config.dims.N_c);
  }
  const Engine engine(config);
  const int R = config.realizations;

  std::vector<Tally> tallies(R);
  int nthreads = config.threads > 0
                     ? config.threads
                     : int(std::thread::hardware_concurrency());
  nthreads = std::clamp(nthreads, 1, std::max(1, R));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      try {
        tallies[std::size_t(r)] = engine.realization(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (nthreads == 1) {
    work(0, R);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (R + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
      const int begin = i * chunk;
      const int end = std::min(R, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const int c_bits = engine.constellation.bits_per_symbol();
  long pu_errs = 0, cu_errs = 0, outages = 0;
  std::vector<double> energies(static_cast<std::size_t>(R), 0.0);
  for (int r = 0; r < R; ++r) {
    pu_errs += tallies[std::size_t(r)].pu_bit_errors;
    cu_errs += tallies[std::size_t(r)].cu_bit_errors;
    outages += tallies[std::size_t(r)].outage_slots;
    energies[std::size_t(r)] = tallies[std::size_t(r)].energy;
  }

  SimResult res;
  res.total_slots = long(R) * config.T;
  res.outage_slots = outages;
  res.outage_frac = double(outages) / double(res.total_slots);

  const double pu_bits = double(res.total_slots) * c_bits * config.dims.N_p;
  const double cu_bits = double(res.total_slots) * c_bits * config.dims.N_c;
  res.ber_pu = double(pu_errs) / pu_bits;
  res.ber_cu = double(cu_errs) / cu_bits;
  res.ci_ber_pu = ci_halfwidth(res.ber_pu, pu_bits);
  res.ci_ber_cu = ci_halfwidth(res.ber_cu, cu_bits);

  const double total_energy = pairwise_sum(energies);
  res.mean_power_watts = total_energy / double(res.total_slots);
  res.power_dbw = res.mean_power_watts > 0.0
                      ? watts_to_dbw(res.mean_power_watts)
                      : -std::numeric_limits<double>::infinity();

  const long C = long(c_bits) * config.T;
  res.bler_pu = block_error_prob(res.ber_pu, C, config.Q);
  res.bler_cu = block_error_prob(res.ber_cu, C, config.Q);
  res.tau = throughput(res.bler_cu, c_bits, config.T, config.dims.N_c);
  const double block_energy = total_energy / double(R);
  res.ee = (res.tau == 0.0 || block_energy <= 0.0)
               ? 0.0
               : energy_efficiency(res.tau, block_energy);
  return res;
}

// ---------------------------------------------------------------------
// Sweeps

namespace {

SimConfig preset_base() {
  SimConfig cfg;
  cfg.dims = SystemDims{};  // paper defaults: 8 antennas, 4+4 users
  cfg.D = 4;
  cfg.T = 50;
  cfg.realizations = 200;
  return cfg;
}

struct PendingPoint {
  std::string var;
  double value;
  std::vector<std::pair<std::string, std::string>> keys;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<PendingPoint> preset_points(const std::string& preset) {
  std::vector<PendingPoint> pts;
  if (preset == "fig5-power-sweep") {
    pts.push_back({"baseline", 0.0, {{"precoder", "primary-only"}}});
    for (double dc : {0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7}) {
      pts.push_back({"delta_c0", dc,
                     {{"precoder", "pmslp-perfect"},
                      {"delta_p0", "1.9"},
                      {"delta_c0", fmt(dc)}}});
    }
    for (double pc : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0}) {
      pts.push_back({"P_c_dbw", pc,
                     {{"precoder", "crpalp"}, {"P_c_dbw", fmt(pc)}}});
    }
  } else if (preset == "fig6to9-epsilon-sweep") {
    const std::vector<double> grid = {-1.5, -1.25, -1.0, -0.75, -0.5, -0.25,
                                      0.0};
    for (const char* prec : {"pmslp-normbounded", "nonrobust-on-impaired"}) {
      const bool robust = std::string(prec) == "pmslp-normbounded";
      for (double le : grid) {
        PendingPoint p{"log10_eps_p", le,
                       {{"precoder", prec},
                        {"delta_p0", "1.5"},
                        {"delta_c0", "1.5"},
                        {"eps_p", fmt(std::pow(10.0, le))},
                        {"eps_c", "0.3"}}};
        if (!robust) p.keys.push_back({"csi", "normbounded"});
        pts.push_back(std::move(p));
      }
      for (double le : grid) {
        PendingPoint p{"log10_eps_c", le,
                       {{"precoder", prec},
                        {"delta_p0", "1.5"},
                        {"delta_c0", "1.5"},
                        {"eps_p", "0.3"},
                        {"eps_c", fmt(std::pow(10.0, le))}}};
        if (!robust) p.keys.push_back({"csi", "normbounded"});
        pts.push_back(std::move(p));
      }
    }
  } else if (preset == "fig10to12-sm-sweep") {
    for (const char* prec : {"pmslp-aqnm", "nonrobust-on-impaired"}) {
      const bool robust = std::string(prec) == "pmslp-aqnm";
      for (int b : {2, 3}) {
        for (double dc : {1.1, 1.3, 1.5, 1.7, 1.9}) {
          PendingPoint p{"delta_c0", dc,
                         {{"precoder", prec},
                          {"delta_p0", "1.5"},
                          {"delta_c0", fmt(dc)},
                          {"b_p", std::to_string(b)},
                          {"b_c", std::to_string(b)}}};
          if (robust) {
            p.keys.push_back({"v1", "0.9"});
            p.keys.push_back({"v2", "0.9"});
          } else {
            p.keys.push_back({"csi", "quantized"});
          }
          pts.push_back(std::move(p));
        }
      }
    }
  } else if (preset == "fig13-bit-allocation") {
    for (const char* prec : {"pmslp-aqnm", "nonrobust-on-impaired"}) {
      const bool robust = std::string(prec) == "pmslp-aqnm";
      for (int bp : {1, 2, 3, 4}) {
        const int bc = 5 - bp;
        PendingPoint p{"b_p", double(bp),
                       {{"precoder", prec},
                        {"delta_p0", "1.5"},
                        {"delta_c0", "1.5"},
                        {"b_p", std::to_string(bp)},
                        {"b_c", std::to_string(bc)}}};
        if (robust) {
          p.keys.push_back({"v1", "0.9"});
          p.keys.push_back({"v2", "0.9"});
        } else {
          p.keys.push_back({"csi", "quantized"});
        }
        pts.push_back(std::move(p));
      }
    }
  } else {
    throw Error(ErrorCode::config, "unknown sweep preset '" + preset + "'");
  }
  return pts;
}

}  // namespace

SweepTable sweep(const std::string& preset,
                 const std::vector<std::pair<std::string, std::string>>&
                     overrides) {
  long max_points = -1;
  std::vector<std::pair<std::string, std::string>> cfg_overrides;
  for (const auto& [k, v] : overrides) {
    if (k == "max_points") {
      max_points = parse_long(k, v);
      if (max_points < 0) {
        throw Error(ErrorCode::config, "max_points must be >= 0");
      }
    } else {
      cfg_overrides.emplace_back(k, v);
    }
  }

  std::vector<PendingPoint> pts = preset_points(preset);
  if (max_points >= 0 && long(pts.size()) > max_points) {
    pts.resize(std::size_t(max_points));
  }

  SweepTable table;
  for (const PendingPoint& p : pts) {
    SimConfig cfg = preset_base();
    for (const auto& [k, v] : p.keys) cfg.set(k, v);
    for (const auto& [k, v] : cfg_overrides) cfg.set(k, v);
    cfg.validate();
    SweepRow row;
    row.preset = preset;
    row.sweep_var = p.var;
    row.sweep_value = p.value;
    row.config = cfg;
    row.result = run(cfg);
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------
// CSV

const char* const kCsvHeader =
    "preset,sweep_var,sweep_value,precoder,b_p,b_c,eps_p,eps_c,delta_p0,"
    "delta_c0,v1,v2,ber_pu,ber_cu,bler_pu,bler_cu,tau,power_dbw,ee,"
    "outage_frac,ci_ber_pu,ci_ber_cu,seed";

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

namespace {

std::string csv_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt(v);
}

}  // namespace

void write_csv_row(std::ostream& os, const SweepRow& row) {
  const SimConfig& c = row.config;
  const CsiModel model = c.effective_csi();
  const bool quant = model == CsiModel::quantized;
  const bool bounded = model == CsiModel::norm_bounded;
  const bool slp = c.precoder != Precoder::crpalp &&
                   c.precoder != Precoder::primary_only;
  os << row.preset << ',' << row.sweep_var << ','
     << (row.sweep_value ? csv_num(*row.sweep_value) : std::string()) << ','
     << to_string(c.precoder) << ',' << (quant ? std::to_string(c.b_p) : "")
     << ',' << (quant ? std::to_string(c.b_c) : "") << ','
     << (bounded ? csv_num(c.eps_p) : "") << ','
     << (bounded ? csv_num(c.eps_c) : "") << ','
     << (slp ? csv_num(c.delta_p0) : "") << ','
     << (slp ? csv_num(c.delta_c0) : "") << ','
     << (c.precoder == Precoder::pmslp_aqnm ? csv_num(c.v1) : "") << ','
     << (c.precoder == Precoder::pmslp_aqnm ? csv_num(c.v2) : "") << ','
     << csv_num(row.result.ber_pu) << ',' << csv_num(row.result.ber_cu) << ','
     << csv_num(row.result.bler_pu) << ',' << csv_num(row.result.bler_cu)
     << ',' << csv_num(row.result.tau) << ','
     << csv_num(row.result.power_dbw) << ',' << csv_num(row.result.ee) << ','
     << csv_num(row.result.outage_frac) << ','
     << csv_num(row.result.ci_ber_pu) << ','
     << csv_num(row.result.ci_ber_cu) << ',' << c.seed << '\n';
}

void write_csv(std::ostream& os, const SweepTable& table) {
  write_csv_header(os);
  for (const SweepRow& row : table.rows) write_csv_row(os, row);
}

}  // namespace slpcr
