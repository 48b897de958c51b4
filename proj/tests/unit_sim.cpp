// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/sim.hpp"

using namespace slpcr;
using doctest::Approx;

namespace {

SimConfig tiny_config() {
  SimConfig cfg;
  cfg.realizations = 6;
  cfg.T = 5;
  cfg.seed = 99;
  cfg.threads = 1;
  return cfg;
}

bool same_result(const SimResult& a, const SimResult& b) {
  return a.ber_pu == b.ber_pu && a.ber_cu == b.ber_cu &&
         a.bler_pu == b.bler_pu && a.bler_cu == b.bler_cu && a.tau == b.tau &&
         a.power_dbw == b.power_dbw && a.ee == b.ee &&
         a.outage_frac == b.outage_frac && a.ci_ber_pu == b.ci_ber_pu &&
         a.ci_ber_cu == b.ci_ber_cu &&
         a.mean_power_watts == b.mean_power_watts &&
         a.total_slots == b.total_slots && a.outage_slots == b.outage_slots;
}

}  // namespace

TEST_CASE("noise-free perfect-CSI precoding makes no bit errors") {
  SimConfig cfg = tiny_config();
  cfg.dims.sigma2_p = 1e-30;
  cfg.dims.sigma2_c = 1e-30;
  cfg.delta_p0 = 0.5;
  cfg.delta_c0 = 0.5;
  const SimResult res = run(cfg);
  CHECK(res.ber_pu == 0.0);
  CHECK(res.ber_cu == 0.0);
  CHECK(res.outage_frac == 0.0);
  CHECK(res.bler_cu == 0.0);
  CHECK(res.tau == Approx(2.0 * 5 * 4));
}

TEST_CASE("results are identical across worker counts") {
  SimConfig cfg = tiny_config();
  cfg.realizations = 8;
  cfg.threads = 1;
  const SimResult serial = run(cfg);
  cfg.threads = 4;
  const SimResult parallel = run(cfg);
  CHECK(same_result(serial, parallel));
  cfg.threads = 3;
  CHECK(same_result(serial, run(cfg)));
}

TEST_CASE("different seeds change the outcome") {
  SimConfig cfg = tiny_config();
  const SimResult a = run(cfg);
  cfg.seed = 100;
  const SimResult b = run(cfg);
  CHECK(a.ber_cu != b.ber_cu);
}

TEST_CASE("config rejects unknown keys and bad values") {
  SimConfig cfg;
  CHECK_THROWS_AS(cfg.set("not_a_key", "1"), Error);
  CHECK_THROWS_AS(cfg.set("D", "four"), Error);
  CHECK_THROWS_AS(cfg.set("delta_p0", "1.5x"), Error);
  try {
    cfg.set("whatever", "1");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
  }
}

TEST_CASE("config validation enforces parameter consistency") {
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "pmslp-perfect");
    cfg.set("eps_p", "0.3");  // bounded-error knob on an exact-CSI design
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "pmslp-normbounded");
    cfg.set("v1", "0.9");
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "nonrobust-on-impaired");
    CHECK_THROWS_AS(cfg.validate(), Error);  // missing csi
    cfg.set("csi", "quantized");
    cfg.set("b_p", "3");
    cfg.set("b_c", "3");
    CHECK_NOTHROW(cfg.validate());
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("csi", "quantized");  // csi key reserved for the non-robust run
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "crpalp");
    cfg.set("M_c", "4");  // 8 users on 4 antennas
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "pmslp-aqnm");
    cfg.set("D", "2");
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  {
    SimConfig cfg = tiny_config();
    cfg.set("precoder", "pmslp-aqnm");
    cfg.set("v1", "0.4");
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
}

TEST_CASE("config files parse comments and reject malformed lines") {
  const std::string path = "test_sim_cfg.tmp";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "precoder = pmslp-normbounded\n";
    out << "eps_p = 0.5   # trailing comment\n";
    out << "eps_c = 0.25\n";
    out << "realizations = 3\n";
    out << "T = 4\n";
    out << "\n";
  }
  const SimConfig cfg = SimConfig::from_file(path);
  CHECK(cfg.precoder == Precoder::pmslp_normbounded);
  CHECK(cfg.eps_p == 0.5);
  CHECK(cfg.eps_c == 0.25);
  CHECK(cfg.realizations == 3);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "this line has no equals sign\n";
  }
  CHECK_THROWS_AS(SimConfig::from_file(path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(SimConfig::from_file("no_such_file.cfg"), Error);
}

TEST_CASE("impaired csi degrades the non-robust design") {
  SimConfig cfg = tiny_config();
  cfg.realizations = 30;
  cfg.T = 20;
  cfg.delta_p0 = 1.5;
  cfg.delta_c0 = 1.5;
  const SimResult clean = run(cfg);

  SimConfig rough = tiny_config();
  rough.realizations = 30;
  rough.T = 20;
  rough.delta_p0 = 1.5;
  rough.delta_c0 = 1.5;
  rough.set("precoder", "nonrobust-on-impaired");
  rough.set("csi", "normbounded");
  rough.set("eps_p", "0.6");
  rough.set("eps_c", "0.6");
  const SimResult dirty = run(rough);
  CHECK(dirty.ber_pu > clean.ber_pu);
}

TEST_CASE("infeasible slots are counted as outages, not aborts") {
  SimConfig cfg;
  cfg.dims.M_c = 1;
  cfg.dims.N_p = 2;
  cfg.dims.N_c = 2;
  cfg.delta_p0 = 25.0;
  cfg.delta_c0 = 25.0;
  cfg.realizations = 10;
  cfg.T = 10;
  cfg.seed = 5;
  cfg.threads = 1;
  const SimResult res = run(cfg);
  CHECK(res.outage_frac > 0.0);
  CHECK(res.ber_pu > 0.0);
  CHECK(std::isfinite(res.ber_cu));
}

TEST_CASE("perfect-CSI outage-free over many instances") {
  SimConfig cfg;
  cfg.realizations = 1000;
  cfg.T = 1;
  cfg.delta_p0 = 1.9;
  cfg.delta_c0 = 1.9;
  cfg.seed = 2026;
  const SimResult res = run(cfg);
  CHECK(res.outage_slots == 0);
}

TEST_CASE("primary-only baseline sends nothing from the CBS") {
  SimConfig cfg = tiny_config();
  cfg.set("precoder", "primary-only");
  const SimResult res = run(cfg);
  CHECK(res.mean_power_watts == 0.0);
  CHECK(res.power_dbw == -std::numeric_limits<double>::infinity());
  CHECK(res.ee == 0.0);
  CHECK(res.ber_pu < 0.1);
}

TEST_CASE("csv layout is frozen") {
  CHECK(std::string(kCsvHeader) ==
        "preset,sweep_var,sweep_value,precoder,b_p,b_c,eps_p,eps_c,delta_p0,"
        "delta_c0,v1,v2,ber_pu,ber_cu,bler_pu,bler_cu,tau,power_dbw,ee,"
        "outage_frac,ci_ber_pu,ci_ber_cu,seed");
  SweepRow row;
  row.preset = "run";
  row.config = tiny_config();
  row.result = run(row.config);
  std::ostringstream os;
  write_csv_header(os);
  write_csv_row(os, row);
  std::istringstream is(os.str());
  std::string header, data;
  std::getline(is, header);
  std::getline(is, data);
  CHECK(std::count(header.begin(), header.end(), ',') == 22);
  CHECK(std::count(data.begin(), data.end(), ',') == 22);
  CHECK(data.find("pmslp-perfect") != std::string::npos);
}

TEST_CASE("sweep presets pin the documented protocol") {
  const std::vector<std::pair<std::string, std::string>> fast = {
      {"realizations", "2"}, {"T", "2"}, {"seed", "3"}};

  SUBCASE("fig6to9 fixes the non-swept bound at 0.3") {
    auto ov = fast;
    ov.push_back({"max_points", "3"});
    const SweepTable t = sweep("fig6to9-epsilon-sweep", ov);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
      CHECK(r.sweep_var == "log10_eps_p");
      CHECK(r.config.eps_c == 0.3);
      CHECK(r.config.eps_p ==
            Approx(std::pow(10.0, *r.sweep_value)).epsilon(1e-12));
    }
  }

  SUBCASE("fig13 enumerates the bit split at fixed v and margin") {
    const SweepTable t = sweep("fig13-bit-allocation", fast);
    REQUIRE(t.rows.size() == 8);
    for (const auto& r : t.rows) {
      CHECK(r.config.b_p + r.config.b_c == 5);
      CHECK(r.config.delta_c0 == 1.5);
      if (r.config.precoder == Precoder::pmslp_aqnm) {
        CHECK(r.config.v1 == 0.9);
        CHECK(r.config.v2 == 0.9);
      }
    }
  }

  SUBCASE("fig5 pairs the baseline with both precoder families") {
    auto ov = fast;
    ov.push_back({"max_points", "11"});
    const SweepTable t = sweep("fig5-power-sweep", ov);
    REQUIRE(t.rows.size() == 11);
    CHECK(t.rows[0].config.precoder == Precoder::primary_only);
    for (std::size_t i = 1; i < 10; ++i) {
      CHECK(t.rows[i].config.precoder == Precoder::pmslp_perfect);
      CHECK(t.rows[i].config.delta_p0 == 1.9);
      CHECK(t.rows[i].sweep_var == "delta_c0");
    }
    CHECK(t.rows[10].config.precoder == Precoder::crpalp);
    CHECK(t.rows[10].sweep_var == "P_c_dbw");
  }

  SUBCASE("fig10to12 sweeps the CU margin per bit width") {
    auto ov = fast;
    ov.push_back({"max_points", "6"});
    const SweepTable t = sweep("fig10to12-sm-sweep", ov);
    REQUIRE(t.rows.size() == 6);
    for (const auto& r : t.rows) {
      CHECK(r.sweep_var == "delta_c0");
      CHECK(r.config.delta_p0 == 1.5);
      CHECK(r.config.delta_c0 == *r.sweep_value);
      CHECK(r.config.b_p == r.config.b_c);
    }
    CHECK(t.rows[0].config.b_p == 2);
    CHECK(t.rows[5].config.b_p == 3);
  }

  SUBCASE("empty grid is an empty table") {
    const SweepTable t = sweep("fig5-power-sweep", {{"max_points", "0"}});
    CHECK(t.rows.empty());
    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str() == std::string(kCsvHeader) + "\n");
  }

  SUBCASE("unknown preset is a config error") {
    CHECK_THROWS_AS(sweep("fig99"), Error);
  }
}
