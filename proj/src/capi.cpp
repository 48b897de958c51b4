// SPDX-License-Identifier: Apache-2.0
//
// C API shim: opaque handles over the C++ core, exceptions mapped to
// status codes with a thread-local message.
#include "slpcr/slpcr.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/quantizer.hpp"
#include "core/sim.hpp"

namespace {

thread_local std::string g_last_error;

slpcr_status code_of(const slpcr::Error& e) {
  switch (e.code()) {
    case slpcr::ErrorCode::config:
      return SLPCR_ERR_CONFIG;
    case slpcr::ErrorCode::invalid_argument:
      return SLPCR_ERR_INVALID;
    default:
      return SLPCR_ERR_RUNTIME;
  }
}

template <typename Fn>
slpcr_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SLPCR_OK;
  } catch (const slpcr::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLPCR_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return SLPCR_ERR_RUNTIME;
  }
}

}  // namespace

struct slpcr_config {
  slpcr::SimConfig cfg;
};

struct slpcr_table {
  slpcr::SweepTable table;
};

struct slpcr_quantizer {
  slpcr::LloydMaxCodebook cb;
};

extern "C" {

const char* slpcr_version(void) { return "0.1.0"; }

const char* slpcr_last_error(void) { return g_last_error.c_str(); }

slpcr_config* slpcr_config_create(void) {
  return new (std::nothrow) slpcr_config{};
}

void slpcr_config_destroy(slpcr_config* cfg) { delete cfg; }

slpcr_status slpcr_config_load(slpcr_config* cfg, const char* path) {
  if (!cfg || !path) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  return guarded([&] { cfg->cfg = slpcr::SimConfig::from_file(path); });
}

slpcr_status slpcr_config_set(slpcr_config* cfg, const char* key,
                              const char* value) {
  if (!cfg || !key || !value) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  return guarded([&] { cfg->cfg.set(key, value); });
}

slpcr_status slpcr_run(const slpcr_config* cfg, slpcr_table** out) {
  if (!cfg || !out) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&] {
    slpcr::SweepRow row;
    row.preset = "run";
    row.config = cfg->cfg;
    row.result = slpcr::run(cfg->cfg);
    auto table = std::make_unique<slpcr_table>();
    table->table.rows.push_back(std::move(row));
    *out = table.release();
  });
}

slpcr_status slpcr_sweep(const char* preset, const char* const* overrides,
                         size_t n_overrides, slpcr_table** out) {
  if (!preset || !out || (n_overrides > 0 && !overrides)) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<std::pair<std::string, std::string>> ov;
    for (size_t i = 0; i < n_overrides; ++i) {
      const std::string s = overrides[i] ? overrides[i] : "";
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw slpcr::Error(slpcr::ErrorCode::config,
                           "override must look like key=value: '" + s + "'");
      }
      ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    auto table = std::make_unique<slpcr_table>();
    table->table = slpcr::sweep(preset, ov);
    *out = table.release();
  });
}

size_t slpcr_table_rows(const slpcr_table* table) {
  return table ? table->table.rows.size() : 0;
}

slpcr_status slpcr_table_metric(const slpcr_table* table, size_t row,
                                const char* name, double* out) {
  if (!table || !name || !out || row >= table->table.rows.size()) {
    g_last_error = "bad table access";
    return SLPCR_ERR_INVALID;
  }
  const slpcr::SweepRow& r = table->table.rows[row];
  const slpcr::SimResult& m = r.result;
  const std::string key = name;
  double v = 0.0;
  if (key == "ber_pu") v = m.ber_pu;
  else if (key == "ber_cu") v = m.ber_cu;
  else if (key == "bler_pu") v = m.bler_pu;
  else if (key == "bler_cu") v = m.bler_cu;
  else if (key == "tau") v = m.tau;
  else if (key == "power_dbw") v = m.power_dbw;
  else if (key == "ee") v = m.ee;
  else if (key == "outage_frac") v = m.outage_frac;
  else if (key == "ci_ber_pu") v = m.ci_ber_pu;
  else if (key == "ci_ber_cu") v = m.ci_ber_cu;
  else if (key == "mean_power_watts") v = m.mean_power_watts;
  else if (key == "outage_slots") v = double(m.outage_slots);
  else if (key == "total_slots") v = double(m.total_slots);
  else if (key == "sweep_value") v = r.sweep_value.value_or(0.0);
  else {
    g_last_error = "unknown metric '" + key + "'";
    return SLPCR_ERR_INVALID;
  }
  *out = v;
  g_last_error.clear();
  return SLPCR_OK;
}

slpcr_status slpcr_table_write_csv(const slpcr_table* table,
                                   const char* path) {
  if (!table) {
    g_last_error = "null table";
    return SLPCR_ERR_INVALID;
  }
  return guarded([&] {
    if (path) {
      std::ofstream out(path);
      if (!out) {
        throw slpcr::Error(slpcr::ErrorCode::io,
                           std::string("cannot open '") + path +
                               "' for writing");
      }
      slpcr::write_csv(out, table->table);
      if (!out) {
        throw slpcr::Error(slpcr::ErrorCode::io,
                           std::string("write failed for '") + path + "'");
      }
    } else {
      slpcr::write_csv(std::cout, table->table);
      std::cout.flush();
    }
  });
}

void slpcr_table_destroy(slpcr_table* table) { delete table; }

slpcr_status slpcr_quantizer_train(int bits, slpcr_quantizer** out) {
  if (!out) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&] {
    auto q = std::make_unique<slpcr_quantizer>();
    q->cb = slpcr::lloyd_max_train(bits);
    *out = q.release();
  });
}

slpcr_status slpcr_quantizer_export(const slpcr_quantizer* q,
                                    const char* path) {
  if (!q || !path) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  return guarded([&] {
    std::ofstream out(path);
    if (!out) {
      throw slpcr::Error(slpcr::ErrorCode::io,
                         std::string("cannot open '") + path +
                             "' for writing");
    }
    out << q->cb.to_json() << '\n';
    if (!out) {
      throw slpcr::Error(slpcr::ErrorCode::io,
                         std::string("write failed for '") + path + "'");
    }
  });
}

slpcr_status slpcr_quantizer_import(const char* path, slpcr_quantizer** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) {
      throw slpcr::Error(slpcr::ErrorCode::io,
                         std::string("cannot open '") + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    auto q = std::make_unique<slpcr_quantizer>();
    q->cb = slpcr::LloydMaxCodebook::from_json(text);
    *out = q.release();
  });
}

slpcr_status slpcr_quantizer_mse(const slpcr_quantizer* q, double* out) {
  if (!q || !out) {
    g_last_error = "null argument";
    return SLPCR_ERR_INVALID;
  }
  *out = q->cb.mse;
  g_last_error.clear();
  return SLPCR_OK;
}

int slpcr_quantizer_bits(const slpcr_quantizer* q) {
  return q ? q->cb.bits : 0;
}

void slpcr_quantizer_destroy(slpcr_quantizer* q) { delete q; }

}  // extern "C"
