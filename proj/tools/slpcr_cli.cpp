// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the simulator exclusively through the
// C API in slpcr/slpcr.h.
//
//   slpcr run --config sim.cfg [--seed N] [--out results.csv]
//   slpcr sweep --preset fig5-power-sweep [--override k=v ...] [--out f]
//   slpcr quantizer --bits 3 --export codebook.json
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slpcr/slpcr.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(slpcr_status st) {
  switch (st) {
    case SLPCR_OK:
      return 0;
    case SLPCR_ERR_CONFIG:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

int fail(slpcr_status st) {
  std::fprintf(stderr, "slpcr: %s\n", slpcr_last_error());
  return exit_code(st);
}

struct ConfigHandle {
  slpcr_config* ptr = slpcr_config_create();
  ~ConfigHandle() { slpcr_config_destroy(ptr); }
};

struct TableHandle {
  slpcr_table* ptr = nullptr;
  ~TableHandle() { slpcr_table_destroy(ptr); }
};

int write_table(const slpcr_table* table, const std::string& out_path) {
  const slpcr_status st =
      slpcr_table_write_csv(table, out_path.empty() ? nullptr
                                                    : out_path.c_str());
  if (st != SLPCR_OK) return fail(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbol-level precoding simulator for the overlay "
               "cognitive-radio downlink"};
  app.require_subcommand(1);

  std::string config_path, out_path, preset, export_path;
  std::int64_t seed = -1;
  std::vector<std::string> overrides;
  int bits = 0;

  CLI::App* cmd_run = app.add_subcommand("run", "run one configuration");
  cmd_run->add_option("--config", config_path, "config file (key = value)")
      ->required();
  cmd_run->add_option("--seed", seed, "master seed override");
  cmd_run->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a named preset");
  cmd_sweep->add_option("--preset", preset, "sweep preset name")->required();
  cmd_sweep->add_option("--override", overrides,
                        "key=value applied to every point (repeatable)");
  cmd_sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* cmd_quant =
      app.add_subcommand("quantizer", "train and export a codebook");
  cmd_quant->add_option("--bits", bits, "resolution, 1..5")->required();
  cmd_quant->add_option("--export", export_path, "codebook JSON path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (cmd_run->parsed()) {
    ConfigHandle cfg;
    slpcr_status st = slpcr_config_load(cfg.ptr, config_path.c_str());
    if (st != SLPCR_OK) return fail(st);
    if (seed >= 0) {
      st = slpcr_config_set(cfg.ptr, "seed", std::to_string(seed).c_str());
      if (st != SLPCR_OK) return fail(st);
    }
    TableHandle table;
    st = slpcr_run(cfg.ptr, &table.ptr);
    if (st != SLPCR_OK) return fail(st);
    return write_table(table.ptr, out_path);
  }

  if (cmd_sweep->parsed()) {
    std::vector<const char*> raw;
    raw.reserve(overrides.size());
    for (const auto& s : overrides) raw.push_back(s.c_str());
    TableHandle table;
    const slpcr_status st =
        slpcr_sweep(preset.c_str(), raw.data(), raw.size(), &table.ptr);
    if (st != SLPCR_OK) return fail(st);
    return write_table(table.ptr, out_path);
  }

  // quantizer
  slpcr_quantizer* q = nullptr;
  slpcr_status st = slpcr_quantizer_train(bits, &q);
  if (st != SLPCR_OK) return fail(st);
  st = slpcr_quantizer_export(q, export_path.c_str());
  double mse = 0.0;
  slpcr_quantizer_mse(q, &mse);
  slpcr_quantizer_destroy(q);
  if (st != SLPCR_OK) return fail(st);
  std::fprintf(stderr, "wrote %d-bit codebook (distortion %.6g) to %s\n",
               bits, mse, export_path.c_str());
  return 0;
}
