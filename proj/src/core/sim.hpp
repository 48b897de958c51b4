// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo engine: channel realizations, per-slot precoding,
// detection, and the block metrics. Runs a single configuration or a
// named sweep preset; emits fixed-layout CSV.
#ifndef SLPCR_CORE_SIM_HPP
#define SLPCR_CORE_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "channel.hpp"
#include "common.hpp"
#include "quantizer.hpp"

namespace slpcr {

enum class Precoder {
  pmslp_perfect,
  pmslp_normbounded,
  pmslp_aqnm,
  nonrobust_on_impaired,
  crpalp,
  primary_only,  // PBS alone, no cognitive transmission
};

enum class CsiModel { exact, norm_bounded, quantized };

std::string to_string(Precoder p);
std::string to_string(CsiModel m);

struct SimConfig {
  SystemDims dims;
  int D = 4;
  long T = 50;             // symbol slots per block / realization
  int realizations = 200;  // independent channel draws
  Precoder precoder = Precoder::pmslp_perfect;
  std::optional<CsiModel> csi;  // only for nonrobust_on_impaired
  double delta_p0 = 1.5;
  double delta_c0 = 1.5;
  double eps_p = 0.3;
  double eps_c = 0.3;
  int b_p = 2;
  int b_c = 2;
  double v1 = 0.9;
  double v2 = 0.9;
  double beta_p = 1.0;
  double beta_c = 1.0;
  double P_c = 10.0;  // CR-PALP transmit power, watts
  long Q = 0;         // correctable bit errors per block
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  PbsMode pbs_mode = PbsMode::zf;
  ErrorSampling error_sampling = ErrorSampling::sphere;

  // Set one documented key from its text value; throws config errors on
  // unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  // Full consistency check, including precoder/parameter compatibility.
  void validate() const;
  // The impairment actually applied to the shared primary channels.
  CsiModel effective_csi() const;

  static SimConfig from_file(const std::string& path);
  static SimConfig defaults() { return SimConfig{}; }

  const std::set<std::string>& set_keys() const { return set_keys_; }

 private:
  std::set<std::string> set_keys_;
};

struct SimResult {
  double ber_pu = 0.0;
  double ber_cu = 0.0;
  double bler_pu = 0.0;
  double bler_cu = 0.0;
  double tau = 0.0;        // cognitive-side block throughput, bits
  double power_dbw = 0.0;  // 10 log10 of mean per-slot CBS power
  double ee = 0.0;         // tau over mean block energy
  double outage_frac = 0.0;
  double ci_ber_pu = 0.0;  // 95% normal-approximation half-widths
  double ci_ber_cu = 0.0;
  double mean_power_watts = 0.0;
  long total_slots = 0;
  long outage_slots = 0;
};

SimResult run(const SimConfig& config);

struct SweepRow {
  std::string preset;
  std::string sweep_var;
  std::optional<double> sweep_value;
  SimConfig config;
  SimResult result;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Presets: fig5-power-sweep, fig6to9-epsilon-sweep, fig10to12-sm-sweep,
// fig13-bit-allocation. Overrides are config keys applied to every
// point, plus "max_points" to truncate each sub-grid.
SweepTable sweep(const std::string& preset,
                 const std::vector<std::pair<std::string, std::string>>&
                     overrides = {});

extern const char* const kCsvHeader;

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const SweepRow& row);
void write_csv(std::ostream& os, const SweepTable& table);

}  // namespace slpcr

#endif  // SLPCR_CORE_SIM_HPP
