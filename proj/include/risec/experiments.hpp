#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risec/ao_driver.hpp"
#include "risec/channel.hpp"

// Monte Carlo sweep harness behind the CLI: builds scenarios from a small
// key-value config format, runs seeded sweeps, and writes CSV plus a JSON
// metadata sidecar. Output is byte-deterministic for a fixed config and
// master seed; wall-clock columns are zeroed unless timing is explicitly
// recorded.

namespace risec {

inline constexpr const char* version_string = "0.1.0";

enum class SweepVariable { p_bs_dbm, bs_antennas, ris_elements, eve_rx_antennas, iteration_trace };
enum class Variant { with_jamming, without_jamming, without_ris };

std::string to_string(SweepVariable v);
std::string to_string(Variant v);
std::optional<SweepVariable> sweep_variable_from_string(const std::string& s);
std::optional<Variant> variant_from_string(const std::string& s);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

struct SweepSpec {
    SweepVariable variable = SweepVariable::p_bs_dbm;
    std::vector<double> values = {10.0, 20.0, 30.0};
    int n_realizations = 20;
    std::vector<Variant> variants = {Variant::with_jamming, Variant::without_jamming};
    std::uint64_t master_seed = 1;
};

struct ResultRow {
    SweepVariable sweep_var;
    double sweep_value;
    Variant variant;
    int realization;
    std::uint64_t seed;
    double r_u;
    double r_e;
    double r_s_raw;
    double r_s_clipped;
    int iterations;
    bool converged;
    double wall_ms;
};

struct ExperimentConfig {
    Scenario scenario;
    AlgorithmConfig algorithm;
    SweepSpec sweep;
    bool record_timing = false;
    int preset = 0; // 0 = none
};

/// Throws std::runtime_error naming every violated key.
void validate(const ExperimentConfig& cfg);

/// Scenario for one realization of a sweep cell: sweep value applied,
/// per-realization seed and geometry angle drawn. Exposed so callers can
/// reproduce exactly what run_sweep executes.
Scenario realization_scenario(const SweepSpec& spec, const Scenario& base, double value,
                              int realization);

/// Channels for a realization scenario, drawn from its canonical substream.
ChannelSet realization_channels(const Scenario& s);

/// Run the full sweep grid. Rows are ordered by (value, variant,
/// realization) regardless of jobs. iteration_trace sweeps emit one row per
/// outer iteration instead of one per run, with the iteration index in
/// sweep_value.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const Scenario& base,
                                 const AlgorithmConfig& cfg, bool record_timing = false,
                                 int jobs = 1);

std::string csv_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// Canned setups matching the reference experiment family (2: transmit
/// power sweep, 3: BS antenna sweep, 4: RIS element sweep, 5: convergence
/// trace).
ExperimentConfig figure_preset(int n);

/// Parse config text. Precedence: defaults, then preset (preset_override
/// beats a preset key in the text; 0 = no override), then explicit keys in
/// file order, then seed_override. Validates before returning.
ExperimentConfig parse_config(const std::string& text, int preset_override = 0,
                              std::optional<std::uint64_t> seed_override = {});
ExperimentConfig load_config(const std::string& path, int preset_override = 0,
                             std::optional<std::uint64_t> seed_override = {});

/// Canonical echo of the effective configuration; parse_config on the
/// result reproduces cfg exactly.
std::string serialize_config(const ExperimentConfig& cfg);

/// JSON sidecar with the effective config and code version.
void write_metadata(const ExperimentConfig& cfg, const std::string& csv_path, std::size_t n_rows,
                    const std::string& out_path);

} // namespace risec
