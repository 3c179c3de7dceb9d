#include "risec/experiments.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

#include "risec/random.hpp"

namespace risec {

namespace {

// Substream tags under the per-realization seed (distinct from the tags the
// optimizer derives from the same seed).
enum SweepTag : std::uint64_t {
    tag_beta = 11,
    tag_channels = 12,
};

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto piece = comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
        out.push_back(trim(piece));
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

double parse_double(const std::string& value, const std::string& key) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        fail(key + ": expected a number, got '" + value + "'");
    return out;
}

int parse_int(const std::string& value, const std::string& key) {
    int out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        fail(key + ": expected an integer, got '" + value + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    std::uint64_t out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        fail(key + ": expected an unsigned integer, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    fail(key + ": expected true or false, got '" + value + "'");
}

struct ConfigEntry {
    std::string section; // empty = top level
    std::string key;
    std::string value;
    int line;
};

std::vector<ConfigEntry> tokenize(const std::string& text) {
    std::vector<ConfigEntry> entries;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string line = nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("config line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "algorithm" && section != "sweep")
                fail("config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("config line " + std::to_string(line_no) + ": expected key = value");
        ConfigEntry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty())
            fail("config line " + std::to_string(line_no) + ": empty key");
        entries.push_back(std::move(e));
    }
    return entries;
}

// Pairs of keys that set the same field in different units.
const std::pair<const char*, const char*> exclusive_pairs[] = {
    {"p_bs_watts", "p_bs_dbm"},
    {"p_jam_watts", "p_jam_dbm"},
    {"noise_user_watts", "noise_user_dbm"},
    {"noise_eve_watts", "noise_eve_dbm"},
    {"pathloss_ref", "pathloss_ref_db"},
};

void apply_scenario_key(Scenario& s, const ConfigEntry& e, const std::string& full) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "bs_antennas")
        s.bs_antennas = parse_int(v, full);
    else if (k == "ris_elements")
        s.ris_elements = parse_int(v, full);
    else if (k == "eve_rx_antennas")
        s.eve_rx_antennas = parse_int(v, full);
    else if (k == "eve_tx_antennas")
        s.eve_tx_antennas = parse_int(v, full);
    else if (k == "p_bs_watts")
        s.p_bs = parse_double(v, full);
    else if (k == "p_bs_dbm")
        s.p_bs = dbm_to_watts(parse_double(v, full));
    else if (k == "p_jam_watts")
        s.p_jam = parse_double(v, full);
    else if (k == "p_jam_dbm")
        s.p_jam = dbm_to_watts(parse_double(v, full));
    else if (k == "noise_user_watts")
        s.noise_user = parse_double(v, full);
    else if (k == "noise_user_dbm")
        s.noise_user = dbm_to_watts(parse_double(v, full));
    else if (k == "noise_eve_watts")
        s.noise_eve = parse_double(v, full);
    else if (k == "noise_eve_dbm")
        s.noise_eve = dbm_to_watts(parse_double(v, full));
    else if (k == "pathloss_ref")
        s.pathloss_ref = parse_double(v, full);
    else if (k == "pathloss_ref_db")
        s.pathloss_ref = std::pow(10.0, parse_double(v, full) / 10.0);
    else if (k == "rician_k")
        s.rician_k = parse_double(v, full);
    else if (k == "spacing_ratio")
        s.spacing_ratio = parse_double(v, full);
    else if (k == "user_radius")
        s.user_radius = parse_double(v, full);
    else if (k == "eve_radius")
        s.eve_radius = parse_double(v, full);
    else if (k == "ris_radius")
        s.ris_position.radius = parse_double(v, full);
    else if (k == "ris_angle")
        s.ris_position.angle = parse_double(v, full);
    else if (k == "exp_bs_user")
        s.exponents.bs_user = parse_double(v, full);
    else if (k == "exp_bs_eve")
        s.exponents.bs_eve = parse_double(v, full);
    else if (k == "exp_bs_ris")
        s.exponents.bs_ris = parse_double(v, full);
    else if (k == "exp_ris_user")
        s.exponents.ris_user = parse_double(v, full);
    else if (k == "exp_ris_eve")
        s.exponents.ris_eve = parse_double(v, full);
    else if (k == "exp_eve_user")
        s.exponents.eve_user = parse_double(v, full);
    else if (k == "exp_eve_ris")
        s.exponents.eve_ris = parse_double(v, full);
    else
        fail("unknown key '" + full + "'");
}

void apply_algorithm_key(AlgorithmConfig& a, const ConfigEntry& e, const std::string& full) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "epsilon_stop")
        a.epsilon_stop = parse_double(v, full);
    else if (k == "max_outer_iterations")
        a.max_outer_iterations = parse_int(v, full);
    else if (k == "active_tol")
        a.active_tol = parse_double(v, full);
    else if (k == "active_max_iter")
        a.active_max_iter = parse_int(v, full);
    else if (k == "passive_tol")
        a.passive_tol = parse_double(v, full);
    else if (k == "passive_max_iter")
        a.passive_max_iter = parse_int(v, full);
    else if (k == "sdp_tol")
        a.sdp_tol = parse_double(v, full);
    else if (k == "randomization_draws")
        a.n_randomization_draws = parse_int(v, full);
    else if (k == "inner_single_pass")
        a.inner_single_pass = parse_bool(v, full);
    else if (k == "jammer_policy") {
        if (v == "mrt")
            a.jammer_policy = JammerPolicy::mrt;
        else if (v == "random")
            a.jammer_policy = JammerPolicy::random;
        else if (v == "zero")
            a.jammer_policy = JammerPolicy::zero;
        else
            fail(full + ": expected one of mrt, random, zero; got '" + v + "'");
    } else
        fail("unknown key '" + full + "'");
}

void apply_sweep_key(SweepSpec& sw, const ConfigEntry& e, const std::string& full) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "variable") {
        const auto var = sweep_variable_from_string(v);
        if (!var)
            fail(full + ": unknown sweep variable '" + v +
                 "' (expected p_bs_dbm, bs_antennas, ris_elements, eve_rx_antennas, or iteration_trace)");
        sw.variable = *var;
    } else if (k == "values") {
        std::vector<double> values;
        for (const auto& piece : split_list(v))
            values.push_back(parse_double(piece, full));
        sw.values = std::move(values);
    } else if (k == "realizations")
        sw.n_realizations = parse_int(v, full);
    else if (k == "variants") {
        std::vector<Variant> variants;
        for (const auto& piece : split_list(v)) {
            const auto var = variant_from_string(piece);
            if (!var)
                fail(full + ": unknown variant '" + piece +
                     "' (expected with_jamming, without_jamming, or without_ris)");
            variants.push_back(*var);
        }
        sw.variants = std::move(variants);
    } else if (k == "master_seed")
        sw.master_seed = parse_u64(v, full);
    else
        fail("unknown key '" + full + "'");
}

const char* jammer_policy_name(JammerPolicy p) {
    switch (p) {
    case JammerPolicy::mrt:
        return "mrt";
    case JammerPolicy::random:
        return "random";
    case JammerPolicy::zero:
        return "zero";
    }
    return "mrt";
}

void apply_sweep_value(SweepVariable var, double value, Scenario& s) {
    switch (var) {
    case SweepVariable::p_bs_dbm:
        s.p_bs = dbm_to_watts(value);
        break;
    case SweepVariable::bs_antennas:
        s.bs_antennas = static_cast<int>(value);
        break;
    case SweepVariable::ris_elements:
        s.ris_elements = static_cast<int>(value);
        break;
    case SweepVariable::eve_rx_antennas:
        s.eve_rx_antennas = static_cast<int>(value);
        break;
    case SweepVariable::iteration_trace:
        break;
    }
}

} // namespace

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::p_bs_dbm:
        return "p_bs_dbm";
    case SweepVariable::bs_antennas:
        return "bs_antennas";
    case SweepVariable::ris_elements:
        return "ris_elements";
    case SweepVariable::eve_rx_antennas:
        return "eve_rx_antennas";
    case SweepVariable::iteration_trace:
        return "iteration_trace";
    }
    return "?";
}

std::string to_string(Variant v) {
    switch (v) {
    case Variant::with_jamming:
        return "with_jamming";
    case Variant::without_jamming:
        return "without_jamming";
    case Variant::without_ris:
        return "without_ris";
    }
    return "?";
}

std::optional<SweepVariable> sweep_variable_from_string(const std::string& s) {
    if (s == "p_bs_dbm")
        return SweepVariable::p_bs_dbm;
    if (s == "bs_antennas")
        return SweepVariable::bs_antennas;
    if (s == "ris_elements")
        return SweepVariable::ris_elements;
    if (s == "eve_rx_antennas")
        return SweepVariable::eve_rx_antennas;
    if (s == "iteration_trace")
        return SweepVariable::iteration_trace;
    return {};
}

std::optional<Variant> variant_from_string(const std::string& s) {
    if (s == "with_jamming")
        return Variant::with_jamming;
    if (s == "without_jamming")
        return Variant::without_jamming;
    if (s == "without_ris")
        return Variant::without_ris;
    return {};
}

double dbm_to_watts(double dbm) {
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
    return 10.0 * std::log10(watts) + 30.0;
}

void validate(const ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok)
            errors.push_back(msg);
    };

    const Scenario& s = cfg.scenario;
    require(s.bs_antennas >= 1, "scenario.bs_antennas: must be >= 1");
    require(s.ris_elements >= 1, "scenario.ris_elements: must be >= 1");
    require(s.eve_rx_antennas >= 1, "scenario.eve_rx_antennas: must be >= 1");
    require(s.eve_tx_antennas >= 1, "scenario.eve_tx_antennas: must be >= 1");
    require(s.p_bs > 0.0, "scenario.p_bs_watts: must be > 0");
    require(s.p_jam > 0.0, "scenario.p_jam_watts: must be > 0");
    require(s.noise_user > 0.0, "scenario.noise_user_watts: must be > 0");
    require(s.noise_eve > 0.0, "scenario.noise_eve_watts: must be > 0");
    require(s.pathloss_ref > 0.0, "scenario.pathloss_ref: must be > 0");
    require(s.rician_k >= 0.0, "scenario.rician_k: must be >= 0");
    require(s.spacing_ratio > 0.0, "scenario.spacing_ratio: must be > 0");
    require(s.user_radius >= 0.0, "scenario.user_radius: must be >= 0");
    require(s.eve_radius >= 0.0, "scenario.eve_radius: must be >= 0");
    require(s.ris_position.radius >= 0.0, "scenario.ris_radius: must be >= 0");
    require(s.exponents.bs_user >= 2.0, "scenario.exp_bs_user: must be >= 2");
    require(s.exponents.bs_eve >= 2.0, "scenario.exp_bs_eve: must be >= 2");
    require(s.exponents.bs_ris >= 2.0, "scenario.exp_bs_ris: must be >= 2");
    require(s.exponents.ris_user >= 2.0, "scenario.exp_ris_user: must be >= 2");
    require(s.exponents.ris_eve >= 2.0, "scenario.exp_ris_eve: must be >= 2");
    require(s.exponents.eve_user >= 2.0, "scenario.exp_eve_user: must be >= 2");
    require(s.exponents.eve_ris >= 2.0, "scenario.exp_eve_ris: must be >= 2");

    const AlgorithmConfig& a = cfg.algorithm;
    require(a.epsilon_stop > 0.0, "algorithm.epsilon_stop: must be > 0");
    require(a.max_outer_iterations >= 1, "algorithm.max_outer_iterations: must be >= 1");
    require(a.active_tol > 0.0, "algorithm.active_tol: must be > 0");
    require(a.active_max_iter >= 1, "algorithm.active_max_iter: must be >= 1");
    require(a.passive_tol > 0.0, "algorithm.passive_tol: must be > 0");
    require(a.passive_max_iter >= 1, "algorithm.passive_max_iter: must be >= 1");
    require(a.sdp_tol > 0.0, "algorithm.sdp_tol: must be > 0");
    require(a.n_randomization_draws >= 1, "algorithm.randomization_draws: must be >= 1");

    const SweepSpec& sw = cfg.sweep;
    require(!sw.values.empty(), "sweep.values: must be nonempty");
    for (std::size_t i = 1; i < sw.values.size(); ++i)
        if (!(sw.values[i] > sw.values[i - 1])) {
            errors.push_back("sweep.values: must be strictly increasing");
            break;
        }
    require(sw.n_realizations >= 1, "sweep.realizations: must be >= 1");
    require(!sw.variants.empty(), "sweep.variants: must be nonempty");
    {
        std::set<Variant> seen;
        for (Variant v : sw.variants)
            if (!seen.insert(v).second) {
                errors.push_back("sweep.variants: duplicate entry " + to_string(v));
                break;
            }
    }
    const bool integer_sweep = sw.variable == SweepVariable::bs_antennas ||
                               sw.variable == SweepVariable::ris_elements ||
                               sw.variable == SweepVariable::eve_rx_antennas;
    if (integer_sweep)
        for (double v : sw.values)
            if (v < 1.0 || v != std::floor(v)) {
                errors.push_back("sweep.values: " + to_string(sw.variable) +
                                 " values must be integers >= 1");
                break;
            }
    if (sw.variable == SweepVariable::iteration_trace && sw.values.size() != 1)
        errors.push_back("sweep.values: iteration_trace takes exactly one placeholder value");
    if (sw.variable == SweepVariable::ris_elements)
        for (Variant v : sw.variants)
            if (v == Variant::without_ris)
                errors.push_back("sweep.variants: without_ris cannot be combined with a sweep "
                                 "over ris_elements");

    if (cfg.preset != 0 && (cfg.preset < 2 || cfg.preset > 5))
        errors.push_back("preset: must be one of 2, 3, 4, 5");

    if (!errors.empty()) {
        std::string joined = errors.front();
        for (std::size_t i = 1; i < errors.size(); ++i)
            joined += "; " + errors[i];
        fail(joined);
    }
}

Scenario realization_scenario(const SweepSpec& spec, const Scenario& base, double value,
                              int realization) {
    Scenario s = base;
    apply_sweep_value(spec.variable, value, s);
    s.seed = combine_keys(spec.master_seed, static_cast<std::uint64_t>(realization));
    RandomStream beta_rng = RandomStream(s.seed).split(tag_beta);
    s.beta = beta_rng.uniform(0.0, std::numbers::pi / 2.0);
    return s;
}

ChannelSet realization_channels(const Scenario& s) {
    return generate_channels(s, RandomStream(s.seed).split(tag_channels));
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const Scenario& base,
                                 const AlgorithmConfig& cfg, bool record_timing, int jobs) {
    {
        ExperimentConfig probe;
        probe.scenario = base;
        probe.algorithm = cfg;
        probe.sweep = spec;
        validate(probe);
    }

    struct Task {
        double value;
        Variant variant;
        int realization;
    };
    std::vector<Task> tasks;
    for (double value : spec.values)
        for (Variant variant : spec.variants)
            for (int r = 0; r < spec.n_realizations; ++r)
                tasks.push_back({value, variant, r});

    std::vector<std::vector<ResultRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};

    auto run_task = [&](const Task& task) {
        std::vector<ResultRow> rows;
        const Scenario s = realization_scenario(spec, base, task.value, task.realization);
        const ChannelSet ch = realization_channels(s);
        AlgorithmConfig ac = cfg;
        if (task.variant == Variant::without_jamming)
            ac.jammer_policy = JammerPolicy::zero;

        const auto t0 = std::chrono::steady_clock::now();
        const OptimizationResult opt = task.variant == Variant::without_ris
                                           ? optimize_without_ris(ch, s, ac)
                                           : optimize(ch, s, ac);
        const double wall =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        if (spec.variable == SweepVariable::iteration_trace) {
            for (std::size_t i = 0; i < opt.trace.iterations.size(); ++i) {
                const IterationRecord& rec = opt.trace.iterations[i];
                ResultRow row;
                row.sweep_var = spec.variable;
                row.sweep_value = static_cast<double>(i);
                row.variant = task.variant;
                row.realization = task.realization;
                row.seed = s.seed;
                row.r_u = rec.r_u;
                row.r_e = rec.r_e;
                row.r_s_raw = rec.r_s_raw;
                row.r_s_clipped = std::max(rec.r_s_raw, 0.0);
                row.iterations = static_cast<int>(i);
                row.converged = opt.trace.converged;
                row.wall_ms = record_timing ? rec.wall_ms : 0.0;
                rows.push_back(row);
            }
        } else {
            const IterationRecord& last = opt.trace.iterations.back();
            ResultRow row;
            row.sweep_var = spec.variable;
            row.sweep_value = task.value;
            row.variant = task.variant;
            row.realization = task.realization;
            row.seed = s.seed;
            row.r_u = last.r_u;
            row.r_e = last.r_e;
            row.r_s_raw = last.r_s_raw;
            row.r_s_clipped = std::max(last.r_s_raw, 0.0);
            row.iterations = opt.trace.iterations_used;
            row.converged = opt.trace.converged;
            row.wall_ms = record_timing ? wall : 0.0;
            rows.push_back(row);
        }
        return rows;
    };

    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            results[i] = run_task(tasks[i]);
    } else {
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size())
                    return;
                results[i] = run_task(tasks[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    std::vector<ResultRow> rows;
    for (auto& chunk : results)
        for (auto& row : chunk)
            rows.push_back(row);
    return rows;
}

std::string csv_string(const std::vector<ResultRow>& rows) {
    std::string out =
        "sweep_var,sweep_value,variant,realization,seed,R_u,R_e,R_s_raw,R_s_clipped,iterations,"
        "converged,wall_ms\n";
    for (const ResultRow& r : rows) {
        out += to_string(r.sweep_var);
        out += ',';
        out += format_double(r.sweep_value);
        out += ',';
        out += to_string(r.variant);
        out += ',';
        out += std::to_string(r.realization);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.r_u);
        out += ',';
        out += format_double(r.r_e);
        out += ',';
        out += format_double(r.r_s_raw);
        out += ',';
        out += format_double(r.r_s_clipped);
        out += ',';
        out += std::to_string(r.iterations);
        out += ',';
        out += r.converged ? '1' : '0';
        out += ',';
        out += format_double(r.wall_ms);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        fail("cannot open output file: " + path);
    const std::string body = csv_string(rows);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f)
        fail("failed writing output file: " + path);
}

ExperimentConfig figure_preset(int n) {
    ExperimentConfig cfg;
    cfg.preset = n;
    Scenario& s = cfg.scenario;
    SweepSpec& sw = cfg.sweep;
    switch (n) {
    case 2: // secrecy rate vs transmit power
        s.bs_antennas = 3;
        s.ris_elements = 36;
        sw.variable = SweepVariable::p_bs_dbm;
        sw.values = {10.0, 20.0, 30.0};
        sw.variants = {Variant::with_jamming, Variant::without_jamming, Variant::without_ris};
        sw.n_realizations = 20;
        break;
    case 3: // vs BS antenna count
        s.p_bs = dbm_to_watts(30.0);
        s.ris_elements = 36;
        sw.variable = SweepVariable::bs_antennas;
        sw.values = {2.0, 3.0, 4.0, 5.0};
        sw.variants = {Variant::with_jamming, Variant::without_jamming};
        sw.n_realizations = 20;
        break;
    case 4: // vs RIS element count
        s.p_bs = dbm_to_watts(30.0);
        s.bs_antennas = 3;
        sw.variable = SweepVariable::ris_elements;
        sw.values = {8.0, 16.0, 24.0, 36.0};
        sw.variants = {Variant::with_jamming, Variant::without_jamming};
        sw.n_realizations = 20;
        break;
    case 5: // convergence trace
        s.p_bs = dbm_to_watts(30.0);
        s.bs_antennas = 3;
        s.ris_elements = 36;
        sw.variable = SweepVariable::iteration_trace;
        sw.values = {0.0};
        sw.variants = {Variant::with_jamming};
        sw.n_realizations = 3;
        break;
    default:
        fail("preset: must be one of 2, 3, 4, 5");
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, int preset_override,
                              std::optional<std::uint64_t> seed_override) {
    const std::vector<ConfigEntry> entries = tokenize(text);

    int preset = 0;
    for (const ConfigEntry& e : entries) {
        if (e.section.empty() && e.key == "preset")
            preset = parse_int(e.value, "preset");
        else if (!e.section.empty() && e.key == "preset")
            fail("preset: must appear before any section header");
    }
    if (preset_override != 0)
        preset = preset_override;
    if (preset != 0 && (preset < 2 || preset > 5))
        fail("preset: must be one of 2, 3, 4, 5");

    ExperimentConfig cfg = preset != 0 ? figure_preset(preset) : ExperimentConfig{};
    cfg.preset = preset;

    std::set<std::string> seen;
    for (const ConfigEntry& e : entries) {
        const std::string full = e.section.empty() ? e.key : e.section + "." + e.key;
        if (!seen.insert(full).second)
            fail("duplicate key '" + full + "'");
        if (e.section.empty()) {
            if (e.key == "preset")
                continue; // consumed above
            if (e.key == "seed")
                cfg.sweep.master_seed = parse_u64(e.value, "seed");
            else if (e.key == "record_timing")
                cfg.record_timing = parse_bool(e.value, "record_timing");
            else
                fail("unknown key '" + e.key + "' (top level)");
        } else if (e.section == "scenario") {
            apply_scenario_key(cfg.scenario, e, full);
        } else if (e.section == "algorithm") {
            apply_algorithm_key(cfg.algorithm, e, full);
        } else {
            apply_sweep_key(cfg.sweep, e, full);
        }
    }

    for (const auto& [a, b] : exclusive_pairs)
        if (seen.count("scenario." + std::string(a)) && seen.count("scenario." + std::string(b)))
            fail("scenario." + std::string(a) + " and scenario." + std::string(b) +
                 " are mutually exclusive");

    if (seed_override)
        cfg.sweep.master_seed = *seed_override;

    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, int preset_override,
                             std::optional<std::uint64_t> seed_override) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        fail("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config(text, preset_override, seed_override);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };

    if (cfg.preset != 0)
        line("preset", std::to_string(cfg.preset));
    line("record_timing", cfg.record_timing ? "true" : "false");

    const Scenario& s = cfg.scenario;
    out += "\n[scenario]\n";
    line("bs_antennas", std::to_string(s.bs_antennas));
    line("ris_elements", std::to_string(s.ris_elements));
    line("eve_rx_antennas", std::to_string(s.eve_rx_antennas));
    line("eve_tx_antennas", std::to_string(s.eve_tx_antennas));
    line("p_bs_watts", format_double(s.p_bs));
    line("p_jam_watts", format_double(s.p_jam));
    line("noise_user_watts", format_double(s.noise_user));
    line("noise_eve_watts", format_double(s.noise_eve));
    line("pathloss_ref", format_double(s.pathloss_ref));
    line("rician_k", format_double(s.rician_k));
    line("spacing_ratio", format_double(s.spacing_ratio));
    line("user_radius", format_double(s.user_radius));
    line("eve_radius", format_double(s.eve_radius));
    line("ris_radius", format_double(s.ris_position.radius));
    line("ris_angle", format_double(s.ris_position.angle));
    line("exp_bs_user", format_double(s.exponents.bs_user));
    line("exp_bs_eve", format_double(s.exponents.bs_eve));
    line("exp_bs_ris", format_double(s.exponents.bs_ris));
    line("exp_ris_user", format_double(s.exponents.ris_user));
    line("exp_ris_eve", format_double(s.exponents.ris_eve));
    line("exp_eve_user", format_double(s.exponents.eve_user));
    line("exp_eve_ris", format_double(s.exponents.eve_ris));

    const AlgorithmConfig& a = cfg.algorithm;
    out += "\n[algorithm]\n";
    line("epsilon_stop", format_double(a.epsilon_stop));
    line("max_outer_iterations", std::to_string(a.max_outer_iterations));
    line("active_tol", format_double(a.active_tol));
    line("active_max_iter", std::to_string(a.active_max_iter));
    line("passive_tol", format_double(a.passive_tol));
    line("passive_max_iter", std::to_string(a.passive_max_iter));
    line("sdp_tol", format_double(a.sdp_tol));
    line("randomization_draws", std::to_string(a.n_randomization_draws));
    line("inner_single_pass", a.inner_single_pass ? "true" : "false");
    line("jammer_policy", jammer_policy_name(a.jammer_policy));

    const SweepSpec& sw = cfg.sweep;
    out += "\n[sweep]\n";
    line("variable", to_string(sw.variable));
    {
        std::string values;
        for (std::size_t i = 0; i < sw.values.size(); ++i) {
            if (i)
                values += ", ";
            values += format_double(sw.values[i]);
        }
        line("values", values);
    }
    line("realizations", std::to_string(sw.n_realizations));
    {
        std::string variants;
        for (std::size_t i = 0; i < sw.variants.size(); ++i) {
            if (i)
                variants += ", ";
            variants += to_string(sw.variants[i]);
        }
        line("variants", variants);
    }
    line("master_seed", std::to_string(sw.master_seed));
    return out;
}

void write_metadata(const ExperimentConfig& cfg, const std::string& csv_path, std::size_t n_rows,
                    const std::string& out_path) {
    nlohmann::json meta;
    meta["tool"] = "risec";
    meta["version"] = version_string;
    meta["preset"] = cfg.preset;
    meta["master_seed"] = cfg.sweep.master_seed;
    meta["rows"] = n_rows;
    meta["csv"] = csv_path;
    meta["config"] = serialize_config(cfg);
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        fail("cannot open metadata file: " + out_path);
    f << meta.dump(2) << "\n";
}

} // namespace risec
