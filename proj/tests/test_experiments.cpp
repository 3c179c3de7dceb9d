#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "risec/experiments.hpp"

using namespace risec;

namespace {

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto nl = s.find('\n', pos);
        if (nl == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

// Small enough that a full sweep grid runs in seconds.
Scenario tiny_scenario() {
    Scenario s;
    s.bs_antennas = 2;
    s.ris_elements = 4;
    return s;
}

AlgorithmConfig tiny_algorithm() {
    AlgorithmConfig a;
    a.max_outer_iterations = 2;
    a.n_randomization_draws = 20;
    return a;
}

} // namespace

TEST_CASE("dbm conversion anchors and round trip") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(dbm_to_watts(-105.0) == doctest::Approx(3.1622776601683794e-14).epsilon(1e-14));
    CHECK(dbm_to_watts(-105.0) == doctest::Approx(Scenario{}.noise_user).epsilon(1e-14));
    for (double dbm : {-105.0, -30.0, 0.0, 17.0, 30.0})
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
}

TEST_CASE("enum names round trip") {
    for (auto v : {SweepVariable::p_bs_dbm, SweepVariable::bs_antennas,
                   SweepVariable::ris_elements, SweepVariable::eve_rx_antennas,
                   SweepVariable::iteration_trace}) {
        const auto back = sweep_variable_from_string(to_string(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
    for (auto v : {Variant::with_jamming, Variant::without_jamming, Variant::without_ris}) {
        const auto back = variant_from_string(to_string(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
    CHECK(!sweep_variable_from_string("bogus").has_value());
    CHECK(!variant_from_string("bogus").has_value());
}

TEST_CASE("validate names the violated key") {
    ExperimentConfig base;
    CHECK_NOTHROW(validate(base));

    ExperimentConfig cfg = base;
    cfg.sweep.values = {10.0, 10.0};
    CHECK_THROWS_WITH_AS(validate(cfg), "sweep.values: must be strictly increasing",
                         std::runtime_error);

    cfg = base;
    cfg.sweep.n_realizations = 0;
    CHECK_THROWS_WITH_AS(validate(cfg), "sweep.realizations: must be >= 1", std::runtime_error);

    cfg = base;
    cfg.sweep.variable = SweepVariable::ris_elements;
    cfg.sweep.values = {8.0, 16.0};
    cfg.sweep.variants = {Variant::without_ris};
    CHECK_THROWS_WITH_AS(
        validate(cfg),
        "sweep.variants: without_ris cannot be combined with a sweep over ris_elements",
        std::runtime_error);

    cfg = base;
    cfg.scenario.p_bs = -2.0;
    CHECK_THROWS_WITH_AS(validate(cfg), "scenario.p_bs_watts: must be > 0", std::runtime_error);

    // Multiple violations are reported together.
    cfg = base;
    cfg.scenario.p_bs = -2.0;
    cfg.scenario.noise_user = 0.0;
    CHECK_THROWS_WITH_AS(validate(cfg),
                         "scenario.p_bs_watts: must be > 0; scenario.noise_user_watts: must be > 0",
                         std::runtime_error);

    cfg = base;
    cfg.sweep.variable = SweepVariable::iteration_trace;
    cfg.sweep.values = {0.0, 1.0};
    CHECK_THROWS_WITH_AS(validate(cfg),
                         "sweep.values: iteration_trace takes exactly one placeholder value",
                         std::runtime_error);

    cfg = base;
    cfg.sweep.variants = {Variant::with_jamming, Variant::with_jamming};
    CHECK_THROWS_WITH_AS(validate(cfg), "sweep.variants: duplicate entry with_jamming",
                         std::runtime_error);

    cfg = base;
    cfg.sweep.variable = SweepVariable::bs_antennas;
    cfg.sweep.values = {2.0, 2.5};
    CHECK_THROWS_WITH_AS(validate(cfg),
                         "sweep.values: bs_antennas values must be integers >= 1",
                         std::runtime_error);
}

TEST_CASE("realization_scenario applies sweep value and seeds geometry") {
    SweepSpec spec;
    spec.master_seed = 77;

    spec.variable = SweepVariable::p_bs_dbm;
    Scenario s = realization_scenario(spec, tiny_scenario(), 20.0, 0);
    CHECK(s.p_bs == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(s.bs_antennas == 2);
    CHECK(s.user_radius == 30.0);

    spec.variable = SweepVariable::ris_elements;
    s = realization_scenario(spec, tiny_scenario(), 12.0, 0);
    CHECK(s.ris_elements == 12);

    // Shared angle lands in the first quadrant and varies across realizations.
    std::vector<double> betas;
    for (int r = 0; r < 5; ++r) {
        const Scenario sr = realization_scenario(spec, tiny_scenario(), 12.0, r);
        CHECK(sr.beta >= 0.0);
        CHECK(sr.beta <= std::numbers::pi / 2.0);
        for (double prev : betas)
            CHECK(sr.beta != prev);
        betas.push_back(sr.beta);
    }

    // Different realizations get different seeds; repeat calls agree.
    const Scenario a = realization_scenario(spec, tiny_scenario(), 12.0, 3);
    const Scenario b = realization_scenario(spec, tiny_scenario(), 12.0, 3);
    const Scenario c = realization_scenario(spec, tiny_scenario(), 12.0, 4);
    CHECK(a.seed == b.seed);
    CHECK(a.beta == b.beta);
    CHECK(a.seed != c.seed);
}

TEST_CASE("realizations are paired across sweep values and variants") {
    SweepSpec spec;
    spec.variable = SweepVariable::p_bs_dbm;
    spec.master_seed = 5;
    const Scenario lo = realization_scenario(spec, tiny_scenario(), 10.0, 1);
    const Scenario hi = realization_scenario(spec, tiny_scenario(), 30.0, 1);
    CHECK(lo.seed == hi.seed);
    CHECK(lo.beta == hi.beta);
    const ChannelSet ch_lo = realization_channels(lo);
    const ChannelSet ch_hi = realization_channels(hi);
    CHECK(ch_lo.bs_user == ch_hi.bs_user);
    CHECK(ch_lo.bs_ris == ch_hi.bs_ris);
    CHECK(ch_lo.ris_eve == ch_hi.ris_eve);
}

TEST_CASE("realization_channels shapes and determinism") {
    SweepSpec spec;
    const Scenario s = realization_scenario(spec, tiny_scenario(), 10.0, 2);
    const ChannelSet ch = realization_channels(s);
    CHECK(ch.bs_ris.rows() == 4);
    CHECK(ch.bs_ris.cols() == 2);
    CHECK(ch.bs_user.size() == 2);
    CHECK(ch.bs_eve.rows() == 2);
    CHECK(ch.ris_user.size() == 4);
    CHECK(ch.eve_ris.rows() == 4);
    CHECK(ch.eve_user.size() == 2);

    const ChannelSet again = realization_channels(s);
    CHECK(ch.bs_user == again.bs_user);
    CHECK(ch.ris_eve == again.ris_eve);

    const Scenario other = realization_scenario(spec, tiny_scenario(), 10.0, 3);
    CHECK(realization_channels(other).bs_user != ch.bs_user);

    // Growing the array extends the realization instead of redrawing it.
    SweepSpec lspec;
    lspec.variable = SweepVariable::ris_elements;
    const ChannelSet small = realization_channels(realization_scenario(lspec, tiny_scenario(), 2.0, 0));
    const ChannelSet large = realization_channels(realization_scenario(lspec, tiny_scenario(), 5.0, 0));
    CHECK(small.bs_ris == large.bs_ris.topRows(2));
    CHECK(small.ris_user == large.ris_user.head(2));
    CHECK(small.bs_user == large.bs_user);
}

TEST_CASE("run_sweep row order, pairing, and determinism") {
    SweepSpec spec;
    spec.variable = SweepVariable::p_bs_dbm;
    spec.values = {10.0, 20.0};
    spec.variants = {Variant::with_jamming, Variant::without_jamming, Variant::without_ris};
    spec.n_realizations = 3;
    spec.master_seed = 9;
    const Scenario base = tiny_scenario();
    const AlgorithmConfig cfg = tiny_algorithm();

    const auto rows = run_sweep(spec, base, cfg);
    REQUIRE(rows.size() == 2 * 3 * 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        CHECK(r.sweep_var == SweepVariable::p_bs_dbm);
        CHECK(r.sweep_value == spec.values[i / 9]);
        CHECK(r.variant == spec.variants[(i / 3) % 3]);
        CHECK(r.realization == static_cast<int>(i % 3));
        CHECK(r.seed ==
              realization_scenario(spec, base, r.sweep_value, r.realization).seed);
        CHECK(r.r_u >= 0.0);
        CHECK(r.r_e >= 0.0);
        CHECK(r.r_s_clipped == std::max(r.r_s_raw, 0.0));
        CHECK(r.iterations >= 1);
        CHECK(r.wall_ms == 0.0); // timing off by default
    }

    // Same (value, realization) cell shares its seed across variants.
    for (int v = 0; v < 2; ++v)
        for (int r = 0; r < 3; ++r) {
            const std::uint64_t s0 = rows[v * 9 + 0 * 3 + r].seed;
            CHECK(rows[v * 9 + 1 * 3 + r].seed == s0);
            CHECK(rows[v * 9 + 2 * 3 + r].seed == s0);
        }

    CHECK(csv_string(run_sweep(spec, base, cfg)) == csv_string(rows));
}

TEST_CASE("run_sweep iteration_trace emits one row per outer iteration") {
    SweepSpec spec;
    spec.variable = SweepVariable::iteration_trace;
    spec.values = {0.0};
    spec.variants = {Variant::with_jamming};
    spec.n_realizations = 2;
    spec.master_seed = 4;
    AlgorithmConfig cfg = tiny_algorithm();
    cfg.max_outer_iterations = 4;

    const auto rows = run_sweep(spec, tiny_scenario(), cfg);
    REQUIRE(rows.size() >= 4); // at least start + one step per realization
    int blocks = 0;
    for (std::size_t i = 0; i < rows.size();) {
        ++blocks;
        const int realization = rows[i].realization;
        double prev = rows[i].r_s_raw;
        int expected_index = 0;
        for (; i < rows.size() && rows[i].realization == realization; ++i) {
            CHECK(rows[i].sweep_value == static_cast<double>(expected_index));
            CHECK(rows[i].iterations == expected_index);
            CHECK(rows[i].r_s_raw >= prev - 1e-9);
            prev = rows[i].r_s_raw;
            ++expected_index;
        }
        CHECK(expected_index >= 2);
    }
    CHECK(blocks == 2);
}

TEST_CASE("csv format") {
    SweepSpec spec;
    spec.values = {10.0};
    spec.variants = {Variant::with_jamming};
    spec.n_realizations = 2;
    const auto rows = run_sweep(spec, tiny_scenario(), tiny_algorithm());
    const std::string csv = csv_string(rows);

    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == rows.size() + 1);
    CHECK(lines[0] ==
          "sweep_var,sweep_value,variant,realization,seed,R_u,R_e,R_s_raw,R_s_clipped,"
          "iterations,converged,wall_ms");
    CHECK(csv.back() == '\n');
    CHECK(csv.find('\r') == std::string::npos);

    const auto fields = split_fields(lines[1]);
    REQUIRE(fields.size() == 12);
    CHECK(fields[0] == "p_bs_dbm");
    CHECK(fields[1] == "10");
    CHECK(fields[2] == "with_jamming");
    CHECK(fields[3] == "0");
    CHECK(fields[4] == std::to_string(rows[0].seed));
    CHECK(std::stod(fields[5]) == doctest::Approx(rows[0].r_u).epsilon(1e-12));
    CHECK(std::stod(fields[7]) == doctest::Approx(rows[0].r_s_raw).epsilon(1e-12));
    CHECK((fields[10] == "0" || fields[10] == "1"));
    CHECK(fields[11] == "0");
}

TEST_CASE("figure_preset contents") {
    const ExperimentConfig p2 = figure_preset(2);
    CHECK(p2.preset == 2);
    CHECK(p2.scenario.bs_antennas == 3);
    CHECK(p2.scenario.ris_elements == 36);
    CHECK(p2.sweep.variable == SweepVariable::p_bs_dbm);
    CHECK(p2.sweep.values == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(p2.sweep.variants == std::vector<Variant>{Variant::with_jamming,
                                                    Variant::without_jamming,
                                                    Variant::without_ris});
    CHECK(p2.sweep.n_realizations == 20);

    const ExperimentConfig p3 = figure_preset(3);
    CHECK(p3.scenario.p_bs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p3.scenario.ris_elements == 36);
    CHECK(p3.sweep.variable == SweepVariable::bs_antennas);
    CHECK(p3.sweep.values == std::vector<double>{2.0, 3.0, 4.0, 5.0});
    CHECK(p3.sweep.variants.size() == 2);

    const ExperimentConfig p4 = figure_preset(4);
    CHECK(p4.sweep.variable == SweepVariable::ris_elements);
    CHECK(p4.sweep.values == std::vector<double>{8.0, 16.0, 24.0, 36.0});
    CHECK(p4.scenario.bs_antennas == 3);

    const ExperimentConfig p5 = figure_preset(5);
    CHECK(p5.sweep.variable == SweepVariable::iteration_trace);
    CHECK(p5.sweep.values == std::vector<double>{0.0});
    CHECK(p5.sweep.variants == std::vector<Variant>{Variant::with_jamming});
    CHECK(p5.sweep.n_realizations == 3);
    CHECK(p5.scenario.ris_elements == 36);

    for (int n : {0, 1, 6, -2})
        CHECK_THROWS_AS((void)figure_preset(n), std::runtime_error);
    for (int n : {2, 3, 4, 5})
        CHECK_NOTHROW(validate(figure_preset(n)));
}

TEST_CASE("parse_config defaults, precedence, and overrides") {
    const ExperimentConfig cfg = parse_config("");
    CHECK(cfg.preset == 0);
    CHECK(cfg.scenario.bs_antennas == 3);
    CHECK(cfg.scenario.ris_elements == 16);
    CHECK(cfg.sweep.values == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(cfg.sweep.master_seed == 1);
    CHECK(!cfg.record_timing);

    const ExperimentConfig p2 = parse_config("preset = 2\nseed = 5\n");
    CHECK(p2.preset == 2);
    CHECK(p2.scenario.ris_elements == 36);
    CHECK(p2.sweep.master_seed == 5);

    // Explicit keys win over the preset they refine.
    const ExperimentConfig tweaked =
        parse_config("preset = 2\n[scenario]\nris_elements = 8\n");
    CHECK(tweaked.scenario.ris_elements == 8);
    CHECK(tweaked.scenario.bs_antennas == 3);

    CHECK(parse_config("preset = 2\n", 4).preset == 4);
    CHECK(parse_config("preset = 2\n", 4).sweep.variable == SweepVariable::ris_elements);
    CHECK(parse_config("seed = 5\n", 0, 99).sweep.master_seed == 99);

    // Comments, blank lines, and both comment characters are tolerated.
    const ExperimentConfig commented = parse_config(
        "# header comment\n\nseed = 8 ; trailing\n[scenario]\nbs_antennas = 4\n");
    CHECK(commented.sweep.master_seed == 8);
    CHECK(commented.scenario.bs_antennas == 4);
}

TEST_CASE("parse_config rejections") {
    CHECK_THROWS_WITH_AS(parse_config("[scenario]\np_bs_watts = -2\n"),
                         "scenario.p_bs_watts: must be > 0", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("[scenario]\nwat = 1\n"), "unknown key 'scenario.wat'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("seed = 1\nseed = 2\n"), "duplicate key 'seed'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("[sweep]\npreset = 2\n"),
                         "preset: must appear before any section header", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("[scenario]\np_bs_watts = 1\np_bs_dbm = 30\n"),
                         "scenario.p_bs_watts and scenario.p_bs_dbm are mutually exclusive",
                         std::runtime_error);
    CHECK_THROWS_AS(parse_config("[algorithm]\njammer_policy = sideways\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("preset = 7\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("[scenario]\nbs_antennas\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("[scenario]\nbs_antennas = soon\n"), std::runtime_error);

    const ExperimentConfig zero = parse_config("[algorithm]\njammer_policy = zero\n");
    CHECK(zero.algorithm.jammer_policy == JammerPolicy::zero);
}

TEST_CASE("serialize_config round trips") {
    for (int n : {2, 3, 4, 5}) {
        const std::string text = serialize_config(figure_preset(n));
        const ExperimentConfig back = parse_config(text);
        CHECK(serialize_config(back) == text);
        CHECK(back.preset == n);
    }

    ExperimentConfig cfg;
    cfg.scenario.ris_elements = 12;
    cfg.scenario.p_jam = 2.5e-4;
    cfg.algorithm.jammer_policy = JammerPolicy::random;
    cfg.sweep.master_seed = 1234567;
    cfg.record_timing = true;
    const std::string text = serialize_config(cfg);
    const ExperimentConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.scenario.ris_elements == 12);
    CHECK(back.algorithm.jammer_policy == JammerPolicy::random);
    CHECK(back.sweep.master_seed == 1234567);
    CHECK(back.record_timing);
}
