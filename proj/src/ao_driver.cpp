#include "risec/ao_driver.hpp"

#include <chrono>
#include <cmath>

#include "risec/active_bf.hpp"
#include "risec/passive_bf.hpp"

namespace risec {

namespace {

// Substream tags under the scenario seed.
enum RunTag : std::uint64_t {
    tag_jammer = 101,
    tag_randomization = 102,
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

IterationRecord rate_record(const EffectiveChannels& eff, const BeamformingState& bf) {
    IterationRecord rec;
    rec.r_u = user_rate(eff, bf);
    rec.r_e = eve_rate(eff, bf);
    rec.r_s_raw = rec.r_u - rec.r_e;
    return rec;
}

CVector mrt_init(const CVector& direct, double p_bs) {
    const double n = direct.norm();
    if (n <= 0.0)
        return CVector::Zero(direct.size());
    return std::sqrt(p_bs) / n * direct;
}

bool stop_rule(double cur, double prev, double epsilon_stop) {
    return std::abs(cur - prev) <= epsilon_stop * std::max(std::abs(prev), 1e-12);
}

} // namespace

CVector jammer_beamformer(const ChannelSet& ch, double p_jam, JammerPolicy policy,
                          RandomStream& rng, bool* mrt_fallback) {
    const Eigen::Index n_t = ch.eve_user.size();
    if (mrt_fallback)
        *mrt_fallback = false;
    if (policy == JammerPolicy::zero)
        return CVector::Zero(n_t);
    if (policy == JammerPolicy::mrt) {
        const double n = ch.eve_user.norm();
        if (n > 0.0)
            return std::sqrt(p_jam) / n * ch.eve_user;
        if (mrt_fallback)
            *mrt_fallback = true;
    }
    CVector v(n_t);
    for (Eigen::Index i = 0; i < n_t; ++i)
        v(i) = rng.complex_normal();
    const double n = v.norm();
    return n > 0.0 ? CVector(std::sqrt(p_jam) / n * v) : CVector(CVector::Zero(n_t));
}

OptimizationResult optimize(const ChannelSet& ch, const Scenario& s, const AlgorithmConfig& cfg) {
    const double sigma_u = std::sqrt(s.noise_user);
    const double sigma_e = std::sqrt(s.noise_eve);
    const RandomStream run_rng(s.seed);
    RandomStream jam_rng = run_rng.split(tag_jammer);
    RandomStream draw_rng = run_rng.split(tag_randomization);

    OptimizationResult res;
    res.v = jammer_beamformer(ch, s.p_jam, cfg.jammer_policy, jam_rng);
    res.theta = ReflectionCoefficients::flat(s.ris_elements);
    res.w = mrt_init(ch.bs_user, s.p_bs);

    EffectiveChannels eff = effective_channels(ch, res.theta, sigma_u, sigma_e);
    res.trace.iterations.push_back(rate_record(eff, {res.w, res.v}));
    double prev_rate = res.trace.iterations.back().r_s_raw;

    const int active_iters = cfg.inner_single_pass ? 1 : cfg.active_max_iter;
    const int passive_iters = cfg.inner_single_pass ? 1 : cfg.passive_max_iter;

    for (int t = 1; t <= cfg.max_outer_iterations; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        IterationRecord rec;

        try {
            ActiveBcdResult act = active_bcd(eff, res.v, s.p_bs, cfg.active_tol, active_iters, &res.w);
            rec.active_cycles = act.cycles;
            const double cand_rate = secrecy_rate(eff, {act.w, res.v}).raw;
            if (cand_rate >= secrecy_rate(eff, {res.w, res.v}).raw)
                res.w = std::move(act.w);
        } catch (const std::exception&) {
            rec.active_failed = true;
        }

        try {
            PassiveBcdResult pas =
                passive_bcd(ch, res.w, res.v, s.noise_user, s.noise_eve, res.theta, draw_rng,
                            cfg.passive_tol, passive_iters, cfg.sdp_tol, cfg.n_randomization_draws,
                            cfg.sdp_max_pg);
            rec.passive_iterations = pas.iterations;
            if (pas.improved) {
                res.theta = std::move(pas.theta);
                eff = effective_channels(ch, res.theta, sigma_u, sigma_e);
            }
        } catch (const std::exception&) {
            rec.passive_failed = true;
        }

        const IterationRecord rates = rate_record(eff, {res.w, res.v});
        rec.r_u = rates.r_u;
        rec.r_e = rates.r_e;
        rec.r_s_raw = rates.r_s_raw;
        rec.wall_ms = elapsed_ms(t0);
        res.trace.iterations.push_back(rec);
        res.trace.iterations_used = t;

        if (stop_rule(rec.r_s_raw, prev_rate, cfg.epsilon_stop)) {
            res.trace.converged = true;
            break;
        }
        prev_rate = rec.r_s_raw;
    }
    return res;
}

OptimizationResult optimize_without_ris(const ChannelSet& ch, const Scenario& s,
                                        const AlgorithmConfig& cfg) {
    const double sigma_u = std::sqrt(s.noise_user);
    const double sigma_e = std::sqrt(s.noise_eve);
    const RandomStream run_rng(s.seed);
    RandomStream jam_rng = run_rng.split(tag_jammer);

    OptimizationResult res;
    res.v = jammer_beamformer(ch, s.p_jam, cfg.jammer_policy, jam_rng);
    res.theta = ReflectionCoefficients::flat(s.ris_elements);
    res.w = mrt_init(ch.bs_user, s.p_bs);

    const EffectiveChannels eff = effective_channels(ch, res.theta, sigma_u, sigma_e, 0.0);
    res.trace.iterations.push_back(rate_record(eff, {res.w, res.v}));
    double prev_rate = res.trace.iterations.back().r_s_raw;

    const int active_iters = cfg.inner_single_pass ? 1 : cfg.active_max_iter;
    for (int t = 1; t <= cfg.max_outer_iterations; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        IterationRecord rec;
        try {
            ActiveBcdResult act = active_bcd(eff, res.v, s.p_bs, cfg.active_tol, active_iters, &res.w);
            rec.active_cycles = act.cycles;
            const double cand_rate = secrecy_rate(eff, {act.w, res.v}).raw;
            if (cand_rate >= secrecy_rate(eff, {res.w, res.v}).raw)
                res.w = std::move(act.w);
        } catch (const std::exception&) {
            rec.active_failed = true;
        }

        const IterationRecord rates = rate_record(eff, {res.w, res.v});
        rec.r_u = rates.r_u;
        rec.r_e = rates.r_e;
        rec.r_s_raw = rates.r_s_raw;
        rec.wall_ms = elapsed_ms(t0);
        res.trace.iterations.push_back(rec);
        res.trace.iterations_used = t;

        if (stop_rule(rec.r_s_raw, prev_rate, cfg.epsilon_stop)) {
            res.trace.converged = true;
            break;
        }
        prev_rate = rec.r_s_raw;
    }
    return res;
}

double complexity_estimate(const Scenario& s, int t1, int t2, double epsilon) {
    const double k = static_cast<double>(s.bs_antennas);
    const double n_r = static_cast<double>(s.eve_rx_antennas);
    const double l = static_cast<double>(s.ris_elements);
    const double per_outer = (k * k + 2.0 * n_r * n_r * n_r) + t1 * std::pow(l + 1.0, 4.5);
    return t2 * per_outer * std::log(1.0 / epsilon);
}

} // namespace risec
