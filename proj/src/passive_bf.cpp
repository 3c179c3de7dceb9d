#include "risec/passive_bf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "risec/numerics.hpp"

namespace risec {

namespace {

struct Traces {
    double signal_user;
    double jamming_user;
    double signal_eve;
    double jamming_eve;
};

Traces traces_of(const LiftedEMatrices& e, const CMatrix& theta) {
    return {numerics::trace_product(e.signal_user, theta),
            numerics::trace_product(e.jamming_user, theta),
            numerics::trace_product(e.signal_eve, theta),
            numerics::trace_product(e.jamming_eve, theta)};
}

CMatrix objective_gradient(const LiftedEMatrices& e, const CMatrix& theta, double eps4,
                           double eps5, double noise_u, double noise_e) {
    const Traces t = traces_of(e, theta);
    CMatrix g = -(e.jamming_user + e.signal_user) / (t.jamming_user + t.signal_user + noise_u);
    g += eps4 * (e.jamming_eve + e.signal_eve);
    g -= e.jamming_eve / (t.jamming_eve + noise_e);
    g += eps5 * e.jamming_user;
    return g;
}

ReflectionCoefficients phases_from(const CVector& r) {
    const Eigen::Index l = r.size() - 1;
    RVector phases(l);
    const double base = std::arg(r(0));
    for (Eigen::Index i = 0; i < l; ++i)
        phases(i) = std::arg(r(i + 1)) - base;
    return {std::move(phases)};
}

} // namespace

LiftedEMatrices build_e_matrices(const ChannelSet& ch, const CVector& w, const CVector& v) {
    const Eigen::Index l = ch.bs_ris.rows();
    const Eigen::Index n_r = ch.bs_eve.rows();
    const CVector bs_ris_w = ch.bs_ris * w;  // L
    const CVector eve_ris_v = ch.eve_ris * v; // L

    // Stacked composites m such that m * [1; phi] is the received value.
    CRowVector m_signal_user(l + 1);
    m_signal_user(0) = (ch.bs_user.adjoint() * w).value();
    m_signal_user.tail(l) = ch.ris_user.adjoint() * bs_ris_w.asDiagonal();

    CRowVector m_jamming_user(l + 1);
    m_jamming_user(0) = (ch.eve_user.adjoint() * v).value();
    m_jamming_user.tail(l) = ch.ris_user.adjoint() * eve_ris_v.asDiagonal();

    CMatrix m_signal_eve(n_r, l + 1);
    m_signal_eve.col(0) = ch.bs_eve * w;
    m_signal_eve.rightCols(l) = ch.ris_eve * bs_ris_w.asDiagonal();

    CMatrix m_jamming_eve(n_r, l + 1);
    m_jamming_eve.col(0).setZero(); // no direct eavesdropper self-path
    m_jamming_eve.rightCols(l) = ch.ris_eve * eve_ris_v.asDiagonal();

    LiftedEMatrices e;
    e.signal_user = m_signal_user.adjoint() * m_signal_user;
    e.jamming_user = m_jamming_user.adjoint() * m_jamming_user;
    e.signal_eve = m_signal_eve.adjoint() * m_signal_eve;
    e.jamming_eve = m_jamming_eve.adjoint() * m_jamming_eve;
    return e;
}

CMatrix rank_one_lift(const ReflectionCoefficients& theta) {
    CVector phi_bar(theta.size() + 1);
    phi_bar(0) = 1.0;
    phi_bar.tail(theta.size()) = theta.coefficients();
    return phi_bar * phi_bar.adjoint();
}

double lifted_secrecy_rate(const LiftedEMatrices& e, const CMatrix& theta, double noise_u,
                           double noise_e) {
    const Traces t = traces_of(e, theta);
    const double user_total = t.jamming_user + noise_u + t.signal_user;
    const double eve_total = t.jamming_eve + noise_e + t.signal_eve;
    const double user_floor = t.jamming_user + noise_u;
    const double eve_floor = t.jamming_eve + noise_e;
    if (!(user_total > 0.0) || !(eve_total > 0.0) || !(user_floor > 0.0) || !(eve_floor > 0.0))
        throw std::domain_error("lifted_secrecy_rate: nonpositive log argument");
    return std::log2(user_total) - std::log2(eve_total) - std::log2(user_floor) + std::log2(eve_floor);
}

std::pair<double, double> update_eps45(const LiftedEMatrices& e, const CMatrix& theta,
                                       double noise_u, double noise_e) {
    const Traces t = traces_of(e, theta);
    const double eps4 = 1.0 / (t.jamming_eve + t.signal_eve + noise_e);
    const double eps5 = 1.0 / (t.jamming_user + noise_u);
    return {eps4, eps5};
}

double sdp_objective(const LiftedEMatrices& e, const CMatrix& theta, double eps4, double eps5,
                     double noise_u, double noise_e) {
    const Traces t = traces_of(e, theta);
    return -std::log(t.jamming_user + t.signal_user + noise_u) +
           eps4 * (t.jamming_eve + t.signal_eve) - std::log(t.jamming_eve + noise_e) +
           eps5 * t.jamming_user;
}

CMatrix project_unit_diag_psd(const CMatrix& x, double tol, int max_iter) {
    CMatrix cur = numerics::hermitize(x);
    CMatrix correction = CMatrix::Zero(x.rows(), x.cols());
    CMatrix out = cur;
    for (int it = 0; it < max_iter; ++it) {
        const CMatrix cone = numerics::psd_project(cur + correction);
        correction = cur + correction - cone;
        const double diag_err = (cone.diagonal().real().array() - 1.0).abs().maxCoeff();
        cur = cone;
        cur.diagonal().setOnes();
        out = cur;
        // By Weyl's inequality the diagonal reset shifts eigenvalues by at
        // most diag_err, so this bound certifies min eig >= -tol.
        if (diag_err <= tol)
            break;
    }
    return out;
}

SdpResult solve_theta_sdp(const LiftedEMatrices& e, double eps4, double eps5, double noise_u,
                          double noise_e, double tol, const CMatrix* warm, int max_pg_iter) {
    const Eigen::Index n = e.signal_user.rows();
    SdpResult res;
    res.theta = warm ? project_unit_diag_psd(*warm) : CMatrix(CMatrix::Identity(n, n));
    res.objective = sdp_objective(e, res.theta, eps4, eps5, noise_u, noise_e);

    // Feasibility projections only need to certify min eig >= -1e-8 here;
    // driving them to machine precision mid-iteration wastes eigensolves.
    constexpr double proj_tol = 1e-8;
    // Nonmonotone (watchdog) window for the line search: spectral steps are
    // allowed transient objective increases, which is what lets them cut
    // through the ill-conditioned valley along the PSD boundary.
    constexpr int watch = 10;
    std::vector<double> recent{res.objective};
    CMatrix best_theta = res.theta;
    double best_f = res.objective;
    double cur_f = res.objective;
    double step = 0.0;
    CMatrix prev_theta, prev_grad;
    int stall = 0;
    for (int it = 0; it < max_pg_iter; ++it) {
        res.iterations = it + 1;
        const CMatrix grad = objective_gradient(e, res.theta, eps4, eps5, noise_u, noise_e);
        // Spectral (Barzilai-Borwein) trial step, clamped so the trial
        // displacement step*|grad| stays within a few multiples of the
        // iterate's own scale: projecting wildly infeasible points is what
        // makes the feasibility restoration expensive.
        const double step_cap = 4.0 * (1.0 + res.theta.norm()) / (1.0 + grad.norm());
        const double step_floor = 1e-16 * (1.0 + res.theta.norm()) / (1.0 + grad.norm());
        if (it == 0) {
            step = step_cap;
        } else {
            const CMatrix s_diff = res.theta - prev_theta;
            const CMatrix y_diff = grad - prev_grad;
            const double sy = numerics::trace_product(s_diff, y_diff);
            if (sy > 1e-30)
                step = s_diff.squaredNorm() / sy;
            step = std::min(std::max(step, step_floor), step_cap);
        }

        const double f_ref = *std::max_element(recent.begin(), recent.end());
        bool accepted = false;
        CMatrix cand;
        double f_cand = 0.0;
        double move_sq = 0.0;
        while (step >= step_floor) {
            cand = project_unit_diag_psd(res.theta - step * grad, proj_tol);
            f_cand = sdp_objective(e, cand, eps4, eps5, noise_u, noise_e);
            move_sq = (cand - res.theta).squaredNorm();
            if (f_cand <= f_ref - 1e-4 / step * move_sq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No acceptable step above machine precision: stationary point or
            // a genuinely stuck line search. Distinguish by the size of one
            // unit projected-gradient step.
            const double probe = (project_unit_diag_psd(res.theta - grad / (1.0 + grad.norm())) -
                                  res.theta)
                                     .norm();
            res.degraded = probe > 1e-8 * (1.0 + res.theta.norm());
            break;
        }

        const double rel = std::abs(cur_f - f_cand) / std::max(std::abs(cur_f), 1e-12);
        prev_theta = std::move(res.theta);
        prev_grad = grad;
        res.theta = std::move(cand);
        cur_f = f_cand;
        if (f_cand < best_f) {
            best_f = f_cand;
            best_theta = res.theta;
        }
        recent.push_back(f_cand);
        if (recent.size() > watch)
            recent.erase(recent.begin());
        stall = rel < tol ? stall + 1 : 0;
        if (stall >= 5)
            break;
    }
    res.theta = std::move(best_theta);
    res.objective = best_f;
    return res;
}

ReflectionCoefficients gaussian_randomization(const CMatrix& theta, const LiftedEMatrices& e,
                                              double noise_u, double noise_e, int n_draws,
                                              RandomStream& rng) {
    const CMatrix psd = numerics::psd_project(theta);
    auto eig = numerics::hermitian_eig(psd);
    const CVector leading = eig.eigenvectors.col(0);

    ReflectionCoefficients best = phases_from(leading);
    if (eig.eigenvalues.size() > 1 && eig.eigenvalues(1) < 1e-6 * eig.eigenvalues(0))
        return best; // numerically rank-1: the eigenvector is exact

    double best_rate = lifted_secrecy_rate(e, rank_one_lift(best), noise_u, noise_e);
    for (int d = 0; d < n_draws; ++d) {
        const CVector r = numerics::sample_complex_gaussian(psd, rng);
        ReflectionCoefficients cand = phases_from(r);
        const double rate = lifted_secrecy_rate(e, rank_one_lift(cand), noise_u, noise_e);
        if (rate > best_rate) {
            best_rate = rate;
            best = std::move(cand);
        }
    }
    return best;
}

PassiveBcdResult passive_bcd(const ChannelSet& ch, const CVector& w, const CVector& v,
                             double noise_u, double noise_e,
                             const ReflectionCoefficients& incumbent, RandomStream& rng,
                             double tol, int max_iter, double sdp_tol, int n_draws,
                             int sdp_max_pg) {
    const LiftedEMatrices e = build_e_matrices(ch, w, v);

    PassiveBcdResult res;
    // Weights start from the incumbent phases; the first relaxed solve starts
    // from the identity because rank-1 matrices sit where the PSD cone and
    // the unit-diagonal set meet at a vanishing angle, which both stalls the
    // line search and makes every feasibility projection expensive.
    res.lifted = rank_one_lift(incumbent);
    bool lifted_is_start = true;
    double prev = 0.0;
    bool have_prev = false;
    for (int t = 0; t < max_iter; ++t) {
        const auto [eps4, eps5] = update_eps45(e, res.lifted, noise_u, noise_e);
        const CMatrix* warm = lifted_is_start ? nullptr : &res.lifted;
        SdpResult sdp =
            solve_theta_sdp(e, eps4, eps5, noise_u, noise_e, sdp_tol, warm, sdp_max_pg);
        res.lifted = std::move(sdp.theta);
        lifted_is_start = false;
        res.degraded = res.degraded || sdp.degraded;
        res.iterations = t + 1;
        // Full surrogate including the weight terms; equals minus the
        // secrecy rate (nats) when the weights are fresh.
        const double obj = sdp.objective + eps4 * noise_e + eps5 * noise_u - std::log(eps4) -
                           std::log(eps5) - 2.0;
        res.objective.push_back(obj);
        if (have_prev && std::abs(obj - prev) <= tol * std::max(std::abs(prev), 1e-12))
            break;
        prev = obj;
        have_prev = true;
    }

    ReflectionCoefficients cand =
        gaussian_randomization(res.lifted, e, noise_u, noise_e, n_draws, rng);

    // Accept only on strict true-rate improvement, judged by the same
    // evaluator the rest of the pipeline uses.
    const double sigma_u = std::sqrt(noise_u);
    const double sigma_e = std::sqrt(noise_e);
    const BeamformingState bf{w, v};
    const double rate_cand =
        secrecy_rate(effective_channels(ch, cand, sigma_u, sigma_e), bf).raw;
    const double rate_inc =
        secrecy_rate(effective_channels(ch, incumbent, sigma_u, sigma_e), bf).raw;
    res.improved = rate_cand > rate_inc;
    res.theta = res.improved ? std::move(cand) : incumbent;
    return res;
}

} // namespace risec
