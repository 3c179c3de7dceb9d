#pragma once

#include <utility>
#include <vector>

#include "risec/rates.hpp"
#include "risec/types.hpp"

// Transmit beamformer design for a fixed reflection state, by block
// coordinate ascent on a weighted-MSE surrogate of the secrecy rate. Each
// block has a closed-form conditional optimum, so the surrogate is monotone
// across cycles. Surrogate values are in nats; the exact-at-optimum identity
// ln(det eps) - tr(eps E) + dim = -ln(det E) holds only in the natural log.

namespace risec {

struct WmmseAuxiliaries {
    Complex x1;   // user-side receive scalar
    CVector x2;   // eavesdropper receive filter for the jamming path, N_r
    double eps1 = 1.0;
    double eps2 = 1.0;
    CMatrix eps3; // N_r x N_r, positive definite
};

/// Scalar user-side MSE: |1 - x1^H (to_user w)|^2 + |x1|^2 (1 + |jam_to_user v|^2).
double mse_e1(Complex x1, const CVector& w, const CVector& v, const EffectiveChannels& eff);

/// Jamming-path MSE at the eavesdropper: |1 - x2^H u|^2 + ||x2||^2 with
/// u = jam_to_eve v.
double mse_e2(const CVector& x2, const CVector& v, const EffectiveChannels& eff);

/// Signal-plus-jamming covariance at the eavesdropper:
/// I + u u^H + m m^H with u = jam_to_eve v, m = to_eve w.
CMatrix mse_e3(const CVector& w, const CVector& v, const EffectiveChannels& eff);

/// MMSE receive filters for fixed (w, v).
std::pair<Complex, CVector> update_x(const EffectiveChannels& eff, const CVector& w, const CVector& v);

/// Optimal weights eps_i = E_i^{-1} for fixed (w, v, x).
WmmseAuxiliaries update_eps(const EffectiveChannels& eff, const CVector& w, const CVector& v,
                            Complex x1, const CVector& x2);

/// Minimize w^H A w - 2 Re(b^H w) over ||w||^2 <= p_bs, where
/// A = eps1 |x1|^2 to_user^H to_user + to_eve^H eps3 to_eve and
/// b = eps1 x1 to_user^H. Interior optimum when feasible, otherwise the
/// boundary multiplier is found by bisection in the eigenbasis of A.
CVector solve_w(const EffectiveChannels& eff, Complex x1, double eps1, const CMatrix& eps3,
                double p_bs);

/// Surrogate value (nats) at the given variables; equals the unclipped
/// secrecy rate times ln 2 when x and eps are fresh for (w, v).
double wmmse_objective(const EffectiveChannels& eff, const CVector& w, const CVector& v,
                       const WmmseAuxiliaries& aux);

struct ActiveBcdResult {
    CVector w;
    WmmseAuxiliaries aux;
    std::vector<double> objective; // surrogate after each full cycle, nats
    int cycles = 0;
    bool converged = false;
};

/// Cycle update_x -> update_eps -> solve_w until the surrogate stabilizes
/// (relative change < tol) or max_iter cycles. Starts from w_init when
/// given, else from the full-power match to the composite user channel.
/// Throws on a non-monotone cycle (numerical failure).
ActiveBcdResult active_bcd(const EffectiveChannels& eff, const CVector& v, double p_bs,
                           double tol = 1e-4, int max_iter = 100,
                           const CVector* w_init = nullptr);

} // namespace risec
