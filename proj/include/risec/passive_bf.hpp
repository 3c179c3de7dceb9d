#pragma once

#include <utility>
#include <vector>

#include "risec/channel.hpp"
#include "risec/random.hpp"
#include "risec/rates.hpp"
#include "risec/types.hpp"

// Reflection-phase design for a fixed beamformer pair. The unit-modulus
// phase vector phi is lifted to Theta = phi_bar phi_bar^H with
// phi_bar = [1; phi]; dropping the rank-1 constraint leaves a smooth convex
// program over {Theta PSD, unit diagonal}, solved by projected gradient with
// Dykstra feasibility projections. A feasible phase vector is recovered by
// Gaussian randomization. Index 0 of the lifted dimension is the constant
// entry of phi_bar.

namespace risec {

/// Quadratic forms of the four propagation paths in the lifted variable,
/// each (L+1)x(L+1) Hermitian PSD: phi_bar^H E phi_bar is the corresponding
/// received power (unnormalized; noise enters separately).
struct LiftedEMatrices {
    CMatrix signal_user;  // BS signal at the user
    CMatrix jamming_user; // jamming at the user
    CMatrix signal_eve;   // BS signal leaking to the eavesdropper
    CMatrix jamming_eve;  // RIS-bounced jamming back at the eavesdropper
};

LiftedEMatrices build_e_matrices(const ChannelSet& ch, const CVector& w, const CVector& v);

/// phi_bar phi_bar^H for the given phases; rank-1, unit diagonal.
CMatrix rank_one_lift(const ReflectionCoefficients& theta);

/// Secrecy rate (bit/s/Hz) as a function of the lifted variable; noise
/// arguments are variances. Agrees with the rates module on rank-1 lifts.
double lifted_secrecy_rate(const LiftedEMatrices& e, const CMatrix& theta,
                           double noise_u, double noise_e);

/// Optimal surrogate weights: eps4 = 1/(eve jamming + eve signal + noise_e),
/// eps5 = 1/(user jamming + noise_u).
std::pair<double, double> update_eps45(const LiftedEMatrices& e, const CMatrix& theta,
                                       double noise_u, double noise_e);

/// Objective (nats) of the relaxed phase program at fixed weights; convex
/// in theta. Minimizing it maximizes the secrecy-rate surrogate.
double sdp_objective(const LiftedEMatrices& e, const CMatrix& theta, double eps4, double eps5,
                     double noise_u, double noise_e);

/// Dykstra alternating projections onto {PSD} and {unit diagonal}. The
/// result has an exactly unit diagonal and min eigenvalue >= -tol.
CMatrix project_unit_diag_psd(const CMatrix& x, double tol = 1e-10, int max_iter = 1000);

struct SdpResult {
    CMatrix theta;
    double objective = 0.0; // nats
    int iterations = 0;
    bool degraded = false; // line search stalled before the stopping rule
};

/// Projected-gradient minimization of sdp_objective over the feasible set,
/// with spectral trial steps refined by backtracking. Stops when the
/// relative decrease stays below tol for 5 consecutive steps, or at
/// max_pg_iter iterations. warm seeds the first iterate (default: identity).
SdpResult solve_theta_sdp(const LiftedEMatrices& e, double eps4, double eps5,
                          double noise_u, double noise_e, double tol = 1e-6,
                          const CMatrix* warm = nullptr, int max_pg_iter = 5000);

/// Recover unit-modulus phases from a lifted solution: rank-1 matrices are
/// read off the leading eigenvector, otherwise the best of n_draws
/// CN(0, Theta) candidates under lifted_secrecy_rate wins.
ReflectionCoefficients gaussian_randomization(const CMatrix& theta, const LiftedEMatrices& e,
                                              double noise_u, double noise_e, int n_draws,
                                              RandomStream& rng);

struct PassiveBcdResult {
    ReflectionCoefficients theta;
    CMatrix lifted;                // final relaxed iterate
    std::vector<double> objective; // surrogate (nats) per alternation
    int iterations = 0;
    bool improved = false; // candidate beat the incumbent phases
    bool degraded = false; // some inner solve returned degraded
};

/// Alternate weight updates with relaxed phase solves, then randomize once.
/// Returns the incumbent phases unless the recovered candidate strictly
/// improves the true secrecy rate for (w, v).
PassiveBcdResult passive_bcd(const ChannelSet& ch, const CVector& w, const CVector& v,
                             double noise_u, double noise_e,
                             const ReflectionCoefficients& incumbent, RandomStream& rng,
                             double tol = 1e-4, int max_iter = 50, double sdp_tol = 1e-6,
                             int n_draws = 200, int sdp_max_pg = 5000);

} // namespace risec
