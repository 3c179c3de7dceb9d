#pragma once

#include "risec/channel.hpp"
#include "risec/types.hpp"

namespace risec {

/// RIS reflection state: one phase per element, unit amplitude.
struct ReflectionCoefficients {
    RVector phases; // rad

    int size() const { return static_cast<int>(phases.size()); }

    /// Unit-modulus coefficients exp(j·phase).
    CVector coefficients() const;

    static ReflectionCoefficients flat(int l); // all phases zero
    static ReflectionCoefficients from_phasors(const CVector& phi);
};

struct BeamformingState {
    CVector w; // BS transmit beamformer, length K
    CVector v; // eavesdropper jamming beamformer, length N_t
};

/// Noise-normalized composite channels for a fixed reflection state.
/// Row shapes follow the receiver: user rows are 1 x n, eavesdropper
/// blocks are N_r x n.
struct EffectiveChannels {
    CRowVector to_user;      // 1 x K, (bs_user^H + ris_user^H diag(c) bs_ris) / sigma_u
    CRowVector jam_to_user;  // 1 x N_t
    CMatrix to_eve;          // N_r x K
    CMatrix jam_to_eve;      // N_r x N_t, RIS-bounced jamming self-path
};

/// Compose direct and RIS-reflected paths, normalized by the noise standard
/// deviations. ris_amplitude scales the reflected path; 0 removes the RIS
/// entirely (benchmark variant).
EffectiveChannels effective_channels(const ChannelSet& ch, const ReflectionCoefficients& theta,
                                     double sigma_u, double sigma_e, double ris_amplitude = 1.0);

/// log2(1 + |to_user·w|^2 / (|jam_to_user·v|^2 + 1)), bit/s/Hz.
double user_rate(const EffectiveChannels& eff, const BeamformingState& bf);

/// log2(1 + ||to_eve·w||^2 / (||jam_to_eve·v||^2 + 1)), bit/s/Hz.
double eve_rate(const EffectiveChannels& eff, const BeamformingState& bf);

struct SecrecyRate {
    double raw;     // user minus eavesdropper rate, may be negative
    double clipped; // max(raw, 0), the reported value
};

SecrecyRate secrecy_rate(const EffectiveChannels& eff, const BeamformingState& bf);

} // namespace risec
