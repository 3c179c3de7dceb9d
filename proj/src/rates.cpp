#include "risec/rates.hpp"

#include <cmath>

namespace risec {

CVector ReflectionCoefficients::coefficients() const {
    CVector c(phases.size());
    for (Eigen::Index l = 0; l < phases.size(); ++l)
        c(l) = std::polar(1.0, phases(l));
    return c;
}

ReflectionCoefficients ReflectionCoefficients::flat(int l) {
    return {RVector::Zero(l)};
}

ReflectionCoefficients ReflectionCoefficients::from_phasors(const CVector& phi) {
    RVector phases(phi.size());
    for (Eigen::Index l = 0; l < phi.size(); ++l)
        phases(l) = std::arg(phi(l));
    return {std::move(phases)};
}

EffectiveChannels effective_channels(const ChannelSet& ch, const ReflectionCoefficients& theta,
                                     double sigma_u, double sigma_e, double ris_amplitude) {
    const CVector c = ris_amplitude * theta.coefficients();
    // ris_user^H diag(c) as a 1 x L row, shared by both user composites.
    const CRowVector user_reflect = ch.ris_user.adjoint() * c.asDiagonal();
    const CMatrix eve_reflect = ch.ris_eve * c.asDiagonal(); // N_r x L

    EffectiveChannels eff;
    eff.to_user = (ch.bs_user.adjoint() + user_reflect * ch.bs_ris) / sigma_u;
    eff.jam_to_user = (ch.eve_user.adjoint() + user_reflect * ch.eve_ris) / sigma_u;
    eff.to_eve = (ch.bs_eve + eve_reflect * ch.bs_ris) / sigma_e;
    eff.jam_to_eve = (eve_reflect * ch.eve_ris) / sigma_e;
    return eff;
}

double user_rate(const EffectiveChannels& eff, const BeamformingState& bf) {
    const double signal = std::norm((eff.to_user * bf.w).value());
    const double interference = std::norm((eff.jam_to_user * bf.v).value());
    return std::log2(1.0 + signal / (interference + 1.0));
}

double eve_rate(const EffectiveChannels& eff, const BeamformingState& bf) {
    const double signal = (eff.to_eve * bf.w).squaredNorm();
    const double interference = (eff.jam_to_eve * bf.v).squaredNorm();
    return std::log2(1.0 + signal / (interference + 1.0));
}

SecrecyRate secrecy_rate(const EffectiveChannels& eff, const BeamformingState& bf) {
    const double raw = user_rate(eff, bf) - eve_rate(eff, bf);
    return {raw, std::max(raw, 0.0)};
}

} // namespace risec
