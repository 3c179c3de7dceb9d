#include <doctest.h>

#include <cmath>
#include <complex>

#include "risec/channel.hpp"
#include "risec/random.hpp"
#include "risec/rates.hpp"

using namespace risec;

namespace {

CVector random_cvector(int n, RandomStream& rng) {
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = rng.complex_normal();
    return v;
}

CMatrix random_cmatrix(int r, int c, RandomStream& rng) {
    CMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m(i, j) = rng.complex_normal();
    return m;
}

// Order-1 channel set, no path loss: keeps absolute tolerances meaningful.
ChannelSet random_channels(int k, int l, int nr, int nt, RandomStream& rng) {
    ChannelSet ch;
    ch.bs_ris = random_cmatrix(l, k, rng);
    ch.bs_user = random_cvector(k, rng);
    ch.bs_eve = random_cmatrix(nr, k, rng);
    ch.ris_user = random_cvector(l, rng);
    ch.ris_eve = random_cmatrix(nr, l, rng);
    ch.eve_ris = random_cmatrix(l, nt, rng);
    ch.eve_user = random_cvector(nt, rng);
    return ch;
}

ReflectionCoefficients random_phases(int l, RandomStream& rng) {
    ReflectionCoefficients theta;
    theta.phases.resize(l);
    for (int i = 0; i < l; ++i)
        theta.phases(i) = rng.uniform(0, 2 * 3.141592653589793);
    return theta;
}

} // namespace

TEST_CASE("ReflectionCoefficients: flat state and phasor round-trip") {
    ReflectionCoefficients flat = ReflectionCoefficients::flat(3);
    CHECK(flat.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(flat.coefficients()(i) - Complex(1.0, 0.0)) < 1e-15);

    RandomStream rng(41);
    ReflectionCoefficients theta = random_phases(4, rng);
    ReflectionCoefficients back = ReflectionCoefficients::from_phasors(theta.coefficients());
    CHECK((back.coefficients() - theta.coefficients()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(theta.coefficients()(i)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("effective_channels: zero reflected path leaves the direct channel") {
    RandomStream rng(42);
    ChannelSet ch = random_channels(3, 2, 2, 2, rng);
    ch.ris_user = CVector::Zero(2);
    const double su = 0.7, se = 1.3;
    EffectiveChannels eff =
        effective_channels(ch, ReflectionCoefficients::flat(2), su, se);
    CHECK((eff.to_user.transpose() - ch.bs_user.conjugate() / su).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((eff.jam_to_user.transpose() - ch.eve_user.conjugate() / su).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("effective_channels: zero amplitude removes every reflected term") {
    RandomStream rng(43);
    ChannelSet ch = random_channels(3, 4, 2, 2, rng);
    const double su = 0.9, se = 1.1;
    EffectiveChannels eff =
        effective_channels(ch, random_phases(4, rng), su, se, 0.0);
    CHECK((eff.to_user.transpose() - ch.bs_user.conjugate() / su).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((eff.to_eve - ch.bs_eve / se).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(eff.jam_to_eve.cwiseAbs().maxCoeff() < 1e-12); // bounce-only path vanishes
}

TEST_CASE("effective_channels: matches the explicit diagonal-matrix oracle") {
    RandomStream rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        ChannelSet ch = random_channels(3, 4, 2, 2, rng);
        ReflectionCoefficients theta = random_phases(4, rng);
        const double su = 0.8, se = 1.7;
        EffectiveChannels eff = effective_channels(ch, theta, su, se);

        CMatrix d = theta.coefficients().asDiagonal();
        CRowVector to_user = (ch.bs_user.adjoint() + ch.ris_user.adjoint() * d * ch.bs_ris) / su;
        CRowVector jam_user =
            (ch.eve_user.adjoint() + ch.ris_user.adjoint() * d * ch.eve_ris) / su;
        CMatrix to_eve = (ch.bs_eve + ch.ris_eve * d * ch.bs_ris) / se;
        CMatrix jam_eve = (ch.ris_eve * d * ch.eve_ris) / se;

        CHECK((eff.to_user - to_user).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((eff.jam_to_user - jam_user).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((eff.to_eve - to_eve).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((eff.jam_to_eve - jam_eve).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("user_rate: zero beamformer and unit-SNR anchors") {
    RandomStream rng(45);
    ChannelSet ch = random_channels(2, 2, 1, 1, rng);
    EffectiveChannels eff = effective_channels(ch, ReflectionCoefficients::flat(2), 1.0, 1.0);
    BeamformingState bf;
    bf.w = CVector::Zero(2);
    bf.v = CVector::Zero(1);
    CHECK(user_rate(eff, bf) == 0.0);

    // |h w| = 1 against unit noise: exactly one bit.
    EffectiveChannels unit;
    unit.to_user = CRowVector::Ones(1);
    unit.jam_to_user = CRowVector::Zero(1);
    unit.to_eve = CMatrix::Zero(1, 1);
    unit.jam_to_eve = CMatrix::Zero(1, 1);
    BeamformingState ubf;
    ubf.w = CVector::Ones(1);
    ubf.v = CVector::Zero(1);
    CHECK(user_rate(unit, ubf) == doctest::Approx(1.0));
}

TEST_CASE("rates: match the raw-channel formulas") {
    RandomStream rng(46);
    for (int trial = 0; trial < 10; ++trial) {
        ChannelSet ch = random_channels(3, 4, 2, 2, rng);
        ReflectionCoefficients theta = random_phases(4, rng);
        const double su = 0.6, se = 1.4; // noise standard deviations
        EffectiveChannels eff = effective_channels(ch, theta, su, se);
        BeamformingState bf;
        bf.w = random_cvector(3, rng);
        bf.v = random_cvector(2, rng);

        CMatrix d = theta.coefficients().asDiagonal();
        const Complex sig = (ch.bs_user.adjoint() + ch.ris_user.adjoint() * d * ch.bs_ris) * bf.w;
        const Complex jam = (ch.eve_user.adjoint() + ch.ris_user.adjoint() * d * ch.eve_ris) * bf.v;
        const double ru =
            std::log2(1.0 + std::norm(sig) / (std::norm(jam) + su * su));
        const double se_sig = ((ch.bs_eve + ch.ris_eve * d * ch.bs_ris) * bf.w).squaredNorm();
        const double se_jam = (ch.ris_eve * d * ch.eve_ris * bf.v).squaredNorm();
        const double re = std::log2(1.0 + se_sig / (se_jam + se * se));

        CHECK(user_rate(eff, bf) == doctest::Approx(ru).epsilon(1e-12));
        CHECK(eve_rate(eff, bf) == doctest::Approx(re).epsilon(1e-12));

        SecrecyRate rs = secrecy_rate(eff, bf);
        CHECK(rs.raw == doctest::Approx(user_rate(eff, bf) - eve_rate(eff, bf)).epsilon(1e-12));
        CHECK(rs.clipped == std::max(rs.raw, 0.0));
        CHECK(user_rate(eff, bf) >= 0.0);
        CHECK(eve_rate(eff, bf) >= 0.0);
    }
}

TEST_CASE("secrecy_rate: equals user rate when the eavesdropper is removed") {
    RandomStream rng(47);
    ChannelSet ch = random_channels(3, 2, 2, 2, rng);
    ch.bs_eve.setZero();
    ch.ris_eve.setZero();
    EffectiveChannels eff = effective_channels(ch, ReflectionCoefficients::flat(2), 1.0, 1.0);
    BeamformingState bf;
    bf.w = random_cvector(3, rng);
    bf.v = CVector::Zero(2);
    SecrecyRate rs = secrecy_rate(eff, bf);
    CHECK(rs.raw == doctest::Approx(user_rate(eff, bf)));
    CHECK(rs.raw >= 0.0);
}

TEST_CASE("rates: invariant under a global phase on the beamformer") {
    RandomStream rng(48);
    ChannelSet ch = random_channels(3, 3, 2, 2, rng);
    EffectiveChannels eff = effective_channels(ch, random_phases(3, rng), 1.0, 1.0);
    BeamformingState bf;
    bf.w = random_cvector(3, rng);
    bf.v = random_cvector(2, rng);
    BeamformingState rotated = bf;
    rotated.w *= std::polar(1.0, 2.2);
    CHECK(user_rate(eff, rotated) == doctest::Approx(user_rate(eff, bf)).epsilon(1e-12));
    CHECK(eve_rate(eff, rotated) == doctest::Approx(eve_rate(eff, bf)).epsilon(1e-12));
    CHECK(secrecy_rate(eff, rotated).raw == doctest::Approx(secrecy_rate(eff, bf).raw));
}

TEST_CASE("rates: stronger jamming never helps the user") {
    RandomStream rng(49);
    for (int trial = 0; trial < 10; ++trial) {
        ChannelSet ch = random_channels(2, 2, 1, 2, rng);
        EffectiveChannels eff = effective_channels(ch, random_phases(2, rng), 1.0, 1.0);
        BeamformingState bf;
        bf.w = random_cvector(2, rng);
        bf.v = random_cvector(2, rng);
        BeamformingState louder = bf;
        louder.v *= 2.0;
        CHECK(user_rate(eff, louder) <= user_rate(eff, bf) + 1e-12);
    }
}

TEST_CASE("rates: noise rescaling matches manual renormalization") {
    RandomStream rng(50);
    ChannelSet ch = random_channels(3, 2, 2, 2, rng);
    ReflectionCoefficients theta = random_phases(2, rng);
    BeamformingState bf;
    bf.w = random_cvector(3, rng);
    bf.v = random_cvector(2, rng);

    const double su = 0.8;
    EffectiveChannels eff = effective_channels(ch, theta, su, 1.0);
    EffectiveChannels eff2 = effective_channels(ch, theta, su * std::sqrt(2.0), 1.0);

    // Doubling the noise power halves both received powers inside R_u.
    const double sig = std::norm((eff.to_user * bf.w).value());
    const double jam = std::norm((eff.jam_to_user * bf.v).value());
    const double expect = std::log2(1.0 + 0.5 * sig / (0.5 * jam + 1.0));
    CHECK(user_rate(eff2, bf) == doctest::Approx(expect).epsilon(1e-12));
}
