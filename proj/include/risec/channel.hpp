#pragma once

#include <cstdint>
#include <numbers>

#include "risec/random.hpp"
#include "risec/types.hpp"

namespace risec {

struct Polar {
    double radius = 0.0; // m
    double angle = 0.0;  // rad
};

/// Euclidean distance between two polar points (law of cosines).
double polar_distance(const Polar& a, const Polar& b);

struct PathlossExponents {
    double bs_user = 3.75;
    double bs_eve = 3.75;
    double bs_ris = 2.2;
    double ris_user = 2.2;
    double ris_eve = 2.2;
    double eve_user = 2.5;
    double eve_ris = 2.5;
};

/// All physical parameters of one experiment instance. Distances in meters,
/// powers and noise variances in linear watts.
struct Scenario {
    int bs_antennas = 3;     // K
    int ris_elements = 16;   // L
    int eve_rx_antennas = 2; // N_r
    int eve_tx_antennas = 2; // N_t

    Polar bs_position{0.0, 0.0};
    Polar ris_position{40.0, std::numbers::pi / 4.0};
    double user_radius = 30.0;
    double eve_radius = 25.0;
    /// User and eavesdropper share this angle; redrawn per realization.
    double beta = std::numbers::pi / 4.0;

    double p_bs = 1.0;   // transmit power budget, W
    double p_jam = 1e-4; // jammer power, W
    double noise_user = 3.1622776601683794e-14; // -105 dBm
    double noise_eve = 3.1622776601683794e-14;  // -105 dBm

    double pathloss_ref = 1e-3; // linear gain at the 1 m reference distance
    PathlossExponents exponents{};
    double rician_k = 1.0;
    double spacing_ratio = 0.5; // element spacing over wavelength

    std::uint64_t seed = 1;
};

/// One realization of the seven links. Naming: first leg is the transmitter,
/// second the receiver; vectors are stored so that their adjoint is the
/// physical row channel (single-antenna receivers).
struct ChannelSet {
    CMatrix bs_ris;   // L x K
    CVector bs_user;  // K
    CMatrix bs_eve;   // N_r x K
    CVector ris_user; // L
    CMatrix ris_eve;  // N_r x L
    CMatrix eve_ris;  // L x N_t
    CVector eve_user; // N_t
};

/// Uniform linear array response; entry m = exp(2πj·spacing·m·sin(angle)).
CVector steering_vector(int n, double angle, double spacing_ratio);

/// Rician-faded matrix: sqrt(k/(k+1))·a_rx·a_tx^H + sqrt(1/(k+1))·Q with Q
/// i.i.d. CN(0,1). The stream is not advanced; each entry of Q is keyed by
/// its (row, col), so a draw depends only on the stream identity.
CMatrix rician_matrix(int rows, int cols, double k, double aoa, double aod,
                      double spacing_ratio, const RandomStream& stream);

/// Amplitude gain sqrt(l0 · d^(-exponent)). Distances below the 1 m
/// reference are clamped; *clamped reports when that happened.
double pathloss_gain(double d, double exponent, double l0, bool* clamped = nullptr);

/// Realize all seven links of the scenario from one stream. Per-link
/// substreams make the links mutually independent, and per-entry keying
/// means growing an array (more BS antennas, more RIS elements) extends a
/// channel without reshuffling the entries that were already there.
ChannelSet generate_channels(const Scenario& s, const RandomStream& stream);

} // namespace risec
