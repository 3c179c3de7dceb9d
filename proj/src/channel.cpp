#include "risec/channel.hpp"

#include <cmath>

namespace risec {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Substream tags, one per link.
enum LinkTag : std::uint64_t {
    tag_bs_user = 0,
    tag_bs_ris,
    tag_bs_eve,
    tag_ris_user,
    tag_ris_eve,
    tag_eve_user,
    tag_eve_ris,
};

Complex entry_normal(const RandomStream& stream, int row, int col) {
    RandomStream s = stream.split(static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(col));
    return s.complex_normal();
}

// One link: pathloss-scaled Rician matrix with its own substream and
// freshly drawn AoA/AoD.
CMatrix realize_link(int rows, int cols, double dist, double exponent, const Scenario& s,
                     const RandomStream& stream, std::uint64_t tag) {
    RandomStream link = stream.split(tag);
    const double aoa = link.uniform(0.0, two_pi);
    const double aod = link.uniform(0.0, two_pi);
    const double gain = pathloss_gain(dist, exponent, s.pathloss_ref);
    return gain * rician_matrix(rows, cols, s.rician_k, aoa, aod, s.spacing_ratio, link);
}

} // namespace

double polar_distance(const Polar& a, const Polar& b) {
    const double dx = a.radius * std::cos(a.angle) - b.radius * std::cos(b.angle);
    const double dy = a.radius * std::sin(a.angle) - b.radius * std::sin(b.angle);
    return std::hypot(dx, dy);
}

CVector steering_vector(int n, double angle, double spacing_ratio) {
    CVector a(n);
    const double phase_step = two_pi * spacing_ratio * std::sin(angle);
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

CMatrix rician_matrix(int rows, int cols, double k, double aoa, double aod,
                      double spacing_ratio, const RandomStream& stream) {
    const CVector a_rx = steering_vector(rows, aoa, spacing_ratio);
    const CVector a_tx = steering_vector(cols, aod, spacing_ratio);
    const double los_weight = std::sqrt(k / (k + 1.0));
    const double nlos_weight = std::sqrt(1.0 / (k + 1.0));
    CMatrix q(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            q(r, c) = los_weight * a_rx(r) * std::conj(a_tx(c)) +
                      nlos_weight * entry_normal(stream, r, c);
    return q;
}

double pathloss_gain(double d, double exponent, double l0, bool* clamped) {
    bool hit_floor = d < 1.0;
    if (clamped)
        *clamped = hit_floor;
    const double dist = hit_floor ? 1.0 : d;
    return std::sqrt(l0 * std::pow(dist, -exponent));
}

ChannelSet generate_channels(const Scenario& s, const RandomStream& stream) {
    const Polar user{s.user_radius, s.beta};
    const Polar eve{s.eve_radius, s.beta};

    const double d_bs_user = polar_distance(s.bs_position, user);
    const double d_bs_ris = polar_distance(s.bs_position, s.ris_position);
    const double d_bs_eve = polar_distance(s.bs_position, eve);
    const double d_ris_user = polar_distance(s.ris_position, user);
    const double d_ris_eve = polar_distance(s.ris_position, eve);
    const double d_eve_user = polar_distance(eve, user);

    const auto& e = s.exponents;
    ChannelSet ch;
    // Single-antenna-receiver links are realized as 1 x n rows and stored as
    // their adjoints, so ch.bs_user.adjoint() is the physical row channel.
    ch.bs_user = realize_link(1, s.bs_antennas, d_bs_user, e.bs_user, s, stream, tag_bs_user).adjoint();
    ch.bs_ris = realize_link(s.ris_elements, s.bs_antennas, d_bs_ris, e.bs_ris, s, stream, tag_bs_ris);
    ch.bs_eve = realize_link(s.eve_rx_antennas, s.bs_antennas, d_bs_eve, e.bs_eve, s, stream, tag_bs_eve);
    ch.ris_user = realize_link(1, s.ris_elements, d_ris_user, e.ris_user, s, stream, tag_ris_user).adjoint();
    ch.ris_eve = realize_link(s.eve_rx_antennas, s.ris_elements, d_ris_eve, e.ris_eve, s, stream, tag_ris_eve);
    ch.eve_user = realize_link(1, s.eve_tx_antennas, d_eve_user, e.eve_user, s, stream, tag_eve_user).adjoint();
    // Eavesdropper arrays are co-located: reuse the RIS-eve distance.
    ch.eve_ris = realize_link(s.ris_elements, s.eve_tx_antennas, d_ris_eve, e.eve_ris, s, stream, tag_eve_ris);
    return ch;
}

} // namespace risec
