/*
   Copyright 2026 The v2xsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// 3GPP TR 38.901 Rural Macrocell (RMa) path loss, LOS probability and shadow
// fading, applied to vehicle-to-vehicle links (see TR 38.901 Table 7.4.1-1
// and Table 7.4.2-1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "v2xsim/errors.hpp"
#include "v2xsim/geometry.hpp"
#include "v2xsim/random.hpp"

namespace v2x {

inline constexpr double kSpeedOfLight = 3.0e8;

struct RadioConfig {
    double fc_ghz = 5.9;
    double tx_power_dbm = 23.0;
    double bandwidth_mhz = 10.0;
    double noise_figure_db = 9.0;
    double sinr_threshold_db = 10.0;
    double antenna_height = 1.5; ///< used for both ends of a V2V link
    double avg_building_height = 5.0;
    double avg_street_width = 20.0;
    bool shadowing = true;

    void validate() const
    {
        if (!(fc_ghz >= 0.5 && fc_ghz <= 30.0)) {
            throw InvalidParameter("fc_ghz must lie in [0.5, 30] for the RMa model");
        }
        if (!(avg_building_height >= 5.0 && avg_building_height <= 50.0)) {
            throw InvalidParameter("avg_building_height must lie in [5, 50]");
        }
        if (!(avg_street_width >= 5.0 && avg_street_width <= 50.0)) {
            throw InvalidParameter("avg_street_width must lie in [5, 50]");
        }
        if (!(bandwidth_mhz > 0.0)) {
            throw InvalidParameter("bandwidth_mhz must be > 0");
        }
        if (!(antenna_height > 0.0)) {
            throw InvalidParameter("antenna_height must be > 0");
        }
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_figure_db) ||
            !std::isfinite(sinr_threshold_db)) {
            throw InvalidParameter("radio powers and thresholds must be finite");
        }
    }

    friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

/// Evaluation caveats attached to a path-loss result.
enum LinkFlag : std::uint32_t {
    kFlagNone = 0,
    kFlagShortRange = 1u << 0,  ///< d2d < 10 m, evaluated at 10 m
    kFlagLongRange = 1u << 1,   ///< d2d beyond the model's validity range
    kFlagClampedHbs = 1u << 2,  ///< hBS raised to 10 m inside the NLOS term
};

struct PathLoss {
    double loss_db = 0.0;
    double sigma_sf_db = 0.0;
    std::uint32_t flags = kFlagNone;
};

/// d_BP = 2*pi*hBS*hUT*fc/c with fc in Hz.
constexpr double breakpoint_distance(double h_bs, double h_ut, double fc_hz)
{
    return 2.0 * std::numbers::pi * h_bs * h_ut * fc_hz / kSpeedOfLight;
}

inline double los_probability_rma(double d2d)
{
    if (d2d <= 10.0) {
        return 1.0;
    }
    return std::exp(-(d2d - 10.0) / 1000.0);
}

namespace rma {

inline constexpr double kMinDistance = 10.0;
inline constexpr double kMaxDistanceLos = 10'000.0;
inline constexpr double kMaxDistanceNlos = 5'000.0;
inline constexpr double kMinBsHeight = 10.0;

/// PL1 at 3D distance d3d.
inline double pl1(double d3d, double fc_ghz, double h)
{
    return 20.0 * std::log10(40.0 * std::numbers::pi * d3d * fc_ghz / 3.0) +
           std::min(0.03 * std::pow(h, 1.72), 10.0) * std::log10(d3d) -
           std::min(0.044 * std::pow(h, 1.72), 14.77) + 0.002 * std::log10(h) * d3d;
}

/// PL2 at 3D distance d3d beyond the breakpoint d_bp.
inline double pl2(double d3d, double d_bp, double fc_ghz, double h)
{
    return pl1(d_bp, fc_ghz, h) + 40.0 * std::log10(d3d / d_bp);
}

/// PL'_NLOS closed form.
inline double pl_nlos_prime(double d3d, double fc_ghz, double h, double w, double h_bs, double h_ut)
{
    return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
           (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
           (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3d) - 3.0) +
           20.0 * std::log10(fc_ghz) -
           (3.2 * std::pow(std::log10(11.75 * h_ut), 2) - 4.97);
}

struct Distances {
    double d2d;
    double d3d;
    std::uint32_t flags;
};

/// Raises d2d to the 10 m floor (recomputing d3d) and flags out-of-range inputs.
inline Distances clamp_distances(double d2d, double d3d, double max_d2d)
{
    std::uint32_t flags = kFlagNone;
    if (d2d < kMinDistance) {
        const double dz2 = std::max(0.0, d3d * d3d - d2d * d2d);
        d2d = kMinDistance;
        d3d = std::sqrt(d2d * d2d + dz2);
        flags |= kFlagShortRange;
    }
    if (d2d > max_d2d) {
        flags |= kFlagLongRange;
    }
    return {d2d, d3d, flags};
}

} // namespace rma

/// RMa LOS path loss. Two-slope model switching at the breakpoint distance,
/// sigma_SF = 4 dB before and 6 dB after it.
inline PathLoss path_loss_rma_los(double d2d, double d3d, double fc_ghz, double h, double h_bs,
                                  double h_ut)
{
    const auto dist = rma::clamp_distances(d2d, d3d, rma::kMaxDistanceLos);
    const double d_bp = breakpoint_distance(h_bs, h_ut, fc_ghz * 1e9);
    if (!(d_bp > 0.0)) {
        throw InvalidParameter("breakpoint distance is zero; antenna heights must be > 0");
    }
    PathLoss out;
    out.flags = dist.flags;
    if (dist.d2d <= d_bp) {
        out.loss_db = rma::pl1(dist.d3d, fc_ghz, h);
        out.sigma_sf_db = 4.0;
    } else {
        out.loss_db = rma::pl2(dist.d3d, d_bp, fc_ghz, h);
        out.sigma_sf_db = 6.0;
    }
    return out;
}

/// RMa NLOS path loss: max(LOS, PL'_NLOS), sigma_SF = 8 dB. hBS is raised to
/// 10 m inside the PL' term only (vehicle antennas sit below the model's
/// base-station height range); the LOS term keeps the true heights.
inline PathLoss path_loss_rma_nlos(double d2d, double d3d, double fc_ghz, double h, double w,
                                   double h_bs, double h_ut)
{
    const auto los = path_loss_rma_los(d2d, d3d, fc_ghz, h, h_bs, h_ut);
    const auto dist = rma::clamp_distances(d2d, d3d, rma::kMaxDistanceNlos);
    std::uint32_t flags = los.flags | dist.flags;
    double h_bs_eff = h_bs;
    if (h_bs_eff < rma::kMinBsHeight) {
        h_bs_eff = rma::kMinBsHeight;
        flags |= kFlagClampedHbs;
    }
    const double prime = rma::pl_nlos_prime(dist.d3d, fc_ghz, h, w, h_bs_eff, h_ut);
    return {std::max(los.loss_db, prime), 8.0, flags};
}

/// Thermal noise over the bandwidth plus receiver noise figure.
inline double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db)
{
    if (!(bandwidth_mhz > 0.0)) {
        throw InvalidParameter("bandwidth must be > 0");
    }
    return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

struct LinkState {
    std::size_t tx_id = 0;
    std::size_t rx_id = 0;
    double d2d = 0.0;
    double d3d = 0.0;
    bool los = true;
    bool blocked_by_building = false;
    double path_loss = 0.0;
    double shadow = 0.0;
    double rx_power = 0.0; ///< dBm
    std::uint32_t flags = kFlagNone;
};

/// Samples one directed link. Every random quantity (LOS draw, shadow) is
/// keyed by the unordered pair, so (a, b) and (b, a) see the same channel.
inline LinkState sample_link(const VehicleNode& tx, const VehicleNode& rx, const Scene& scene,
                             const RadioConfig& radio, std::uint64_t snapshot_seed)
{
    if (tx.id == rx.id) {
        throw InvalidParameter("sample_link: tx and rx must differ");
    }
    LinkState link;
    link.tx_id = tx.id;
    link.rx_id = rx.id;
    link.d2d = distance(tx.position, rx.position);
    if (!(link.d2d > 0.0)) {
        throw DegenerateLink("sample_link: vehicles " + std::to_string(tx.id) + " and " +
                             std::to_string(rx.id) + " share a position");
    }
    const double dz = tx.antenna_height - rx.antenna_height;
    link.d3d = std::sqrt(link.d2d * link.d2d + dz * dz);

    const auto key = pair_key(tx.id, rx.id);
    if (scene.environment == Environment::urban) {
        link.blocked_by_building = !los_clear(tx.position, rx.position, scene.buildings);
        link.los = !link.blocked_by_building;
    } else {
        Stream los_rng(stream_seed(snapshot_seed, Purpose::los, key));
        link.los = los_rng.bernoulli(los_probability_rma(link.d2d));
    }

    // The RMa forms are written for a BS/UT pair; the higher antenna plays the BS.
    const double h_bs = std::max(tx.antenna_height, rx.antenna_height);
    const double h_ut = std::min(tx.antenna_height, rx.antenna_height);
    const auto pl = link.los
                        ? path_loss_rma_los(link.d2d, link.d3d, radio.fc_ghz,
                                            radio.avg_building_height, h_bs, h_ut)
                        : path_loss_rma_nlos(link.d2d, link.d3d, radio.fc_ghz,
                                             radio.avg_building_height, radio.avg_street_width,
                                             h_bs, h_ut);
    link.path_loss = pl.loss_db;
    link.flags = pl.flags;
    if (radio.shadowing) {
        Stream shadow_rng(stream_seed(snapshot_seed, Purpose::shadow, key));
        link.shadow = shadow_rng.normal(0.0, pl.sigma_sf_db);
    }
    link.rx_power = radio.tx_power_dbm - link.path_loss - link.shadow;
    return link;
}

/// Dense N x N matrix of directed links; the diagonal is unused.
class LinkMatrix {
public:
    LinkMatrix() = default;
    explicit LinkMatrix(std::size_t n) : n_(n), links_(n * n) {}

    std::size_t size() const { return n_; }
    const LinkState& operator()(std::size_t tx, std::size_t rx) const { return links_[tx * n_ + rx]; }
    LinkState& operator()(std::size_t tx, std::size_t rx) { return links_[tx * n_ + rx]; }

    /// Received power in linear milliwatts, cached by sample_all_links.
    double rx_mw(std::size_t tx, std::size_t rx) const { return rx_mw_[tx * n_ + rx]; }

    void refresh_linear()
    {
        rx_mw_.assign(n_ * n_, 0.0);
        for (std::size_t t = 0; t < n_; ++t) {
            for (std::size_t r = 0; r < n_; ++r) {
                if (t != r) {
                    rx_mw_[t * n_ + r] = dbm_to_mw((*this)(t, r).rx_power);
                }
            }
        }
    }

    /// Throws InvalidInput unless every off-diagonal entry names its own (tx, rx).
    void validate() const
    {
        if (rx_mw_.size() != n_ * n_) {
            throw InvalidInput("link matrix: linear powers not computed");
        }
        for (std::size_t t = 0; t < n_; ++t) {
            for (std::size_t r = 0; r < n_; ++r) {
                if (t == r) {
                    continue;
                }
                const auto& l = (*this)(t, r);
                if (l.tx_id != t || l.rx_id != r || !std::isfinite(l.rx_power)) {
                    throw InvalidInput("link matrix: entry (" + std::to_string(t) + ", " +
                                       std::to_string(r) + ") is inconsistent");
                }
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<LinkState> links_;
    std::vector<double> rx_mw_;
};

/// All ordered pairs. Each unordered pair is sampled once and mirrored, which
/// is equivalent to sampling both directions under pair-keyed randomness.
inline LinkMatrix sample_all_links(std::span<const VehicleNode> vehicles, const Scene& scene,
                                   const RadioConfig& radio, std::uint64_t snapshot_seed)
{
    LinkMatrix m(vehicles.size());
    for (std::size_t a = 0; a < vehicles.size(); ++a) {
        for (std::size_t b = a + 1; b < vehicles.size(); ++b) {
            auto ab = sample_link(vehicles[a], vehicles[b], scene, radio, snapshot_seed);
            auto ba = ab;
            std::swap(ba.tx_id, ba.rx_id);
            m(a, b) = ab;
            m(b, a) = ba;
        }
    }
    m.refresh_linear();
    return m;
}

} // namespace v2x
