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

// Monte Carlo campaigns: scene -> placement -> links -> CSMA -> receptions ->
// metrics, once per snapshot, reduced in snapshot-index order.
//
// Snapshot i draws everything from derive_seed(base_seed, i), split further by
// purpose (and by node pair for channel draws), so any snapshot can be re-run
// on its own and the report does not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "v2xsim/channel.hpp"
#include "v2xsim/errors.hpp"
#include "v2xsim/geometry.hpp"
#include "v2xsim/mac.hpp"
#include "v2xsim/metrics.hpp"
#include "v2xsim/random.hpp"

namespace v2x {

enum class SceneKind { suburban_cross, suburban_cloverleaf, urban_grid };

inline std::string_view to_string(SceneKind k)
{
    switch (k) {
    case SceneKind::suburban_cross:
        return "suburban-cross";
    case SceneKind::suburban_cloverleaf:
        return "suburban-cloverleaf";
    case SceneKind::urban_grid:
        return "urban-grid";
    }
    return "unknown";
}

inline std::optional<SceneKind> scene_kind_from_string(std::string_view s)
{
    for (auto k : {SceneKind::suburban_cross, SceneKind::suburban_cloverleaf, SceneKind::urban_grid}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

inline bool is_urban(SceneKind k) { return k == SceneKind::urban_grid; }

struct ScenarioConfig {
    SceneKind kind = SceneKind::suburban_cross;
    double arm_length = 500.0;
    double road_width = 20.0;
    double loop_radius = 50.0;
    std::size_t blocks_per_side = 4;
    double block_size = 250.0;
    double street_width = 20.0;
    double density = 100.0; ///< vehicles per km^2 of the bounding region
    double speed = 25.0;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct CampaignConfig {
    ScenarioConfig scenario;
    RadioConfig radio;
    MacConfig mac;
    std::size_t snapshots = 200;
    Slot horizon = 76920; ///< ten default BSM periods, ~1 s
    double awareness_range = 300.0;
    std::uint64_t base_seed = 1;
    std::optional<std::size_t> fixed_n; ///< overrides the Poisson vehicle count

    void validate() const
    {
        radio.validate();
        mac.validate();
        if (snapshots < 1) {
            throw InvalidParameter("snapshots must be >= 1");
        }
        if (horizon < mac.bsm_period) {
            throw InvalidParameter("horizon must be >= bsm_period");
        }
        if (!(awareness_range > 0.0)) {
            throw InvalidParameter("awareness_range must be > 0");
        }
        if (!(scenario.density >= 0.0)) {
            throw InvalidParameter("density must be >= 0");
        }
        if (!(scenario.speed >= 0.0)) {
            throw InvalidParameter("speed must be >= 0");
        }
    }

    friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

inline Scene build_scene(const ScenarioConfig& s)
{
    switch (s.kind) {
    case SceneKind::suburban_cross:
        return suburban_scene(build_cross_junction(s.arm_length, s.road_width));
    case SceneKind::suburban_cloverleaf:
        return suburban_scene(build_cloverleaf(s.arm_length, s.loop_radius, s.road_width));
    case SceneKind::urban_grid:
        return build_urban_grid(s.blocks_per_side, s.block_size, s.street_width);
    }
    throw InvalidParameter("unknown scene kind");
}

/// Everything one snapshot produced, for inspection and tests.
struct SnapshotRun {
    Scene scene;
    Snapshot snapshot;
    LinkMatrix links;
    std::vector<Slot> offsets;
    CsmaResult csma;
    std::vector<ReceptionOutcome> outcomes;
    PairTable pairs;
    SnapshotMetrics metrics;
};

inline SnapshotRun simulate_snapshot(const CampaignConfig& cfg, std::uint64_t index)
{
    cfg.validate();
    SnapshotRun run;
    run.scene = build_scene(cfg.scenario);
    run.snapshot.seed = derive_seed(cfg.base_seed, index);
    run.snapshot.buildings = run.scene.buildings;

    const auto seed = run.snapshot.seed;
    Stream placement(stream_seed(seed, Purpose::placement));
    const VehicleDefaults defaults{cfg.scenario.speed, cfg.radio.antenna_height};
    run.snapshot.vehicles =
        cfg.fixed_n ? place_n_vehicles(run.scene.network, *cfg.fixed_n, placement, defaults)
                    : place_vehicles(run.scene.network, cfg.scenario.density, placement, defaults);

    const auto n = run.snapshot.vehicles.size();
    run.links = sample_all_links(run.snapshot.vehicles, run.scene, cfg.radio, seed);

    Stream offset_rng(stream_seed(seed, Purpose::offsets));
    run.offsets = schedule_bsm_offsets(n, cfg.mac.bsm_period, offset_rng);
    Stream backoff_rng(stream_seed(seed, Purpose::backoff));
    run.csma = run_csma(run.links, run.offsets, cfg.mac, cfg.horizon, backoff_rng);
    run.outcomes = evaluate_receptions(run.csma.attempts, run.links, cfg.radio);

    run.pairs = classify_pairs(run.links, cfg.awareness_range);
    const auto raw = raw_pdr(run.outcomes, run.pairs);
    auto& m = run.metrics;
    m.raw = raw.value;
    m.empty_denominator = raw.empty();
    m.blockage = blockage_rate(run.pairs);
    m.discounted = discounted_pdr(m.raw, m.blockage);
    m.n_vehicles = n;
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            if (t != r) {
                m.link_flags |= run.links(t, r).flags;
            }
        }
    }
    return run;
}

inline SnapshotMetrics run_snapshot(const CampaignConfig& cfg, std::uint64_t index)
{
    return simulate_snapshot(cfg, index).metrics;
}

/// Per-snapshot metrics for snapshots 0..cfg.snapshots-1, in index order.
/// Work is spread over `workers` threads; the result does not depend on it.
inline std::vector<SnapshotMetrics> run_snapshots(const CampaignConfig& cfg, unsigned workers = 1)
{
    cfg.validate();
    std::vector<SnapshotMetrics> results(cfg.snapshots);
    std::vector<std::exception_ptr> errors(cfg.snapshots);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cfg.snapshots; i = next++) {
            try {
                results[i] = run_snapshot(cfg, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

inline PdrReport make_report(const CampaignConfig& cfg, std::span<const SnapshotMetrics> per_snapshot)
{
    const auto agg = aggregate(per_snapshot);
    PdrReport r;
    r.scenario = std::string(to_string(cfg.scenario.kind));
    r.cw = cfg.mac.cw;
    r.density = cfg.scenario.density;
    r.snapshots = agg.snapshots;
    r.pdr_raw = agg.raw;
    r.blockage_rate = agg.blockage;
    r.pdr_discounted = agg.discounted;
    r.base_seed = cfg.base_seed;
    r.flags = format_flags(agg);
    return r;
}

inline PdrReport run_campaign(const CampaignConfig& cfg, unsigned workers = 1)
{
    const auto per_snapshot = run_snapshots(cfg, workers);
    return make_report(cfg, per_snapshot);
}

} // namespace v2x
