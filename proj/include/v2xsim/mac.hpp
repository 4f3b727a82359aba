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

// Slotted single-stage CSMA/CA for periodic broadcast beacons, and SINR-based
// reception. Broadcast frames are never acknowledged, so the contention window
// never grows and nothing is retransmitted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "v2xsim/channel.hpp"
#include "v2xsim/errors.hpp"
#include "v2xsim/geometry.hpp"
#include "v2xsim/random.hpp"

namespace v2x {

using Slot = std::int64_t;

struct MacConfig {
    std::int64_t cw = 31;           ///< backoff is uniform in [0, cw]
    double slot_us = 13.0;
    std::int64_t aifs = 4;          ///< slots
    std::int64_t bsm_period = 7692; ///< slots, ~100 ms
    std::int64_t bsm_airtime = 34;  ///< slots, ~442 us
    double cs_threshold_dbm = -85.0;

    void validate() const
    {
        if (cw < 0) {
            throw InvalidParameter("cw must be >= 0");
        }
        if (!(slot_us > 0.0)) {
            throw InvalidParameter("slot_us must be > 0");
        }
        if (aifs < 0) {
            throw InvalidParameter("aifs must be >= 0");
        }
        if (bsm_airtime < 1) {
            throw InvalidParameter("bsm_airtime must be >= 1");
        }
        if (!(bsm_period > bsm_airtime)) {
            throw InvalidParameter("bsm_period must exceed bsm_airtime");
        }
        if (!std::isfinite(cs_threshold_dbm)) {
            throw InvalidParameter("cs_threshold_dbm must be finite");
        }
    }

    friend bool operator==(const MacConfig&, const MacConfig&) = default;
};

struct TxAttempt {
    std::size_t tx_id = 0;
    Slot start = 0;
    Slot duration = 0;

    Slot end() const { return start + duration; }
    bool active_at(Slot s) const { return s >= start && s < end(); }
    bool overlaps(const TxAttempt& o) const { return start < o.end() && o.start < end(); }
    friend bool operator==(const TxAttempt&, const TxAttempt&) = default;
};

struct ReceptionOutcome {
    std::size_t tx_id = 0;
    std::size_t rx_id = 0;
    Slot attempt_start = 0;
    double sinr_min = 0.0; ///< dB
    bool decoded = false;
};

/// One uniform offset in [0, period) per vehicle; vehicle i generates a frame
/// at offset_i + k * period.
inline std::vector<Slot> schedule_bsm_offsets(std::size_t n_vehicles, Slot period, Stream& rng)
{
    if (period < 1) {
        throw InvalidParameter("period must be >= 1");
    }
    std::vector<Slot> offsets(n_vehicles);
    for (auto& o : offsets) {
        o = rng.uniform_int(0, period - 1);
    }
    return offsets;
}

struct CsmaResult {
    std::vector<TxAttempt> attempts; ///< ordered by start slot, then node id
    std::size_t generated = 0;
    std::size_t expired = 0;
    std::vector<std::int64_t> backoff_draws;
};

/// Runs the contention process for every frame generated in [0, horizon).
/// Frames still queued at the horizon are carried to completion with no
/// further generation, so every non-expired frame yields an attempt.
///
/// Per slot t, a node with a queued frame senses the summed power of the
/// transmissions active in slot t-1. Busy resets its AIFS count and freezes
/// its backoff. After aifs idle slots it draws a backoff in [0, cw] (once per
/// frame) and then decrements it on each further idle slot; it transmits in
/// the first idle slot that finds the counter at zero.
inline CsmaResult run_csma(const LinkMatrix& links, std::span<const Slot> offsets,
                           const MacConfig& mac, Slot horizon, Stream& backoff_rng)
{
    mac.validate();
    links.validate();
    const std::size_t n = links.size();
    if (offsets.size() != n) {
        throw InvalidInput("run_csma: one BSM offset per vehicle is required");
    }
    if (horizon < mac.bsm_period) {
        throw InvalidParameter("horizon must be >= bsm_period");
    }
    const double cs_mw = dbm_to_mw(mac.cs_threshold_dbm);

    struct NodeState {
        Slot next_gen = 0;
        Slot tx_end = 0;
        std::int64_t idle = 0;
        std::int64_t backoff = -1;
        bool pending = false;
    };
    std::vector<NodeState> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i] < 0 || offsets[i] >= mac.bsm_period) {
            throw InvalidParameter("run_csma: BSM offset outside [0, bsm_period)");
        }
        nodes[i].next_gen = offsets[i];
    }

    CsmaResult result;
    struct Active {
        std::size_t node;
        Slot end;
    };
    std::vector<Active> active;
    std::vector<Active> started;
    std::size_t pending_count = 0;

    Slot t = 0;
    while (true) {
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [t](const Active& a) { return a.end < t - 1; }),
                     active.end());
        if (pending_count == 0 && active.empty()) {
            Slot next = horizon;
            for (const auto& s : nodes) {
                next = std::min(next, s.next_gen);
            }
            if (next >= horizon) {
                break;
            }
            t = std::max(t, next);
        }

        if (t < horizon) {
            for (auto& s : nodes) {
                if (s.next_gen != t) {
                    continue;
                }
                if (s.pending) {
                    ++result.expired;
                } else {
                    ++pending_count;
                }
                s.pending = true;
                s.idle = 0;
                s.backoff = -1;
                s.next_gen += mac.bsm_period;
                ++result.generated;
            }
        }

        started.clear();
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = nodes[i];
            if (!s.pending || s.tx_end > t) {
                continue;
            }
            double sensed = 0.0;
            for (const auto& a : active) {
                if (a.node != i) {
                    sensed += links.rx_mw(a.node, i);
                }
            }
            if (sensed >= cs_mw) {
                s.idle = 0;
                continue;
            }
            if (s.idle < mac.aifs) {
                ++s.idle;
                if (s.idle == mac.aifs && s.backoff < 0) {
                    s.backoff = backoff_rng.uniform_int(0, mac.cw);
                    result.backoff_draws.push_back(s.backoff);
                }
                continue;
            }
            if (s.backoff < 0) {
                s.backoff = backoff_rng.uniform_int(0, mac.cw);
                result.backoff_draws.push_back(s.backoff);
            }
            if (s.backoff > 0) {
                --s.backoff;
                continue;
            }
            result.attempts.push_back({i, t, mac.bsm_airtime});
            s.tx_end = t + mac.bsm_airtime;
            s.pending = false;
            s.backoff = -1;
            --pending_count;
            started.push_back({i, s.tx_end - 1});
        }
        // `end` in the active list is the last occupied slot.
        active.insert(active.end(), started.begin(), started.end());
        ++t;
    }
    return result;
}

/// Per attempt and per other vehicle: the minimum SINR over the attempt's
/// airtime, with interference from every other transmission active in each
/// slot. A receiver that transmits during any overlapping slot decodes nothing.
inline std::vector<ReceptionOutcome> evaluate_receptions(std::span<const TxAttempt> attempts,
                                                         const LinkMatrix& links,
                                                         const RadioConfig& radio)
{
    const std::size_t n = links.size();
    const double noise_mw = dbm_to_mw(noise_floor_dbm(radio.bandwidth_mhz, radio.noise_figure_db));

    std::vector<std::size_t> order(attempts.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return attempts[a].start < attempts[b].start;
    });

    Slot max_duration = 0;
    for (const auto& a : attempts) {
        max_duration = std::max(max_duration, a.duration);
    }

    std::vector<ReceptionOutcome> out;
    out.reserve(attempts.size() * (n > 0 ? n - 1 : 0));
    std::vector<const TxAttempt*> overlapping;
    std::vector<double> interference;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& a = attempts[order[k]];
        if (a.tx_id >= n) {
            throw InvalidInput("evaluate_receptions: attempt from unknown vehicle");
        }
        overlapping.clear();
        for (std::size_t j = k; j-- > 0;) {
            const auto& o = attempts[order[j]];
            if (o.start + max_duration <= a.start) {
                break;
            }
            if (o.overlaps(a)) {
                overlapping.push_back(&o);
            }
        }
        for (std::size_t j = k + 1; j < order.size(); ++j) {
            const auto& o = attempts[order[j]];
            if (o.start >= a.end()) {
                break;
            }
            overlapping.push_back(&o);
        }

        for (std::size_t rx = 0; rx < n; ++rx) {
            if (rx == a.tx_id) {
                continue;
            }
            bool self_busy = false;
            interference.assign(static_cast<std::size_t>(a.duration), 0.0);
            for (const auto* o : overlapping) {
                if (o->tx_id == rx) {
                    self_busy = true;
                    continue;
                }
                const double p = links.rx_mw(o->tx_id, rx);
                const Slot from = std::max(a.start, o->start);
                const Slot to = std::min(a.end(), o->end());
                for (Slot s = from; s < to; ++s) {
                    interference[static_cast<std::size_t>(s - a.start)] += p;
                }
            }
            const double worst = *std::max_element(interference.begin(), interference.end());
            const double sinr_db = mw_to_dbm(links.rx_mw(a.tx_id, rx)) - mw_to_dbm(noise_mw + worst);
            out.push_back({a.tx_id, rx, a.start, sinr_db,
                           !self_busy && sinr_db >= radio.sinr_threshold_db});
        }
    }
    return out;
}

} // namespace v2x
