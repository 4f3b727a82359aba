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

// Packet delivery rate, blockage rate and the blockage-discounted PDR.
//
// Raw PDR counts only receivers that are within the awareness range and not
// shadowed by a building; the discounted PDR then scales it by the fraction
// of in-range receivers that are not blocked.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "v2xsim/channel.hpp"
#include "v2xsim/errors.hpp"
#include "v2xsim/mac.hpp"

namespace v2x {

struct PairClass {
    std::size_t tx_id = 0;
    std::size_t rx_id = 0;
    bool in_range = false;
    bool blocked = false;
};

/// Classification of every ordered pair, stored densely; the diagonal is unused.
class PairTable {
public:
    PairTable() = default;
    explicit PairTable(std::size_t n) : n_(n), cells_(n * n) {}

    std::size_t size() const { return n_; }
    const PairClass& at(std::size_t tx, std::size_t rx) const
    {
        if (tx >= n_ || rx >= n_ || tx == rx) {
            throw InvalidInput("pair (" + std::to_string(tx) + ", " + std::to_string(rx) +
                               ") is not an ordered pair of this snapshot");
        }
        return cells_[tx * n_ + rx];
    }
    PairClass& mut(std::size_t tx, std::size_t rx) { return cells_[tx * n_ + rx]; }

    /// Off-diagonal entries in row-major order.
    std::vector<PairClass> list() const
    {
        std::vector<PairClass> out;
        out.reserve(n_ * (n_ > 0 ? n_ - 1 : 0));
        for (std::size_t t = 0; t < n_; ++t) {
            for (std::size_t r = 0; r < n_; ++r) {
                if (t != r) {
                    out.push_back(cells_[t * n_ + r]);
                }
            }
        }
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<PairClass> cells_;
};

inline PairTable classify_pairs(const LinkMatrix& links, double awareness_range)
{
    if (!(awareness_range > 0.0)) {
        throw InvalidParameter("awareness_range must be > 0");
    }
    const auto n = links.size();
    PairTable table(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            if (t == r) {
                continue;
            }
            const auto& l = links(t, r);
            table.mut(t, r) = {t, r, l.d2d <= awareness_range, l.blocked_by_building};
        }
    }
    return table;
}

struct PdrRatio {
    double value = 1.0;
    std::size_t decoded = 0;
    std::size_t eligible = 0;

    bool empty() const { return eligible == 0; }
};

/// Decoded / eligible over receptions whose pair is in range and unblocked.
/// An empty denominator yields 1.0.
inline PdrRatio raw_pdr(std::span<const ReceptionOutcome> outcomes, const PairTable& pairs)
{
    PdrRatio r;
    for (const auto& o : outcomes) {
        const auto& p = pairs.at(o.tx_id, o.rx_id);
        if (!p.in_range || p.blocked) {
            continue;
        }
        ++r.eligible;
        if (o.decoded) {
            ++r.decoded;
        }
    }
    r.value = r.eligible == 0 ? 1.0
                              : static_cast<double>(r.decoded) / static_cast<double>(r.eligible);
    return r;
}

/// Blocked in-range ordered pairs / in-range ordered pairs; 0 with none in range.
inline double blockage_rate(const PairTable& pairs)
{
    std::size_t in_range = 0;
    std::size_t blocked = 0;
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        for (std::size_t r = 0; r < pairs.size(); ++r) {
            if (t == r) {
                continue;
            }
            const auto& p = pairs.at(t, r);
            if (p.in_range) {
                ++in_range;
                if (p.blocked) {
                    ++blocked;
                }
            }
        }
    }
    return in_range == 0 ? 0.0 : static_cast<double>(blocked) / static_cast<double>(in_range);
}

inline double discounted_pdr(double raw, double blockage)
{
    if (!(raw >= 0.0 && raw <= 1.0) || !(blockage >= 0.0 && blockage <= 1.0)) {
        throw InvalidParameter("discounted_pdr: inputs must lie in [0, 1]");
    }
    return raw * (1.0 - blockage);
}

struct SnapshotMetrics {
    double raw = 1.0;
    double blockage = 0.0;
    double discounted = 1.0;
    std::size_t n_vehicles = 0;
    bool empty_denominator = false;
    std::uint32_t link_flags = kFlagNone;

    friend bool operator==(const SnapshotMetrics&, const SnapshotMetrics&) = default;
};

struct MeanCi {
    double mean = 0.0;
    double ci95 = 0.0; ///< half-width, 1.96 * s / sqrt(n)
};

/// Sample mean and normal-approximation 95% half-width. Values are summed in
/// ascending order, so the result is independent of input order bit for bit.
inline MeanCi mean_ci95(std::vector<double> values)
{
    if (values.empty()) {
        throw InvalidParameter("mean_ci95: no values");
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    MeanCi out;
    out.mean = sum / n;
    if (values.size() < 2) {
        return out;
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

struct AggregateMetrics {
    MeanCi raw;
    double blockage = 0.0;
    MeanCi discounted;
    std::size_t snapshots = 0;
    std::size_t empty_denominator = 0;
    std::uint32_t link_flags = kFlagNone;
};

inline AggregateMetrics aggregate(std::span<const SnapshotMetrics> per_snapshot)
{
    if (per_snapshot.empty()) {
        throw InvalidParameter("aggregate: at least one snapshot is required");
    }
    std::vector<double> raw, blockage, discounted;
    AggregateMetrics out;
    for (const auto& s : per_snapshot) {
        raw.push_back(s.raw);
        blockage.push_back(s.blockage);
        discounted.push_back(s.discounted);
        if (s.empty_denominator) {
            ++out.empty_denominator;
        }
        out.link_flags |= s.link_flags;
    }
    out.raw = mean_ci95(std::move(raw));
    out.blockage = mean_ci95(std::move(blockage)).mean;
    out.discounted = mean_ci95(std::move(discounted));
    out.snapshots = per_snapshot.size();
    return out;
}

/// One campaign's result row.
struct PdrReport {
    std::string scenario;
    std::int64_t cw = 0;
    double density = 0.0;
    std::size_t snapshots = 0;
    MeanCi pdr_raw;
    double blockage_rate = 0.0;
    MeanCi pdr_discounted;
    std::uint64_t base_seed = 0;
    std::string flags;
};

/// Flag column text: ';'-separated, fixed order, empty when nothing to report.
inline std::string format_flags(const AggregateMetrics& m)
{
    std::string out;
    auto add = [&out](const std::string& f) {
        if (!out.empty()) {
            out += ';';
        }
        out += f;
    };
    if (m.link_flags & kFlagClampedHbs) {
        add("clamped_hbs");
    }
    if (m.link_flags & kFlagShortRange) {
        add("short_range_clamped");
    }
    if (m.link_flags & kFlagLongRange) {
        add("beyond_validity_range");
    }
    if (m.empty_denominator > 0) {
        add("empty_denominator=" + std::to_string(m.empty_denominator));
    }
    return out;
}

} // namespace v2x
