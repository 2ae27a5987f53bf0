#include "dirate/distribution.hpp"

#include <cmath>
#include <string>

namespace dirate {

namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<std::int64_t> compute_strides(const std::vector<int>& radices) {
    std::vector<std::int64_t> strides(radices.size(), 1);
    for (int i = static_cast<int>(radices.size()) - 2; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] =
            strides[static_cast<std::size_t>(i) + 1] * radices[static_cast<std::size_t>(i) + 1];
    }
    return strides;
}

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> pmf, std::vector<int> radices)
    : pmf_(std::move(pmf)), radices_(std::move(radices)), strides_(compute_strides(radices_)) {
    if (radices_.empty()) {
        throw ValidationError("distribution needs at least one slot");
    }
    std::int64_t cells = 1;
    for (int r : radices_) {
        if (r < 1) throw ValidationError("slot radix must be >= 1");
        cells *= r;
    }
    if (cells != size()) {
        throw ValidationError("pmf has " + std::to_string(size()) + " entries, radices imply " +
                              std::to_string(cells));
    }
    double sum = 0.0;
    for (double p : pmf_) {
        if (p < 0.0 || !std::isfinite(p)) {
            throw ValidationError("pmf entries must be finite and >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ValidationError("pmf sums to " + std::to_string(sum) + ", not 1");
    }
}

DiscreteDistribution marginalize(const DiscreteDistribution& dist, const std::vector<bool>& keep) {
    if (keep.size() != static_cast<std::size_t>(dist.num_slots())) {
        throw ValidationError("keep mask has wrong number of slots");
    }
    std::vector<int> kept_slots;
    for (int s = 0; s < dist.num_slots(); ++s) {
        if (keep[static_cast<std::size_t>(s)]) kept_slots.push_back(s);
    }
    if (kept_slots.empty()) {
        throw ValidationError("marginalize: mask keeps no slots");
    }

    std::vector<int> out_radices;
    out_radices.reserve(kept_slots.size());
    std::int64_t out_size = 1;
    for (int s : kept_slots) {
        out_radices.push_back(dist.radices()[static_cast<std::size_t>(s)]);
        out_size *= out_radices.back();
    }

    // Output strides aligned with kept_slots order.
    std::vector<std::int64_t> out_strides(kept_slots.size(), 1);
    for (int i = static_cast<int>(kept_slots.size()) - 2; i >= 0; --i) {
        out_strides[static_cast<std::size_t>(i)] =
            out_strides[static_cast<std::size_t>(i) + 1] *
            out_radices[static_cast<std::size_t>(i) + 1];
    }

    std::vector<double> out(static_cast<std::size_t>(out_size), 0.0);
    for (std::int64_t idx = 0; idx < dist.size(); ++idx) {
        double p = dist[idx];
        if (p == 0.0) continue;
        std::int64_t out_idx = 0;
        for (std::size_t j = 0; j < kept_slots.size(); ++j) {
            out_idx += static_cast<std::int64_t>(dist.digit(idx, kept_slots[j])) * out_strides[j];
        }
        out[static_cast<std::size_t>(out_idx)] += p;
    }

    double total = 0.0;
    for (double p : out) total += p;
    if (total > 0.0) {
        for (double& p : out) p /= total;
    }
    return DiscreteDistribution(std::move(out), std::move(out_radices));
}

DiscreteDistribution regroup(const DiscreteDistribution& dist,
                             const std::vector<std::vector<int>>& groups) {
    if (groups.empty()) {
        throw ValidationError("regroup: need at least one group");
    }
    std::vector<bool> seen(static_cast<std::size_t>(dist.num_slots()), false);
    std::vector<int> out_radices;
    std::int64_t out_size = 1;
    for (const auto& group : groups) {
        if (group.empty()) throw ValidationError("regroup: empty group");
        std::int64_t radix = 1;
        for (int s : group) {
            if (s < 0 || s >= dist.num_slots()) throw ValidationError("regroup: slot out of range");
            if (seen[static_cast<std::size_t>(s)]) {
                throw ValidationError("regroup: slot " + std::to_string(s) + " used twice");
            }
            seen[static_cast<std::size_t>(s)] = true;
            radix *= dist.radices()[static_cast<std::size_t>(s)];
        }
        out_radices.push_back(static_cast<int>(radix));
        out_size *= radix;
    }

    std::vector<std::int64_t> out_strides(groups.size(), 1);
    for (int i = static_cast<int>(groups.size()) - 2; i >= 0; --i) {
        out_strides[static_cast<std::size_t>(i)] =
            out_strides[static_cast<std::size_t>(i) + 1] *
            out_radices[static_cast<std::size_t>(i) + 1];
    }

    std::vector<double> out(static_cast<std::size_t>(out_size), 0.0);
    for (std::int64_t idx = 0; idx < dist.size(); ++idx) {
        double p = dist[idx];
        if (p == 0.0) continue;
        std::int64_t out_idx = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::int64_t fused = 0;
            for (int s : groups[g]) {
                fused = fused * dist.radices()[static_cast<std::size_t>(s)] + dist.digit(idx, s);
            }
            out_idx += fused * out_strides[g];
        }
        out[static_cast<std::size_t>(out_idx)] += p;
    }

    double total = 0.0;
    for (double p : out) total += p;
    if (total > 0.0) {
        for (double& p : out) p /= total;
    }
    return DiscreteDistribution(std::move(out), std::move(out_radices));
}

} // namespace dirate
