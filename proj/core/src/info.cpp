#include "dirate/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace dirate {

namespace {

constexpr double kClampSlack = 1e-12;

double clamp_nonneg(double value, const char* what) {
    if (value >= 0.0) return value;
    if (value >= -kClampSlack) return 0.0;
    throw InternalError(std::string(what) + " evaluated to " + std::to_string(value) +
                        ", below the -1e-12 round-off slack");
}

} // namespace

double entropy(std::span<const double> pmf) {
    std::vector<double> positives;
    positives.reserve(pmf.size());
    for (double p : pmf) {
        if (p > 0.0) positives.push_back(p);
    }
    std::sort(positives.begin(), positives.end(), std::greater<>());

    double sum = 0.0, carry = 0.0;
    for (double p : positives) {
        double term = -p * std::log(p);
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double entropy(const DiscreteDistribution& dist) { return entropy(dist.pmf()); }

double mutual_information(const DiscreteDistribution& joint_uv) {
    if (joint_uv.num_slots() != 2) {
        throw ValidationError("mutual_information expects a two-slot joint law");
    }
    double hu = entropy(marginalize(joint_uv, {true, false}));
    double hv = entropy(marginalize(joint_uv, {false, true}));
    double huv = entropy(joint_uv);
    return clamp_nonneg(hu + hv - huv, "mutual information");
}

double conditional_mutual_information(const DiscreteDistribution& joint_uvw) {
    if (joint_uvw.num_slots() != 3) {
        throw ValidationError("conditional_mutual_information expects a three-slot joint law");
    }
    double huw = entropy(marginalize(joint_uvw, {true, false, true}));
    double hvw = entropy(marginalize(joint_uvw, {false, true, true}));
    double huvw = entropy(joint_uvw);
    double hw = entropy(marginalize(joint_uvw, {false, false, true}));
    return clamp_nonneg(huw + hvw - huvw - hw, "conditional mutual information");
}

double relative_entropy(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.size() != q.size()) {
        throw ValidationError("relative_entropy: distributions live on different index spaces");
    }
    double sum = 0.0, carry = 0.0;
    for (std::int64_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        double term = p[i] * std::log(p[i] / q[i]);
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return clamp_nonneg(sum, "relative entropy");
}

double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

} // namespace dirate
