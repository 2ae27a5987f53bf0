#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dirate/errors.hpp"

namespace dirate {

/// Normalized pmf over a mixed-radix product space. Slot 0 is the
/// slowest-varying digit of the flat index; a plain pmf over one set is
/// a single-slot distribution. All information functionals and the
/// empirical block laws are carried by this type.
class DiscreteDistribution {
public:
    DiscreteDistribution(std::vector<double> pmf, std::vector<int> radices);

    std::span<const double> pmf() const noexcept { return pmf_; }
    const std::vector<int>& radices() const noexcept { return radices_; }
    int num_slots() const noexcept { return static_cast<int>(radices_.size()); }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(pmf_.size()); }
    double operator[](std::int64_t i) const noexcept { return pmf_[static_cast<std::size_t>(i)]; }

    /// Digit of `index` at `slot`.
    int digit(std::int64_t index, int slot) const noexcept {
        return static_cast<int>((index / strides_[static_cast<std::size_t>(slot)]) %
                                radices_[static_cast<std::size_t>(slot)]);
    }

    std::int64_t stride(int slot) const noexcept {
        return strides_[static_cast<std::size_t>(slot)];
    }

private:
    std::vector<double> pmf_;
    std::vector<int> radices_;
    std::vector<std::int64_t> strides_;
};

/// Sums the pmf over every slot not selected by `keep` (one flag per
/// slot, at least one set) and renormalizes. Kept slots retain their
/// relative order.
DiscreteDistribution marginalize(const DiscreteDistribution& dist, const std::vector<bool>& keep);

/// Marginalizes onto the union of `groups` and fuses each group of
/// slots into a single slot (radix = product, digits combined in the
/// listed order). Groups must be disjoint and nonempty. Used to view a
/// block law as a coarse (U, V, W) triple.
DiscreteDistribution regroup(const DiscreteDistribution& dist,
                             const std::vector<std::vector<int>>& groups);

} // namespace dirate
