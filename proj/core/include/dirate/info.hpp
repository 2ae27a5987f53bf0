#pragma once

#include <span>

#include "dirate/distribution.hpp"

namespace dirate {

// All functionals are in nats; 0*log(0) = 0 and 0*log(0/0) = 0
// throughout. Nonnegative functionals tolerate round-off down to
// -1e-12 (clamped to 0); anything below that raises InternalError.

/// -sum p log p, accumulated in decreasing-probability order with Kahan
/// compensation so the value is independent of entry order at 1e-15.
double entropy(std::span<const double> pmf);
double entropy(const DiscreteDistribution& dist);

/// H(U) + H(V) - H(U,V) of a two-slot joint law.
double mutual_information(const DiscreteDistribution& joint_uv);

/// I(U;V|W) = H(U,W) + H(V,W) - H(U,V,W) - H(W) of a three-slot joint law.
double conditional_mutual_information(const DiscreteDistribution& joint_uvw);

/// D(p||q) = sum_{p>0} p log(p/q). Returns +infinity when p is not
/// absolutely continuous w.r.t. q; that is a value, not an error.
double relative_entropy(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Presentation helper: nats -> bits.
double nats_to_bits(double nats);

} // namespace dirate
