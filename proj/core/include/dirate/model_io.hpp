#pragma once

#include <string>

#include "dirate/markov.hpp"

namespace dirate {

// Model files are JSON. Joint models carry
//   {k, m, ell, transition: [(m*ell)^k * (m*ell) row-major probs],
//    initial: [(m*ell)^k probs]}
// and univariate models the same without "ell". A file is treated as
// univariate exactly when "ell" is absent.

JointMarkovModel load_joint_model(const std::string& path);
UnivariateMarkovModel load_univariate_model(const std::string& path);
bool model_file_is_joint(const std::string& path);

void save_model(const std::string& path, const JointMarkovModel& model);
void save_model(const std::string& path, const UnivariateMarkovModel& model);

} // namespace dirate
