#pragma once

#include "sharpe/montecarlo.hpp"

namespace sharpe::testing {

inline constexpr std::size_t kReferenceWindows = 100000;
inline constexpr std::uint64_t kReferenceSeed = 42;

inline DistributionSpec gaussian_reference_spec() { return DistributionSpec::gaussian(kDefaultMu, kDefaultSigma); }
inline DistributionSpec student_reference_spec() {
  return DistributionSpec::student(kDefaultMu, kDefaultSigma, kDefaultNu);
}

// Generated once per test binary.
inline const JointSampleSet& gaussian_reference_set() {
  static const JointSampleSet set =
      simulate_joint(gaussian_reference_spec(), kTradingDaysPerYear, kReferenceWindows, kReferenceSeed);
  return set;
}

inline const JointSampleSet& student_reference_set() {
  static const JointSampleSet set =
      simulate_joint(student_reference_spec(), kTradingDaysPerYear, kReferenceWindows, kReferenceSeed);
  return set;
}

}  // namespace sharpe::testing
