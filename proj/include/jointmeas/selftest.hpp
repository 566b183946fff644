#pragma once

// Randomized property suites over generated observables. The tradeoff
// inequalities hold for every valid input, so any violation found here is
// a defect in the implementation.

#include <cstdint>
#include <string>
#include <vector>

#include "jointmeas/povm.hpp"
#include "jointmeas/smearing.hpp"

namespace jointmeas {

/// Targets A and B plus a joint observable F with outcome maps onto them.
struct RandomInstance {
  Povm a;
  Povm b;
  Povm joint;
  OutcomeMap to_a;
  OutcomeMap to_b;
};

struct InstanceShape {
  std::size_t min_dim = 2;
  std::size_t max_dim = 4;
  std::size_t max_target_outcomes = 4;
  std::size_t max_joint_outcomes = 8;
  /// Draw F as a PVM (random basis) instead of a generic POVM.
  bool joint_is_pvm = false;
};

/// Deterministic in seed. Targets are generic POVMs, PVMs, or noisy
/// mixtures of the two; F is either generic or a smoothed version of the
/// sequential measurement, so instances cover both loose and near-tight
/// regimes.
RandomInstance random_instance(const InstanceShape& shape, std::uint64_t seed);

/// Random total map from `source` onto a target list of size n_target.
OutcomeMap random_outcome_map(const std::vector<std::string>& source,
                              const std::vector<std::string>& target, std::uint64_t seed);

struct SuiteOutcome {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // smallest slack/margin observed
  std::string first_failure;
};

struct SelftestOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

SuiteOutcome run_theorem1_suite(std::size_t trials, std::uint64_t seed, std::size_t threads = 1);
SuiteOutcome run_theorem2_suite(std::size_t trials, std::uint64_t seed, std::size_t threads = 1);
SuiteOutcome run_pvm_instrument_suite(std::size_t trials, std::uint64_t seed, std::size_t threads = 1);
/// Closed-form distances vs random states and their witness states.
SuiteOutcome run_duality_suite(std::size_t pairs, std::size_t states_per_pair, std::uint64_t seed,
                               std::size_t threads = 1);
/// V in [0, 1/4], V = 0 iff PVM, functoriality of marginalization, and
/// error operators summing to zero.
SuiteOutcome run_invariant_suite(std::size_t trials, std::uint64_t seed, std::size_t threads = 1);

std::vector<SuiteOutcome> run_selftest(const SelftestOptions& options);

}  // namespace jointmeas
