#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointmeas/povm.hpp"

namespace jointmeas {

/// max_x |p(x) - q(x)|
double dist_inf(std::span<const double> p, std::span<const double> q);
/// (1/2) sum_x |p(x) - q(x)|, the total-variation distance.
double dist_l1(std::span<const double> p, std::span<const double> q);

/// An observable distance together with where the supremum over states is
/// attained: the maximizing outcome (l-infinity) or outcome subset (l1), and
/// a pure state achieving the value.
struct DistanceValue {
  double value = 0.0;
  std::vector<std::string> witness_outcomes;
  std::uint64_t witness_mask = 0;
  std::optional<State> witness_state;
};

/// sup over states of d_inf = max_a ||A_a - A'_a||. Both distances give
/// bit-identical values for (A, A') and (A', A).
DistanceValue distance_inf(const Povm& a, const Povm& a_prime);

/// sup over states of d_1 = max over subsets D of ||A_D - A'_D||.
/// Subsets are scanned in Gray-code order skipping complements; the first
/// maximum wins ties. Throws CapacityError above kMaxSubsetOutcomes.
DistanceValue distance_l1(const Povm& a, const Povm& a_prime);

/// Throws InvalidInput unless a and b share dimension and outcome labels
/// (in the same order).
void require_same_outcomes(const Povm& a, const Povm& b, const char* what);

}  // namespace jointmeas
