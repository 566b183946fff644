#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "jointmeas/errors.hpp"
#include "jointmeas/povm.hpp"

namespace jointmeas::detail {

inline void require_subset_capacity(std::size_t n, const char* what) {
  if (n > kMaxSubsetOutcomes) {
    throw CapacityError(std::string(what) + ": " + std::to_string(n) +
                        " outcomes exceeds the subset enumeration limit of " +
                        std::to_string(kMaxSubsetOutcomes));
  }
}

// Visits the subsets of {0, ..., n-1} that exclude outcome n-1, in Gray-code
// order. Every other subset is the complement of a visited one. The callback
// receives (mask, flipped_bit, added); the first call is the empty set with
// flipped_bit == -1.
template <class Visit>
void for_each_gray_half_subset(std::size_t n, Visit&& visit) {
  visit(std::uint64_t{0}, -1, false);
  if (n <= 1) return;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::uint64_t mask = 0;
  for (std::uint64_t i = 1; i < count; ++i) {
    const int bit = std::countr_zero(i);
    mask ^= std::uint64_t{1} << bit;
    visit(mask, bit, ((mask >> bit) & 1u) != 0);
  }
}

}  // namespace jointmeas::detail
