#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jointmeas/povm.hpp"

namespace jointmeas {

/// Separator used in product-outcome labels "a|b". Not allowed in the
/// labels passed to coordinate_maps.
inline constexpr char kProductSeparator = '|';

/// A total function between two finite outcome sets. Targets need not all be
/// hit; an unhit target coarse-grains to a zero element.
class OutcomeMap {
 public:
  /// assignment[i] is the index into `target` of source[i]'s image.
  OutcomeMap(std::vector<std::string> source, std::vector<std::string> target,
             std::vector<std::size_t> assignment);
  /// Builds from (source, target) label pairs; every source label must appear
  /// exactly once and every image must belong to `target`.
  static OutcomeMap from_pairs(std::vector<std::string> source, std::vector<std::string> target,
                               const std::vector<std::pair<std::string, std::string>>& pairs);
  static OutcomeMap identity(const std::vector<std::string>& labels);
  static OutcomeMap constant(std::vector<std::string> source, std::string image);

  const std::vector<std::string>& source() const { return source_; }
  const std::vector<std::string>& target() const { return target_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  std::size_t operator()(std::size_t source_index) const { return assignment_[source_index]; }

  /// (this ∘ first): apply `first`, then this map.
  OutcomeMap after(const OutcomeMap& first) const;

 private:
  std::vector<std::string> source_;
  std::vector<std::string> target_;
  std::vector<std::size_t> assignment_;
};

/// f(F)_a = sum over x with f(x) = a of F_x.
Povm marginalize(const Povm& f_povm, const OutcomeMap& f);

struct CoordinateMaps {
  std::vector<std::string> product;  // "a|b" in lexicographic (a-major) order
  OutcomeMap to_a;
  OutcomeMap to_b;
};

CoordinateMaps coordinate_maps(const std::vector<std::string>& outcomes_a,
                               const std::vector<std::string>& outcomes_b);

/// Product-outcome label for (a, b).
std::string product_label(const std::string& a, const std::string& b);

struct ErrorOperators {
  std::vector<std::string> outcomes;
  std::vector<ComplexMatrix> errors;  // f(F)_a - A_a
  std::vector<double> norms;
  double max_norm = 0.0;
};

ErrorOperators error_operators(const Povm& target, const Povm& joint, const OutcomeMap& f);

}  // namespace jointmeas
