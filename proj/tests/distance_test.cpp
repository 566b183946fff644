#include "jointmeas/distance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jointmeas/errors.hpp"
#include "test_support.hpp"

using namespace jointmeas;
using namespace jointmeas::testing;

namespace {

Povm sharp(const BlochVector& n) {
  return Povm({"+", "-"}, {qubit_projector(n), qubit_projector({-n[0], -n[1], -n[2]})});
}

Povm relabeled(const Povm& p, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < p.size(); ++k) labels.push_back(prefix + std::to_string(k));
  return Povm(labels, p.elements());
}

// Brute-force maximum over all 2^n subsets using the power-iteration norm.
double subset_oracle(const Povm& a, const Povm& b) {
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << a.size()); ++mask) {
    best = std::max(best, power_iteration_norm(a.subset_sum(mask) - b.subset_sum(mask)));
  }
  return best;
}

std::vector<double> probabilities(const Povm& p, const State& s) {
  return outcome_distribution(p, s).probabilities;
}

}  // namespace

TEST(dist_inf, examples) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const std::vector<double> q{0.2, 0.5, 0.3};
  EXPECT_EQ(dist_inf(p, p), 0.0);
  EXPECT_DOUBLE_EQ(dist_inf(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_NEAR(dist_inf(p, q), 0.3, 1e-15);
  EXPECT_THROW(dist_inf(p, std::vector<double>{1.0}), InvalidInput);
}

TEST(dist_l1, examples) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const std::vector<double> q{0.2, 0.5, 0.3};
  EXPECT_EQ(dist_l1(p, p), 0.0);
  EXPECT_DOUBLE_EQ(dist_l1(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_NEAR(dist_l1(p, q), 0.3, 1e-15);
  EXPECT_THROW(dist_l1(p, std::vector<double>{1.0}), InvalidInput);
}

TEST(distance_inf, identical_is_zero) {
  const Povm p = random_povm(3, 4, 9);
  EXPECT_EQ(distance_inf(p, p).value, 0.0);
  EXPECT_EQ(distance_l1(p, p).value, 0.0);
}

TEST(distance_inf, z_versus_x) {
  const DistanceValue d = distance_inf(sharp({0, 0, 1}), sharp({1, 0, 0}));
  EXPECT_NEAR(d.value, 1.0 / std::sqrt(2.0), 1e-14);
  ASSERT_TRUE(d.witness_state.has_value());
  ASSERT_EQ(d.witness_outcomes.size(), 1u);
  EXPECT_EQ(d.witness_outcomes[0], "+");
  const double attained = dist_inf(probabilities(sharp({0, 0, 1}), *d.witness_state),
                                   probabilities(sharp({1, 0, 0}), *d.witness_state));
  EXPECT_NEAR(attained, d.value, 1e-12);
}

TEST(distance, rejects_mismatched_outcomes) {
  const Povm a = random_povm(2, 3, 1);
  EXPECT_THROW(distance_inf(a, random_povm(2, 2, 1)), InvalidInput);
  EXPECT_THROW(distance_inf(a, random_povm(3, 3, 1)), InvalidInput);
  EXPECT_THROW(distance_l1(a, relabeled(a, "x")), InvalidInput);
}

TEST(distance_l1, two_outcomes_equals_inf) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Povm a = random_povm(3, 2, seed);
    const Povm b = random_povm(3, 2, seed + 1000);
    EXPECT_NEAR(distance_l1(a, b).value, distance_inf(a, b).value, 1e-13);
  }
}

TEST(distance_l1, matches_exhaustive_oracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t dim = 2 + seed % 2;
    const Povm a = random_povm(dim, 3 + seed % 3, seed);
    const Povm b = random_povm(dim, 3 + seed % 3, seed + 77);
    const DistanceValue d = distance_l1(a, b);
    EXPECT_NEAR(d.value, subset_oracle(a, b), 1e-9);
    EXPECT_GE(d.value, distance_inf(a, b).value - 1e-12);
    EXPECT_NEAR(op_norm(a.subset_sum(d.witness_mask) - b.subset_sum(d.witness_mask)), d.value, 1e-14);
    EXPECT_EQ(d.witness_outcomes.size(), static_cast<std::size_t>(std::popcount(d.witness_mask)));
  }
}

TEST(distance_l1, witness_subset_skips_complements) {
  // The last outcome never appears in the witness subset; its complement
  // carries the same norm.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Povm a = random_povm(2, 4, seed);
    const Povm b = random_povm(2, 4, seed + 5);
    const DistanceValue d = distance_l1(a, b);
    EXPECT_EQ(d.witness_mask & (1ull << 3), 0u);
    const std::uint64_t complement = 0b1111 ^ d.witness_mask;
    EXPECT_NEAR(op_norm(a.subset_sum(complement) - b.subset_sum(complement)), d.value, 1e-12);
  }
}

TEST(distance, deterministic) {
  const Povm a = random_povm(3, 5, 3);
  const Povm b = random_povm(3, 5, 4);
  const DistanceValue d1 = distance_l1(a, b);
  const DistanceValue d2 = distance_l1(a, b);
  EXPECT_EQ(d1.value, d2.value);
  EXPECT_EQ(d1.witness_mask, d2.witness_mask);
  EXPECT_EQ(d1.witness_state->matrix(), d2.witness_state->matrix());
}

TEST(distance, duality_over_random_states) {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t dim = 2 + seed % 3;
    const Povm a = random_povm(dim, 3, seed);
    const Povm b = random_povm(dim, 3, seed + 50);
    const DistanceValue d_inf = distance_inf(a, b);
    const DistanceValue d_l1 = distance_l1(a, b);
    EXPECT_NEAR(dist_inf(probabilities(a, *d_inf.witness_state), probabilities(b, *d_inf.witness_state)),
                d_inf.value, 1e-8);
    EXPECT_NEAR(dist_l1(probabilities(a, *d_l1.witness_state), probabilities(b, *d_l1.witness_state)),
                d_l1.value, 1e-8);
    for (int k = 0; k < 200; ++k) {
      const State s(random_pure(dim, rng));
      EXPECT_LE(dist_inf(probabilities(a, s), probabilities(b, s)), d_inf.value + 1e-9);
      EXPECT_LE(dist_l1(probabilities(a, s), probabilities(b, s)), d_l1.value + 1e-9);
    }
  }
}

TEST(distance, metric_axioms) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t dim = 2 + seed % 3;
    const Povm a = random_povm(dim, 3, seed);
    const Povm b = random_povm(dim, 3, seed + 1000);
    const Povm c = random_pvm(dim, 3, seed + 2000);
    for (auto* metric : {&distance_inf, &distance_l1}) {
      EXPECT_EQ((*metric)(a, b).value, (*metric)(b, a).value);
      EXPECT_LE((*metric)(a, c).value, (*metric)(a, b).value + (*metric)(b, c).value + 1e-9);
      EXPECT_EQ((*metric)(c, c).value, 0.0);
    }
  }
}
