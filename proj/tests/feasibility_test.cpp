#include "jointmeas/feasibility.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "jointmeas/distance.hpp"
#include "jointmeas/errors.hpp"
#include "jointmeas/smearing.hpp"
#include "jointmeas/tradeoff.hpp"
#include "test_support.hpp"

using namespace jointmeas;
using namespace jointmeas::testing;

namespace {

Povm sharp(const BlochVector& n) {
  return Povm({"+", "-"}, {qubit_projector(n), qubit_projector({-n[0], -n[1], -n[2]})});
}

// Marginal deviations of a product-outcome witness.
std::pair<double, double> deviations(const Povm& witness, const Povm& a, const Povm& b) {
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  return {distance_inf(a, marginalize(witness, maps.to_a)).value,
          distance_inf(b, marginalize(witness, maps.to_b)).value};
}

void expect_valid_witness(const FeasibilityResult& r, const Povm& a, const Povm& b) {
  ASSERT_EQ(r.status, FeasibilityStatus::Feasible) << r.certificate_note;
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(validate_povm(*r.witness, kWitnessValidationTolerance, kWitnessValidationTolerance).ok());
  const auto [x, y] = deviations(*r.witness, a, b);
  EXPECT_LE(x, kWitnessMarginalTolerance);
  EXPECT_LE(y, kWitnessMarginalTolerance);
}

}  // namespace

TEST(status_name, names) {
  EXPECT_EQ(status_name(FeasibilityStatus::Feasible), "feasible");
  EXPECT_EQ(status_name(FeasibilityStatus::Infeasible), "infeasible");
  EXPECT_EQ(status_name(FeasibilityStatus::Undecided), "undecided");
}

TEST(sequential_joint, reproduces_first_marginal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Povm a = random_povm(3, 3, seed);
    const Povm b = random_povm(3, 2, seed + 40);
    const Povm a_first = sequential_joint(a, b, true);
    EXPECT_TRUE(validate_povm(a_first).ok());
    EXPECT_LT(deviations(a_first, a, b).first, 1e-12);
    const Povm b_first = sequential_joint(b, a, false);
    EXPECT_TRUE(validate_povm(b_first).ok());
    EXPECT_LT(deviations(b_first, a, b).second, 1e-12);
    EXPECT_EQ(b_first.outcomes(), a_first.outcomes());
  }
  EXPECT_THROW(sequential_joint(random_povm(2, 2, 1), random_povm(3, 2, 1)), InvalidInput);
}

TEST(check_joint_measurability, commuting_pvms) {
  const std::vector<double> d1{1, 0, 0}, d2{0, 1, 0}, d3{0, 0, 1}, d12{1, 1, 0};
  const Povm a({"u", "v"}, {ComplexMatrix::diagonal(d12), ComplexMatrix::diagonal(d3)});
  const Povm b({"p", "q", "r"}, {ComplexMatrix::diagonal(d1), ComplexMatrix::diagonal(d2), ComplexMatrix::diagonal(d3)});
  const FeasibilityResult r = check_joint_measurability(a, b);
  expect_valid_witness(r, a, b);
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  const auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(std::find(maps.product.begin(), maps.product.end(), label) - maps.product.begin());
  };
  EXPECT_LT(max_entry_diff(r.witness->element(index("u|p")), ComplexMatrix::diagonal(d1)), 1e-9);
  EXPECT_LT(r.witness->element(index("v|p")).max_abs(), 1e-9);
}

TEST(check_joint_measurability, noncommuting_pvms_are_certified_infeasible) {
  const FeasibilityResult r = check_joint_measurability(sharp({0, 0, 1}), sharp({1, 0, 0}));
  EXPECT_EQ(r.status, FeasibilityStatus::Infeasible);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_NE(r.certificate_note.find("violated"), std::string::npos);
}

TEST(check_joint_measurability, noisy_orthogonal_threshold) {
  for (double eta : {0.5, 0.65, 0.70, 0.705}) {
    const Povm a = noisy_qubit_povm({1, 0, 0}, eta);
    const Povm b = noisy_qubit_povm({0, 0, 1}, eta);
    expect_valid_witness(check_joint_measurability(a, b), a, b);
  }
  for (double eta : {0.708, 0.72, 0.9}) {
    const FeasibilityResult r = check_joint_measurability(noisy_qubit_povm({1, 0, 0}, eta), noisy_qubit_povm({0, 0, 1}, eta));
    EXPECT_EQ(r.status, FeasibilityStatus::Infeasible) << eta;
  }
}

TEST(check_joint_measurability, iterative_case) {
  // Generic three-outcome POVMs: the symmetrized-product start is not a
  // joint observable, so the alternating projections have to do the work.
  const Povm a = random_povm(3, 3, 0);
  const Povm b = random_povm(3, 3, 50);
  const FeasibilityResult r = check_joint_measurability(a, b);
  expect_valid_witness(r, a, b);
  EXPECT_GT(r.iterations, 0u);

  FeasibilityOptions starved;
  starved.max_iter = 0;
  const FeasibilityResult undecided = check_joint_measurability(a, b, starved);
  EXPECT_EQ(undecided.status, FeasibilityStatus::Undecided);
  EXPECT_FALSE(undecided.witness.has_value());
}

TEST(check_joint_measurability, non_orthogonal_noisy_qubits) {
  for (double theta : {M_PI / 4, M_PI / 3, 1.2}) {
    const Povm a = noisy_qubit_povm({0, 0, 1}, 0.6);
    const Povm b = noisy_qubit_povm(bloch_xz(theta), 0.6);
    expect_valid_witness(check_joint_measurability(a, b), a, b);
  }
}

TEST(check_joint_measurability, random_noisy_mixtures) {
  // Mixing any pair with the trivial observable at weight 1/2 makes it
  // jointly measurable: F_(a,b) = (A_a tr(B_b) + tr(A_a) B_b) / (2 d).
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t dim = 2 + seed % 2;
    const Povm pa = random_pvm(dim, 2, seed);
    const Povm pb = random_pvm(dim, 2, seed + 100);
    const auto half_noise = [&](const Povm& p) {
      std::vector<ComplexMatrix> elements;
      for (const ComplexMatrix& e : p.elements()) {
        elements.push_back(0.5 * e + ComplexMatrix::identity(dim) * (0.5 * e.trace().real() / dim));
      }
      return Povm(p.outcomes(), std::move(elements));
    };
    const Povm a = half_noise(pa);
    const Povm b = half_noise(pb);
    const FeasibilityResult r = check_joint_measurability(a, b);
    EXPECT_NE(r.status, FeasibilityStatus::Infeasible) << "seed " << seed;
    if (r.status == FeasibilityStatus::Feasible) expect_valid_witness(r, a, b);
  }
}

TEST(check_joint_measurability, dimension_mismatch) {
  EXPECT_THROW(check_joint_measurability(random_povm(2, 2, 1), random_povm(3, 2, 1)), InvalidInput);
}

TEST(frontier_point, commuting_reaches_origin) {
  const std::vector<double> d1{1, 0}, d2{0, 1};
  const Povm a({"0", "1"}, {ComplexMatrix::diagonal(d1), ComplexMatrix::diagonal(d2)});
  const FrontierPoint p = frontier_point(a, a, 0.0);
  EXPECT_LT(p.x_achieved, 1e-9);
  EXPECT_LT(p.y_achieved, 1e-9);
}

TEST(frontier_point, orthogonal_qubits_at_zero) {
  const Povm a = sharp({0, 0, 1});
  const Povm b = sharp({1, 0, 0});
  const FrontierPoint p = frontier_point(a, b, 0.0);
  EXPECT_LE(p.x_achieved, kWitnessMarginalTolerance);
  EXPECT_GE(p.y_achieved, corollary_contour(p.x_achieved, 0.5) - 1e-9);
  EXPECT_GE(p.x_achieved + p.y_achieved, heinosaari_lower_bound(M_PI / 2) - 1e-9);
  EXPECT_TRUE(validate_povm(p.witness, kWitnessValidationTolerance, kWitnessValidationTolerance).ok());
  const auto [x, y] = deviations(p.witness, a, b);
  EXPECT_NEAR(x, p.x_achieved, 1e-12);
  EXPECT_NEAR(y, p.y_achieved, 1e-12);
  EXPECT_THROW(frontier_point(a, b, -0.1), InvalidInput);
}

TEST(frontier_sweep, monotone_and_contained) {
  const Povm a = sharp({0, 0, 1});
  const Povm b = sharp(bloch_xz(M_PI / 4));
  FeasibilityOptions options;
  options.threads = 2;
  const std::vector<FrontierPoint> points = frontier_sweep(a, b, 6, options);
  ASSERT_EQ(points.size(), 6u);
  EXPECT_NEAR(points.back().x_target, frontier_x_max(a, b), 1e-15);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const FrontierPoint& p = points[i];
    EXPECT_LE(p.x_achieved, p.x_target + kWitnessMarginalTolerance);
    EXPECT_TRUE(check_qubit(p.x_achieved, p.y_achieved, M_PI / 4).slack >= -1e-9);
    EXPECT_GE(p.x_achieved + p.y_achieved, heinosaari_lower_bound(M_PI / 4) - 1e-9);
    if (i > 0) {
      EXPECT_LE(p.y_achieved, points[i - 1].y_achieved);
    }
  }
  EXPECT_THROW(frontier_sweep(a, b, 1), InvalidInput);
}

TEST(frontier_sweep, thread_count_does_not_change_results) {
  const Povm a = sharp({0, 0, 1});
  const Povm b = sharp({1, 0, 0});
  FeasibilityOptions serial;
  FeasibilityOptions parallel;
  parallel.threads = 3;
  const auto s = frontier_sweep(a, b, 4, serial);
  const auto p = frontier_sweep(a, b, 4, parallel);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].x_achieved, p[i].x_achieved);
    EXPECT_EQ(s[i].y_achieved, p[i].y_achieved);
  }
}
