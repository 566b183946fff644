#pragma once

// Joint measurability as a convex feasibility problem.
//
// Any joint observable (F, f_A, f_B) can be pushed forward along
// x -> (f_A(x), f_B(x)) to a POVM on the product outcome set with the same
// marginals, so it suffices to search over product-outcome POVMs
// {F_(a,b)} with the coordinate maps. The search alternates (Dykstra)
// between two convex sets in the lifted variables (F, P, Q):
//
//   K1: every F_(a,b) is PSD, -tA <= P_a - A_a <= tA, -tB <= Q_b - B_b <= tB
//   K2: sum_b F_(a,b) = P_a, sum_a F_(a,b) = Q_b, sum F = I
//
// Exact joint measurability is the case tA = tB = 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jointmeas/povm.hpp"

namespace jointmeas {

struct FeasibilityOptions {
  std::size_t max_iter = 20000;
  /// Residual (largest violated affine constraint entry) accepted as feasible.
  double tol = 1e-9;
  std::size_t stagnation_window = 500;
  double stagnation_improvement = 1e-12;
  /// Bisection stops when the Y bracket is narrower than this.
  double bisection_resolution = 1e-4;
  /// Worker threads for frontier sweeps.
  std::size_t threads = 1;
};

/// Acceptance bounds for a returned witness.
inline constexpr double kWitnessValidationTolerance = 1e-7;
inline constexpr double kWitnessMarginalTolerance = 1e-6;

enum class FeasibilityStatus { Feasible, Infeasible, Undecided };

std::string status_name(FeasibilityStatus status);

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Undecided;
  std::optional<Povm> witness;  // product-outcome POVM when feasible
  double residual = 0.0;
  std::size_t iterations = 0;
  std::string certificate_note;
};

/// Decides whether A and B admit a common joint observable. Infeasibility
/// is only reported when certified by the necessary condition
/// sqrt(V(A) V(B)) >= max||[A_a, B_b]||/2; a solver that fails to converge
/// reports Undecided.
FeasibilityResult check_joint_measurability(const Povm& a, const Povm& b,
                                            const FeasibilityOptions& options = {});

struct FrontierPoint {
  double x_target = 0.0;
  double x_achieved = 0.0;
  double y_achieved = 0.0;
  Povm witness;
};

/// Smallest D_inf(B, f_B(F)) found over product-outcome POVMs F with
/// D_inf(A, f_A(F)) <= x_target, by bisection on Y.
FrontierPoint frontier_point(const Povm& a, const Povm& b, double x_target,
                             const FeasibilityOptions& options = {});

/// Largest X worth sweeping: beyond it Y = 0 is already achieved by
/// measuring B and reconstructing A from the post-measurement state.
double frontier_x_max(const Povm& a, const Povm& b);

/// frontier_point on grid_size evenly spaced targets in [0, x_max]
/// (x_max defaults to frontier_x_max). Y_achieved is made nonincreasing by
/// reusing witnesses found for smaller targets.
std::vector<FrontierPoint> frontier_sweep(const Povm& a, const Povm& b, std::size_t grid_size,
                                          const FeasibilityOptions& options = {},
                                          std::optional<double> x_max = std::nullopt);

/// The product-outcome POVM {sqrt(A_a) B_b sqrt(A_a)}: reproduces A exactly.
Povm sequential_joint(const Povm& first, const Povm& second, bool first_is_a = true);

}  // namespace jointmeas
