#pragma once

// Accuracy/noncommutativity tradeoff inequalities for approximate joint
// measurements, and the admissible-region contours they induce.

#include <string>
#include <vector>

#include "jointmeas/povm.hpp"
#include "jointmeas/smearing.hpp"

namespace jointmeas {

/// Reports count as satisfied when lhs - rhs >= -kSlackTolerance.
inline constexpr double kSlackTolerance = 1e-9;

enum class Inequality {
  Theorem1,          // l-infinity, general POVMs
  Theorem2,          // l1, general POVMs
  CorPvmInf,         // l-infinity, PVM targets (V = 0)
  CorJoint,          // necessary condition for joint measurability
  CorPvmInstrument,  // l-infinity, joint observable is a PVM
  CorPvmL1,          // l1, PVM targets
  Qubit,             // two qubit PVMs at angle theta
  Heinosaari,        // linear qubit bound X + Y >= ...
};

std::string inequality_id(Inequality which);

struct TradeoffReport {
  Inequality inequality = Inequality::Theorem1;
  double x = 0.0;    // A-side distance
  double y = 0.0;    // B-side distance
  double v_a = 0.0;
  double v_b = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool satisfied = true;
  std::string note;
};

/// max_{a,b} ||[A_a, B_b]||
double max_commutator_norm(const Povm& a, const Povm& b);
/// max over subset pairs of ||[A_Da, B_Db]||
double max_subset_commutator_norm(const Povm& a, const Povm& b);

/// 2XY + X + Y + 2 sqrt(2X + V_A) sqrt(2Y + V_B)
double theorem1_lhs(double x, double y, double v_a, double v_b);
/// 2XY + X + Y + 4 sqrt(XY): the left side with V_A = V_B = 0.
double pvm_lhs(double x, double y);

TradeoffReport check_theorem1(const Povm& a, const Povm& b, const Povm& joint,
                              const OutcomeMap& f_a, const OutcomeMap& f_b);
TradeoffReport check_theorem2(const Povm& a, const Povm& b, const Povm& joint,
                              const OutcomeMap& f_a, const OutcomeMap& f_b);
/// Throws InvalidInput if a or b is not a PVM.
TradeoffReport check_corollary_pvm_inf(const Povm& a, const Povm& b, const Povm& joint,
                                       const OutcomeMap& f_a, const OutcomeMap& f_b);
TradeoffReport check_corollary_pvm_l1(const Povm& a, const Povm& b, const Povm& joint,
                                      const OutcomeMap& f_a, const OutcomeMap& f_b);
/// sqrt(V(A) V(B)) >= max||[A_a, B_b]|| / 2. A violation proves that A and B
/// are not jointly measurable; satisfaction proves nothing.
TradeoffReport check_corollary_joint(const Povm& a, const Povm& b);
/// 2XY + X + Y >= max||[A_a, B_b]|| when the joint observable is a PVM.
/// Throws InvalidInput if `joint` is not a PVM.
TradeoffReport check_corollary_pvm_instrument(const Povm& a, const Povm& b, const Povm& joint,
                                              const OutcomeMap& f_a, const OutcomeMap& f_b);

/// sin(theta)/2 for theta in [0, pi/2].
double qubit_rhs(double theta);
/// sqrt(1/2) (cos(theta/2) + sin(theta/2) - 1) for theta in [0, pi/2].
double heinosaari_lower_bound(double theta);

/// Qubit specialization: pvm_lhs(X, Y) >= sin(theta)/2.
TradeoffReport check_qubit(double x, double y, double theta);
/// X + Y >= heinosaari_lower_bound(theta).
TradeoffReport check_heinosaari(double x, double y, double theta);

struct CurvePoint {
  double x;
  double y;
};

struct AdmissibleCurves {
  std::vector<CurvePoint> corollary;   // smallest Y with pvm_lhs(X, Y) >= sin(theta)/2
  std::vector<CurvePoint> heinosaari;  // Y = max(0, bound - X)
};

/// Both contours on a uniform grid X in [0, x_max]. Contour points are
/// found by bisection on Y to 1e-10.
AdmissibleCurves admissible_region_curves(double theta, std::size_t grid_size, double x_max = 0.5);

/// Smallest Y >= 0 with pvm_lhs(x, Y) >= target.
double corollary_contour(double x, double target);

}  // namespace jointmeas
