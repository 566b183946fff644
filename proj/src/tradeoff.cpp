#include "jointmeas/tradeoff.hpp"

#include <cmath>
#include <numbers>

#include "jointmeas/distance.hpp"
#include "jointmeas/errors.hpp"
#include "subsets.hpp"

namespace jointmeas {

namespace {

constexpr double kContourTolerance = 1e-10;

void finish(TradeoffReport& r) {
  r.slack = r.lhs - r.rhs;
  r.satisfied = r.slack >= -kSlackTolerance;
}

void require_theta(double theta, const char* what) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw InvalidInput(std::string(what) + ": theta must lie in [0, pi/2]");
  }
}

void require_same_dim(const Povm& a, const Povm& b, const char* what) {
  if (a.dim() != b.dim()) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

struct Marginals {
  Povm a;
  Povm b;
};

Marginals marginals_of(const Povm& a, const Povm& b, const Povm& joint, const OutcomeMap& f_a,
                       const OutcomeMap& f_b) {
  require_same_dim(a, b, "tradeoff check");
  require_same_dim(a, joint, "tradeoff check");
  return {marginalize(joint, f_a), marginalize(joint, f_b)};
}

}  // namespace

std::string inequality_id(Inequality which) {
  switch (which) {
    case Inequality::Theorem1: return "theorem1";
    case Inequality::Theorem2: return "theorem2";
    case Inequality::CorPvmInf: return "cor_pvm_inf";
    case Inequality::CorJoint: return "cor_joint";
    case Inequality::CorPvmInstrument: return "cor_pvm_instrument";
    case Inequality::CorPvmL1: return "cor_pvm_l1";
    case Inequality::Qubit: return "qubit";
    case Inequality::Heinosaari: return "heinosaari";
  }
  return "unknown";
}

double max_commutator_norm(const Povm& a, const Povm& b) {
  require_same_dim(a, b, "max_commutator_norm");
  double best = 0.0;
  for (const ComplexMatrix& x : a.elements()) {
    for (const ComplexMatrix& y : b.elements()) best = std::max(best, commutator_norm(x, y));
  }
  return best;
}

double max_subset_commutator_norm(const Povm& a, const Povm& b) {
  require_same_dim(a, b, "max_subset_commutator_norm");
  detail::require_subset_capacity(a.size(), "max_subset_commutator_norm");
  detail::require_subset_capacity(b.size(), "max_subset_commutator_norm");
  // [I - A_D, B_E] = -[A_D, B_E]: complements on either side are redundant.
  double best = 0.0;
  ComplexMatrix sum_a(a.dim());
  detail::for_each_gray_half_subset(a.size(), [&](std::uint64_t, int bit_a, bool added_a) {
    if (bit_a < 0) return;
    if (added_a) {
      sum_a += a.element(static_cast<std::size_t>(bit_a));
    } else {
      sum_a -= a.element(static_cast<std::size_t>(bit_a));
    }
    ComplexMatrix sum_b(b.dim());
    detail::for_each_gray_half_subset(b.size(), [&](std::uint64_t, int bit_b, bool added_b) {
      if (bit_b < 0) return;
      if (added_b) {
        sum_b += b.element(static_cast<std::size_t>(bit_b));
      } else {
        sum_b -= b.element(static_cast<std::size_t>(bit_b));
      }
      best = std::max(best, commutator_norm(sum_a, sum_b));
    });
  });
  return best;
}

double theorem1_lhs(double x, double y, double v_a, double v_b) {
  if (!(x >= 0.0 && y >= 0.0 && v_a >= 0.0 && v_b >= 0.0)) {
    throw InvalidInput("theorem1_lhs: arguments must be nonnegative");
  }
  return 2.0 * x * y + x + y + 2.0 * std::sqrt(2.0 * x + v_a) * std::sqrt(2.0 * y + v_b);
}

double pvm_lhs(double x, double y) {
  if (!(x >= 0.0 && y >= 0.0)) throw InvalidInput("pvm_lhs: arguments must be nonnegative");
  return 2.0 * x * y + x + y + 4.0 * std::sqrt(x) * std::sqrt(y);
}

TradeoffReport check_theorem1(const Povm& a, const Povm& b, const Povm& joint,
                              const OutcomeMap& f_a, const OutcomeMap& f_b) {
  const Marginals m = marginals_of(a, b, joint, f_a, f_b);
  TradeoffReport r;
  r.inequality = Inequality::Theorem1;
  r.x = distance_inf(a, m.a).value;
  r.y = distance_inf(b, m.b).value;
  r.v_a = intrinsic_uncertainty_inf(a);
  r.v_b = intrinsic_uncertainty_inf(b);
  r.lhs = theorem1_lhs(r.x, r.y, r.v_a, r.v_b);
  r.rhs = max_commutator_norm(a, b);
  finish(r);
  return r;
}

TradeoffReport check_theorem2(const Povm& a, const Povm& b, const Povm& joint,
                              const OutcomeMap& f_a, const OutcomeMap& f_b) {
  const Marginals m = marginals_of(a, b, joint, f_a, f_b);
  TradeoffReport r;
  r.inequality = Inequality::Theorem2;
  r.x = distance_l1(a, m.a).value;
  r.y = distance_l1(b, m.b).value;
  r.v_a = intrinsic_uncertainty_l1(a);
  r.v_b = intrinsic_uncertainty_l1(b);
  r.lhs = theorem1_lhs(r.x, r.y, r.v_a, r.v_b);
  r.rhs = max_subset_commutator_norm(a, b);
  finish(r);
  return r;
}

TradeoffReport check_corollary_pvm_inf(const Povm& a, const Povm& b, const Povm& joint,
                                       const OutcomeMap& f_a, const OutcomeMap& f_b) {
  if (!is_pvm(a) || !is_pvm(b)) throw InvalidInput("check_corollary_pvm_inf: A and B must be PVMs");
  const Marginals m = marginals_of(a, b, joint, f_a, f_b);
  TradeoffReport r;
  r.inequality = Inequality::CorPvmInf;
  r.x = distance_inf(a, m.a).value;
  r.y = distance_inf(b, m.b).value;
  r.lhs = pvm_lhs(r.x, r.y);
  r.rhs = max_commutator_norm(a, b);
  finish(r);
  return r;
}

TradeoffReport check_corollary_pvm_l1(const Povm& a, const Povm& b, const Povm& joint,
                                      const OutcomeMap& f_a, const OutcomeMap& f_b) {
  if (!is_pvm(a) || !is_pvm(b)) throw InvalidInput("check_corollary_pvm_l1: A and B must be PVMs");
  const Marginals m = marginals_of(a, b, joint, f_a, f_b);
  TradeoffReport r;
  r.inequality = Inequality::CorPvmL1;
  r.x = distance_l1(a, m.a).value;
  r.y = distance_l1(b, m.b).value;
  r.lhs = pvm_lhs(r.x, r.y);
  r.rhs = max_subset_commutator_norm(a, b);
  finish(r);
  return r;
}

TradeoffReport check_corollary_joint(const Povm& a, const Povm& b) {
  TradeoffReport r;
  r.inequality = Inequality::CorJoint;
  r.v_a = intrinsic_uncertainty_inf(a);
  r.v_b = intrinsic_uncertainty_inf(b);
  r.lhs = std::sqrt(r.v_a * r.v_b);
  r.rhs = 0.5 * max_commutator_norm(a, b);
  finish(r);
  r.note = r.satisfied
               ? "necessary condition only: satisfied, joint measurability not decided"
               : "necessary condition only: violated, A and B are not jointly measurable";
  return r;
}

TradeoffReport check_corollary_pvm_instrument(const Povm& a, const Povm& b, const Povm& joint,
                                              const OutcomeMap& f_a, const OutcomeMap& f_b) {
  if (!is_pvm(joint)) throw InvalidInput("check_corollary_pvm_instrument: joint observable must be a PVM");
  const Marginals m = marginals_of(a, b, joint, f_a, f_b);
  TradeoffReport r;
  r.inequality = Inequality::CorPvmInstrument;
  r.x = distance_inf(a, m.a).value;
  r.y = distance_inf(b, m.b).value;
  r.lhs = 2.0 * r.x * r.y + r.x + r.y;
  r.rhs = max_commutator_norm(a, b);
  finish(r);
  return r;
}

double qubit_rhs(double theta) {
  require_theta(theta, "qubit_rhs");
  return 0.5 * std::sin(theta);
}

double heinosaari_lower_bound(double theta) {
  require_theta(theta, "heinosaari_lower_bound");
  return std::sqrt(0.5) * (std::cos(theta / 2) + std::sin(theta / 2) - 1.0);
}

TradeoffReport check_qubit(double x, double y, double theta) {
  TradeoffReport r;
  r.inequality = Inequality::Qubit;
  r.x = x;
  r.y = y;
  r.lhs = pvm_lhs(x, y);
  r.rhs = qubit_rhs(theta);
  finish(r);
  return r;
}

TradeoffReport check_heinosaari(double x, double y, double theta) {
  TradeoffReport r;
  r.inequality = Inequality::Heinosaari;
  r.x = x;
  r.y = y;
  r.lhs = x + y;
  r.rhs = heinosaari_lower_bound(theta);
  finish(r);
  return r;
}

double corollary_contour(double x, double target) {
  if (pvm_lhs(x, 0.0) >= target) return 0.0;
  // pvm_lhs(x, target) >= target, and pvm_lhs is increasing in Y.
  double lo = 0.0;
  double hi = target;
  while (hi - lo > kContourTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (pvm_lhs(x, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

AdmissibleCurves admissible_region_curves(double theta, std::size_t grid_size, double x_max) {
  if (grid_size < 2) throw InvalidInput("admissible_region_curves: grid_size must be >= 2");
  if (!(x_max > 0.0)) throw InvalidInput("admissible_region_curves: x_max must be positive");
  const double target = qubit_rhs(theta);
  const double line = heinosaari_lower_bound(theta);
  AdmissibleCurves curves;
  curves.corollary.reserve(grid_size);
  curves.heinosaari.reserve(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    curves.corollary.push_back({x, corollary_contour(x, target)});
    curves.heinosaari.push_back({x, std::max(0.0, line - x)});
  }
  return curves;
}

}  // namespace jointmeas
