#include "jointmeas/distance.hpp"

#include <cmath>

#include "jointmeas/errors.hpp"
#include "subsets.hpp"

namespace jointmeas {

namespace {

void require_same_length(std::span<const double> p, std::span<const double> q, const char* what) {
  if (p.size() != q.size()) {
    throw InvalidInput(std::string(what) + ": distributions have different lengths (" +
                       std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
}

// Largest |eigenvalue| of a Hermitian difference and a pure state attaining it.
std::pair<double, State> extremal(const ComplexMatrix& diff) {
  const HermitianEigen eig = eigh(diff);
  const std::size_t k =
      std::abs(eig.values.front()) > std::abs(eig.values.back()) ? 0 : eig.values.size() - 1;
  const std::vector<Complex> ket = eig.eigenvector(k);
  return {std::abs(eig.values[k]), State::pure(ket)};
}

// Total order on POVMs with equal shapes, used to evaluate D(A, A') and
// D(A', A) on the same operand order so the two agree bit for bit.
bool precedes(const Povm& x, const Povm& y) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& ex = x.element(k).entries();
    const auto& ey = y.element(k).entries();
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (ex[i].real() != ey[i].real()) return ex[i].real() < ey[i].real();
      if (ex[i].imag() != ey[i].imag()) return ex[i].imag() < ey[i].imag();
    }
  }
  return false;
}

}  // namespace

void require_same_outcomes(const Povm& a, const Povm& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()) + ")");
  }
  if (a.outcomes() != b.outcomes()) {
    throw InvalidInput(std::string(what) + ": observables must share the same outcome labels");
  }
}

double dist_inf(std::span<const double> p, std::span<const double> q) {
  require_same_length(p, q, "dist_inf");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
  return d;
}

double dist_l1(std::span<const double> p, std::span<const double> q) {
  require_same_length(p, q, "dist_l1");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

DistanceValue distance_inf(const Povm& a, const Povm& a_prime) {
  require_same_outcomes(a, a_prime, "distance_inf");
  if (precedes(a_prime, a)) return distance_inf(a_prime, a);
  DistanceValue out;
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double v = op_norm(a.element(k) - a_prime.element(k));
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  auto [value, state] = extremal(a.element(best) - a_prime.element(best));
  out.value = value;
  out.witness_outcomes = {a.outcomes()[best]};
  out.witness_mask = std::uint64_t{1} << best;
  out.witness_state = std::move(state);
  return out;
}

DistanceValue distance_l1(const Povm& a, const Povm& a_prime) {
  require_same_outcomes(a, a_prime, "distance_l1");
  detail::require_subset_capacity(a.size(), "distance_l1");
  if (precedes(a_prime, a)) return distance_l1(a_prime, a);

  // A_D - A'_D = -(A_{not D} - A'_{not D}), so complements are skipped.
  std::vector<ComplexMatrix> diffs;
  diffs.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diffs.push_back(a.element(k) - a_prime.element(k));

  ComplexMatrix running(a.dim());
  double best_value = 0.0;
  std::uint64_t best_mask = 0;
  detail::for_each_gray_half_subset(a.size(), [&](std::uint64_t mask, int bit, bool added) {
    if (bit < 0) return;
    if (added) {
      running += diffs[static_cast<std::size_t>(bit)];
    } else {
      running -= diffs[static_cast<std::size_t>(bit)];
    }
    const double v = op_norm(running);
    if (v > best_value) {
      best_value = v;
      best_mask = mask;
    }
  });

  DistanceValue out;
  if (best_mask == 0) {
    // A == A' up to rounding: any state is extremal.
    out.value = 0.0;
    auto [value, state] = extremal(diffs.front());
    out.witness_state = std::move(state);
    return out;
  }
  ComplexMatrix diff(a.dim());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if ((best_mask >> k) & 1u) {
      diff += diffs[k];
      out.witness_outcomes.push_back(a.outcomes()[k]);
    }
  }
  auto [value, state] = extremal(diff);
  out.value = value;
  out.witness_mask = best_mask;
  out.witness_state = std::move(state);
  return out;
}

}  // namespace jointmeas
