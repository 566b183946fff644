#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointmeas/hermitian.hpp"

namespace jointmeas {

/// Entrywise tolerance on sum_a A_a = I.
inline constexpr double kCompletenessTolerance = 1e-8;
/// Smallest eigenvalue allowed for a POVM element is -kPsdTolerance.
inline constexpr double kPsdTolerance = 1e-9;
/// Upper bound on outcome counts for exact subset enumeration.
inline constexpr std::size_t kMaxSubsetOutcomes = 20;

/// A finite family of labeled operators {A_a}. Construction only checks the
/// structure (labels, shapes); positivity and completeness are reported by
/// validate_povm so that broken inputs can still be inspected.
class Povm {
 public:
  Povm(std::vector<std::string> outcomes, std::vector<ComplexMatrix> elements);

  std::size_t dim() const { return elements_.front().dim(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& element(std::size_t k) const { return elements_[k]; }

  /// Index of a label, or nullopt.
  std::optional<std::size_t> index_of(const std::string& label) const;
  /// Sum of the elements selected by `mask` (bit k selects outcome k).
  ComplexMatrix subset_sum(std::uint64_t mask) const;

  friend bool operator==(const Povm&, const Povm&) = default;

 private:
  std::vector<std::string> outcomes_;
  std::vector<ComplexMatrix> elements_;
};

/// Density operator. Throws InvalidInput unless Hermitian, PSD and unit trace.
class State {
 public:
  explicit State(ComplexMatrix rho);
  static State pure(std::span<const Complex> ket);

  std::size_t dim() const { return rho_.dim(); }
  const ComplexMatrix& matrix() const { return rho_; }
  /// tr(rho X).
  Complex expectation(const ComplexMatrix& x) const;

 private:
  ComplexMatrix rho_;
};

struct Violation {
  enum class Kind { NotHermitian, NegativeEigenvalue, Completeness };
  Kind kind;
  std::string outcome;  // empty for completeness
  double magnitude;
  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks Hermiticity and positivity of each element (smallest eigenvalue
/// >= -tol) and completeness (entrywise deviation of the sum from I <= tol).
ValidationReport validate_povm(const Povm& p, double psd_tol = kPsdTolerance,
                               double completeness_tol = kCompletenessTolerance);

bool is_pvm(const Povm& p, double tol = 1e-9);

struct OutcomeDistribution {
  std::vector<double> probabilities;  // clipped at 0 and renormalized
  std::vector<double> raw;            // tr(rho A_a) as computed
};

OutcomeDistribution outcome_distribution(const Povm& p, const State& state);

/// V(A) = max_a ||A_a - A_a^2||.
double intrinsic_uncertainty_inf(const Povm& p);
/// V_1(A) = max over subsets D of ||A_D - A_D^2||. Throws CapacityError above
/// kMaxSubsetOutcomes outcomes.
double intrinsic_uncertainty_l1(const Povm& p);

using BlochVector = std::array<double, 3>;

/// E(n) = (I + n.sigma) / 2 for a unit vector n.
ComplexMatrix qubit_projector(const BlochVector& n);
/// {(I + eta n.sigma)/2, (I - eta n.sigma)/2} labeled "+" and "-".
Povm noisy_qubit_povm(const BlochVector& n, double eta);
/// Unit vector in the x-z plane at angle theta from +z.
BlochVector bloch_xz(double theta);

/// S^{-1/2} G_k S^{-1/2} with G_k = R_k R_k*, R_k complex Gaussian.
/// Deterministic in seed; outcomes labeled "0", "1", ...
Povm random_povm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed);

/// Projective measurement in a Haar-random basis; basis vectors are dealt
/// into n_outcomes groups (some possibly empty, giving zero elements).
Povm random_pvm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed);

/// Random mixed state rho = G G* / tr(G G*).
State random_state(std::size_t dim, std::uint64_t seed);

}  // namespace jointmeas
