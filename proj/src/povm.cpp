#include "jointmeas/povm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "jointmeas/errors.hpp"
#include "subsets.hpp"

namespace jointmeas {

namespace {

constexpr double kStateTraceTolerance = 1e-10;
constexpr int kRandomPovmAttempts = 10;

ComplexMatrix gaussian_matrix(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> entries(dim * dim);
  for (Complex& z : entries) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return ComplexMatrix(dim, std::move(entries));
}

// Columns of a Haar-random unitary (Gram-Schmidt on Gaussian columns).
std::vector<std::vector<Complex>> random_orthonormal_basis(std::size_t dim, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, rng);
  std::vector<std::vector<Complex>> basis;
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<Complex> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = g(i, k);
    // Two passes of classical Gram-Schmidt keep the basis orthonormal to
    // working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < dim; ++i) overlap += std::conj(u[i]) * v[i];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= overlap * u[i];
      }
    }
    double norm = 0.0;
    for (const Complex& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (Complex& z : v) z /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k));
  return labels;
}

}  // namespace

Povm::Povm(std::vector<std::string> outcomes, std::vector<ComplexMatrix> elements)
    : outcomes_(std::move(outcomes)), elements_(std::move(elements)) {
  if (outcomes_.empty()) throw InvalidInput("Povm: at least one outcome is required");
  if (outcomes_.size() != elements_.size()) {
    throw InvalidInput("Povm: " + std::to_string(outcomes_.size()) + " labels but " +
                       std::to_string(elements_.size()) + " elements");
  }
  std::set<std::string> seen;
  for (const std::string& label : outcomes_) {
    if (label.empty()) throw InvalidInput("Povm: outcome labels must be non-empty");
    if (!seen.insert(label).second) throw InvalidInput("Povm: duplicate outcome label '" + label + "'");
  }
  const std::size_t d = elements_.front().dim();
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].dim() != d) {
      throw InvalidInput("Povm: element '" + outcomes_[k] + "' has dimension " +
                         std::to_string(elements_[k].dim()) + ", expected " + std::to_string(d));
    }
    if (!elements_[k].all_finite()) {
      throw InvalidInput("Povm: element '" + outcomes_[k] + "' has non-finite entries");
    }
  }
}

std::optional<std::size_t> Povm::index_of(const std::string& label) const {
  const auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - outcomes_.begin());
}

ComplexMatrix Povm::subset_sum(std::uint64_t mask) const {
  ComplexMatrix sum(dim());
  for (std::size_t k = 0; k < size(); ++k) {
    if ((mask >> k) & 1u) sum += elements_[k];
  }
  return sum;
}

State::State(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (!is_hermitian(rho_)) throw InvalidInput("State: density matrix is not Hermitian");
  rho_ = hermitian_part(rho_);
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kStateTraceTolerance) {
    throw InvalidInput("State: trace " + std::to_string(tr) + " differs from 1");
  }
  if (!psd_check(rho_, kPsdTolerance)) throw InvalidInput("State: density matrix is not PSD");
}

State State::pure(std::span<const Complex> ket) {
  double norm = 0.0;
  for (const Complex& z : ket) norm += std::norm(z);
  if (norm <= 0.0) throw InvalidInput("State::pure: zero vector");
  ComplexMatrix rho = ComplexMatrix::outer(ket);
  rho *= 1.0 / norm;
  return State(std::move(rho));
}

Complex State::expectation(const ComplexMatrix& x) const {
  if (x.dim() != dim()) throw InvalidInput("State::expectation: dimension mismatch");
  Complex sum = 0.0;
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sum += rho_(i, j) * x(j, i);
  }
  return sum;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NotHermitian:
      os << "element '" << outcome << "' is not Hermitian (deviation " << magnitude << ")";
      break;
    case Kind::NegativeEigenvalue:
      os << "element '" << outcome << "' has negative eigenvalue " << magnitude;
      break;
    case Kind::Completeness:
      os << "elements do not sum to identity (max entry deviation " << magnitude << ")";
      break;
  }
  return os.str();
}

ValidationReport validate_povm(const Povm& p, double psd_tol, double completeness_tol) {
  ValidationReport report;
  ComplexMatrix sum(p.dim());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const ComplexMatrix& e = p.element(k);
    sum += e;
    if (!is_hermitian(e)) {
      const double dev = (e - e.adjoint()).max_abs();
      report.violations.push_back({Violation::Kind::NotHermitian, p.outcomes()[k], dev});
      continue;
    }
    const double lowest = eigh(e).values.front();
    if (lowest < -psd_tol) {
      report.violations.push_back({Violation::Kind::NegativeEigenvalue, p.outcomes()[k], lowest});
    }
  }
  const double dev = (sum - ComplexMatrix::identity(p.dim())).max_abs();
  if (dev > completeness_tol) {
    report.violations.push_back({Violation::Kind::Completeness, "", dev});
  }
  return report;
}

bool is_pvm(const Povm& p, double tol) {
  return std::all_of(p.elements().begin(), p.elements().end(), [tol](const ComplexMatrix& e) {
    return op_norm(e * e - e) <= tol;
  });
}

OutcomeDistribution outcome_distribution(const Povm& p, const State& state) {
  if (p.dim() != state.dim()) throw InvalidInput("outcome_distribution: dimension mismatch");
  OutcomeDistribution out;
  out.raw.reserve(p.size());
  double total = 0.0;
  for (const ComplexMatrix& e : p.elements()) {
    const double prob = state.expectation(e).real();
    out.raw.push_back(prob);
    total += std::max(prob, 0.0);
  }
  out.probabilities.reserve(p.size());
  for (double prob : out.raw) out.probabilities.push_back(std::max(prob, 0.0) / total);
  return out;
}

double intrinsic_uncertainty_inf(const Povm& p) {
  double v = 0.0;
  for (const ComplexMatrix& e : p.elements()) v = std::max(v, op_norm(e - e * e));
  return v;
}

double intrinsic_uncertainty_l1(const Povm& p) {
  detail::require_subset_capacity(p.size(), "intrinsic_uncertainty_l1");
  // A_D(1 - A_D) is invariant under D -> complement, so half the subsets suffice.
  double v = 0.0;
  ComplexMatrix running(p.dim());
  detail::for_each_gray_half_subset(p.size(), [&](std::uint64_t, int bit, bool added) {
    if (bit < 0) return;
    if (added) {
      running += p.element(static_cast<std::size_t>(bit));
    } else {
      running -= p.element(static_cast<std::size_t>(bit));
    }
    v = std::max(v, op_norm(running - running * running));
  });
  return v;
}

ComplexMatrix qubit_projector(const BlochVector& n) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-9) {
    throw InvalidInput("qubit_projector: Bloch vector must have unit length");
  }
  ComplexMatrix e = ComplexMatrix::identity(2) + n[0] * pauli_x() + n[1] * pauli_y() + n[2] * pauli_z();
  e *= 0.5;
  return e;
}

Povm noisy_qubit_povm(const BlochVector& n, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("noisy_qubit_povm: eta must lie in [0, 1]");
  const ComplexMatrix plus = qubit_projector(n);
  const ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
  // (I + eta n.sigma)/2 = eta E(n) + (1 - eta) I/2
  ComplexMatrix a = eta * plus + (1.0 - eta) * half;
  ComplexMatrix b = ComplexMatrix::identity(2) - a;
  return Povm({"+", "-"}, {std::move(a), std::move(b)});
}

BlochVector bloch_xz(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

Povm random_povm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed) {
  if (dim == 0 || n_outcomes == 0) throw InvalidInput("random_povm: dim and n_outcomes must be >= 1");
  for (int attempt = 0; attempt < kRandomPovmAttempts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL);
    std::vector<ComplexMatrix> grams;
    ComplexMatrix total(dim);
    for (std::size_t k = 0; k < n_outcomes; ++k) {
      const ComplexMatrix r = gaussian_matrix(dim, rng);
      grams.push_back(hermitian_part(r * r.adjoint()));
      total += grams.back();
    }
    const HermitianEigen eig = eigh(total);
    if (eig.values.front() <= 1e-12 * eig.values.back()) continue;
    std::vector<double> inv_sqrt(dim);
    for (std::size_t i = 0; i < dim; ++i) inv_sqrt[i] = 1.0 / std::sqrt(eig.values[i]);
    const ComplexMatrix s = reassemble(eig, inv_sqrt);
    std::vector<ComplexMatrix> elements;
    for (const ComplexMatrix& g : grams) elements.push_back(hermitian_part(s * g * s));
    if (n_outcomes == 1) elements.front() = ComplexMatrix::identity(dim);
    return Povm(index_labels(n_outcomes), std::move(elements));
  }
  throw InvalidInput("random_povm: could not draw a nonsingular frame after 10 attempts");
}

Povm random_pvm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed) {
  if (dim == 0 || n_outcomes == 0) throw InvalidInput("random_pvm: dim and n_outcomes must be >= 1");
  std::mt19937_64 rng(seed);
  const auto basis = random_orthonormal_basis(dim, rng);
  std::uniform_int_distribution<std::size_t> pick(0, n_outcomes - 1);
  std::vector<ComplexMatrix> elements(n_outcomes, ComplexMatrix(dim));
  for (const auto& v : basis) elements[pick(rng)] += ComplexMatrix::outer(v);
  return Povm(index_labels(n_outcomes), std::move(elements));
}

State random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, rng);
  ComplexMatrix rho = hermitian_part(g * g.adjoint());
  rho *= 1.0 / rho.trace().real();
  return State(std::move(rho));
}

}  // namespace jointmeas
