#include "jointmeas/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

#include "jointmeas/distance.hpp"
#include "jointmeas/errors.hpp"
#include "jointmeas/smearing.hpp"
#include "jointmeas/tradeoff.hpp"

namespace jointmeas {

namespace {

// Residual below which a frontier iterate is renormalized and measured.
constexpr double kFrontierCheckResidual = 1e-5;
constexpr std::size_t kFrontierCheckEvery = 10;

// Real (m x n) constraint matrix C of the affine set K2, acting on the
// stacked scalars z = (x_(a,b), p_a, q_b) of one matrix entry, together
// with pinv(C C^T). The same C applies to every entry (i, j); only the
// right-hand side (delta_ij on the completeness row) changes.
class AffineProjector {
 public:
  AffineProjector(std::size_t na, std::size_t nb) : na_(na), nb_(nb) {
    rows_ = na + nb + 1;
    cols_ = na * nb + na + nb;
    c_.assign(rows_ * cols_, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t x = a * nb + b;
        at(a, x) = 1.0;           // sum_b x_ab - p_a
        at(na + b, x) = 1.0;      // sum_a x_ab - q_b
        at(na + nb, x) = 1.0;     // sum x_ab - delta
      }
      at(a, na * nb + a) = -1.0;
    }
    for (std::size_t b = 0; b < nb; ++b) at(na + b, na * nb + na + b) = -1.0;

    ComplexMatrix gram(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t s = 0; s < rows_; ++s) {
        double sum = 0.0;
        for (std::size_t k = 0; k < cols_; ++k) sum += c_[r * cols_ + k] * c_[s * cols_ + k];
        gram(r, s) = sum;
      }
    }
    const HermitianEigen eig = eigh(gram);
    std::vector<double> inv(rows_);
    const double cutoff = 1e-12 * eig.values.back();
    for (std::size_t k = 0; k < rows_; ++k) inv[k] = eig.values[k] > cutoff ? 1.0 / eig.values[k] : 0.0;
    const ComplexMatrix pinv = reassemble(eig, inv);
    pinv_.resize(rows_ * rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t s = 0; s < rows_; ++s) pinv_[r * rows_ + s] = pinv(r, s).real();
    }
  }

  std::size_t cols() const { return cols_; }

  // Projects one entry's scalars in place; returns the largest constraint
  // violation before projecting.
  double project(std::vector<Complex>& z, Complex rhs_total) const {
    std::vector<Complex> residual(rows_);
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < cols_; ++k) {
        const double c = c_[r * cols_ + k];
        if (c != 0.0) sum += c * z[k];
      }
      if (r == rows_ - 1) sum -= rhs_total;
      residual[r] = sum;
      worst = std::max(worst, std::abs(sum));
    }
    std::vector<Complex> w(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      Complex sum = 0.0;
      for (std::size_t s = 0; s < rows_; ++s) sum += pinv_[r * rows_ + s] * residual[s];
      w[r] = sum;
    }
    for (std::size_t k = 0; k < cols_; ++k) {
      Complex sum = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double c = c_[r * cols_ + k];
        if (c != 0.0) sum += c * w[r];
      }
      z[k] -= sum;
    }
    return worst;
  }

  double violation(const std::vector<Complex>& z, Complex rhs_total) const {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < cols_; ++k) sum += c_[r * cols_ + k] * z[k];
      if (r == rows_ - 1) sum -= rhs_total;
      worst = std::max(worst, std::abs(sum));
    }
    return worst;
  }

 private:
  double& at(std::size_t r, std::size_t k) { return c_[r * cols_ + k]; }

  std::size_t na_;
  std::size_t nb_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> c_;
  std::vector<double> pinv_;
};

// Lifted iterate: F_(a,b) (a-major), then P_a, then Q_b.
using Lifted = std::vector<ComplexMatrix>;

struct IntervalProblem {
  const Povm& a;
  const Povm& b;
  double radius_a;
  double radius_b;
};

Lifted& operator+=(Lifted& lhs, const Lifted& rhs) {
  for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] += rhs[k];
  return lhs;
}

Lifted difference(const Lifted& lhs, const Lifted& rhs) {
  Lifted out = lhs;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= rhs[k];
  return out;
}

class DykstraEngine {
 public:
  explicit DykstraEngine(const IntervalProblem& problem)
      : problem_(problem),
        na_(problem.a.size()),
        nb_(problem.b.size()),
        dim_(problem.a.dim()),
        affine_(na_, nb_) {}

  // K1: PSD cone on F, operator intervals around A and B on P and Q.
  Lifted project_cone(const Lifted& z) const {
    Lifted out;
    out.reserve(z.size());
    for (std::size_t k = 0; k < na_ * nb_; ++k) out.push_back(project_psd(hermitian_part(z[k])));
    for (std::size_t a = 0; a < na_; ++a) {
      out.push_back(clamp_around(z[na_ * nb_ + a], problem_.a.element(a), problem_.radius_a));
    }
    for (std::size_t b = 0; b < nb_; ++b) {
      out.push_back(clamp_around(z[na_ * nb_ + na_ + b], problem_.b.element(b), problem_.radius_b));
    }
    return out;
  }

  // K2: marginal and completeness constraints, entry by entry.
  Lifted project_affine(const Lifted& z) const {
    Lifted out = z;
    std::vector<Complex> scalars(affine_.cols());
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        for (std::size_t k = 0; k < scalars.size(); ++k) scalars[k] = z[k](i, j);
        affine_.project(scalars, i == j ? 1.0 : 0.0);
        for (std::size_t k = 0; k < scalars.size(); ++k) out[k](i, j) = scalars[k];
      }
    }
    for (ComplexMatrix& m : out) m = hermitian_part(m);
    return out;
  }

  double affine_violation(const Lifted& z) const {
    double worst = 0.0;
    std::vector<Complex> scalars(affine_.cols());
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        for (std::size_t k = 0; k < scalars.size(); ++k) scalars[k] = z[k](i, j);
        worst = std::max(worst, affine_.violation(scalars, i == j ? 1.0 : 0.0));
      }
    }
    return worst;
  }

  Lifted lift(const std::vector<ComplexMatrix>& joint) const {
    Lifted z = joint;
    for (std::size_t a = 0; a < na_; ++a) {
      ComplexMatrix sum(dim_);
      for (std::size_t b = 0; b < nb_; ++b) sum += joint[a * nb_ + b];
      z.push_back(std::move(sum));
    }
    for (std::size_t b = 0; b < nb_; ++b) {
      ComplexMatrix sum(dim_);
      for (std::size_t a = 0; a < na_; ++a) sum += joint[a * nb_ + b];
      z.push_back(std::move(sum));
    }
    return z;
  }

  std::vector<ComplexMatrix> joint_part(const Lifted& z) const {
    return {z.begin(), z.begin() + static_cast<std::ptrdiff_t>(na_ * nb_)};
  }

  struct Outcome {
    Lifted iterate;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool accepted = false;
  };

  // Runs Dykstra from `start` until `accept` approves the current cone
  // iterate, the residual stagnates, or the budget runs out. `accept` is
  // consulted every `check_every` iterations once the residual is below
  // `check_below`.
  Outcome run(const Lifted& start, const FeasibilityOptions& options, double check_below,
              std::size_t check_every, const std::function<bool(const Lifted&, double)>& accept) const {
    Outcome out;
    Lifted x = project_cone(start);
    Lifted p(x.size(), ComplexMatrix(dim_));
    Lifted q(x.size(), ComplexMatrix(dim_));
    double best = affine_violation(x);
    std::size_t best_at = 0;
    out.residual = best;
    if (best <= check_below && accept(x, best)) {
      out.iterate = std::move(x);
      out.accepted = true;
      return out;
    }
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
      Lifted shifted = x;
      shifted += p;
      Lifted y = project_affine(shifted);
      p = difference(shifted, y);
      shifted = y;
      shifted += q;
      x = project_cone(shifted);
      q = difference(shifted, x);

      const double residual = affine_violation(x);
      out.residual = residual;
      out.iterations = it;
      if (residual < best - options.stagnation_improvement) {
        best = residual;
        best_at = it;
      }
      if (residual <= check_below && (it % check_every == 0 || residual < options.tol) &&
          accept(x, residual)) {
        out.accepted = true;
        break;
      }
      if (it - best_at >= options.stagnation_window) break;
    }
    out.iterate = std::move(x);
    return out;
  }

 private:
  static ComplexMatrix clamp_around(const ComplexMatrix& z, const ComplexMatrix& center, double radius) {
    if (radius <= 0.0) return center;
    return center + project_spectrum_interval(hermitian_part(z - center), -radius, radius);
  }

  const IntervalProblem& problem_;
  std::size_t na_;
  std::size_t nb_;
  std::size_t dim_;
  AffineProjector affine_;
};

// Rescales a PSD family so that it sums to the identity exactly:
// F_k -> S^{-1/2} F_k S^{-1/2}. Returns nullopt if S is singular.
std::optional<Povm> renormalize(const std::vector<ComplexMatrix>& family,
                                const std::vector<std::string>& labels) {
  const std::size_t dim = family.front().dim();
  ComplexMatrix total(dim);
  for (const ComplexMatrix& f : family) total += f;
  const HermitianEigen eig = eigh(total);
  if (!(eig.values.front() > 1e-12)) return std::nullopt;
  std::vector<double> inv_sqrt(dim);
  for (std::size_t i = 0; i < dim; ++i) inv_sqrt[i] = 1.0 / std::sqrt(eig.values[i]);
  const ComplexMatrix s = reassemble(eig, inv_sqrt);
  std::vector<ComplexMatrix> elements;
  elements.reserve(family.size());
  for (const ComplexMatrix& f : family) elements.push_back(hermitian_part(s * project_psd(f) * s));
  return Povm(labels, std::move(elements));
}

struct Measured {
  Povm witness;
  double x;
  double y;
};

Measured measure(Povm witness, const Povm& a, const Povm& b, const CoordinateMaps& maps) {
  const double x = distance_inf(a, marginalize(witness, maps.to_a)).value;
  const double y = distance_inf(b, marginalize(witness, maps.to_b)).value;
  return {std::move(witness), x, y};
}

void require_compatible(const Povm& a, const Povm& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()) + ")");
  }
}

// Symmetrized products (A_a B_b + B_b A_a)/2, clipped to PSD and
// renormalized; exact when A and B commute.
std::vector<ComplexMatrix> symmetric_product_start(const Povm& a, const Povm& b) {
  std::vector<ComplexMatrix> family;
  for (const ComplexMatrix& x : a.elements()) {
    for (const ComplexMatrix& y : b.elements()) family.push_back(project_psd(hermitian_part(x * y)));
  }
  std::vector<std::string> labels(family.size(), "");
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = std::to_string(k);
  if (auto povm = renormalize(family, labels)) return povm->elements();
  return family;
}

}  // namespace

std::string status_name(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::Feasible: return "feasible";
    case FeasibilityStatus::Infeasible: return "infeasible";
    case FeasibilityStatus::Undecided: return "undecided";
  }
  return "unknown";
}

Povm sequential_joint(const Povm& first, const Povm& second, bool first_is_a) {
  require_compatible(first, second, "sequential_joint");
  const Povm& a = first_is_a ? first : second;
  const Povm& b = first_is_a ? second : first;
  std::vector<ComplexMatrix> roots;
  for (const ComplexMatrix& e : first.elements()) {
    roots.push_back(apply_spectral(e, [](double v) { return std::sqrt(std::max(v, 0.0)); }));
  }
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  std::vector<ComplexMatrix> elements;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const ComplexMatrix& root = first_is_a ? roots[i] : roots[j];
      const ComplexMatrix& inner = first_is_a ? b.element(j) : a.element(i);
      elements.push_back(hermitian_part(root * inner * root));
    }
  }
  return Povm(maps.product, std::move(elements));
}

FeasibilityResult check_joint_measurability(const Povm& a, const Povm& b,
                                            const FeasibilityOptions& options) {
  require_compatible(a, b, "check_joint_measurability");
  FeasibilityResult result;

  const TradeoffReport screen = check_corollary_joint(a, b);
  if (!screen.satisfied) {
    result.status = FeasibilityStatus::Infeasible;
    result.certificate_note =
        "necessary condition sqrt(V(A)V(B)) >= max||[A_a,B_b]||/2 violated: slack=" +
        std::to_string(screen.slack);
    return result;
  }

  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  const IntervalProblem problem{a, b, 0.0, 0.0};
  const DykstraEngine engine(problem);

  std::optional<Povm> witness;
  const auto accept = [&](const Lifted& z, double) {
    auto candidate = renormalize(engine.joint_part(z), maps.product);
    if (!candidate) return false;
    if (!validate_povm(*candidate, kWitnessValidationTolerance, kWitnessValidationTolerance).ok()) {
      return false;
    }
    const Measured m = measure(std::move(*candidate), a, b, maps);
    if (m.x > kWitnessMarginalTolerance || m.y > kWitnessMarginalTolerance) return false;
    witness = m.witness;
    return true;
  };

  const Lifted start = engine.lift(symmetric_product_start(a, b));
  // Every accepted witness is verified directly, so candidates are also
  // tried periodically once the residual is at the witness tolerance.
  const auto run = engine.run(start, options, std::max(options.tol, kWitnessMarginalTolerance),
                              kFrontierCheckEvery, accept);
  result.residual = run.residual;
  result.iterations = run.iterations;
  if (run.accepted) {
    result.status = FeasibilityStatus::Feasible;
    result.witness = std::move(witness);
    result.certificate_note = "joint observable found; marginal deviations within " +
                              std::to_string(kWitnessMarginalTolerance);
  } else {
    result.status = FeasibilityStatus::Undecided;
    result.certificate_note = "no witness within the iteration budget; the commutator screen is satisfied and "
                              "does not decide the question";
  }
  return result;
}

double frontier_x_max(const Povm& a, const Povm& b) {
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  return distance_inf(a, marginalize(sequential_joint(b, a, false), maps.to_a)).value;
}

FrontierPoint frontier_point(const Povm& a, const Povm& b, double x_target,
                             const FeasibilityOptions& options) {
  require_compatible(a, b, "frontier_point");
  if (!(x_target >= 0.0)) throw InvalidInput("frontier_point: x_target must be nonnegative");
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());

  // Closed-form candidates: measure A first (X = 0), measure B first (Y = 0),
  // and the symmetrized product.
  std::vector<Measured> seeds;
  seeds.push_back(measure(sequential_joint(a, b, true), a, b, maps));
  seeds.push_back(measure(sequential_joint(b, a, false), a, b, maps));
  seeds.push_back(measure(Povm(maps.product, symmetric_product_start(a, b)), a, b, maps));

  std::optional<Measured> best;
  for (Measured& s : seeds) {
    if (s.x <= x_target + kWitnessMarginalTolerance && (!best || s.y < best->y)) best = s;
  }
  if (!best) {
    throw UndecidedError("frontier_point: no joint observable found with X <= " +
                         std::to_string(x_target));
  }

  double lo = 0.0;
  double hi = best->y;
  while (hi - lo > options.bisection_resolution) {
    const double mid = 0.5 * (lo + hi);
    const IntervalProblem problem{a, b, x_target, mid};
    const DykstraEngine engine(problem);
    std::optional<Measured> found;
    const auto accept = [&](const Lifted& z, double) {
      auto candidate = renormalize(engine.joint_part(z), maps.product);
      if (!candidate) return false;
      Measured m = measure(std::move(*candidate), a, b, maps);
      if (m.x > x_target + kWitnessMarginalTolerance || m.y > mid + kWitnessMarginalTolerance) {
        return false;
      }
      found = std::move(m);
      return true;
    };
    engine.run(engine.lift(best->witness.elements()), options, kFrontierCheckResidual,
               kFrontierCheckEvery, accept);
    if (found) {
      if (found->y < best->y) best = std::move(found);
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return FrontierPoint{x_target, best->x, best->y, std::move(best->witness)};
}

std::vector<FrontierPoint> frontier_sweep(const Povm& a, const Povm& b, std::size_t grid_size,
                                          const FeasibilityOptions& options,
                                          std::optional<double> x_max) {
  if (grid_size < 2) throw InvalidInput("frontier_sweep: grid_size must be >= 2");
  const double upper = x_max.value_or(frontier_x_max(a, b));
  std::vector<double> targets(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    targets[i] = upper * static_cast<double>(i) / static_cast<double>(grid_size - 1);
  }

  std::vector<std::optional<FrontierPoint>> points(grid_size);
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, grid_size));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid_size; ++i) points[i] = frontier_point(a, b, targets[i], options);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < grid_size; i += workers) {
          points[i] = frontier_point(a, b, targets[i], options);
        }
      }));
    }
    for (auto& job : jobs) job.get();
  }

  // A witness for a smaller target is admissible for every larger one.
  std::vector<FrontierPoint> out;
  out.reserve(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    FrontierPoint p = std::move(*points[i]);
    if (!out.empty() && out.back().y_achieved < p.y_achieved) {
      const FrontierPoint& prev = out.back();
      p = FrontierPoint{targets[i], prev.x_achieved, prev.y_achieved, prev.witness};
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace jointmeas
