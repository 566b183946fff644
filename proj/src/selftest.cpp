#include "jointmeas/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "jointmeas/distance.hpp"
#include "jointmeas/feasibility.hpp"
#include "jointmeas/tradeoff.hpp"

namespace jointmeas {

namespace {

std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::string> prefixed_labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

Povm relabel(const Povm& p, std::vector<std::string> labels) { return Povm(std::move(labels), p.elements()); }

// Convex combination w*p + (1-w)*q of two POVMs on the same outcome set.
Povm mix(const Povm& p, const Povm& q, double w) {
  std::vector<ComplexMatrix> elements;
  for (std::size_t k = 0; k < p.size(); ++k) elements.push_back(w * p.element(k) + (1.0 - w) * q.element(k));
  return Povm(p.outcomes(), std::move(elements));
}

Povm random_target(std::size_t dim, std::size_t n, const std::string& prefix, std::mt19937_64& rng) {
  const std::uint64_t seed = rng();
  switch (uniform_size(rng, 0, 2)) {
    case 0: return relabel(random_povm(dim, n, seed), prefixed_labels(prefix, n));
    case 1: return relabel(random_pvm(dim, n, seed), prefixed_labels(prefix, n));
    default: {
      const Povm pvm = random_pvm(dim, n, seed);
      std::vector<ComplexMatrix> flat(n, ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(n)));
      const Povm uniform(pvm.outcomes(), std::move(flat));
      const double w = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
      return relabel(mix(pvm, uniform, w), prefixed_labels(prefix, n));
    }
  }
}

// Runs `trial(index)` for every index, possibly on several threads, and
// merges the per-trial outcomes in index order.
struct TrialResult {
  bool violated = false;
  double margin = std::numeric_limits<double>::infinity();
  std::string failure;
};

SuiteOutcome run_trials(const std::string& name, std::size_t trials, std::size_t threads,
                        const std::function<TrialResult(std::size_t)>& trial) {
  std::vector<TrialResult> results(trials);
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, trials));
  if (workers == 1) {
    for (std::size_t i = 0; i < trials; ++i) results[i] = trial(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < trials; i += workers) results[i] = trial(i);
      }));
    }
    for (auto& job : jobs) job.get();
  }
  SuiteOutcome out;
  out.name = name;
  out.trials = trials;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    out.worst_margin = std::min(out.worst_margin, results[i].margin);
    if (results[i].violated) {
      if (out.violations == 0) out.first_failure = "trial " + std::to_string(i) + ": " + results[i].failure;
      ++out.violations;
    }
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) * 0xBF58476D1CE4E5B9ULL + 1;
}

TrialResult from_report(const TradeoffReport& r) {
  TrialResult t;
  t.margin = r.slack;
  t.violated = !r.satisfied;
  if (t.violated) {
    std::ostringstream os;
    os << inequality_id(r.inequality) << " lhs=" << r.lhs << " rhs=" << r.rhs << " slack=" << r.slack;
    t.failure = os.str();
  }
  return t;
}

void record(TrialResult& t, double margin, const std::string& what) {
  t.margin = std::min(t.margin, margin);
  if (margin < 0.0 && !t.violated) {
    t.violated = true;
    t.failure = what + " (margin " + std::to_string(margin) + ")";
  }
}

}  // namespace

OutcomeMap random_outcome_map(const std::vector<std::string>& source,
                              const std::vector<std::string>& target, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> assignment(source.size());
  for (std::size_t& a : assignment) a = uniform_size(rng, 0, target.size() - 1);
  return OutcomeMap(source, target, std::move(assignment));
}

RandomInstance random_instance(const InstanceShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t dim = uniform_size(rng, shape.min_dim, shape.max_dim);
  const std::size_t na = uniform_size(rng, 2, shape.max_target_outcomes);
  const std::size_t nb = uniform_size(rng, 2, shape.max_target_outcomes);
  Povm a = random_target(dim, na, "a", rng);
  Povm b = random_target(dim, nb, "b", rng);

  if (shape.joint_is_pvm) {
    const std::size_t nx = uniform_size(rng, 1, shape.max_joint_outcomes);
    Povm joint = relabel(random_pvm(dim, nx, rng()), prefixed_labels("x", nx));
    OutcomeMap to_a = random_outcome_map(joint.outcomes(), a.outcomes(), rng());
    OutcomeMap to_b = random_outcome_map(joint.outcomes(), b.outcomes(), rng());
    return {std::move(a), std::move(b), std::move(joint), std::move(to_a), std::move(to_b)};
  }

  // Half of the instances smooth the sequential measurement "A then B",
  // which reproduces A exactly, toward a random joint observable.
  if (na * nb <= shape.max_joint_outcomes && uniform_size(rng, 0, 1) == 0) {
    const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
    const bool a_first = uniform_size(rng, 0, 1) == 0;
    const Povm seq = a_first ? sequential_joint(a, b, true) : sequential_joint(b, a, false);
    const Povm noise = relabel(random_povm(dim, na * nb, rng()), maps.product);
    const double w = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    Povm joint = mix(noise, seq, w);
    return {std::move(a), std::move(b), std::move(joint), maps.to_a, maps.to_b};
  }

  const std::size_t nx = uniform_size(rng, 1, shape.max_joint_outcomes);
  Povm joint = relabel(random_povm(dim, nx, rng()), prefixed_labels("x", nx));
  OutcomeMap to_a = random_outcome_map(joint.outcomes(), a.outcomes(), rng());
  OutcomeMap to_b = random_outcome_map(joint.outcomes(), b.outcomes(), rng());
  return {std::move(a), std::move(b), std::move(joint), std::move(to_a), std::move(to_b)};
}

SuiteOutcome run_theorem1_suite(std::size_t trials, std::uint64_t seed, std::size_t threads) {
  const InstanceShape shape{2, 4, 4, 8, false};
  return run_trials("theorem1", trials, threads, [&](std::size_t i) {
    const RandomInstance inst = random_instance(shape, trial_seed(seed, i));
    return from_report(check_theorem1(inst.a, inst.b, inst.joint, inst.to_a, inst.to_b));
  });
}

SuiteOutcome run_theorem2_suite(std::size_t trials, std::uint64_t seed, std::size_t threads) {
  const InstanceShape shape{2, 3, 3, 8, false};
  return run_trials("theorem2", trials, threads, [&](std::size_t i) {
    const RandomInstance inst = random_instance(shape, trial_seed(seed, i));
    return from_report(check_theorem2(inst.a, inst.b, inst.joint, inst.to_a, inst.to_b));
  });
}

SuiteOutcome run_pvm_instrument_suite(std::size_t trials, std::uint64_t seed, std::size_t threads) {
  const InstanceShape shape{2, 4, 4, 8, true};
  return run_trials("cor_pvm_instrument", trials, threads, [&](std::size_t i) {
    const RandomInstance inst = random_instance(shape, trial_seed(seed, i));
    return from_report(check_corollary_pvm_instrument(inst.a, inst.b, inst.joint, inst.to_a, inst.to_b));
  });
}

SuiteOutcome run_duality_suite(std::size_t pairs, std::size_t states_per_pair, std::uint64_t seed,
                               std::size_t threads) {
  return run_trials("distance_duality", pairs, threads, [&](std::size_t i) {
    std::mt19937_64 rng(trial_seed(seed, i));
    const std::size_t dim = uniform_size(rng, 2, 4);
    const std::size_t n = uniform_size(rng, 2, 4);
    const Povm a = random_target(dim, n, "o", rng);
    const Povm a_prime = random_target(dim, n, "o", rng);
    const DistanceValue d_inf = distance_inf(a, a_prime);
    const DistanceValue d_l1 = distance_l1(a, a_prime);

    TrialResult t;
    const auto at_state = [&](const State& s) {
      const OutcomeDistribution p = outcome_distribution(a, s);
      const OutcomeDistribution q = outcome_distribution(a_prime, s);
      return std::pair{dist_inf(p.probabilities, q.probabilities), dist_l1(p.probabilities, q.probabilities)};
    };
    const auto [w_inf, ignored_inf] = at_state(*d_inf.witness_state);
    const auto [ignored_l1, w_l1] = at_state(*d_l1.witness_state);
    record(t, 1e-8 - std::abs(w_inf - d_inf.value), "d_inf witness does not attain D_inf");
    record(t, 1e-8 - std::abs(w_l1 - d_l1.value), "d_1 witness does not attain D_l1");
    record(t, d_l1.value - d_inf.value + 1e-12, "D_l1 < D_inf");
    for (std::size_t k = 0; k < states_per_pair; ++k) {
      const std::uint64_t s = rng();
      State state = (k % 2 == 0) ? random_state(dim, s) : [&] {
        std::mt19937_64 local(s);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Complex> ket(dim);
        for (Complex& z : ket) z = Complex(normal(local), normal(local));
        return State::pure(ket);
      }();
      const auto [s_inf, s_l1] = at_state(state);
      record(t, d_inf.value + 1e-9 - s_inf, "random state exceeds D_inf");
      record(t, d_l1.value + 1e-9 - s_l1, "random state exceeds D_l1");
    }
    return t;
  });
}

SuiteOutcome run_invariant_suite(std::size_t trials, std::uint64_t seed, std::size_t threads) {
  return run_trials("invariants", trials, threads, [&](std::size_t i) {
    std::mt19937_64 rng(trial_seed(seed, i));
    const std::size_t dim = uniform_size(rng, 2, 4);
    const std::size_t n = uniform_size(rng, 2, 4);
    const Povm a = random_target(dim, n, "o", rng);
    const Povm a2 = random_target(dim, n, "o", rng);
    const Povm a3 = random_target(dim, n, "o", rng);
    TrialResult t;

    const double v = intrinsic_uncertainty_inf(a);
    const double v1 = intrinsic_uncertainty_l1(a);
    record(t, v + 1e-12, "V < 0");
    record(t, 0.25 + 1e-12 - v, "V > 1/4");
    record(t, v1 + 1e-12, "V1 < 0");
    record(t, 0.25 + 1e-12 - v1, "V1 > 1/4");
    record(t, v1 - v + 1e-12, "V1 < V");
    record(t, ((v <= 1e-9) == is_pvm(a, 1e-9)) ? 1.0 : -1.0, "V = 0 disagrees with is_pvm");

    for (auto* metric : {&distance_inf, &distance_l1}) {
      const double d12 = (*metric)(a, a2).value;
      const double d21 = (*metric)(a2, a).value;
      const double d13 = (*metric)(a, a3).value;
      const double d23 = (*metric)(a2, a3).value;
      record(t, d12 == d21 ? 1.0 : -1.0, "distance not symmetric");
      record(t, 1e-12 - (*metric)(a, a).value, "D(A, A) != 0");
      record(t, d12 + d23 - d13 + 1e-9, "triangle inequality");
    }

    // Functoriality of coarse-graining: g(f(F)) = (g o f)(F).
    const std::size_t nx = uniform_size(rng, 1, 8);
    const std::size_t nm = uniform_size(rng, 1, 5);
    const Povm joint = relabel(random_povm(dim, nx, rng()), prefixed_labels("x", nx));
    const OutcomeMap f = random_outcome_map(joint.outcomes(), prefixed_labels("m", nm), rng());
    const OutcomeMap g = random_outcome_map(f.target(), a.outcomes(), rng());
    const Povm two_step = marginalize(marginalize(joint, f), g);
    const Povm one_step = marginalize(joint, g.after(f));
    double diff = 0.0;
    for (std::size_t k = 0; k < one_step.size(); ++k) {
      diff = std::max(diff, (two_step.element(k) - one_step.element(k)).max_abs());
    }
    record(t, 1e-14 - diff, "marginalization is not functorial");
    record(t, validate_povm(two_step).ok() ? 1.0 : -1.0, "marginal is not a valid POVM");

    // Error operators sum to zero and their largest norm is D_inf.
    const ErrorOperators eps = error_operators(a, joint, g.after(f));
    ComplexMatrix sum(dim);
    for (const ComplexMatrix& e : eps.errors) sum += e;
    record(t, 1e-10 - sum.max_abs(), "error operators do not sum to zero");
    record(t, 1e-12 - std::abs(eps.max_norm - distance_inf(a, one_step).value),
           "max error norm differs from D_inf");
    return t;
  });
}

std::vector<SuiteOutcome> run_selftest(const SelftestOptions& options) {
  const std::size_t n = options.trials;
  return {
      run_theorem1_suite(n, options.seed, options.threads),
      run_theorem2_suite(n, options.seed + 1, options.threads),
      run_pvm_instrument_suite(n, options.seed + 2, options.threads),
      run_duality_suite(std::max<std::size_t>(1, n / 10), 1000, options.seed + 3, options.threads),
      run_invariant_suite(n, options.seed + 4, options.threads),
  };
}

}  // namespace jointmeas
