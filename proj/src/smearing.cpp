#include "jointmeas/smearing.hpp"

#include <algorithm>
#include <map>

#include "jointmeas/errors.hpp"

namespace jointmeas {

OutcomeMap::OutcomeMap(std::vector<std::string> source, std::vector<std::string> target,
                       std::vector<std::size_t> assignment)
    : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment)) {
  if (source_.empty() || target_.empty()) {
    throw InvalidInput("OutcomeMap: source and target must be non-empty");
  }
  if (assignment_.size() != source_.size()) {
    throw InvalidInput("OutcomeMap: every source outcome needs exactly one image");
  }
  for (std::size_t idx : assignment_) {
    if (idx >= target_.size()) throw InvalidInput("OutcomeMap: image outside the target set");
  }
}

OutcomeMap OutcomeMap::from_pairs(std::vector<std::string> source, std::vector<std::string> target,
                                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::size_t> target_index;
  for (std::size_t k = 0; k < target.size(); ++k) target_index.emplace(target[k], k);
  std::map<std::string, std::size_t> image;
  for (const auto& [from, to] : pairs) {
    const auto t = target_index.find(to);
    if (t == target_index.end()) {
      throw InvalidInput("OutcomeMap: image '" + to + "' of '" + from + "' is not a target outcome");
    }
    if (!image.emplace(from, t->second).second) {
      throw InvalidInput("OutcomeMap: source outcome '" + from + "' is assigned twice");
    }
  }
  std::vector<std::size_t> assignment;
  assignment.reserve(source.size());
  for (const std::string& s : source) {
    const auto it = image.find(s);
    if (it == image.end()) throw InvalidInput("OutcomeMap: source outcome '" + s + "' is not mapped");
    assignment.push_back(it->second);
  }
  if (image.size() != source.size()) {
    throw InvalidInput("OutcomeMap: map mentions outcomes that are not in the source set");
  }
  return OutcomeMap(std::move(source), std::move(target), std::move(assignment));
}

OutcomeMap OutcomeMap::identity(const std::vector<std::string>& labels) {
  std::vector<std::size_t> assignment(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) assignment[k] = k;
  return OutcomeMap(labels, labels, std::move(assignment));
}

OutcomeMap OutcomeMap::constant(std::vector<std::string> source, std::string image) {
  std::vector<std::size_t> assignment(source.size(), 0);
  return OutcomeMap(std::move(source), {std::move(image)}, std::move(assignment));
}

OutcomeMap OutcomeMap::after(const OutcomeMap& first) const {
  if (first.target() != source_) {
    throw InvalidInput("OutcomeMap::after: target of the first map must equal this map's source");
  }
  std::vector<std::size_t> assignment(first.source().size());
  for (std::size_t k = 0; k < assignment.size(); ++k) assignment[k] = assignment_[first(k)];
  return OutcomeMap(first.source(), target_, std::move(assignment));
}

Povm marginalize(const Povm& f_povm, const OutcomeMap& f) {
  if (f.source() != f_povm.outcomes()) {
    throw InvalidInput("marginalize: map source does not match the POVM's outcomes");
  }
  std::vector<ComplexMatrix> elements(f.target().size(), ComplexMatrix(f_povm.dim()));
  for (std::size_t x = 0; x < f_povm.size(); ++x) elements[f(x)] += f_povm.element(x);
  return Povm(f.target(), std::move(elements));
}

std::string product_label(const std::string& a, const std::string& b) {
  return a + kProductSeparator + b;
}

CoordinateMaps coordinate_maps(const std::vector<std::string>& outcomes_a,
                               const std::vector<std::string>& outcomes_b) {
  if (outcomes_a.empty() || outcomes_b.empty()) {
    throw InvalidInput("coordinate_maps: outcome lists must be non-empty");
  }
  const auto has_separator = [](const std::string& s) {
    return s.find(kProductSeparator) != std::string::npos;
  };
  if (std::any_of(outcomes_a.begin(), outcomes_a.end(), has_separator) ||
      std::any_of(outcomes_b.begin(), outcomes_b.end(), has_separator)) {
    throw InvalidInput(std::string("coordinate_maps: labels may not contain the reserved separator '") +
                       kProductSeparator + "'");
  }
  std::vector<std::string> product;
  std::vector<std::size_t> to_a;
  std::vector<std::size_t> to_b;
  for (std::size_t i = 0; i < outcomes_a.size(); ++i) {
    for (std::size_t j = 0; j < outcomes_b.size(); ++j) {
      product.push_back(product_label(outcomes_a[i], outcomes_b[j]));
      to_a.push_back(i);
      to_b.push_back(j);
    }
  }
  return CoordinateMaps{product, OutcomeMap(product, outcomes_a, std::move(to_a)),
                        OutcomeMap(product, outcomes_b, std::move(to_b))};
}

ErrorOperators error_operators(const Povm& target, const Povm& joint, const OutcomeMap& f) {
  if (joint.dim() != target.dim()) throw InvalidInput("error_operators: dimension mismatch");
  if (f.target() != target.outcomes()) {
    throw InvalidInput("error_operators: map target does not match the observable's outcomes");
  }
  const Povm smeared = marginalize(joint, f);
  ErrorOperators out;
  out.outcomes = target.outcomes();
  for (std::size_t a = 0; a < target.size(); ++a) {
    out.errors.push_back(smeared.element(a) - target.element(a));
    out.norms.push_back(op_norm(out.errors.back()));
    out.max_norm = std::max(out.max_norm, out.norms.back());
  }
  return out;
}

}  // namespace jointmeas
