#pragma once

// File formats. A POVM file is a JSON document
//
//   {
//     "format_version": "1",
//     "dim": 2,
//     "outcomes": ["+", "-"],
//     "elements": {
//       "+": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]],
//       "-": [[0.5, 0], [-0.5, 0], [-0.5, 0], [0.5, 0]]
//     }
//   }
//
// with each element a row-major list of [re, im] pairs. State files use
// "matrix" in place of "outcomes"/"elements". Outcome-map files are plain
// text with one "source target" pair per line; blank lines and lines
// starting with '#' are ignored.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jointmeas/distance.hpp"
#include "jointmeas/feasibility.hpp"
#include "jointmeas/povm.hpp"
#include "jointmeas/tradeoff.hpp"

namespace jointmeas::io {

using OrderedJson = nlohmann::ordered_json;

/// Throws ParseError; `source` names the input in messages.
Povm parse_povm(const std::string& text, const std::string& source = "<input>");
std::string serialize_povm(const Povm& p);

State parse_state(const std::string& text, const std::string& source = "<input>");
std::string serialize_state(const State& s);

std::vector<std::pair<std::string, std::string>> parse_outcome_map(const std::string& text,
                                                                   const std::string& source = "<input>");
std::string serialize_outcome_map(const OutcomeMap& f);

/// Throws IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Povm load_povm(const std::string& path);
std::vector<std::pair<std::string, std::string>> load_outcome_map(const std::string& path);

/// Fixed 12-significant-digit rendering used in CSV output.
std::string format_number(double value);

OrderedJson to_json(const ValidationReport& report);
OrderedJson to_json(const DistanceValue& d, const std::string& metric);
OrderedJson to_json(const TradeoffReport& r);
OrderedJson to_json(const FeasibilityResult& r);

std::string curves_csv(const AdmissibleCurves& curves);
std::string frontier_csv(const std::vector<FrontierPoint>& points);

}  // namespace jointmeas::io
