#ifndef CONCBOUND_DIST_IO_HPP
#define CONCBOUND_DIST_IO_HPP

// JSON ingestion for distribution specs and scenario files, plus JSON/CSV
// serialization of results. Parsing is strict: unknown keys are errors.
//
// Accepted distribution spec forms:
//   {"atoms": [[x, m], ...]}
//   {"lattice": {"offset": a, "step": h, "weights": [...]}}
//   {"family": "name", "params": {...}}
//   {"mixture": {"p": p, "U": <spec>, "V": <spec>}}

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "concbound/bounds.hpp"
#include "concbound/concentration.hpp"
#include "concbound/measure.hpp"

namespace concbound {

using ParsedDistribution = std::variant<DiscreteDist, LatticeDist, MixtureSpec>;

ParsedDistribution parse_distribution(const std::string& json_text);

// Any parsed entry viewed as a plain measure (mixtures are mixed, lattices
// expanded to their sparse form).
DiscreteDist as_discrete(const ParsedDistribution& dist);

struct RunEntry {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::string output_path;
};

struct ScenarioFile {
    std::map<std::string, ParsedDistribution> distributions;
    std::vector<RunEntry> runs;
};

// Parses and validates: every name referenced by a run resolves, and run
// parameter maps type-check against the target subcommand.
ScenarioFile parse_scenario_file(const std::string& json_text);
ScenarioFile load_scenario_file(const std::string& path);

// Floats print with 17 significant digits so values round-trip exactly.
std::string format_double(double v);

std::string qresult_to_json(const QResult& r);
std::string report_to_json(const BoundReport& r);

// CSV: header row mandatory; params flatten into one column per key in
// sorted order.
std::string report_csv_header(const BoundReport& r);
std::string report_csv_row(const BoundReport& r);

}  // namespace concbound

#endif  // CONCBOUND_DIST_IO_HPP
