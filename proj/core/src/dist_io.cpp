#include "concbound/dist_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "concbound/families.hpp"

namespace concbound {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (known.count(it.key()) == 0) {
            throw ParseError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw ParseError(where + " must be a number");
    }
    return v.get<double>();
}

DiscreteDist parse_atoms(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) {
        throw ParseError(where + ".atoms must be a nonempty array");
    }
    std::vector<Atom> atoms;
    atoms.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& entry = arr[i];
        std::ostringstream slot;
        slot << where << ".atoms[" << i << "]";
        if (!entry.is_array() || entry.size() != 2) {
            throw ParseError(slot.str() + " must be a [position, mass] pair");
        }
        atoms.push_back({as_number(entry[0], slot.str() + ".position"),
                         as_number(entry[1], slot.str() + ".mass")});
    }
    try {
        return DiscreteDist::from_atoms(std::move(atoms));
    } catch (const Error& e) {
        throw ParseError(where + ".atoms: " + e.what());
    }
}

LatticeDist parse_lattice(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + ".lattice must be an object");
    }
    reject_unknown_keys(obj, where + ".lattice", {"offset", "step", "weights"});
    if (!obj.contains("offset") || !obj.contains("step") || !obj.contains("weights")) {
        throw ParseError(where + ".lattice requires offset, step and weights");
    }
    const json& warr = obj["weights"];
    if (!warr.is_array() || warr.empty()) {
        throw ParseError(where + ".lattice.weights must be a nonempty array");
    }
    std::vector<double> weights;
    weights.reserve(warr.size());
    for (std::size_t i = 0; i < warr.size(); ++i) {
        std::ostringstream slot;
        slot << where << ".lattice.weights[" << i << "]";
        weights.push_back(as_number(warr[i], slot.str()));
    }
    try {
        return LatticeDist(as_number(obj["offset"], where + ".lattice.offset"),
                           as_number(obj["step"], where + ".lattice.step"),
                           std::move(weights));
    } catch (const Error& e) {
        throw ParseError(where + ".lattice: " + e.what());
    }
}

ParsedDistribution parse_value(const json& obj, const std::string& where);

MixtureSpec parse_mixture(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + ".mixture must be an object");
    }
    reject_unknown_keys(obj, where + ".mixture", {"p", "U", "V"});
    if (!obj.contains("p") || !obj.contains("U") || !obj.contains("V")) {
        throw ParseError(where + ".mixture requires p, U and V");
    }
    const auto u = parse_value(obj["U"], where + ".mixture.U");
    const auto v = parse_value(obj["V"], where + ".mixture.V");
    try {
        return MixtureSpec(as_number(obj["p"], where + ".mixture.p"), as_discrete(u),
                           as_discrete(v));
    } catch (const Error& e) {
        throw ParseError(where + ".mixture: " + e.what());
    }
}

ParsedDistribution parse_value(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + " must be a JSON object");
    }
    if (obj.contains("atoms")) {
        reject_unknown_keys(obj, where, {"atoms"});
        return parse_atoms(obj["atoms"], where);
    }
    if (obj.contains("lattice")) {
        reject_unknown_keys(obj, where, {"lattice"});
        return parse_lattice(obj["lattice"], where);
    }
    if (obj.contains("family")) {
        reject_unknown_keys(obj, where, {"family", "params"});
        if (!obj["family"].is_string()) {
            throw ParseError(where + ".family must be a string");
        }
        std::map<std::string, double> params;
        if (obj.contains("params")) {
            if (!obj["params"].is_object()) {
                throw ParseError(where + ".params must be an object");
            }
            for (auto it = obj["params"].begin(); it != obj["params"].end(); ++it) {
                params[it.key()] = as_number(it.value(), where + ".params." + it.key());
            }
        }
        try {
            return make_family(obj["family"].get<std::string>(), params);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (obj.contains("mixture")) {
        reject_unknown_keys(obj, where, {"mixture"});
        return parse_mixture(obj["mixture"], where);
    }
    throw ParseError(where + " needs one of: atoms, lattice, family, mixture");
}

json parse_text(const std::string& text, const std::string& what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw ParseError(what + " is not valid JSON");
    }
    return parsed;
}

// Parameter names each subcommand accepts in a scenario run entry.
const std::map<std::string, std::set<std::string>>& run_param_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"q", {"dist", "b", "n", "prune_eps"}},
        {"bound", {"bound_id", "dist", "H", "G", "n", "b", "r", "s", "alpha", "delta",
                   "prune_eps"}},
        {"sweep", {"bound_id", "dist", "H", "G", "n", "b", "r", "s", "alpha", "delta",
                   "prune_eps"}},
        {"convpow", {"dist", "n", "prune_eps"}},
    };
    return schema;
}

}  // namespace

ParsedDistribution parse_distribution(const std::string& json_text) {
    return parse_value(parse_text(json_text, "distribution spec"), "distribution");
}

DiscreteDist as_discrete(const ParsedDistribution& dist) {
    if (const auto* d = std::get_if<DiscreteDist>(&dist)) {
        return *d;
    }
    if (const auto* l = std::get_if<LatticeDist>(&dist)) {
        return l->to_discrete();
    }
    return std::get<MixtureSpec>(dist).mixed();
}

ScenarioFile parse_scenario_file(const std::string& json_text) {
    const json root = parse_text(json_text, "scenario file");
    if (!root.is_object()) {
        throw ParseError("scenario file must be a JSON object");
    }
    reject_unknown_keys(root, "scenario file", {"distributions", "runs"});
    ScenarioFile out;
    if (root.contains("distributions")) {
        if (!root["distributions"].is_object()) {
            throw ParseError("'distributions' must be an object");
        }
        for (auto it = root["distributions"].begin(); it != root["distributions"].end();
             ++it) {
            out.distributions.emplace(it.key(),
                                      parse_value(it.value(), "distributions." + it.key()));
        }
    }
    if (root.contains("runs")) {
        if (!root["runs"].is_array()) {
            throw ParseError("'runs' must be an array");
        }
        for (std::size_t i = 0; i < root["runs"].size(); ++i) {
            const json& entry = root["runs"][i];
            std::ostringstream where;
            where << "runs[" << i << "]";
            if (!entry.is_object()) {
                throw ParseError(where.str() + " must be an object");
            }
            reject_unknown_keys(entry, where.str(), {"subcommand", "params", "output"});
            if (!entry.contains("subcommand") || !entry["subcommand"].is_string()) {
                throw ParseError(where.str() + " requires a string 'subcommand'");
            }
            RunEntry run;
            run.subcommand = entry["subcommand"].get<std::string>();
            const auto& schema = run_param_schema();
            auto schema_it = schema.find(run.subcommand);
            if (schema_it == schema.end()) {
                throw ParseError(where.str() + ": unknown subcommand '" + run.subcommand +
                                 "'");
            }
            if (entry.contains("params")) {
                if (!entry["params"].is_object()) {
                    throw ParseError(where.str() + ".params must be an object");
                }
                for (auto it = entry["params"].begin(); it != entry["params"].end(); ++it) {
                    if (schema_it->second.count(it.key()) == 0) {
                        throw ParseError(where.str() + ".params: subcommand '" +
                                         run.subcommand + "' does not accept '" +
                                         it.key() + "'");
                    }
                    run.params[it.key()] = it.value().is_string()
                                               ? it.value().get<std::string>()
                                               : it.value().dump();
                }
            }
            if (entry.contains("output")) {
                if (!entry["output"].is_string()) {
                    throw ParseError(where.str() + ".output must be a string");
                }
                run.output_path = entry["output"].get<std::string>();
            }
            // Referenced distribution names must resolve.
            auto dist_it = run.params.find("dist");
            if (dist_it != run.params.end() && dist_it->second.find('{') != 0 &&
                out.distributions.count(dist_it->second) == 0) {
                throw ParseError(where.str() + ": distribution '" + dist_it->second +
                                 "' is not defined");
            }
            for (const char* aux : {"H", "G"}) {
                auto aux_it = run.params.find(aux);
                if (aux_it != run.params.end() &&
                    out.distributions.count(aux_it->second) == 0) {
                    throw ParseError(where.str() + ": distribution '" + aux_it->second +
                                     "' is not defined");
                }
            }
            out.runs.push_back(std::move(run));
        }
    }
    return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_file(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string qresult_to_json(const QResult& r) {
    json j;
    j["value"] = r.value;
    j["certified_error"] = r.certified_error;
    j["argmax_x"] = r.argmax_x;
    return j.dump();
}

std::string report_to_json(const BoundReport& r) {
    json j;
    j["bound_id"] = std::string(to_string(r.bound_id));
    j["lhs"] = r.lhs;
    j["rhs_unit"] = r.rhs_unit;
    j["implied_c"] = std::isfinite(r.implied_c) ? json(r.implied_c) : json("inf");
    j["hypothesis_ok"] = r.hypothesis_ok;
    json params = json::object();
    for (const auto& [key, value] : r.params) {
        params[key] = value;
    }
    j["params"] = params;
    j["budgets"] = {{"pruned_mass", r.budgets.pruned_mass},
                    {"fft_residual", r.budgets.fft_residual}};
    return j.dump();
}

std::string report_csv_header(const BoundReport& r) {
    std::ostringstream out;
    out << "bound_id,lhs,rhs_unit,implied_c,hypothesis_ok";
    for (const auto& [key, value] : r.params) {
        out << ',' << key;
    }
    return out.str();
}

std::string report_csv_row(const BoundReport& r) {
    std::ostringstream out;
    out << to_string(r.bound_id) << ',' << format_double(r.lhs) << ','
        << format_double(r.rhs_unit) << ',' << format_double(r.implied_c) << ','
        << (r.hypothesis_ok ? 1 : 0);
    for (const auto& [key, value] : r.params) {
        out << ',' << format_double(value);
    }
    return out.str();
}

}  // namespace concbound
