#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "concbound/bounds.hpp"
#include "concbound/dist_io.hpp"
#include "concbound/families.hpp"

using namespace concbound;
using nlohmann::json;

namespace {

// Minimal structural validation against a draft-07 style schema: required
// keys must be present and primitive types must match.
void check_against_schema(const json& instance, const json& schema) {
    REQUIRE(schema.contains("required"));
    for (const auto& key : schema["required"]) {
        INFO("missing key: ", key.get<std::string>());
        REQUIRE(instance.contains(key.get<std::string>()));
    }
    if (!schema.contains("properties")) {
        return;
    }
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
        if (!instance.contains(it.key()) || !it.value().contains("type")) {
            continue;
        }
        const std::string type = it.value()["type"].get<std::string>();
        const json& v = instance[it.key()];
        INFO("key: ", it.key(), " expected type ", type);
        if (type == "number") {
            CHECK((v.is_number() || v.is_string()));  // "inf" serializes as a string
        } else if (type == "string") {
            CHECK(v.is_string());
        } else if (type == "boolean") {
            CHECK(v.is_boolean());
        } else if (type == "object") {
            CHECK(v.is_object());
        }
    }
}

json load_schema(const std::string& name) {
    std::ifstream in(std::string(CONCBOUND_SCHEMA_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

}  // namespace

TEST_CASE("atoms form parses") {
    const auto d = parse_distribution(R"({"atoms": [[-1.0, 0.5], [1.0, 0.5]]})");
    const DiscreteDist f = as_discrete(d);
    REQUIRE(f.size() == 2);
    CHECK(f.atoms()[0].pos == -1.0);
}

TEST_CASE("lattice form parses") {
    const auto d = parse_distribution(
        R"({"lattice": {"offset": -2.0, "step": 0.5, "weights": [0.25, 0.5, 0.25]}})");
    const auto* lat = std::get_if<LatticeDist>(&d);
    REQUIRE(lat != nullptr);
    CHECK(lat->offset() == -2.0);
    CHECK(lat->step() == 0.5);
}

TEST_CASE("family form parses") {
    const auto d = parse_distribution(R"({"family": "two_point", "params": {"a": 3.0}})");
    const DiscreteDist f = as_discrete(d);
    CHECK(f.atoms()[0].pos == -3.0);
    CHECK(f.atoms()[1].pos == 3.0);
}

TEST_CASE("mixture form parses") {
    const auto d = parse_distribution(
        R"({"mixture": {"p": 0.25, "U": {"family": "fair_coin"},
                        "V": {"atoms": [[2.0, 1.0]]}}})");
    const auto* mix = std::get_if<MixtureSpec>(&d);
    REQUIRE(mix != nullptr);
    CHECK(mix->p() == 0.25);
    CHECK(as_discrete(d).size() == 3);
}

TEST_CASE("unknown keys are rejected with the offending name") {
    try {
        parse_distribution(R"({"atoms": [[0.0, 1.0]], "extra": 1})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("extra") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_distribution(R"({"lattice": {"offset": 0, "step": 1,
                    "weights": [1.0], "pad": 0}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_distribution(R"({"family": "no_such_family"})"), ParseError);
    CHECK_THROWS_AS(parse_distribution(R"({"family": "two_point", "params": {"b": 1}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_distribution(R"({})"), ParseError);
    CHECK_THROWS_AS(parse_distribution("not json"), ParseError);
}

TEST_CASE("invalid atoms are diagnosed by slot") {
    try {
        parse_distribution(R"({"atoms": [[0.0, 1.0], [1.0, "x"]]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("atoms[1]") != std::string::npos);
    }
}

TEST_CASE("scenario file parses and validates runs") {
    const std::string text = R"({
      "distributions": {
        "coin": {"family": "fair_coin"},
        "mix": {"mixture": {"p": 0.1, "U": {"family": "fair_coin"},
                             "V": {"atoms": [[5.0, 1.0]]}}}
      },
      "runs": [
        {"subcommand": "q", "params": {"dist": "coin", "b": "1.0", "n": "4"},
         "output": "out.json"}
      ]
    })";
    const ScenarioFile f = parse_scenario_file(text);
    CHECK(f.distributions.size() == 2);
    REQUIRE(f.runs.size() == 1);
    CHECK(f.runs[0].subcommand == "q");
    CHECK(f.runs[0].output_path == "out.json");
}

TEST_CASE("scenario runs reject unresolved names and bad params") {
    CHECK_THROWS_AS(parse_scenario_file(R"({
      "distributions": {},
      "runs": [{"subcommand": "q", "params": {"dist": "ghost"}}]
    })"),
                    ParseError);
    CHECK_THROWS_AS(parse_scenario_file(R"({
      "distributions": {"coin": {"family": "fair_coin"}},
      "runs": [{"subcommand": "q", "params": {"dist": "coin", "bogus": "1"}}]
    })"),
                    ParseError);
    CHECK_THROWS_AS(parse_scenario_file(R"({
      "distributions": {},
      "runs": [{"subcommand": "launch", "params": {}}]
    })"),
                    ParseError);
}

TEST_CASE("doubles print with 17 significant digits") {
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("qresult JSON matches its schema") {
    QResult r;
    r.value = 0.375;
    r.certified_error = 0.0;
    r.argmax_x = 2.0;
    const json instance = json::parse(qresult_to_json(r));
    check_against_schema(instance, load_schema("qresult.schema.json"));
    CHECK(instance["value"] == 0.375);
}

TEST_CASE("bound report JSON matches its schema and CSV stays aligned") {
    const MixtureSpec spec(0.0, fair_coin(), DiscreteDist::delta(0.0));
    const BoundReport r = cor1_rhs(spec, DiscreteDist::delta(0.0), 16, 1.0);

    const json instance = json::parse(report_to_json(r));
    check_against_schema(instance, load_schema("bound_report.schema.json"));
    CHECK(instance["bound_id"] == "cor1");

    const std::string header = report_csv_header(r);
    const std::string row = report_csv_row(r);
    const auto count = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(count(header) == count(row));
    CHECK(header.rfind("bound_id,lhs,rhs_unit,implied_c,hypothesis_ok", 0) == 0);
    CHECK(row.rfind("cor1,", 0) == 0);
}

TEST_CASE("csv row is bit-stable across repeated serialization") {
    const MixtureSpec spec(0.0, fair_coin(), DiscreteDist::delta(0.0));
    const BoundReport a = cor1_rhs(spec, DiscreteDist::delta(0.0), 64, 1.0);
    const BoundReport b = cor1_rhs(spec, DiscreteDist::delta(0.0), 64, 1.0);
    CHECK(report_csv_row(a) == report_csv_row(b));
    CHECK(report_to_json(a) == report_to_json(b));
}
