// concbound: concentration functions of n-fold convolutions and the bound
// registry around them.
//
// Subcommands
//   q        Q(F^n, b) for a distribution spec, printed as JSON
//   bound    one bound evaluation as a CSV row (or JSON)
//   sweep    bound evaluations over a parameter grid, CSV with c_hat footer
//   convpow  convolution power of a distribution, summary or full dump
//   verify   named verification suites (identities | constants | counterexample | all)
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "concbound/bounds.hpp"
#include "concbound/concentration.hpp"
#include "concbound/convolution.hpp"
#include "concbound/dist_io.hpp"
#include "concbound/measure.hpp"
#include "concbound/verify.hpp"

namespace {

using namespace concbound;

struct CommonArgs {
    std::string spec_path;
    std::string dist;
    std::string h_name;
    std::string g_name;
    std::string out_path;
    std::string format = "csv";
    double prune_eps = 0.0;
    std::uint64_t seed = 0;
};

std::optional<ScenarioFile> load_spec(const CommonArgs& args) {
    if (args.spec_path.empty()) {
        return std::nullopt;
    }
    return load_scenario_file(args.spec_path);
}

// --dist accepts a name from the --spec file or an inline JSON object.
ParsedDistribution resolve_dist(const std::optional<ScenarioFile>& spec,
                                const std::string& token) {
    if (!token.empty() && token.front() == '{') {
        return parse_distribution(token);
    }
    if (!spec.has_value()) {
        throw ParseError("distribution '" + token + "' needs a --spec file to resolve");
    }
    auto it = spec->distributions.find(token);
    if (it == spec->distributions.end()) {
        throw ParseError("distribution '" + token + "' not found in spec file");
    }
    return it->second;
}

DiscreteDist resolve_discrete(const std::optional<ScenarioFile>& spec,
                              const std::string& token) {
    return as_discrete(resolve_dist(spec, token));
}

DiscreteDist resolve_optional(const std::optional<ScenarioFile>& spec,
                              const std::string& token) {
    if (token.empty()) {
        return DiscreteDist::delta(0.0);
    }
    return resolve_discrete(spec, token);
}

// Mixture view of a parsed entry: explicit mixtures pass through, plain
// centered distributions become the trivial p = 0 mixture.
MixtureSpec resolve_mixture(const std::optional<ScenarioFile>& spec,
                            const std::string& token) {
    ParsedDistribution parsed = resolve_dist(spec, token);
    if (const auto* mix = std::get_if<MixtureSpec>(&parsed)) {
        return *mix;
    }
    return MixtureSpec(0.0, as_discrete(parsed), DiscreteDist::delta(0.0));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw ParseError("cannot open output file: " + out_path);
    }
    out << text;
}

int cmd_q(const CommonArgs& args, long n, double b) {
    const auto spec = load_spec(args);
    const ParsedDistribution parsed = resolve_dist(spec, args.dist);
    QResult result;
    if (const auto* lat = std::get_if<LatticeDist>(&parsed)) {
        result = q_exact(conv_power(*lat, n, args.prune_eps), b);
    } else {
        const DiscreteDist f = as_discrete(parsed);
        // Lattice-aligned inputs go through the FFT path automatically.
        if (auto promoted = try_promote_to_lattice(f); promoted.has_value() && n > 1) {
            result = q_exact(conv_power(*promoted, n, args.prune_eps), b);
        } else {
            result = q_exact(conv_power(f, n, args.prune_eps), b);
        }
    }
    emit(qresult_to_json(result) + "\n", args.out_path);
    return 0;
}

struct BoundArgs {
    std::string bound_id;
    std::vector<long> n = {1};
    std::vector<double> b = {1.0};
    std::vector<double> alpha;
    std::vector<double> delta;
    std::vector<long> r;
    std::vector<long> s;
};

BoundReport evaluate_bound(const std::optional<ScenarioFile>& spec, const CommonArgs& args,
                           const std::string& bound_name, long n, double b, double alpha,
                           double delta, long r, long s) {
    const BoundId id = bound_id_from_string(bound_name);
    switch (id) {
        case BoundId::lemma1:
            return lemma1_rhs(resolve_discrete(spec, args.dist), n,
                              resolve_optional(spec, args.g_name), b);
        case BoundId::cor1:
            return cor1_rhs(resolve_mixture(spec, args.dist),
                            resolve_optional(spec, args.h_name), n, b);
        case BoundId::th1_simple:
            return th1_simple_rhs(resolve_mixture(spec, args.dist),
                                  resolve_optional(spec, args.h_name), n, r, b);
        case BoundId::th1_general:
            return th1_general_rhs(resolve_mixture(spec, args.dist),
                                   resolve_optional(spec, args.h_name), n, r, s, b);
        case BoundId::mult_1_7: {
            const MixtureSpec mix = resolve_mixture(spec, args.dist);
            return mult_rhs_1_7(mix.mixed(), mix, n, alpha, b);
        }
        case BoundId::cor2:
            return cor2_rhs(resolve_mixture(spec, args.dist), n, b, delta);
        case BoundId::esseen_1_11:
            return esseen_rhs_1_11(resolve_discrete(spec, args.dist), n, b);
        case BoundId::sharpened_1_13:
            return sharpened_rhs_1_13(resolve_discrete(spec, args.dist), n, b);
        case BoundId::cf_1_15:
            return cf_bound_1_15(resolve_discrete(spec, args.dist), n, b);
        case BoundId::cf_1_16: {
            const MixtureSpec mix = resolve_mixture(spec, args.dist);
            return cf_bound_1_16(mix.mixed(), mix, n, alpha, b);
        }
    }
    throw ParseError("unknown bound id: " + bound_name);
}

int cmd_bound(const CommonArgs& args, const BoundArgs& bargs) {
    const auto spec = load_spec(args);
    const BoundReport report = evaluate_bound(
        spec, args, bargs.bound_id, bargs.n.front(), bargs.b.front(),
        bargs.alpha.empty() ? 0.5 : bargs.alpha.front(),
        bargs.delta.empty() ? 1.0 : bargs.delta.front(),
        bargs.r.empty() ? 0 : bargs.r.front(), bargs.s.empty() ? 1 : bargs.s.front());
    if (args.format == "json") {
        emit(report_to_json(report) + "\n", args.out_path);
    } else {
        emit(report_csv_header(report) + "\n" + report_csv_row(report) + "\n",
             args.out_path);
    }
    return 0;
}

int cmd_sweep(const CommonArgs& args, const BoundArgs& bargs) {
    const auto spec = load_spec(args);
    std::vector<BoundReport> reports;
    const std::vector<double> alphas = bargs.alpha.empty() ? std::vector<double>{0.5}
                                                           : bargs.alpha;
    const std::vector<double> deltas = bargs.delta.empty() ? std::vector<double>{1.0}
                                                           : bargs.delta;
    const std::vector<long> rs = bargs.r.empty() ? std::vector<long>{0} : bargs.r;
    const std::vector<long> ss = bargs.s.empty() ? std::vector<long>{1} : bargs.s;
    if (bargs.n.empty() || bargs.b.empty()) {
        throw ParseError("sweep grid is empty: --n and --b need at least one value");
    }
    for (long n : bargs.n) {
        for (double b : bargs.b) {
            for (double alpha : alphas) {
                for (double delta : deltas) {
                    for (long r : rs) {
                        for (long s : ss) {
                            reports.push_back(evaluate_bound(spec, args, bargs.bound_id, n,
                                                             b, alpha, delta, r, s));
                        }
                    }
                }
            }
        }
    }
    std::ostringstream out;
    out << report_csv_header(reports.front()) << '\n';
    for (const BoundReport& r : reports) {
        out << report_csv_row(r) << '\n';
    }
    const ConstantEstimate est =
        estimate_constant(reports, bound_id_from_string(bargs.bound_id));
    out << "# c_hat=" << format_double(est.c_hat) << " witness=";
    bool first = true;
    for (const auto& [key, value] : est.witness.params) {
        if (!first) {
            out << ';';
        }
        out << key << '=' << format_double(value);
        first = false;
    }
    out << '\n';
    emit(out.str(), args.out_path);
    return 0;
}

int cmd_convpow(const CommonArgs& args, long n, bool full) {
    const auto spec = load_spec(args);
    const ParsedDistribution parsed = resolve_dist(spec, args.dist);
    nlohmann::json j;
    ErrorBudget budget;
    if (const auto* lat = std::get_if<LatticeDist>(&parsed)) {
        const LatticeDist powered = conv_power(*lat, n, args.prune_eps, &budget);
        j["kind"] = "lattice";
        j["offset"] = powered.offset();
        j["step"] = powered.step();
        j["length"] = powered.size();
        j["total_mass"] = powered.total_mass();
        j["error_budget"] = powered.error_budget();
        if (full) {
            j["weights"] = powered.weights();
        }
    } else {
        const DiscreteDist f = as_discrete(parsed);
        std::optional<LatticeDist> promoted = n > 1 ? try_promote_to_lattice(f) : std::nullopt;
        if (promoted.has_value()) {
            const LatticeDist powered = conv_power(*promoted, n, args.prune_eps, &budget);
            j["kind"] = "lattice";
            j["offset"] = powered.offset();
            j["step"] = powered.step();
            j["length"] = powered.size();
            j["total_mass"] = powered.total_mass();
            j["error_budget"] = powered.error_budget();
            if (full) {
                j["weights"] = powered.weights();
            }
        } else {
            const DiscreteDist powered = conv_power(f, n, args.prune_eps, &budget);
            j["kind"] = "atoms";
            j["length"] = powered.size();
            j["total_mass"] = powered.total_mass();
            j["error_budget"] = powered.error_budget();
            if (full) {
                nlohmann::json atoms = nlohmann::json::array();
                for (const Atom& a : powered.atoms()) {
                    atoms.push_back({a.pos, a.mass});
                }
                j["atoms"] = atoms;
            }
        }
    }
    j["budget_breakdown"] = {{"pruned_mass", budget.pruned_mass},
                             {"fft_residual", budget.fft_residual}};
    emit(j.dump() + "\n", args.out_path);
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& golden_path) {
    VerifyOptions opts;
    opts.golden_path = golden_path;
    const std::vector<CheckResult> results = run_verify_suite(suite, opts);
    bool all_pass = true;
    for (const CheckResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail
                  << "]\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "all checks passed" : "at least one check failed") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentration functions of n-fold convolutions"};
    app.require_subcommand(1);

    CommonArgs common;
    BoundArgs bargs;
    long n = 1;
    double b = 1.0;
    bool full_dump = false;
    std::string suite;
    std::string golden_path;

    auto add_common = [&](CLI::App* cmd, bool with_dist) {
        cmd->add_option("--spec", common.spec_path, "scenario JSON file");
        if (with_dist) {
            cmd->add_option("--dist", common.dist,
                            "distribution name from --spec, or inline JSON")
                ->required();
        }
        cmd->add_option("--prune-eps", common.prune_eps, "prune masses below this");
        cmd->add_option("--seed", common.seed, "random seed");
        cmd->add_option("--out", common.out_path, "write output to this path");
        cmd->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* q_cmd = app.add_subcommand("q", "concentration function of F^n");
    add_common(q_cmd, true);
    q_cmd->add_option("--n", n, "convolution power");
    q_cmd->add_option("--b", b, "window length")->required();

    CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate one bound");
    bound_cmd->add_option("bound_id", bargs.bound_id, "bound identifier")->required();
    add_common(bound_cmd, true);
    bound_cmd->add_option("--H", common.h_name, "H factor (defaults to a unit mass at 0)");
    bound_cmd->add_option("--G", common.g_name, "G factor (defaults to a unit mass at 0)");
    bound_cmd->add_option("--n", bargs.n, "convolution power")->delimiter(',');
    bound_cmd->add_option("--b", bargs.b, "window length")->delimiter(',');
    bound_cmd->add_option("--alpha", bargs.alpha, "power split in (0,1)")->delimiter(',');
    bound_cmd->add_option("--delta", bargs.delta, "auxiliary scale")->delimiter(',');
    bound_cmd->add_option("--r", bargs.r, "lower cutoff")->delimiter(',');
    bound_cmd->add_option("--s", bargs.s, "upper cutoff")->delimiter(',');

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a bound over a grid");
    sweep_cmd->add_option("bound_id", bargs.bound_id, "bound identifier")->required();
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--H", common.h_name, "H factor");
    sweep_cmd->add_option("--G", common.g_name, "G factor");
    sweep_cmd->add_option("--n", bargs.n, "grid of powers")->delimiter(',');
    sweep_cmd->add_option("--b", bargs.b, "grid of window lengths")->delimiter(',');
    sweep_cmd->add_option("--alpha", bargs.alpha, "grid of splits")->delimiter(',');
    sweep_cmd->add_option("--delta", bargs.delta, "grid of scales")->delimiter(',');
    sweep_cmd->add_option("--r", bargs.r, "grid of lower cutoffs")->delimiter(',');
    sweep_cmd->add_option("--s", bargs.s, "grid of upper cutoffs")->delimiter(',');

    CLI::App* pow_cmd = app.add_subcommand("convpow", "convolution power");
    add_common(pow_cmd, true);
    pow_cmd->add_option("--n", n, "convolution power")->required();
    pow_cmd->add_flag("--full", full_dump, "dump the full weight vector");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("suite", suite, "identities | constants | counterexample | all")
        ->required();
    verify_cmd->add_option("--golden", golden_path, "golden constants file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (q_cmd->parsed()) {
            return cmd_q(common, n, b);
        }
        if (bound_cmd->parsed()) {
            return cmd_bound(common, bargs);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(common, bargs);
        }
        if (pow_cmd->parsed()) {
            return cmd_convpow(common, n, full_dump);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(suite, golden_path);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
