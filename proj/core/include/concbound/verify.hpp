#ifndef CONCBOUND_VERIFY_HPP
#define CONCBOUND_VERIFY_HPP

// The verification bundles behind `concbound verify` and the acceptance
// suite: numbered checks over the library's checkable identities,
// constant-stability sweeps and the heavy-tailed counterexample family.

#include <string>
#include <vector>

namespace concbound {

struct CheckResult {
    int criterion = 0;       // stable index used by the acceptance suite
    std::string name;
    bool pass = false;
    std::string detail;      // parameters of the first failing case, or a summary
    double seconds = 0.0;
};

struct VerifyOptions {
    // Golden implied-constant file. Empty: constants are computed and the
    // slope checks run, but no golden comparison happens. If the file does
    // not exist yet it is written (first-run recording); afterwards values
    // must match to 1e-9.
    std::string golden_path;
};

std::vector<CheckResult> verify_identities();
std::vector<CheckResult> verify_constants(const VerifyOptions& opts);
std::vector<CheckResult> verify_counterexample();
std::vector<CheckResult> verify_performance();

// suite is one of: identities | constants | counterexample | all.
// Throws ParseError for unknown suite names.
std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opts);

}  // namespace concbound

#endif  // CONCBOUND_VERIFY_HPP
