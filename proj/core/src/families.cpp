#include "concbound/families.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace concbound {

namespace {

double require_param(const std::map<std::string, double>& params, const char* family,
                     const char* key) {
    auto it = params.find(key);
    if (it == params.end()) {
        std::ostringstream msg;
        msg << "family '" << family << "' requires parameter '" << key << "'";
        throw ParseError(msg.str());
    }
    return it->second;
}

void reject_extras(const std::map<std::string, double>& params, const char* family,
                   std::initializer_list<const char*> known) {
    for (const auto& [key, value] : params) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            std::ostringstream msg;
            msg << "family '" << family << "' does not accept parameter '" << key << "'";
            throw ParseError(msg.str());
        }
    }
}

}  // namespace

DiscreteDist two_point(double a) {
    if (!(a > 0.0)) {
        throw InvalidDistribution("two_point requires a > 0");
    }
    return DiscreteDist({{-a, 0.5}, {a, 0.5}});
}

DiscreteDist fair_coin() {
    return two_point(1.0);
}

DiscreteDist uniform_lattice(long m, double h) {
    if (m < 1) {
        throw InvalidDistribution("uniform_lattice requires m >= 1");
    }
    if (!(h > 0.0)) {
        throw InvalidDistribution("uniform_lattice requires h > 0");
    }
    const double mass = 1.0 / static_cast<double>(m);
    const double mid = static_cast<double>(m - 1) / 2.0;
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(m));
    for (long k = 0; k < m; ++k) {
        atoms.push_back({(static_cast<double>(k) - mid) * h, mass});
    }
    return DiscreteDist(std::move(atoms));
}

DiscreteDist counterexample(double n) {
    return two_point(n);
}

DiscreteDist zero_mean_three_point(double p, double a) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw InvalidDistribution("zero_mean_three_point requires p in (0, 1)");
    }
    if (!(a > 0.0)) {
        throw InvalidDistribution("zero_mean_three_point requires a > 0");
    }
    return DiscreteDist({{-a, p / 2.0}, {0.0, 1.0 - p}, {a, p / 2.0}});
}

DiscreteDist make_family(const std::string& name,
                         const std::map<std::string, double>& params) {
    if (name == "two_point") {
        reject_extras(params, "two_point", {"a"});
        return two_point(require_param(params, "two_point", "a"));
    }
    if (name == "fair_coin") {
        reject_extras(params, "fair_coin", {});
        return fair_coin();
    }
    if (name == "uniform_lattice") {
        reject_extras(params, "uniform_lattice", {"m", "h"});
        const double m = require_param(params, "uniform_lattice", "m");
        if (m != std::floor(m)) {
            throw ParseError("uniform_lattice parameter 'm' must be an integer");
        }
        return uniform_lattice(static_cast<long>(m),
                               require_param(params, "uniform_lattice", "h"));
    }
    if (name == "counterexample") {
        reject_extras(params, "counterexample", {"n"});
        return counterexample(require_param(params, "counterexample", "n"));
    }
    if (name == "zero_mean_three_point") {
        reject_extras(params, "zero_mean_three_point", {"p", "a"});
        return zero_mean_three_point(require_param(params, "zero_mean_three_point", "p"),
                                     require_param(params, "zero_mean_three_point", "a"));
    }
    throw ParseError("unknown family: '" + name + "'");
}

}  // namespace concbound
