#include "concbound/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "concbound/convolution.hpp"

namespace concbound {

namespace {

void validate_budget(double budget) {
    if (!(budget >= 0.0)) {
        throw InvalidDistribution("error_budget must be >= 0");
    }
    if (budget >= kBudgetAbort) {
        std::ostringstream msg;
        msg << "error budget " << budget << " reached the abort threshold " << kBudgetAbort;
        throw BudgetExceeded(msg.str());
    }
}

void validate_total(double total, double budget) {
    if (std::abs(total - 1.0) > budget + kMassSlack) {
        std::ostringstream msg;
        msg << "total mass " << total << " deviates from 1 by more than error_budget "
            << budget << " + " << kMassSlack;
        throw InvalidDistribution(msg.str());
    }
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<Atom> atoms, double error_budget)
    : atoms_(std::move(atoms)), error_budget_(error_budget) {
    validate_budget(error_budget_);
    if (atoms_.empty()) {
        throw InvalidDistribution("a distribution needs at least one atom");
    }
    double total = 0.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!std::isfinite(a.pos) || !std::isfinite(a.mass)) {
            std::ostringstream msg;
            msg << "atoms[" << i << "] is not finite";
            throw InvalidDistribution(msg.str());
        }
        if (!(a.mass > 0.0)) {
            std::ostringstream msg;
            msg << "atoms[" << i << "].mass must be > 0, got " << a.mass;
            throw InvalidDistribution(msg.str());
        }
        if (!(a.pos > prev)) {
            std::ostringstream msg;
            msg << "atoms[" << i << "].pos must be strictly increasing";
            throw InvalidDistribution(msg.str());
        }
        prev = a.pos;
        total += a.mass;
    }
    validate_total(total, error_budget_);
}

DiscreteDist DiscreteDist::from_atoms(std::vector<Atom> atoms, double error_budget) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (a.mass == 0.0) {
            continue;
        }
        if (!merged.empty() && a.pos - merged.back().pos <= kMergeTolerance) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }
    return DiscreteDist(std::move(merged), error_budget);
}

DiscreteDist DiscreteDist::delta(double a) {
    return DiscreteDist({{a, 1.0}}, 0.0);
}

double DiscreteDist::total_mass() const {
    double total = 0.0;
    for (const Atom& a : atoms_) {
        total += a.mass;
    }
    return total;
}

LatticeDist::LatticeDist(double offset, double step, std::vector<double> weights,
                         double error_budget)
    : offset_(offset), step_(step), weights_(std::move(weights)), error_budget_(error_budget) {
    validate_budget(error_budget_);
    if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(offset_)) {
        throw InvalidDistribution("lattice step must be finite and > 0");
    }
    if (weights_.empty()) {
        throw InvalidDistribution("lattice weights must be nonempty");
    }
    if (weights_.front() == 0.0 || weights_.back() == 0.0) {
        throw InvalidDistribution("lattice support must be trimmed: first and last weights nonzero");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (!(weights_[k] >= 0.0) || !std::isfinite(weights_[k])) {
            std::ostringstream msg;
            msg << "weights[" << k << "] must be finite and >= 0";
            throw InvalidDistribution(msg.str());
        }
        total += weights_[k];
    }
    validate_total(total, error_budget_);
}

double LatticeDist::total_mass() const {
    double total = 0.0;
    for (double w : weights_) {
        total += w;
    }
    return total;
}

DiscreteDist LatticeDist::to_discrete() const {
    std::vector<Atom> atoms;
    atoms.reserve(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (weights_[k] > 0.0) {
            atoms.push_back({position(k), weights_[k]});
        }
    }
    return DiscreteDist(std::move(atoms), error_budget_);
}

MixtureSpec::MixtureSpec(double p, DiscreteDist u, DiscreteDist v)
    : p_(p), u_(std::move(u)), v_(std::move(v)) {
    if (!(p_ >= 0.0) || !(p_ < 1.0)) {
        throw InvalidDistribution("mixture weight p must lie in [0, 1)");
    }
    Moments m = moments(u_);
    if (std::abs(m.mean) > kCenterTolerance) {
        std::ostringstream msg;
        msg << "mixture component U must have mean 0 within " << kCenterTolerance
            << ", got " << m.mean;
        throw NonCenteredInput(msg.str());
    }
    if (!(m.sigma2 > 0.0)) {
        throw ZeroVariance("mixture component U must have positive variance");
    }
}

DiscreteDist MixtureSpec::mixed() const {
    if (p_ == 0.0) {
        return u_;
    }
    std::vector<Atom> atoms;
    atoms.reserve(u_.size() + v_.size());
    for (const Atom& a : u_.atoms()) {
        atoms.push_back({a.pos, (1.0 - p_) * a.mass});
    }
    for (const Atom& a : v_.atoms()) {
        atoms.push_back({a.pos, p_ * a.mass});
    }
    return DiscreteDist::from_atoms(std::move(atoms),
                                    (1.0 - p_) * u_.error_budget() + p_ * v_.error_budget());
}

DiscreteDist reflect(const DiscreteDist& f) {
    const auto& src = f.atoms();
    std::vector<Atom> atoms(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Atom& a = src[src.size() - 1 - i];
        atoms[i] = {-a.pos, a.mass};
    }
    return DiscreteDist(std::move(atoms), f.error_budget());
}

DiscreteDist symmetrize(const DiscreteDist& f) {
    return convolve(f, reflect(f));
}

Moments moments(const DiscreteDist& f) {
    Moments m;
    for (const Atom& a : f.atoms()) {
        m.mean += a.mass * a.pos;
        m.sigma2 += a.mass * a.pos * a.pos;
    }
    return m;
}

namespace {

// Shared precondition check for the centered-moment functionals.
Moments require_centered(const DiscreteDist& u, const char* what) {
    Moments m = moments(u);
    if (std::abs(m.mean) > kCenterTolerance) {
        std::ostringstream msg;
        msg << what << " requires mean 0 within " << kCenterTolerance << ", got " << m.mean;
        throw NonCenteredInput(msg.str());
    }
    if (!(m.sigma2 > 0.0)) {
        std::ostringstream msg;
        msg << what << " requires positive variance";
        throw ZeroVariance(msg.str());
    }
    return m;
}

}  // namespace

double kappa(const DiscreteDist& u, long n) {
    if (n < 1) {
        throw BadRange("kappa requires n >= 1");
    }
    Moments m = require_centered(u, "kappa");
    const double cutoff = std::sqrt(m.sigma2) * std::sqrt(static_cast<double>(n));
    double sum = 0.0;
    for (const Atom& a : u.atoms()) {
        sum += a.mass * a.pos * a.pos * std::min(std::abs(a.pos), cutoff);
    }
    return sum;
}

double d_functional(const DiscreteDist& f, double b) {
    return d_functional_capped(f, b, 1.0);
}

double d_functional_capped(const DiscreteDist& f, double b, double cap) {
    if (!(b > 0.0)) {
        throw NonPositiveScale("d_functional requires b > 0");
    }
    double sum = 0.0;
    for (const Atom& a : f.atoms()) {
        const double ratio = (a.pos / b) * (a.pos / b);
        sum += a.mass * std::min(ratio, cap);
    }
    return sum;
}

MomentSummary beta_B(const DiscreteDist& xi, long n) {
    if (n < 1) {
        throw BadRange("beta_B requires n >= 1");
    }
    Moments m = require_centered(xi, "beta_B");
    MomentSummary s;
    s.n = n;
    s.sigma2 = m.sigma2;
    s.kappa_n = kappa(xi, n);
    s.B = std::sqrt(m.sigma2) * std::sqrt(static_cast<double>(n));
    s.beta = static_cast<double>(n) * s.kappa_n;
    return s;
}

double charfn_modulus(const DiscreteDist& f, double t) {
    double re = 0.0;
    double im = 0.0;
    for (const Atom& a : f.atoms()) {
        re += a.mass * std::cos(t * a.pos);
        im += a.mass * std::sin(t * a.pos);
    }
    return std::hypot(re, im);
}

double third_abs_moment(const DiscreteDist& f) {
    double sum = 0.0;
    for (const Atom& a : f.atoms()) {
        sum += a.mass * std::abs(a.pos) * a.pos * a.pos;
    }
    return sum;
}

LatticeDist to_lattice(const DiscreteDist& f, double step, double snap_tol) {
    if (!(step > 0.0)) {
        throw NonPositiveScale("lattice step must be > 0");
    }
    const auto& atoms = f.atoms();
    const double offset = atoms.front().pos;
    std::vector<std::pair<long, double>> cells;
    cells.reserve(atoms.size());
    long max_index = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double rel = (atoms[i].pos - offset) / step;
        const long k = std::lround(rel);
        const double miss = std::abs(atoms[i].pos - (offset + static_cast<double>(k) * step));
        if (k < 0 || miss > snap_tol) {
            std::ostringstream msg;
            msg << "atom at " << atoms[i].pos << " misses the grid (offset " << offset
                << ", step " << step << ") by " << miss;
            throw NotLatticeAligned(msg.str());
        }
        if (!cells.empty() && cells.back().first == k) {
            cells.back().second += atoms[i].mass;
        } else {
            cells.push_back({k, atoms[i].mass});
        }
        max_index = std::max(max_index, k);
    }
    if (static_cast<unsigned long>(max_index) + 1 > kFftCap) {
        throw SupportExplosion("lattice weight vector would exceed the configured cap");
    }
    std::vector<double> weights(static_cast<std::size_t>(max_index) + 1, 0.0);
    for (const auto& [k, mass] : cells) {
        weights[static_cast<std::size_t>(k)] += mass;
    }
    return LatticeDist(offset, step, std::move(weights), f.error_budget());
}

namespace {

double float_gcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    while (b > tol) {
        double r = std::fmod(a, b);
        // fmod of a near-multiple can land a hair under b; both ends mean
        // "divides evenly" here.
        if (r < tol || b - r < tol) {
            r = 0.0;
        }
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

std::optional<LatticeDist> try_promote_to_lattice(const DiscreteDist& f,
                                                  std::size_t max_len) {
    const auto& atoms = f.atoms();
    if (atoms.size() < 2) {
        return to_lattice(f, 1.0, kMergeTolerance);
    }
    double g = 0.0;
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        g = float_gcd(g, atoms[i].pos - atoms.front().pos, kMergeTolerance);
    }
    if (g <= kMergeTolerance * 16) {
        return std::nullopt;
    }
    const double span = atoms.back().pos - atoms.front().pos;
    if (span / g + 1.0 > static_cast<double>(max_len)) {
        return std::nullopt;
    }
    try {
        return to_lattice(f, g, kMergeTolerance);
    } catch (const NotLatticeAligned&) {
        return std::nullopt;
    }
}

double total_variation(const DiscreteDist& a, const DiscreteDist& b) {
    const auto& x = a.atoms();
    const auto& y = b.atoms();
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() || j < y.size()) {
        if (j >= y.size() || (i < x.size() && x[i].pos < y[j].pos - kMergeTolerance)) {
            sum += x[i++].mass;
        } else if (i >= x.size() || y[j].pos < x[i].pos - kMergeTolerance) {
            sum += y[j++].mass;
        } else {
            sum += std::abs(x[i].mass - y[j].mass);
            ++i;
            ++j;
        }
    }
    return 0.5 * sum;
}

double max_abs_position(const DiscreteDist& f) {
    return std::max(std::abs(f.min_position()), std::abs(f.max_position()));
}

}  // namespace concbound
