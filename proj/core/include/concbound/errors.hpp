#ifndef CONCBOUND_ERRORS_HPP
#define CONCBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace concbound {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measure failed its construction invariants (masses, ordering, totals).
class InvalidDistribution : public Error {
public:
    using Error::Error;
};

// Input measure has zero variance where a positive one is required.
class ZeroVariance : public Error {
public:
    using Error::Error;
};

// Input measure must have mean zero (within 1e-10) and does not.
class NonCenteredInput : public Error {
public:
    using Error::Error;
};

// A scale parameter b (or gamma) must be strictly positive.
class NonPositiveScale : public Error {
public:
    using Error::Error;
};

// An atom misses the requested grid by more than the snap tolerance.
class NotLatticeAligned : public Error {
public:
    using Error::Error;
};

// A dense convolution or FFT buffer would exceed the configured cap.
class SupportExplosion : public Error {
public:
    using Error::Error;
};

// Accumulated error budget reached the 0.5 total-variation abort threshold.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// The symmetrized measure is a point mass, so D-type integrals vanish.
class DegenerateSymmetrization : public Error {
public:
    using Error::Error;
};

// n*alpha must be an integer (within 1e-9) for the split to make sense.
class NonIntegerSplit : public Error {
public:
    using Error::Error;
};

// Integer range parameters violate 0 <= r < s <= n (or similar).
class BadRange : public Error {
public:
    using Error::Error;
};

// A scenario family produced no hypothesis-satisfying scenario.
class EmptyFamily : public Error {
public:
    using Error::Error;
};

// Malformed JSON input (distribution spec, scenario file, parameters).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace concbound

#endif  // CONCBOUND_ERRORS_HPP
