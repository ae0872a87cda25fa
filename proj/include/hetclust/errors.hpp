#pragma once

#include <stdexcept>
#include <string>

namespace hetclust {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric argument outside the mathematical domain of a function
/// (negative chi-square statistic, non-finite input, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Too few observations to form the requested summary (arm with fewer
/// than two members, empty label stratum, ...).
struct InsufficientDataError : Error {
    using Error::Error;
};

/// A summary whose standard error collapses to zero; the normal model
/// behind the likelihood-ratio statistic divides by it.
struct DegenerateVarianceError : Error {
    using Error::Error;
};

/// An empirical rate of exactly 0 or 1, whose binomial standard error
/// would be zero.
struct DegenerateRateError : Error {
    using Error::Error;
};

/// Two clusters that share a member where disjoint clusters are required.
struct OverlappingClustersError : Error {
    using Error::Error;
};

/// Structurally invalid input to an operation (duplicate group ids,
/// empty group list, empty grid, bad configuration value, ...).
struct InputError : Error {
    using Error::Error;
};

/// Malformed input file; the message names the offending line.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace hetclust
