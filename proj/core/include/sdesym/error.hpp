#ifndef SDESYM_ERROR_HPP
#define SDESYM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdesym {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression or model text. `position` is a 0-based character
/// offset into the offending text (or the line number for model files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A model that parses but violates a structural invariant.
class ModelError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain of definition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A named hypothesis of a reduction theorem does not hold for the input.
class HypothesisError : public Error {
public:
    HypothesisError(std::string hypothesis, const std::string& detail)
        : Error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}
    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

/// No rule of the antiderivative table applies.
class NotElementary : public Error {
public:
    using Error::Error;
};

/// Random sampling could not find admissible evaluation points.
class SamplingError : public Error {
public:
    using Error::Error;
};

}  // namespace sdesym

#endif  // SDESYM_ERROR_HPP
