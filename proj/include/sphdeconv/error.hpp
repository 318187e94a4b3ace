#pragma once

#include <stdexcept>
#include <string>

namespace sphdeconv {

/// Argument outside the mathematical domain of an operation (bad degree/order, |x| > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller violated an operation's precondition (grid too coarse, spectrum too short, ...).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A per-degree noise block could not be inverted within the configured condition limit.
class IllConditionedDegree : public std::runtime_error {
public:
    IllConditionedDegree(int degree, double condition)
        : std::runtime_error("noise block at degree " + std::to_string(degree) +
                             " is ill-conditioned (cond = " + std::to_string(condition) + ")"),
          degree_(degree), condition_(condition) {}

    int degree() const noexcept { return degree_; }
    double condition() const noexcept { return condition_; }

private:
    int degree_;
    double condition_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace sphdeconv
