#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace opseq {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape/index disagreements (matrix dims, window sizes, bad arguments).
struct DimensionError : Error {
    using Error::Error;
};

// An operand that had to be positive semidefinite was not; carries the
// offending minimum eigenvalue so callers can report how far off it was.
struct NotPsdError : Error {
    double min_eigenvalue;
    NotPsdError(const std::string& msg, double min_ev)
        : Error(msg), min_eigenvalue(min_ev) {}
};

// The iterative eigensolver hit its rotation budget before the off-diagonal
// mass dropped below threshold; carries the residual it got stuck at.
struct ConvergenceError : Error {
    double offdiag_residual;
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), offdiag_residual(residual) {}
};

// A harness precondition failed at a specific sequence index.
struct PremiseError : Error {
    int index;
    PremiseError(const std::string& msg, int n) : Error(msg), index(n) {}
};

// Config-text parsing: collects every offending line, not just the first.
struct ParseError : Error {
    std::vector<std::string> issues;
    explicit ParseError(std::vector<std::string> problems)
        : Error(join(problems)), issues(std::move(problems)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "config invalid:";
        for (const auto& line : v) {
            s += "\n  ";
            s += line;
        }
        return s;
    }
};

}  // namespace opseq
