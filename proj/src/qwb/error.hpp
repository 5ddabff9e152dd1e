#pragma once

#include <stdexcept>
#include <string>

namespace qwb {

enum class ErrorCode {
    NotSquare,
    NotHermitian,
    NotPsd,
    TraceMismatch,
    ZeroMatrix,
    BadRank,
    DimensionMismatch,
    OrderTooSmall,
    SolverFailed,
    NoDualAvailable,
    AtomSetInfeasible,
    MalformedProblem,
    UnsupportedCone,
    ParseError,
    IoError,
    InvalidArgument,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace qwb
