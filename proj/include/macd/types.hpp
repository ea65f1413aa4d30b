#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace macd {

using TokenId = std::uint32_t;

/// A token id sequence; prefix views are spans over this.
using TokenSequence = std::vector<TokenId>;

enum class ErrorCode {
    EmptyCorpus,
    CorpusTooSmall,
    InvalidOrder,
    VocabMismatch,
    NonPositiveTemperature,
    InvalidK,
    NegativeDelta,
    CrOutOfRange,
    MissingFullDistributions,
    EmptyCandidateSet,
    InvalidParameter,
    ModelNotFound,
    IoError,
    InsufficientAmateurs,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-parsable error code; the CLI prints
/// `macd error: code=<name> message=<text>` on stderr and exits nonzero.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace macd
