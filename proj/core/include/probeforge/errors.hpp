#pragma once
// Typed error hierarchy shared by every probe-forge stage. Each error carries
// an Errc so the CLI can map failures onto stable process exit codes.

#include <stdexcept>
#include <string>

namespace probeforge {

enum class Errc {
    Syntax,              // malformed manifest document
    Validation,          // manifest violates a structural invariant
    NoPragma,            // hierarchy requested but nothing is marked for profiling
    NotFound,            // source-path lookup failed
    UnknownNode,         // probe target not in the tree
    EdgeOrderViolation,  // toggle stream broke rise/fall alternation
    CounterOverflow,     // global cycle counter exceeded its width
    LossyLog,            // reconstruction attempted on an overflowed run
    DegenerateBaseline,  // resource ratio has no usable denominator
    Unfittable,          // even the minimal allocation exceeds the budget
    NoPreviousRun,       // incremental planning without a prior run
    StoreMiss,           // artifact key not present in the workspace
    Io,                  // filesystem failure
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const { return code_; }

    /// Process exit code contract: 1 validation/syntax/lookup, 2 capacity,
    /// 3 lossy or overflowed run.
    int exit_code() const {
        switch (code_) {
            case Errc::Unfittable: return 2;
            case Errc::CounterOverflow:
            case Errc::LossyLog: return 3;
            default: return 1;
        }
    }

  private:
    Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace probeforge
