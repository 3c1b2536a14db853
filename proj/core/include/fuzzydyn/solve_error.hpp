#pragma once

#include <string>

namespace fuzzydyn {

/// Failure modes shared by the fuzzy and scalar initial-value solvers.
struct SolveError {
  enum class Kind {
    DomainExit,      ///< state left S(rho)
    WidthViolation,  ///< an endpoint step produced an invalid cut family
    NoConvergence,   ///< step halving exhausted without meeting tolerance
    Blowup,          ///< scalar magnitude exceeded the escape threshold
    NonMonotoneEps,  ///< epsilon-shifted runs failed to decrease pointwise
    EvalFailure,     ///< right-hand side expression hit a domain error
  };
  Kind kind;
  double t = 0.0;  ///< time at which the failure was detected
  std::string detail;
};

[[nodiscard]] std::string to_string(SolveError::Kind kind);
[[nodiscard]] std::string to_string(const SolveError& err);

}  // namespace fuzzydyn
