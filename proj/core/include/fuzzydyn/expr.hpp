#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzydyn/result.hpp"

namespace fuzzydyn {

struct ParseError {
  std::size_t offset = 0;             ///< byte offset into the input
  std::string message;
  std::vector<std::string> expected;  ///< token classes that would have been accepted
};

struct EvalError {
  enum class Kind { DivByZero, LogDomain, SqrtDomain, PowDomain, Overflow };
  Kind kind;
  double operand;  ///< the value that violated the operator's domain
};

[[nodiscard]] std::string to_string(EvalError::Kind kind);

/// Thrown by contexts that require a total scalar function (e.g. Lyapunov
/// weight evaluation) when the underlying expression hits a domain error.
struct ExprEvalException : std::runtime_error {
  explicit ExprEvalException(EvalError e);
  EvalError error;
};

/// A parsed, immutable scalar expression over the variables {t, w}.
///
/// Grammar: literals, t, w, + - * / ^ (right-assoc, binds above unary
/// minus), parentheses, and the functions sin cos exp log sqrt abs atan
/// min max pow. Evaluation is pure; domain violations surface as EvalError
/// instead of propagating NaN or infinity.
class ScalarFn {
 public:
  struct Node;  // opaque

  static Result<ScalarFn, ParseError> parse(std::string_view text);

  /// Convenience for programmatic construction from trusted literals;
  /// throws std::invalid_argument when the text does not parse.
  static ScalarFn parse_or_throw(std::string_view text);

  [[nodiscard]] Result<double, EvalError> eval(double t, double w) const;

  /// Like eval but throws ExprEvalException on domain errors.
  [[nodiscard]] double eval_or_throw(double t, double w) const;

  /// Canonical fully parenthesized rendering; reparsing it reproduces the
  /// exact tree.
  [[nodiscard]] std::string print() const;

  [[nodiscard]] bool same_structure(const ScalarFn& other) const;
  [[nodiscard]] bool references_t() const;
  [[nodiscard]] bool references_w() const;

 private:
  explicit ScalarFn(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

/// A verified class-K envelope: zero at zero and strictly increasing on a
/// sampled grid of [0, w_max]. The grid check is a finite surrogate for
/// monotonicity of the ideal function.
struct ClassK {
  ScalarFn fn;
  double w_max;

  [[nodiscard]] double operator()(double w) const { return fn.eval_or_throw(0.0, w); }
};

struct NotClassK {
  enum class Kind { ReferencesT, NonzeroAtOrigin, NotIncreasing, EvalFailed };
  Kind kind;
  // Violating sample pair for NotIncreasing (w_lo < w_hi with f(w_lo) >= f(w_hi)).
  double w_lo = 0, w_hi = 0, f_lo = 0, f_hi = 0;
};

[[nodiscard]] std::string to_string(const NotClassK& violation);

/// Verifies fn(0) == 0 (within 1e-12) and strict increase on a `samples`-point
/// grid of [0, w_max]. The function must not reference t.
[[nodiscard]] Result<ClassK, NotClassK> check_class_k(const ScalarFn& fn,
                                                      double w_max,
                                                      std::size_t samples = 1000);

/// Same check for a two-variable envelope a0(t, .) frozen at a given t.
[[nodiscard]] Result<ClassK, NotClassK> check_class_k_at(const ScalarFn& fn,
                                                         double t,
                                                         double w_max,
                                                         std::size_t samples = 1000);

}  // namespace fuzzydyn
