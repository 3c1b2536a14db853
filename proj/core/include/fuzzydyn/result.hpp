#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace fuzzydyn {

/// Minimal value-or-error carrier for operations whose failure is a normal
/// outcome rather than a programming error.
template <typename T, typename E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  [[nodiscard]] bool ok() const noexcept { return v_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  [[nodiscard]] const T& value() const& {
    check(ok(), "Result::value on error");
    return std::get<0>(v_);
  }
  [[nodiscard]] T&& value() && {
    check(ok(), "Result::value on error");
    return std::get<0>(std::move(v_));
  }
  [[nodiscard]] const E& error() const& {
    check(!ok(), "Result::error on value");
    return std::get<1>(v_);
  }

 private:
  static void check(bool cond, const char* what) {
    if (!cond) throw std::logic_error(what);
  }
  std::variant<T, E> v_;
};

}  // namespace fuzzydyn
