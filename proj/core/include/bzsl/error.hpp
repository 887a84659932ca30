#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bzsl {

enum class ErrorKind {
  invalid_input,
  definiteness,
  bounds,
  shape,
  degenerate_vector,
  degenerate_landmark,
  usage,
  divergence,
  parse,
  io,
  search,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Rethrows `e` with `context` prefixed to its message, preserving the kind.
[[noreturn]] void rethrow_with_context(const Error& e, std::string_view context);

}  // namespace bzsl
