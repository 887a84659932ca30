#include "bzsl/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

#include "bzsl/error.hpp"

namespace bzsl {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink_slot() {
  static WarningSink sink = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return sink;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::definiteness: return "definiteness";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::shape: return "shape";
    case ErrorKind::degenerate_vector: return "degenerate-vector";
    case ErrorKind::degenerate_landmark: return "degenerate-landmark";
    case ErrorKind::usage: return "usage";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::search: return "search";
  }
  return "unknown";
}

void rethrow_with_context(const Error& e, std::string_view context) {
  throw Error(e.kind(), std::string(context) + ": " + e.what());
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink_slot(), std::move(sink));
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink_slot()) sink_slot()(message);
}

}  // namespace bzsl
