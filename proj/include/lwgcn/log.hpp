#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <utility>

namespace lwgcn::log {

using Sink = std::function<void(const std::string&)>;

inline Sink& warning_sink() {
  static Sink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}

inline void warn(const std::string& msg) {
  if (auto& s = warning_sink()) s(msg);
}

/// Swaps the warning sink for the lifetime of the guard (tests use it to
/// capture or silence warnings).
class ScopedSink {
 public:
  explicit ScopedSink(Sink s) : saved_(std::exchange(warning_sink(), std::move(s))) {}
  ~ScopedSink() { warning_sink() = std::move(saved_); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  Sink saved_;
};

}  // namespace lwgcn::log
