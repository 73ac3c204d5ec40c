#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace psl2 {

// Input outside an operation's documented domain (bad p, zero inverse, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid request that exceeds a configured budget or bound.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed invocation of an API that takes user-shaped input (CLI, parser).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; always fatal, never caught by library code.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void check(bool cond, const char* msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace psl2
