#pragma once

#include <stdexcept>
#include <string>

namespace mapu {

// Malformed or inconsistent input data (bad numbers, unknown ids, violated
// instance invariants).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant of the algorithm did not hold. Always a bug; never
// swallowed.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An exhaustive routine was asked to run above its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t size, std::size_t cap)
      : std::runtime_error(what + ": size " + std::to_string(size) +
                           " exceeds cap " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t size_;
  std::size_t cap_;
};

namespace detail {

inline void ensure(bool condition, const std::string& message) {
  if (!condition) throw InvariantViolation(message);
}

}  // namespace detail
}  // namespace mapu
