#ifndef PLA_ERRORS_HPP
#define PLA_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pla {

// Invalid inputs are reported with std::invalid_argument. The types below
// cover the remaining failure classes so callers (the CLI in particular) can
// map them onto distinct exit codes.

/// An enumeration or size guard was exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& guard, std::uint64_t requested,
                     std::uint64_t limit)
      : std::runtime_error(guard + " guard exceeded: " +
                           std::to_string(requested) + " > " +
                           std::to_string(limit)),
        guard_(guard),
        requested_(requested),
        limit_(limit) {}

  const std::string& guard() const noexcept { return guard_; }
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::string guard_;
  std::uint64_t requested_;
  std::uint64_t limit_;
};

/// A root cannot be reached from some state, so no spanning in-tree exists.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::size_t stranded_state)
      : std::runtime_error(what), stranded_(stranded_state) {}

  std::size_t stranded_state() const noexcept { return stranded_; }

 private:
  std::size_t stranded_;
};

/// Linear solve failed, probabilities drifted off the simplex, and similar.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pla

#endif  // PLA_ERRORS_HPP
