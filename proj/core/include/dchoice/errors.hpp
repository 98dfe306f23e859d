#pragma once

#include <stdexcept>
#include <string>

namespace dchoice {

struct ParameterMismatch : std::runtime_error {
  explicit ParameterMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NoBlockDesign : std::runtime_error {
  explicit NoBlockDesign(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleConstraint : std::runtime_error {
  explicit InfeasibleConstraint(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

// Exact enumeration asked for more subsets than the budget allows.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NotStored : std::runtime_error {
  explicit NotStored(const std::string& what) : std::runtime_error(what) {}
};

struct AlreadyStored : std::runtime_error {
  explicit AlreadyStored(const std::string& what) : std::runtime_error(what) {}
};

struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonpositiveThreshold : std::runtime_error {
  explicit NonpositiveThreshold(const std::string& what) : std::runtime_error(what) {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct Diverges : std::runtime_error {
  explicit Diverges(const std::string& what) : std::runtime_error(what) {}
};

struct BadWindow : std::runtime_error {
  explicit BadWindow(const std::string& what) : std::runtime_error(what) {}
};

struct WindowTooLarge : std::runtime_error {
  explicit WindowTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct TooShort : std::runtime_error {
  explicit TooShort(const std::string& what) : std::runtime_error(what) {}
};

struct BadMode : std::runtime_error {
  explicit BadMode(const std::string& what) : std::runtime_error(what) {}
};

struct NonpositiveDemandModel : std::runtime_error {
  explicit NonpositiveDemandModel(const std::string& what) : std::runtime_error(what) {}
};

struct BadPartition : std::runtime_error {
  explicit BadPartition(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dchoice
