#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mutualcover {

enum class ErrorKind {
  kNegativeEntry,
  kNotNormalized,
  kDuplicateLabel,
  kShapeMismatch,
  kUnsupportedOrder,
  kDegenerateTilt,
  kSizeCapExceeded,
  kEpsilonTooLarge,
  kPreconditionMN,
  kZeroVarentropy,
  kRegimeError,
  kInfeasibleFlow,
  kInvalidArgument,
  kParse,
};

std::string_view to_string(ErrorKind kind);

// All library failures carry a kind so callers (the CLI in particular) can
// map them to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

// Size caps. MUTUALCOVER_CAP, when set to a positive integer, replaces every
// default cap (at your own risk: memory and runtime are not guarded).
std::size_t effective_cap(std::size_t default_cap);

inline constexpr std::size_t kTensorCap = 10'000'000;
inline constexpr std::size_t kTypeCap = 10'000'000;
inline constexpr std::size_t kRealizationCap = 100'000;
inline constexpr std::size_t kMaskAtomCap = 20;
inline constexpr std::size_t kSequenceCap = 1'000'000;

}  // namespace mutualcover
