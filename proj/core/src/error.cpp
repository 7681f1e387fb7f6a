#include "mutualcover/error.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace mutualcover {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNegativeEntry: return "NegativeEntry";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kDuplicateLabel: return "DuplicateLabel";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::kDegenerateTilt: return "DegenerateTilt";
    case ErrorKind::kSizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::kEpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorKind::kPreconditionMN: return "PreconditionMN";
    case ErrorKind::kZeroVarentropy: return "ZeroVarentropy";
    case ErrorKind::kRegimeError: return "RegimeError";
    case ErrorKind::kInfeasibleFlow: return "InfeasibleFlow";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

std::size_t effective_cap(std::size_t default_cap) {
  const char* env = std::getenv("MUTUALCOVER_CAP");
  if (env == nullptr || *env == '\0') return default_cap;
  std::size_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value == 0) return default_cap;
  return value;
}

}  // namespace mutualcover
