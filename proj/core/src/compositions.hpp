#pragma once

// Internal helpers for enumerating types (compositions) and summing many
// small terms.

#include <cmath>
#include <cstddef>
#include <vector>

namespace mutualcover::detail {

// Number of compositions of n into `parts` nonnegative parts, as a double so
// callers can compare against caps without overflow.
inline double composition_count(std::size_t n, std::size_t parts) {
  if (parts == 0) return n == 0 ? 1.0 : 0.0;
  return std::round(std::exp(std::lgamma(static_cast<double>(n + parts)) -
                             std::lgamma(static_cast<double>(n + 1)) -
                             std::lgamma(static_cast<double>(parts))));
}

// Visits every composition of n into `parts` parts in colex order (the first
// part varies fastest). The callback receives the count vector.
template <typename F>
void for_each_composition(std::size_t n, std::size_t parts, F&& visit) {
  if (parts == 0) return;
  std::vector<std::size_t> t(parts, 0);
  t[0] = n;
  while (true) {
    visit(static_cast<const std::vector<std::size_t>&>(t));
    // Colex successor: find the first nonzero part below the last, move one
    // unit right, and pour the remainder of the prefix back into part 0.
    std::size_t i = 0;
    while (i + 1 < parts && t[i] == 0) ++i;
    if (i + 1 >= parts) return;
    const std::size_t carry = t[i] - 1;
    t[i] = 0;
    t[i + 1] += 1;
    t[0] = carry;
  }
}

inline double log_multinomial(const std::vector<std::size_t>& t) {
  std::size_t n = 0;
  double acc = 0.0;
  for (std::size_t k : t) {
    n += k;
    acc -= std::lgamma(static_cast<double>(k) + 1.0);
  }
  return acc + std::lgamma(static_cast<double>(n) + 1.0);
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mutualcover::detail
