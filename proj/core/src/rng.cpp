#include "rsp/rng.hpp"

#include <cmath>

namespace rsp::rng {

std::uint64_t Stream::next_below(std::uint64_t n) {
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double Stream::next_gaussian() {
  // 1 - u keeps the log argument in (0,1].
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double Stream::next_weibull(double scale, double shape) {
  const double u = 1.0 - next_unit();
  return scale * std::pow(-std::log(u), 1.0 / shape);
}

}  // namespace rsp::rng
