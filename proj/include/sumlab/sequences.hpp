#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sumlab {

using SetPredicate = std::function<bool(std::uint64_t)>;

// Deterministic lazy sequence: gen(n) for n >= 1, with the candidate limit the
// convergence tests measure residuals against. hint_blocks carries witness
// block indices for constructed counterexamples (empty otherwise).
struct SequenceSpec {
  std::string name;
  double limit = 0.0;
  std::function<double(std::uint64_t)> gen;
  std::vector<std::size_t> hint_blocks;

  double operator()(std::uint64_t n) const { return gen(n); }
};

inline bool is_perfect_square(std::uint64_t n) {
  const auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  for (std::uint64_t c = (r > 0 ? r - 1 : 0); c <= r + 1; ++c)
    if (c * c == n) return true;
  return false;
}

inline bool is_perfect_cube(std::uint64_t n) {
  const auto r = static_cast<std::uint64_t>(std::llround(std::cbrt(static_cast<double>(n))));
  for (std::uint64_t c = (r > 0 ? r - 1 : 0); c <= r + 1; ++c)
    if (c * c * c == n) return true;
  return false;
}

inline bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline SetPredicate set_evens() {
  return [](std::uint64_t n) { return n % 2 == 0; };
}
inline SetPredicate set_odds() {
  return [](std::uint64_t n) { return n % 2 == 1; };
}
inline SetPredicate set_squares() {
  return [](std::uint64_t n) { return is_perfect_square(n); };
}
inline SetPredicate set_cubes() {
  return [](std::uint64_t n) { return is_perfect_cube(n); };
}
inline SetPredicate set_pow2() {
  return [](std::uint64_t n) { return is_power_of_two(n); };
}

inline SequenceSpec seq_zero() {
  return {"zero", 0.0, [](std::uint64_t) { return 0.0; }, {}};
}
inline SequenceSpec seq_const(double c, std::string name = "const") {
  return {std::move(name), c, [c](std::uint64_t) { return c; }, {}};
}
inline SequenceSpec seq_inv_square() {
  return {"inv_square", 0.0,
          [](std::uint64_t n) { return 1.0 / (static_cast<double>(n) * static_cast<double>(n)); },
          {}};
}
inline SequenceSpec seq_harmonic() {
  return {"harmonic", 0.0, [](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, {}};
}
inline SequenceSpec seq_inv_log() {
  return {"inv_log", 0.0,
          [](std::uint64_t n) { return 1.0 / std::log(static_cast<double>(n) + 1.0); }, {}};
}
inline SequenceSpec seq_alt_inv_sqrt() {
  return {"alt_inv_sqrt", 0.0,
          [](std::uint64_t n) {
            const double v = 1.0 / std::sqrt(static_cast<double>(n));
            return (n % 2 == 0) ? v : -v;
          },
          {}};
}
inline SequenceSpec seq_indicator(SetPredicate pred, std::string name) {
  return {std::move(name), 0.0,
          [p = std::move(pred)](std::uint64_t n) { return p(n) ? 1.0 : 0.0; }, {}};
}
inline SequenceSpec seq_chi_evens() { return seq_indicator(set_evens(), "chi_evens"); }
inline SequenceSpec seq_chi_squares() { return seq_indicator(set_squares(), "chi_squares"); }
inline SequenceSpec seq_chi_cubes() { return seq_indicator(set_cubes(), "chi_cubes"); }
inline SequenceSpec seq_chi_pow2() { return seq_indicator(set_pow2(), "chi_pow2"); }

}  // namespace sumlab
