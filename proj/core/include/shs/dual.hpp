#pragma once

#include <cmath>

namespace shs {

// Value and directional derivative, propagated by forward-mode AD.
// Arithmetic follows the chain rule exactly; the only error source left is
// floating-point rounding. Domain checking is the evaluator's job, not ours.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;
};

inline Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
inline Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
inline Dual operator-(Dual a) { return {-a.value, -a.deriv}; }

inline Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.value * b.deriv + a.deriv * b.value};
}

inline Dual operator/(Dual a, Dual b) {
  const double v = a.value / b.value;
  return {v, (a.deriv - v * b.deriv) / b.value};
}

inline Dual sin(Dual a) { return {std::sin(a.value), std::cos(a.value) * a.deriv}; }
inline Dual cos(Dual a) { return {std::cos(a.value), -std::sin(a.value) * a.deriv}; }
inline Dual exp(Dual a) {
  const double v = std::exp(a.value);
  return {v, v * a.deriv};
}
inline Dual log(Dual a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(Dual a) {
  const double v = std::sqrt(a.value);
  return {v, a.deriv / (2.0 * v)};
}
inline Dual tanh(Dual a) {
  const double v = std::tanh(a.value);
  return {v, (1.0 - v * v) * a.deriv};
}

}  // namespace shs
