#pragma once

#include <complex>

namespace trigfront {

// First-order forward-mode number over ℂ: v + d·ε with ε² = 0.
// All functions fed through it are holomorphic, so d is the complex derivative.
struct Dual {
  std::complex<double> v{}, d{};

  Dual() = default;
  Dual(std::complex<double> value, std::complex<double> deriv = {}) : v(value), d(deriv) {}
  Dual(double value) : v(value) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual exp(const Dual& a) {
  auto e = std::exp(a.v);
  return {e, e * a.d};
}

inline std::complex<double> value_of(const std::complex<double>& z) { return z; }
inline std::complex<double> value_of(const Dual& z) { return z.v; }

}  // namespace trigfront
