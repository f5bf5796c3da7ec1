// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Forward-mode dual numbers. Nesting Dual<Dual<double>> gives exact second
// derivatives, three levels give third derivatives.

#pragma once

#include <array>
#include <cmath>

namespace ndeq::ad {

template <typename T>
struct Dual {
  T v{};
  T d{};
  Dual() = default;
  Dual(double x) : v(x), d(0.0) {}  // NOLINT: implicit lift of constants
  Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <typename T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <typename T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <typename T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <typename T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <typename T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
template <typename T> Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <typename T> Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <typename T> Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <typename T> Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <typename T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <typename T> Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <typename T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }

using std::atan2;
using std::cos;
using std::pow;
using std::sin;
using std::sqrt;

template <typename T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), a.d * cos(a.v)}; }
template <typename T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -(a.d * sin(a.v))}; }
template <typename T> Dual<T> sqrt(const Dual<T>& a) {
  const T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <typename T> Dual<T> pow(const Dual<T>& a, double p) {
  return {pow(a.v, p), p * pow(a.v, p - 1.0) * a.d};
}
template <typename T> Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  const T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

inline double value(double x) { return x; }
template <typename T> double value(const Dual<T>& x) { return value(x.v); }

// Seeds a variable: value x with unit derivative at the outermost level.
template <typename T> Dual<T> variable(const T& x) { return {x, T(1.0)}; }

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

// Partial derivatives of a scalar function of three variables. `f` is a
// generic callable taking std::array<D, 3> and returning D.
template <typename F>
double partial1(const F& f, const std::array<double, 3>& x, int i) {
  std::array<D1, 3> a;
  for (int c = 0; c < 3; ++c) a[c] = D1(x[c], c == i ? 1.0 : 0.0);
  return f(a).d;
}

template <typename F>
double partial2(const F& f, const std::array<double, 3>& x, int i, int j) {
  std::array<D2, 3> a;
  for (int c = 0; c < 3; ++c) a[c] = D2(D1(x[c], c == i ? 1.0 : 0.0), D1(c == j ? 1.0 : 0.0, 0.0));
  return f(a).d.d;
}

template <typename F>
double partial3(const F& f, const std::array<double, 3>& x, int i, int j, int k) {
  std::array<D3, 3> a;
  for (int c = 0; c < 3; ++c) {
    a[c] = D3(D2(D1(x[c], c == i ? 1.0 : 0.0), D1(c == j ? 1.0 : 0.0, 0.0)),
              D2(D1(c == k ? 1.0 : 0.0, 0.0), D1(0.0, 0.0)));
  }
  return f(a).d.d.d;
}

template <typename F>
double partial4(const F& f, const std::array<double, 3>& x, int i, int j, int k, int l) {
  std::array<D4, 3> a;
  for (int c = 0; c < 3; ++c) {
    const D3 base(D2(D1(x[c], c == i ? 1.0 : 0.0), D1(c == j ? 1.0 : 0.0, 0.0)),
                  D2(D1(c == k ? 1.0 : 0.0, 0.0), D1(0.0, 0.0)));
    a[c] = D4(base, D3(D2(D1(c == l ? 1.0 : 0.0, 0.0), D1(0.0, 0.0)), D2(D1(0.0, 0.0), D1(0.0, 0.0))));
  }
  return f(a).d.d.d.d;
}

}  // namespace ndeq::ad
