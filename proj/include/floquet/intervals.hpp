#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace floquet {

// Real interval with independently open or closed endpoints. A zero-width
// interval is nonempty only when both endpoints are closed (a single point);
// satellite intervals degenerate to such points when the coefficient norm is 0.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = false;
  bool closed_hi = false;

  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval half_open(double a, double b) { return {a, b, true, false}; }
  static Interval point(double a) { return {a, a, true, true}; }

  double width() const { return hi - lo; }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(closed_lo && closed_hi);
    return false;
  }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !closed_lo) return false;
    if (x == hi && !closed_hi) return false;
    return true;
  }

  // True when the other interval lies inside this one (endpoint flags respected).
  bool covers(const Interval& o) const {
    if (o.empty()) return true;
    if (empty()) return false;
    const bool lo_ok = (o.lo > lo) || (o.lo == lo && (closed_lo || !o.closed_lo));
    const bool hi_ok = (o.hi < hi) || (o.hi == hi && (closed_hi || !o.closed_hi));
    return lo_ok && hi_ok;
  }

  std::string str() const {
    std::string s(closed_lo ? "[" : "(");
    s += std::to_string(lo) + ", " + std::to_string(hi);
    s += closed_hi ? "]" : ")";
    return s;
  }
};

// Zero-slack disjointness: touching endpoints count as overlap only when both
// touching endpoints are closed. Implemented as emptiness of the exact intersection.
inline bool disjoint(const Interval& a, const Interval& b) {
  if (a.empty() || b.empty()) return true;
  Interval inter;
  if (a.lo > b.lo) {
    inter.lo = a.lo;
    inter.closed_lo = a.closed_lo;
  } else if (b.lo > a.lo) {
    inter.lo = b.lo;
    inter.closed_lo = b.closed_lo;
  } else {
    inter.lo = a.lo;
    inter.closed_lo = a.closed_lo && b.closed_lo;
  }
  if (a.hi < b.hi) {
    inter.hi = a.hi;
    inter.closed_hi = a.closed_hi;
  } else if (b.hi < a.hi) {
    inter.hi = b.hi;
    inter.closed_hi = b.closed_hi;
  } else {
    inter.hi = a.hi;
    inter.closed_hi = a.closed_hi && b.closed_hi;
  }
  return inter.empty();
}

}  // namespace floquet
