#include "phi3/wick/hermite.hpp"

#include <cmath>
#include <string>

#include "phi3/errors.hpp"

namespace phi3::wick {

namespace {

// Minimal double-double arithmetic (Dekker / Knuth error-free transforms).
struct DD {
  double hi;
  double lo;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DD neg(DD a) { return {-a.hi, -a.lo}; }

DD mul(DD a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

double round(DD a) { return a.hi + a.lo; }

void check_degree(int k) {
  if (k < 1 || k > 3) throw UnsupportedDegree("Hermite degree " + std::to_string(k) + " is not supported");
}

// x^2 - c
DD h2(double x, DD c) { return add(two_prod(x, x), neg(c)); }

// x (x^2 - 3 c)
DD h3(double x, DD c) { return mul(add(two_prod(x, x), neg(mul(c, 3.0))), x); }

}  // namespace

double hermite(int k, double x, double c) {
  check_degree(k);
  switch (k) {
    case 1:
      return x;
    case 2:
      return round(h2(x, {c, 0.0}));
    default:
      return round(h3(x, {c, 0.0}));
  }
}

double recenter(int k, double x, double c1, double c2) {
  check_degree(k);
  const DD shift = two_sum(c1, -c2);  // exact c1 - c2
  switch (k) {
    case 1:
      return x;
    case 2:
      return round(add(h2(x, {c2, 0.0}), neg(shift)));
    default:
      return round(add(h3(x, {c2, 0.0}), neg(mul(mul(shift, 3.0), x))));
  }
}

}  // namespace phi3::wick
