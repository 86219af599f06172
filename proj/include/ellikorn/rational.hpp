#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ellikorn {

// Exact rational scalar used for every piece of polynomial-space linear
// algebra. C-ellipticity verdicts, kernel bases and projection matrices must
// not depend on round-off, so floats only enter in grid/quadrature paths.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_of(double x) {
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  auto mi = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mi);
  if (exp >= 0)
    r *= Rat(BigInt(1) << exp);
  else
    r /= Rat(BigInt(1) << (-exp));
  return r;
}

inline Rat rat_of(std::int64_t n) { return Rat(n); }
inline Rat rat_frac(std::int64_t p, std::int64_t q) { return Rat(p) / Rat(q); }

inline std::string rat_to_string(const Rat& r) { return r.str(); }

// Complex number with exact rational parts; used for certified witness checks.
struct RatC {
  Rat re{0}, im{0};
  RatC() = default;
  RatC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit RatC(const Rat& r) : re(r), im(0) {}
  RatC operator+(const RatC& o) const { return {re + o.re, im + o.im}; }
  RatC operator-(const RatC& o) const { return {re - o.re, im - o.im}; }
  RatC operator*(const RatC& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  RatC& operator+=(const RatC& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Rat norm2() const { return re * re + im * im; }
};

using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> rat_rref(RatMat& m);

// Basis of the right nullspace of m (each vector has cols(m) entries),
// normalized to primitive integer vectors for readability.
std::vector<RatVec> rat_nullspace(const RatMat& m, int cols);

int rat_rank(RatMat m);

// Solves a*x = b for square a; throws SingularGram if singular.
RatVec rat_solve(RatMat a, RatVec b);
RatMat rat_inverse(const RatMat& a);

RatMat rat_matmul(const RatMat& a, const RatMat& b);
RatVec rat_matvec(const RatMat& a, const RatVec& x);

}  // namespace ellikorn
