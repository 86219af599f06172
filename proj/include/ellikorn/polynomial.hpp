#pragma once

#include "ellikorn/multiindex.hpp"
#include "ellikorn/rational.hpp"

#include <complex>
#include <map>
#include <optional>
#include <vector>

namespace ellikorn {

// Vector-valued multivariate polynomial in monomial coordinates with exact
// rational coefficients. Zero coefficient vectors are never stored, so the
// degree of the zero polynomial is the distinguished -infinity tag
// (std::nullopt), never -1.
class VPolynomial {
public:
  VPolynomial(int n, int dim) : n_(n), dim_(dim) {}
  static VPolynomial monomial(int n, const MultiIndex& alpha, int component,
                              int dim, const Rat& c = Rat(1));

  int n() const { return n_; }
  int dim() const { return dim_; }
  bool is_zero() const { return coeffs_.empty(); }
  // -infinity sentinel: nullopt for the zero polynomial.
  std::optional<int> degree() const;

  const std::map<MultiIndex, RatVec>& coeffs() const { return coeffs_; }
  RatVec coeff(const MultiIndex& alpha) const;
  void add_term(const MultiIndex& alpha, int component, const Rat& c);
  void add_term(const MultiIndex& alpha, const RatVec& v);

  VPolynomial operator+(const VPolynomial& o) const;
  VPolynomial operator-(const VPolynomial& o) const;
  VPolynomial scaled(const Rat& c) const;
  // d/dx_j, exact.
  VPolynomial derivative(int j) const;
  VPolynomial derivative(const MultiIndex& alpha) const;
  // Homogeneous part of degree l.
  VPolynomial homogeneous_part(int l) const;

  RatVec evaluate(const RatVec& x) const;
  std::vector<double> evaluate(const std::vector<double>& x) const;
  std::vector<std::complex<double>> evaluate(
      const std::vector<std::complex<double>>& x) const;

  double max_abs_coeff() const;
  std::string str() const;

private:
  int n_, dim_;
  std::map<MultiIndex, RatVec> coeffs_;
};

// Exact L2-type pairing sum_i sum_{a,b} p_a[i] q_b[i] mu(a+b) for a caller
// supplied moment functional mu.
template <typename MomentFn>
Rat pair_with_moments(const VPolynomial& p, const VPolynomial& q,
                      MomentFn&& mu) {
  Rat acc(0);
  for (const auto& [a, pv] : p.coeffs())
    for (const auto& [b, qv] : q.coeffs()) {
      Rat dot(0);
      for (int i = 0; i < p.dim(); ++i) dot += pv[i] * qv[i];
      if (dot != 0) acc += dot * mu(a.plus(b));
    }
  return acc;
}

// Coordinates of p in the monomial basis (basis_mis x dim layout, row-major
// over (alpha, component)).
RatVec monomial_coordinates(const VPolynomial& p,
                            const std::vector<MultiIndex>& basis_mis);
VPolynomial from_monomial_coordinates(int n, int dim,
                                      const std::vector<MultiIndex>& basis_mis,
                                      const RatVec& coords);

// Double-coefficient view of a 2-D polynomial for grid-scale loops (the exact
// coefficients convert once, not per evaluation).
class DPoly {
public:
  DPoly() = default;
  explicit DPoly(const VPolynomial& p);
  int dim() const { return dim_; }
  void eval_add(double x, double y, double scale, double* out) const;
  std::vector<double> eval(double x, double y) const;

private:
  struct Term {
    int px, py;
    std::vector<double> c;
  };
  int dim_ = 0;
  std::vector<Term> terms_;
};

}  // namespace ellikorn
