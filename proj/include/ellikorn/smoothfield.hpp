#pragma once

#include "ellikorn/diffop.hpp"

#include <vector>

namespace ellikorn {

// Finite sums of (vector polynomial) x (anisotropic Gaussian) terms: closed
// under differentiation, so A u and d^alpha u are available in closed form on
// test families.
struct GaussTerm {
  VPolynomial poly{2, 1};  // dim = field components
  double ax = 1.0, ay = 1.0;
  double cx = 0.0, cy = 0.0;
  // Optional modulation cos(kx x + phase) exp(-ky y): carries the decaying
  // half-space harmonic modes.
  double kx = 0.0, phase = 0.0, ky = 0.0;
};

class SmoothField {
public:
  SmoothField(int comps = 1) : comps_(comps) {}
  static SmoothField bump(int comps, int component, double amplitude,
                          double cx, double cy, double width);
  // cos(k x) e^{-k y} times a gaussian y-window anchored at the boundary.
  static SmoothField harmonic_mode(double k, double y_window);

  int comps() const { return comps_; }
  const std::vector<GaussTerm>& terms() const { return terms_; }
  void add_term(GaussTerm t);
  bool empty() const { return terms_.empty(); }

  std::vector<double> value(double x, double y) const;
  // Periodic evaluation: images shifted by multiples of period_x.
  std::vector<double> value_periodic(double x, double y, double period_x) const;

  SmoothField derivative(int j) const;
  SmoothField derivative(const MultiIndex& alpha) const;
  SmoothField scaled(double s) const;
  SmoothField operator+(const SmoothField& o) const;
  // component map: out_c = sum_i M[c][i] * in_i
  SmoothField linear_map(const std::vector<std::vector<double>>& m) const;

private:
  int comps_;
  std::vector<GaussTerm> terms_;
};

// A u as a closed-form field with dim_w components.
SmoothField apply_operator(const DiffOperator& op, const SmoothField& u);

// Cutoff * sampled polynomial (e.g. kernel fields times a bump).
SmoothField polynomial_times_bump(const VPolynomial& p, double cx, double cy,
                                  double width);

}  // namespace ellikorn
