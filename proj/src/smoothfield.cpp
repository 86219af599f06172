#include "ellikorn/smoothfield.hpp"

#include <cmath>

namespace ellikorn {

SmoothField SmoothField::bump(int comps, int component, double amplitude,
                              double cx, double cy, double width) {
  SmoothField f(comps);
  GaussTerm t;
  t.poly = VPolynomial::monomial(2, MultiIndex::zero(2), component, comps,
                                 rat_of(amplitude));
  t.ax = 1.0 / (2 * width * width);
  t.ay = t.ax;
  t.cx = cx;
  t.cy = cy;
  f.add_term(std::move(t));
  return f;
}

void SmoothField::add_term(GaussTerm t) {
  if (!t.poly.is_zero()) terms_.push_back(std::move(t));
}

std::vector<double> SmoothField::value(double x, double y) const {
  std::vector<double> out(comps_, 0.0);
  for (const auto& t : terms_) {
    double e = std::exp(-t.ax * (x - t.cx) * (x - t.cx) -
                        t.ay * (y - t.cy) * (y - t.cy) - t.ky * y);
    if (t.kx != 0.0 || t.phase != 0.0) e *= std::cos(t.kx * x + t.phase);
    if (e == 0.0) continue;
    auto pv = t.poly.evaluate(std::vector<double>{x, y});
    for (int c = 0; c < comps_; ++c) out[c] += e * pv[c];
  }
  return out;
}

SmoothField SmoothField::harmonic_mode(double k, double y_window) {
  SmoothField f(1);
  GaussTerm t;
  t.poly = VPolynomial::monomial(2, MultiIndex::zero(2), 0, 1, Rat(1));
  t.ax = 0.0;
  t.ay = 1.0 / (2 * y_window * y_window);
  t.cx = 0.0;
  t.cy = 0.0;
  t.kx = k;
  t.ky = k;
  f.add_term(std::move(t));
  return f;
}

std::vector<double> SmoothField::value_periodic(double x, double y,
                                                double period_x) const {
  std::vector<double> out(comps_, 0.0);
  for (int img = -1; img <= 1; ++img) {
    auto v = value(x + img * period_x, y);
    for (int c = 0; c < comps_; ++c) out[c] += v[c];
  }
  return out;
}

static VPolynomial shift_multiply(const VPolynomial& p, int axis, double center) {
  // p * (x_axis - center)
  VPolynomial out(p.n(), p.dim());
  Rat c = rat_of(center);
  for (const auto& [a, v] : p.coeffs()) {
    out.add_term(a.plus_unit(axis), v);
    RatVec w(v);
    for (auto& x : w) x *= -c;
    out.add_term(a, w);
  }
  return out;
}

SmoothField SmoothField::derivative(int j) const {
  SmoothField out(comps_);
  for (const auto& t : terms_) {
    GaussTerm d = t;
    double a2 = j == 0 ? 2 * t.ax : 2 * t.ay;
    d.poly = t.poly.derivative(j) +
             shift_multiply(t.poly, j, j == 0 ? t.cx : t.cy).scaled(rat_of(-a2));
    if (j == 1 && t.ky != 0.0)
      d.poly = d.poly + t.poly.scaled(rat_of(-t.ky));
    out.add_term(std::move(d));
    if (j == 0 && t.kx != 0.0) {
      // d/dx cos(kx x + phase) = kx cos(kx x + phase + pi/2)
      GaussTerm osc = t;
      osc.phase = t.phase + M_PI / 2;
      osc.poly = t.poly.scaled(rat_of(t.kx));
      out.add_term(std::move(osc));
    }
  }
  return out;
}

SmoothField SmoothField::derivative(const MultiIndex& alpha) const {
  SmoothField out = *this;
  for (int j = 0; j < 2; ++j)
    for (int t = 0; t < alpha[j]; ++t) out = out.derivative(j);
  return out;
}

SmoothField SmoothField::scaled(double s) const {
  SmoothField out(comps_);
  for (const auto& t : terms_) {
    GaussTerm g = t;
    g.poly = t.poly.scaled(rat_of(s));
    out.add_term(std::move(g));
  }
  return out;
}

SmoothField SmoothField::operator+(const SmoothField& o) const {
  SmoothField out = *this;
  for (const auto& t : o.terms_) out.add_term(t);
  return out;
}

SmoothField SmoothField::linear_map(
    const std::vector<std::vector<double>>& m) const {
  int out_c = static_cast<int>(m.size());
  SmoothField out(out_c);
  for (const auto& t : terms_) {
    GaussTerm g = t;
    g.poly = VPolynomial(2, out_c);
    for (const auto& [a, v] : t.poly.coeffs())
      for (int r = 0; r < out_c; ++r) {
        Rat acc(0);
        for (int c = 0; c < comps_; ++c) acc += rat_of(m[r][c]) * v[c];
        g.poly.add_term(a, r, acc);
      }
    out.add_term(std::move(g));
  }
  return out;
}

SmoothField apply_operator(const DiffOperator& op, const SmoothField& u) {
  SmoothField out(op.dim_w);
  for (const auto& [alpha, mat] : op.terms) {
    std::vector<std::vector<double>> m(op.dim_w,
                                       std::vector<double>(op.dim_v, 0.0));
    for (int r = 0; r < op.dim_w; ++r)
      for (int c = 0; c < op.dim_v; ++c) m[r][c] = to_double(mat[r][c]);
    out = out + u.derivative(alpha).linear_map(m);
  }
  return out;
}

SmoothField polynomial_times_bump(const VPolynomial& p, double cx, double cy,
                                  double width) {
  SmoothField f(p.dim());
  GaussTerm t;
  t.poly = p;
  t.ax = 1.0 / (2 * width * width);
  t.ay = t.ax;
  t.cx = cx;
  t.cy = cy;
  f.add_term(std::move(t));
  return f;
}

}  // namespace ellikorn
