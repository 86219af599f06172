#include "ellikorn/polynomial.hpp"

#include "ellikorn/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ellikorn {

// ---------------------------------------------------------------- rational LA

std::vector<int> rat_rref(RatMat& m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[r]);
    Rat inv = Rat(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  return pivot_cols;
}

std::vector<RatVec> rat_nullspace(const RatMat& m_in, int cols) {
  RatMat m = m_in;
  if (m.empty()) {
    // Zero map: the whole space is the kernel.
    std::vector<RatVec> basis;
    for (int j = 0; j < cols; ++j) {
      RatVec v(cols, Rat(0));
      v[j] = 1;
      basis.push_back(std::move(v));
    }
    return basis;
  }
  auto pivots = rat_rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    RatVec v(cols, Rat(0));
    v[fc] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][fc];
    // Clear denominators so basis vectors are primitive integer vectors.
    BigInt lcm = 1;
    for (const auto& x : v)
      if (x != 0) lcm = boost::multiprecision::lcm(lcm, denominator(x));
    BigInt g = 0;
    for (auto& x : v) {
      x *= Rat(lcm);
      if (x != 0) g = boost::multiprecision::gcd(g, numerator(x));
    }
    if (g > 1)
      for (auto& x : v) x /= Rat(g);
    basis.push_back(std::move(v));
  }
  return basis;
}

int rat_rank(RatMat m) {
  if (m.empty()) return 0;
  return static_cast<int>(rat_rref(m).size());
}

RatVec rat_solve(RatMat a, RatVec b) {
  int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = rat_rref(a);
  if (static_cast<int>(pivots.size()) != n)
    throw SingularGram("linear system is singular");
  RatVec x(n);
  for (int i = 0; i < n; ++i) x[pivots[i]] = a[i][n];
  return x;
}

RatMat rat_inverse(const RatMat& a_in) {
  int n = static_cast<int>(a_in.size());
  RatMat a = a_in;
  for (int i = 0; i < n; ++i) {
    a[i].resize(2 * n, Rat(0));
    a[i][n + i] = 1;
  }
  auto pivots = rat_rref(a);
  if (static_cast<int>(pivots.size()) != n || pivots[n - 1] != n - 1)
    throw SingularGram("matrix is singular");
  RatMat inv(n, RatVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

RatMat rat_matmul(const RatMat& a, const RatMat& b) {
  int ra = static_cast<int>(a.size());
  int ca = ra ? static_cast<int>(a[0].size()) : 0;
  int cb = b.empty() ? 0 : static_cast<int>(b[0].size());
  RatMat c(ra, RatVec(cb, Rat(0)));
  for (int i = 0; i < ra; ++i)
    for (int k = 0; k < ca; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < cb; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

RatVec rat_matvec(const RatMat& a, const RatVec& x) {
  RatVec y(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
  return y;
}

// ---------------------------------------------------------------- VPolynomial

VPolynomial VPolynomial::monomial(int n, const MultiIndex& alpha, int component,
                                  int dim, const Rat& c) {
  VPolynomial p(n, dim);
  p.add_term(alpha, component, c);
  return p;
}

std::optional<int> VPolynomial::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  int d = 0;
  for (const auto& [a, v] : coeffs_) d = std::max(d, a.order());
  return d;
}

RatVec VPolynomial::coeff(const MultiIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  if (it == coeffs_.end()) return RatVec(dim_, Rat(0));
  return it->second;
}

void VPolynomial::add_term(const MultiIndex& alpha, int component, const Rat& c) {
  if (alpha.dim() != n_) throw DimensionMismatch("multi-index dimension");
  if (c == 0) return;
  auto& v = coeffs_.try_emplace(alpha, RatVec(dim_, Rat(0))).first->second;
  v[component] += c;
  if (std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; }))
    coeffs_.erase(alpha);
}

void VPolynomial::add_term(const MultiIndex& alpha, const RatVec& v) {
  for (int i = 0; i < dim_; ++i) add_term(alpha, i, v[i]);
}

VPolynomial VPolynomial::operator+(const VPolynomial& o) const {
  VPolynomial r(*this);
  for (const auto& [a, v] : o.coeffs_) r.add_term(a, v);
  return r;
}

VPolynomial VPolynomial::operator-(const VPolynomial& o) const {
  return *this + o.scaled(Rat(-1));
}

VPolynomial VPolynomial::scaled(const Rat& c) const {
  VPolynomial r(n_, dim_);
  if (c == 0) return r;
  for (const auto& [a, v] : coeffs_) {
    RatVec w(v);
    for (auto& x : w) x *= c;
    r.coeffs_.emplace(a, std::move(w));
  }
  return r;
}

VPolynomial VPolynomial::derivative(int j) const {
  VPolynomial r(n_, dim_);
  for (const auto& [a, v] : coeffs_) {
    if (a[j] == 0) continue;
    std::vector<int> e(a.entries());
    e[j] -= 1;
    Rat f(a[j]);
    MultiIndex am{std::move(e)};
    for (int i = 0; i < dim_; ++i) r.add_term(am, i, f * v[i]);
  }
  return r;
}

VPolynomial VPolynomial::derivative(const MultiIndex& alpha) const {
  VPolynomial r(*this);
  for (int j = 0; j < n_; ++j)
    for (int t = 0; t < alpha[j]; ++t) r = r.derivative(j);
  return r;
}

VPolynomial VPolynomial::homogeneous_part(int l) const {
  VPolynomial r(n_, dim_);
  for (const auto& [a, v] : coeffs_)
    if (a.order() == l) r.coeffs_.emplace(a, v);
  return r;
}

RatVec VPolynomial::evaluate(const RatVec& x) const {
  RatVec out(dim_, Rat(0));
  for (const auto& [a, v] : coeffs_) {
    Rat mono(1);
    for (int j = 0; j < n_; ++j)
      for (int t = 0; t < a[j]; ++t) mono *= x[j];
    for (int i = 0; i < dim_; ++i) out[i] += mono * v[i];
  }
  return out;
}

std::vector<double> VPolynomial::evaluate(const std::vector<double>& x) const {
  std::vector<double> out(dim_, 0.0);
  for (const auto& [a, v] : coeffs_) {
    double mono = 1.0;
    for (int j = 0; j < n_; ++j)
      for (int t = 0; t < a[j]; ++t) mono *= x[j];
    for (int i = 0; i < dim_; ++i) out[i] += mono * to_double(v[i]);
  }
  return out;
}

std::vector<std::complex<double>> VPolynomial::evaluate(
    const std::vector<std::complex<double>>& x) const {
  std::vector<std::complex<double>> out(dim_, 0.0);
  for (const auto& [a, v] : coeffs_) {
    std::complex<double> mono = 1.0;
    for (int j = 0; j < n_; ++j)
      for (int t = 0; t < a[j]; ++t) mono *= x[j];
    for (int i = 0; i < dim_; ++i) out[i] += mono * to_double(v[i]);
  }
  return out;
}

double VPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [a, v] : coeffs_)
    for (const auto& c : v) m = std::max(m, std::abs(to_double(c)));
  return m;
}

std::string VPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, v] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    os << "x^" << a.str() << "*[";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << rat_to_string(v[i]);
    os << "]";
  }
  if (first) os << "0";
  return os.str();
}

DPoly::DPoly(const VPolynomial& p) : dim_(p.dim()) {
  if (p.n() != 2) throw DimensionMismatch("DPoly is a 2-D view");
  for (const auto& [a, v] : p.coeffs()) {
    Term t;
    t.px = a[0];
    t.py = a[1];
    for (const auto& x : v) t.c.push_back(to_double(x));
    terms_.push_back(std::move(t));
  }
}

void DPoly::eval_add(double x, double y, double scale, double* out) const {
  for (const auto& t : terms_) {
    double mono = scale;
    for (int q = 0; q < t.px; ++q) mono *= x;
    for (int q = 0; q < t.py; ++q) mono *= y;
    for (int c = 0; c < dim_; ++c) out[c] += mono * t.c[c];
  }
}

std::vector<double> DPoly::eval(double x, double y) const {
  std::vector<double> out(dim_, 0.0);
  eval_add(x, y, 1.0, out.data());
  return out;
}

RatVec monomial_coordinates(const VPolynomial& p,
                            const std::vector<MultiIndex>& basis_mis) {
  RatVec out(basis_mis.size() * p.dim(), Rat(0));
  for (size_t t = 0; t < basis_mis.size(); ++t) {
    RatVec c = p.coeff(basis_mis[t]);
    for (int i = 0; i < p.dim(); ++i) out[t * p.dim() + i] = c[i];
  }
  return out;
}

VPolynomial from_monomial_coordinates(int n, int dim,
                                      const std::vector<MultiIndex>& basis_mis,
                                      const RatVec& coords) {
  VPolynomial p(n, dim);
  for (size_t t = 0; t < basis_mis.size(); ++t)
    for (int i = 0; i < dim; ++i) p.add_term(basis_mis[t], i, coords[t * dim + i]);
  return p;
}

}  // namespace ellikorn
