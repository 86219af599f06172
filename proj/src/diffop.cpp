#include "ellikorn/diffop.hpp"

#include "ellikorn/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace ellikorn {

using json = nlohmann::ordered_json;

Eigen::MatrixXcd DiffOperator::symbol(const Eigen::VectorXcd& xi) const {
  if (xi.size() != n) throw DimensionMismatch("frequency vector length");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_w, dim_v);
  for (const auto& [a, mat] : terms) {
    std::complex<double> mono = 1.0;
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < a[j]; ++t) mono *= xi(j);
    for (int r = 0; r < dim_w; ++r)
      for (int c = 0; c < dim_v; ++c) m(r, c) += mono * to_double(mat[r][c]);
  }
  return m;
}

Eigen::MatrixXd DiffOperator::symbol_real(const Eigen::VectorXd& xi) const {
  if (xi.size() != n) throw DimensionMismatch("frequency vector length");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_w, dim_v);
  for (const auto& [a, mat] : terms) {
    double mono = 1.0;
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < a[j]; ++t) mono *= xi(j);
    for (int r = 0; r < dim_w; ++r)
      for (int c = 0; c < dim_v; ++c) m(r, c) += mono * to_double(mat[r][c]);
  }
  return m;
}

std::vector<std::vector<RatC>> DiffOperator::symbol_exact(
    const std::vector<RatC>& xi) const {
  if (static_cast<int>(xi.size()) != n)
    throw DimensionMismatch("frequency vector length");
  std::vector<std::vector<RatC>> m(dim_w, std::vector<RatC>(dim_v));
  for (const auto& [a, mat] : terms) {
    RatC mono(Rat(1), Rat(0));
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < a[j]; ++t) mono = mono * xi[j];
    for (int r = 0; r < dim_w; ++r)
      for (int c = 0; c < dim_v; ++c) {
        RatC term = mono;
        term.re *= mat[r][c];
        term.im *= mat[r][c];
        m[r][c] += term;
      }
  }
  return m;
}

static void validate(const DiffOperator& op) {
  if (op.n < 1 || op.k < 1 || op.dim_v < 1 || op.dim_w < 1)
    throw MalformedSpec("n, k, dim_v, dim_w must all be >= 1");
  bool any_nonzero = false;
  for (const auto& [a, mat] : op.terms) {
    if (a.dim() != op.n) throw MalformedSpec("multi-index dimension != n");
    if (a.order() != op.k)
      throw InhomogeneousOrder("term " + a.str() + " has order != k");
    if (static_cast<int>(mat.size()) != op.dim_w)
      throw MalformedSpec("matrix row count != dim_w");
    for (const auto& row : mat) {
      if (static_cast<int>(row.size()) != op.dim_v)
        throw MalformedSpec("matrix column count != dim_v");
      for (const auto& x : row)
        if (x != 0) any_nonzero = true;
    }
  }
  if (!any_nonzero) throw ZeroOperator("all coefficient matrices vanish");
}

DiffOperator make_operator(int n, int k, int dim_v, int dim_w,
                           const std::vector<OperatorTerm>& terms,
                           const std::string& name) {
  DiffOperator op;
  op.n = n;
  op.k = k;
  op.dim_v = dim_v;
  op.dim_w = dim_w;
  op.name = name;
  for (const auto& t : terms) {
    RatMat m(t.matrix.size());
    for (size_t r = 0; r < t.matrix.size(); ++r)
      for (double x : t.matrix[r]) m[r].push_back(rat_of(x));
    auto [it, inserted] = op.terms.emplace(t.alpha, std::move(m));
    if (!inserted) throw MalformedSpec("duplicate term " + t.alpha.str());
  }
  validate(op);
  return op;
}

DiffOperator make_operator_exact(int n, int k, int dim_v, int dim_w,
                                 const std::map<MultiIndex, RatMat>& terms,
                                 const std::string& name) {
  DiffOperator op;
  op.n = n;
  op.k = k;
  op.dim_v = dim_v;
  op.dim_w = dim_w;
  op.name = name;
  op.terms = terms;
  validate(op);
  return op;
}

DiffOperator load_operator_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open operator spec " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw MalformedSpec(std::string("operator spec parse error: ") + e.what());
  }
  for (const char* key : {"n", "k", "dim_v", "dim_w", "terms"})
    if (!j.contains(key))
      throw MalformedSpec(std::string("operator spec missing key ") + key);
  int n = j["n"], k = j["k"], dv = j["dim_v"], dw = j["dim_w"];
  std::vector<OperatorTerm> terms;
  for (const auto& jt : j["terms"]) {
    OperatorTerm t;
    std::vector<int> alpha = jt.at("alpha").get<std::vector<int>>();
    if (static_cast<int>(alpha.size()) != n)
      throw MalformedSpec("alpha length != n");
    t.alpha = MultiIndex(alpha);
    t.matrix = jt.at("matrix").get<std::vector<std::vector<double>>>();
    terms.push_back(std::move(t));
  }
  auto op = make_operator(n, k, dv, dw, terms);
  if (j.contains("name")) op.name = j["name"];
  return op;
}

std::string operator_to_json(const DiffOperator& op) {
  json j;
  if (!op.name.empty()) j["name"] = op.name;
  j["n"] = op.n;
  j["k"] = op.k;
  j["dim_v"] = op.dim_v;
  j["dim_w"] = op.dim_w;
  j["terms"] = json::array();
  for (const auto& [a, mat] : op.terms) {
    json jt;
    jt["alpha"] = a.entries();
    std::vector<std::vector<double>> m(mat.size());
    for (size_t r = 0; r < mat.size(); ++r)
      for (const auto& x : mat[r]) m[r].push_back(to_double(x));
    jt["matrix"] = m;
    j["terms"].push_back(jt);
  }
  return j.dump(2);
}

VPolynomial apply_to_polynomial(const DiffOperator& op, const VPolynomial& p) {
  if (p.dim() != op.dim_v) throw DimensionMismatch("polynomial dim != dim_v");
  if (p.n() != op.n) throw DimensionMismatch("polynomial ambient dim != n");
  VPolynomial out(op.n, op.dim_w);
  for (const auto& [beta, mat] : op.terms) {
    for (const auto& [alpha, v] : p.coeffs()) {
      if (!alpha.contains(beta)) continue;
      Rat ff(falling_factorial(alpha, beta));
      MultiIndex gamma = alpha.minus(beta);
      for (int w = 0; w < op.dim_w; ++w) {
        Rat acc(0);
        for (int i = 0; i < op.dim_v; ++i)
          if (mat[w][i] != 0 && v[i] != 0) acc += mat[w][i] * v[i];
        if (acc != 0) out.add_term(gamma, w, ff * acc);
      }
    }
  }
  return out;
}

DiffOperator compose(const DiffOperator& outer, const DiffOperator& inner,
                     const std::string& name) {
  if (outer.dim_v != inner.dim_w)
    throw DimensionMismatch("compose: outer.dim_v != inner.dim_w");
  if (outer.n != inner.n) throw DimensionMismatch("compose: ambient dims");
  std::map<MultiIndex, RatMat> terms;
  for (const auto& [b2, m2] : outer.terms)
    for (const auto& [b1, m1] : inner.terms) {
      MultiIndex g = b1.plus(b2);
      auto& acc = terms
                      .try_emplace(g, RatMat(outer.dim_w,
                                             RatVec(inner.dim_v, Rat(0))))
                      .first->second;
      for (int r = 0; r < outer.dim_w; ++r)
        for (int c = 0; c < inner.dim_v; ++c)
          for (int t = 0; t < outer.dim_v; ++t)
            acc[r][c] += m2[r][t] * m1[t][c];
    }
  // Drop all-zero matrices produced by cancellation.
  for (auto it = terms.begin(); it != terms.end();) {
    bool nz = false;
    for (const auto& row : it->second)
      for (const auto& x : row)
        if (x != 0) nz = true;
    it = nz ? std::next(it) : terms.erase(it);
  }
  return make_operator_exact(inner.n, inner.k + outer.k, inner.dim_v,
                             outer.dim_w, terms, name);
}

}  // namespace ellikorn
