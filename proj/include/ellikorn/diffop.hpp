#pragma once

#include "ellikorn/polynomial.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>

namespace ellikorn {

// Homogeneous k-th order constant-coefficient operator A = sum_{|a|=k} A_a d^a
// between V = R^dim_v and W = R^dim_w. Matrices are stored exactly; doubles
// from operator spec files are converted bit-exactly to dyadic rationals.
struct DiffOperator {
  int n = 0, k = 0, dim_v = 0, dim_w = 0;
  std::map<MultiIndex, RatMat> terms;  // dim_w x dim_v each, all |alpha| = k
  std::string name;

  Eigen::MatrixXcd symbol(const Eigen::VectorXcd& xi) const;
  Eigen::MatrixXd symbol_real(const Eigen::VectorXd& xi) const;
  // Exact symbol evaluation over complex rationals.
  std::vector<std::vector<RatC>> symbol_exact(const std::vector<RatC>& xi) const;
};

struct OperatorTerm {
  MultiIndex alpha;
  std::vector<std::vector<double>> matrix;  // dim_w rows, dim_v cols
};

DiffOperator make_operator(int n, int k, int dim_v, int dim_w,
                           const std::vector<OperatorTerm>& terms,
                           const std::string& name = "");
DiffOperator make_operator_exact(int n, int k, int dim_v, int dim_w,
                                 const std::map<MultiIndex, RatMat>& terms,
                                 const std::string& name = "");
DiffOperator load_operator_json(const std::string& path);
std::string operator_to_json(const DiffOperator& op);

// Exact coefficient arithmetic; homogeneous input of degree l yields
// homogeneous output of degree l-k (zero when l < k).
VPolynomial apply_to_polynomial(const DiffOperator& op, const VPolynomial& p);

// C_gamma = sum_{b1+b2=gamma} B_{b2} A_{b1}; outer.dim_v must equal inner.dim_w.
DiffOperator compose(const DiffOperator& outer, const DiffOperator& inner,
                     const std::string& name = "");

}  // namespace ellikorn
