#include "ellikorn/gallery.hpp"

#include "ellikorn/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace ellikorn {

DiffOperator op_gradient(int n, int components) {
  return op_gradient_k(n, 1, components);
}

DiffOperator op_gradient_k(int n, int k, int components) {
  // Rows indexed by (alpha, c) with |alpha| = k, weighted sqrt(k!/alpha!) so
  // |A[xi]v| = |xi|^k |v|.
  auto alphas = multiindices_of_order(n, k);
  int dim_w = static_cast<int>(alphas.size()) * components;
  std::vector<OperatorTerm> terms;
  for (size_t a = 0; a < alphas.size(); ++a) {
    OperatorTerm t;
    t.alpha = alphas[a];
    t.matrix.assign(dim_w, std::vector<double>(components, 0.0));
    double w = std::sqrt(to_double(Rat(factorial(k)) / Rat(mi_factorial(alphas[a]))));
    for (int c = 0; c < components; ++c)
      t.matrix[a * components + c][c] = w;
    terms.push_back(std::move(t));
  }
  std::string name = k == 1 ? "gradient" : "gradient_k" + std::to_string(k);
  return make_operator(n, k, components, dim_w, terms, name);
}

DiffOperator op_sym_gradient(int n) {
  // W-coordinates: (e_11, ..., e_nn, sqrt(2) e_ij for i<j).
  int dim_w = n * (n + 1) / 2;
  std::vector<std::pair<int, int>> rows;
  for (int i = 0; i < n; ++i) rows.emplace_back(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) rows.emplace_back(i, j);
  std::vector<OperatorTerm> terms(n);
  for (int d = 0; d < n; ++d) {
    terms[d].alpha = MultiIndex::unit(n, d);
    terms[d].matrix.assign(dim_w, std::vector<double>(n, 0.0));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (size_t r = 0; r < rows.size(); ++r) {
    auto [i, j] = rows[r];
    if (i == j) {
      terms[i].matrix[r][i] = 1.0;  // eps_ii = d_i u_i
    } else {
      // sqrt(2) eps_ij = (d_i u_j + d_j u_i)/sqrt(2)
      terms[i].matrix[r][j] += s;
      terms[j].matrix[r][i] += s;
    }
  }
  return make_operator(n, 1, n, dim_w, terms, "sym_gradient");
}

DiffOperator op_dev_sym_gradient(int n) {
  if (n < 2) throw MalformedSpec("dev_sym_gradient needs n >= 2");
  // Orthonormal basis of trace-free symmetric matrices: n-1 diagonal
  // directions D_m = (e_11+...+e_mm - m e_{m+1,m+1}) / sqrt(m(m+1)), plus
  // sqrt(2) e_ij for i<j.
  int dim_w = n * (n + 1) / 2 - 1;
  std::vector<OperatorTerm> terms(n);
  for (int d = 0; d < n; ++d) {
    terms[d].alpha = MultiIndex::unit(n, d);
    terms[d].matrix.assign(dim_w, std::vector<double>(n, 0.0));
  }
  // eps(u)_ab coefficients: contribution of d_d u_c to eps_ab is
  // (delta_{da} delta_{cb} + delta_{db} delta_{ca}) / 2; deviatoric part
  // subtracts div(u)/n on the diagonal.
  int r = 0;
  for (int m = 1; m < n; ++m, ++r) {
    double norm = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
    // row value = sum_{a<=m-1... } diag weights: +1 for a<m, -m for a=m.
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c) {
        if (d != c) continue;  // diagonal eps entries only involve d_a u_a
        double w = 0.0;
        for (int a = 0; a < n; ++a) {
          double diag_weight = a < m ? 1.0 : (a == m ? -static_cast<double>(m) : 0.0);
          if (diag_weight == 0.0) continue;
          // eps^D_aa = d_a u_a - div(u)/n
          double contrib = (a == d ? 1.0 : 0.0) - 1.0 / n;
          w += diag_weight * contrib;
        }
        terms[d].matrix[r][c] += norm * w;
      }
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++r) {
      terms[i].matrix[r][j] += s;
      terms[j].matrix[r][i] += s;
    }
  return make_operator(n, 1, n, dim_w, terms, "dev_sym_gradient");
}

DiffOperator op_laplacian(int n) {
  OperatorTerm t;
  std::vector<OperatorTerm> terms;
  for (int d = 0; d < n; ++d) {
    std::vector<int> e(n, 0);
    e[d] = 2;
    OperatorTerm td;
    td.alpha = MultiIndex(e);
    td.matrix = {{1.0}};
    terms.push_back(td);
  }
  return make_operator(n, 2, 1, 1, terms, "laplacian");
}

DiffOperator op_grad_dev_sym(int n) {
  DiffOperator inner = op_dev_sym_gradient(n);
  DiffOperator outer = op_gradient(n, inner.dim_w);
  auto composed = compose(outer, inner, "grad_dev_sym");
  return composed;
}

std::vector<GalleryEntry> gallery() {
  std::vector<GalleryEntry> g;
  g.push_back({"grad_2d.json", op_gradient(2), "c_elliptic", 1});
  g.push_back({"hessian_2d.json", op_gradient_k(2, 2), "c_elliptic", 2});
  g.push_back({"grad3_2d.json", op_gradient_k(2, 3), "c_elliptic", 3});
  g.push_back({"sym_grad_2d.json", op_sym_gradient(2), "c_elliptic", 2});
  g.push_back({"sym_grad_3d.json", op_sym_gradient(3), "c_elliptic", 2});
  g.push_back({"eps_dev_2d.json", op_dev_sym_gradient(2), "not_c_elliptic", -1});
  g.push_back({"eps_dev_3d.json", op_dev_sym_gradient(3), "c_elliptic", 3});
  g.push_back({"laplacian_2d.json", op_laplacian(2), "not_c_elliptic", -1});
  g.push_back({"grad_eps_dev_3d.json", op_grad_dev_sym(3), "c_elliptic", 3});
  return g;
}

std::vector<std::string> write_gallery(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::vector<std::string> files;
  for (const auto& e : gallery()) {
    auto path = std::filesystem::path(dir) / e.file;
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(operator_to_json(e.op));
    j["expected_verdict"] = e.expected_verdict;
    if (e.expected_deg_p >= 0) j["expected_deg_p"] = e.expected_deg_p;
    out << j.dump(2) << "\n";
    files.push_back(path.string());
  }
  return files;
}

}  // namespace ellikorn
