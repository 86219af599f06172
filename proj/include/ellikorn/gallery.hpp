#pragma once

#include "ellikorn/diffop.hpp"

#include <string>
#include <vector>

namespace ellikorn {

// Built-in operators. Symmetric/trace-free targets use orthonormal
// W-coordinates (off-diagonal components scaled by sqrt(2)) so Euclidean
// norms on W match Frobenius norms.
DiffOperator op_gradient(int n, int components = 1);       // D
DiffOperator op_gradient_k(int n, int k, int components = 1);  // D^k
DiffOperator op_sym_gradient(int n);                       // epsilon
DiffOperator op_dev_sym_gradient(int n);                   // epsilon^D
DiffOperator op_laplacian(int n);                          // scalar Delta
DiffOperator op_grad_dev_sym(int n);                       // D eps^D

struct GalleryEntry {
  std::string file;
  DiffOperator op;
  std::string expected_verdict;  // "c_elliptic" | "not_c_elliptic"
  int expected_deg_p = -1;       // -1: not applicable
};

// The nine built-in spec files with documented expected verdicts.
std::vector<GalleryEntry> gallery();

// Writes all gallery spec files into dir; returns the file names.
std::vector<std::string> write_gallery(const std::string& dir);

}  // namespace ellikorn
