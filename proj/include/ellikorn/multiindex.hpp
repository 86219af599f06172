#pragma once

#include "ellikorn/rational.hpp"

#include <compare>
#include <vector>

namespace ellikorn {

// Multi-index alpha in N_0^n; the order |alpha| is derived, never stored.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zero(int n);
  static MultiIndex unit(int n, int j);

  int dim() const { return static_cast<int>(e_.size()); }
  int order() const;
  int operator[](int i) const { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  auto operator<=>(const MultiIndex& o) const { return e_ <=> o.e_; }

  // Componentwise beta <= alpha.
  bool contains(const MultiIndex& beta) const;
  MultiIndex plus(const MultiIndex& o) const;
  MultiIndex plus_unit(int j) const;
  // Requires contains(o).
  MultiIndex minus(const MultiIndex& o) const;
  bool has_odd_entry() const;

  std::string str() const;

private:
  std::vector<int> e_;
};

// All multi-indices of exact order k in n variables, lexicographic.
std::vector<MultiIndex> multiindices_of_order(int n, int k);
// All multi-indices of order <= m, graded lexicographic.
std::vector<MultiIndex> multiindices_up_to(int n, int m);

BigInt factorial(int n);
BigInt mi_factorial(const MultiIndex& a);            // alpha!
BigInt binomial(int n, int k);
BigInt mi_binomial(const MultiIndex& a, const MultiIndex& b);  // C(alpha,beta)
// alpha!/(alpha-beta)! for beta <= alpha, else 0.
BigInt falling_factorial(const MultiIndex& a, const MultiIndex& b);

inline int dim_homogeneous(int n, int k) {
  return static_cast<int>(binomial(n + k - 1, n - 1).convert_to<long>());
}

}  // namespace ellikorn
