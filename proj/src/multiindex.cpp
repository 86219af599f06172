#include "ellikorn/multiindex.hpp"

#include "ellikorn/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ellikorn {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0) throw MalformedSpec("multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(int n, int j) {
  std::vector<int> e(n, 0);
  e[j] = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

bool MultiIndex::contains(const MultiIndex& beta) const {
  if (beta.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (beta.e_[i] > e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::plus(const MultiIndex& o) const {
  std::vector<int> e(e_);
  for (int i = 0; i < dim(); ++i) e[i] += o.e_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::plus_unit(int j) const {
  std::vector<int> e(e_);
  e[j] += 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::minus(const MultiIndex& o) const {
  std::vector<int> e(e_);
  for (int i = 0; i < dim(); ++i) e[i] -= o.e_[i];
  return MultiIndex(std::move(e));
}

bool MultiIndex::has_odd_entry() const {
  return std::any_of(e_.begin(), e_.end(), [](int v) { return v % 2 != 0; });
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << e_[i];
  os << ")";
  return os.str();
}

static void enumerate_order(int n, int k, std::vector<int>& cur,
                            std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(k - std::accumulate(cur.begin(), cur.end(), 0));
    out.emplace_back(cur);
    cur.pop_back();
    return;
  }
  int used = std::accumulate(cur.begin(), cur.end(), 0);
  for (int v = k - used; v >= 0; --v) {
    cur.push_back(v);
    enumerate_order(n, k, cur, out);
    cur.pop_back();
  }
}

std::vector<MultiIndex> multiindices_of_order(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0) return out;
  std::vector<int> cur;
  enumerate_order(n, k, cur, out);
  return out;
}

std::vector<MultiIndex> multiindices_up_to(int n, int m) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= m; ++k) {
    auto level = multiindices_of_order(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt mi_factorial(const MultiIndex& a) {
  BigInt r = 1;
  for (int i = 0; i < a.dim(); ++i) r *= factorial(a[i]);
  return r;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

BigInt mi_binomial(const MultiIndex& a, const MultiIndex& b) {
  BigInt r = 1;
  for (int i = 0; i < a.dim(); ++i) r *= binomial(a[i], b[i]);
  return r;
}

BigInt falling_factorial(const MultiIndex& a, const MultiIndex& b) {
  if (!a.contains(b)) return 0;
  BigInt r = 1;
  for (int i = 0; i < a.dim(); ++i)
    for (int t = 0; t < b[i]; ++t) r *= (a[i] - t);
  return r;
}

}  // namespace ellikorn
