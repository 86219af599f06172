#include "ellikorn/moments.hpp"

#include "ellikorn/errors.hpp"

#include <cmath>

namespace ellikorn {

BallSpec BallSpec::unit(int n, int rho) {
  BallSpec b;
  b.center.assign(n, Rat(0));
  b.radius = 1;
  b.bump_exponent = rho;
  return b;
}

BallSpec BallSpec::make(const std::vector<double>& c, double r, int rho) {
  BallSpec b;
  for (double x : c) b.center.push_back(rat_of(x));
  b.radius = rat_of(r);
  b.bump_exponent = rho;
  if (!(r > 0)) throw MalformedSpec("ball radius must be positive");
  return b;
}

double PiRational::value() const {
  return to_double(coef) * std::pow(M_PI, pi_power);
}

// Gamma(m/2) for integer m >= 1 as coef * sqrt(pi)^{m odd}.
static std::pair<Rat, int> gamma_half(int m) {
  if (m % 2 == 0) return {Rat(factorial(m / 2 - 1)), 0};
  // Gamma(1/2 + s) = sqrt(pi) (2s-1)!! / 2^s with s = (m-1)/2.
  int s = (m - 1) / 2;
  BigInt dfac = 1;
  for (int t = 2 * s - 1; t >= 1; t -= 2) dfac *= t;
  return {Rat(dfac) / Rat(BigInt(1) << s), 1};
}

// Unnormalized unit-ball integral I(tau, rho) = prod Gamma((tau_i+1)/2)
// * Gamma(rho+1) / Gamma((|tau|+n)/2 + rho + 1); zero for odd tau.
static PiRational unit_ball_integral(const MultiIndex& tau, int rho) {
  if (tau.has_odd_entry()) return {Rat(0), 0};
  int n = tau.dim();
  Rat coef(factorial(rho));
  int sqrt_pis = 0;
  for (int i = 0; i < n; ++i) {
    auto [c, s] = gamma_half(tau[i] + 1);
    coef *= c;
    sqrt_pis += s;
  }
  auto [cd, sd] = gamma_half(tau.order() + n + 2 * rho + 2);
  coef /= cd;
  sqrt_pis -= sd;
  if (sqrt_pis % 2 != 0) throw Error("Internal", "pi power must be integral");
  return {coef, sqrt_pis / 2};
}

Rat unit_ball_moment_normalized(const MultiIndex& tau, int rho) {
  if (tau.has_odd_entry()) return Rat(0);
  PiRational num = unit_ball_integral(tau, rho);
  PiRational den = unit_ball_integral(MultiIndex::zero(tau.dim()), rho);
  // The pi powers agree for even tau, so the quotient is rational.
  return num.coef / den.coef;
}

PiRational ball_moment(const MultiIndex& alpha, const Rat& radius, int rho) {
  PiRational base = unit_ball_integral(alpha, rho);
  Rat scale(1);
  for (int t = 0; t < alpha.order() + alpha.dim(); ++t) scale *= radius;
  base.coef *= scale;
  return base;
}

Rat ball_moment_normalized(const MultiIndex& alpha, const Rat& radius, int rho) {
  Rat m = unit_ball_moment_normalized(alpha, rho);
  for (int t = 0; t < alpha.order(); ++t) m *= radius;
  return m;
}

Rat weight_moment(const BallSpec& ball, const MultiIndex& gamma) {
  // y = c + r z turns the moment into a binomial sum of centered moments.
  int n = ball.n();
  Rat acc(0);
  for (const auto& tau : multiindices_up_to(n, gamma.order())) {
    if (!gamma.contains(tau) || tau.has_odd_entry()) continue;
    Rat m = unit_ball_moment_normalized(tau, ball.bump_exponent);
    if (m == 0) continue;
    Rat term = Rat(mi_binomial(gamma, tau)) * m;
    for (int t = 0; t < tau.order(); ++t) term *= ball.radius;
    MultiIndex rest = gamma.minus(tau);
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < rest[j]; ++t) term *= ball.center[j];
    acc += term;
  }
  return acc;
}

Rat l2_pair(const BallSpec& ball, const VPolynomial& p, const VPolynomial& q) {
  // Plain L2(B) inner product, normalized by |B|; the bump exponent plays no
  // role here.
  BallSpec flat = ball;
  flat.bump_exponent = 0;
  return pair_with_moments(p, q,
                           [&](const MultiIndex& a) { return weight_moment(flat, a); });
}

double weight_value(const BallSpec& ball, const std::vector<double>& y) {
  int n = ball.n();
  double r = to_double(ball.radius);
  double d2 = 0.0;
  for (int j = 0; j < n; ++j) {
    double t = y[j] - to_double(ball.center[j]);
    d2 += t * t;
  }
  double s = 1.0 - d2 / (r * r);
  if (s <= 0.0) return 0.0;
  PiRational total = ball_moment(MultiIndex::zero(n), ball.radius,
                                 ball.bump_exponent);
  return std::pow(s, ball.bump_exponent) / total.value();
}

}  // namespace ellikorn
