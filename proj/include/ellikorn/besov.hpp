#pragma once

#include "ellikorn/ellipticity.hpp"
#include "ellikorn/grid.hpp"
#include "ellikorn/smoothfield.hpp"

#include <optional>
#include <vector>

namespace ellikorn {

// Scalar function on a 1-D lattice (the flat boundary of the half-space).
struct Samples1D {
  double h = 0.0;
  double x0 = 0.0;
  std::vector<double> v;
  bool periodic = false;

  double period() const { return h * static_cast<double>(v.size()); }
  double x_of(std::size_t i) const { return x0 + (i + 0.5) * h; }
};

struct BesovParams {
  double s = 1.0;
  double p = 1.0, q = 1.0;
  int M = 2;           // fitting degree, must satisfy M > floor(s)
  double t_min = 0.0;  // defaults to the lattice spacing
  double t_max = 0.0;  // defaults to a quarter period / half extent
  double ratio = std::pow(2.0, 0.25);
};

// (p,M)-oscillation at (x, r): inf over P_M of the p-mean of f - pi on the
// lattice ball, by least squares (p = 2) or an iteratively reweighted fit
// (p = 1). Throws TooFewPoints when the ball holds fewer than M+1 points.
double oscillation(const Samples1D& f, double x, double r, int M, double p);

// 2-D variant on grid functions (inf over P_M(R^2; R^comps)).
double oscillation(const GridFunction& f, double x, double y, double r, int M,
                   double p);

// Geometric-scale quadrature of ||osc(.,t)||_p^q t^{-1-sq} dt over the
// truncated scale range.
double besov_norm_osc(const Samples1D& f, const BesovParams& params);

// Littlewood-Paley norm on a power-of-two periodic lattice: dyadic annular
// multipliers from a fixed smooth radial profile.
double besov_norm_lp(const Samples1D& f, const BesovParams& params);
// max_xi |sum_j phi_j(xi) - 1| over resolvable nonzero frequencies.
double lp_partition_defect(const Samples1D& f);

struct TraceRatio {
  bool exact = false;  // u == 0
  double ratio = 0.0;
  double numerator = 0.0;    // osc-based Besov norm of the boundary trace
  double denominator = 0.0;  // ||A u||_{L^1(H)}
};

struct TraceExperimentConfig {
  int n_tangential = 128;
  double depth = 0.75;
  double width = 1.0;
  int osc_M = -1;  // default: deg_P(A)
};

// Ratio ||u(.,0)||_{B^{k-1}_{1,1}} / ||A u||_{L^1} per family member on a
// tangentially periodic strip; requires a C-elliptic operator with k >= 2.
std::vector<TraceRatio> halfspace_trace_experiment(
    const DiffOperator& op, const NullspaceProfile& profile,
    const std::vector<SmoothField>& family, const TraceExperimentConfig& cfg);

// Bump-times-polynomial test family for the trace experiment.
std::vector<SmoothField> trace_test_family(int dim_v, int count,
                                           double depth, std::uint64_t seed);
// Cutoff times harmonic polynomials of increasing degree (Delta run).
std::vector<SmoothField> harmonic_family(int deg_lo, int deg_hi, double depth);

struct BlowupRow {
  int j = 0;
  double spike_scale = 0.0;
  double interior = 0.0;  // ||u||_{W^{k-1,p}} + ||A u||_{L^p}
  double boundary = 0.0;  // ||d^a u||_{L^q(Gamma)}, |a| = k-1
};

// Section 4.4 family u_j(x) = h_j(x.xi) v for a real symbol-kernel direction;
// interior norms stay bounded while the boundary L^q norm diverges.
std::vector<BlowupRow> nonelliptic_blowup_family(
    const DiffOperator& op, const std::vector<double>& xi,
    const std::vector<double>& v, int j_max, double p, double q);

}  // namespace ellikorn
