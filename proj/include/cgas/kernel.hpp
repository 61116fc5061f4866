#pragma once
// Smeared logarithmic kernel and everything built directly on top of it:
// the tabulated radial profile g1, scale-invariant evaluation g_lambda,
// the single-dipole normalization integral, total configuration energy,
// exact and truncated dipole-dipole interactions, Mayer bond splitting,
// and the assembled energy lower bound report.
//
// Conventions. g(z) = -log|z| is smoothed by averaging both arguments over
// uniform discs. At unit radius this gives the radial profile g1 with
// g1(s) = -log s for s >= 2 (Newton) and g1(0) = kappa = 1/4. For smearing
// radius lambda, g_lambda(z) = -log lambda + g1(|z|/lambda).

#include "cgas/geometry.hpp"
#include "cgas/matching.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace cgas {

class KernelTable {
 public:
  // Radial profile at unit smearing. Values below s = 2 come from 4-point
  // polynomial interpolation of the grid; beyond 2 the unsmeared -log s is
  // returned directly. Requires s >= 0.
  double g1(double s) const;

  double kappa() const { return kappa_; }
  double step() const { return 2.0 / static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }
  std::uint64_t checksum() const;

  // Versioned little-endian binary round trip of the grid.
  void dump(std::ostream& os) const;
  static KernelTable load(std::istream& is);

 private:
  KernelTable() = default;
  friend KernelTable build_kernel_table(double step);

  std::vector<double> values_;  // g1 at s_k = 2k/n, k = 0..n
  double kappa_ = 0.0;
};

// Tabulates g1 on [0,2] by reducing the double disc average to a single
// radial integral against the disc-overlap density, integrated cell by
// cell with Gauss-Legendre quadrature. step must lie in (0, 1e-4].
KernelTable build_kernel_table(double step = 1e-4);

// g_lambda at displacement z (or radial distance dist >= 0); exact -log|z|
// in the Newton regime |z| >= 2 lambda. Requires lambda > 0.
double eval_g_lambda(const KernelTable& table, const Point& z, double lambda);
double eval_g_lambda(const KernelTable& table, double dist, double lambda);

// 2 pi Int_0^inf e^{beta g1(r)} r dr: quadrature on [0,2] plus the exact
// power-law tail 2 pi 2^{2-beta}/(beta-2). Requires beta > 2.
double z_beta(const KernelTable& table, double beta);

// Kernel averaged over discs of radii a and b (both > 0). Equals -log dist
// once dist >= a+b; equal radii reduce exactly to the g1 profile; unequal
// radii use cached radial tables keyed by the radius ratio.
double mixed_smeared_kernel(const KernelTable& table, double dist, double a, double b);

// Total smeared Coulomb energy: half the signed sum over ordered pairs of
// distinct charges, the diagonal terms being cancelled analytically.
double total_energy(const KernelTable& table, const ChargeConfiguration& config, double lambda);

// Ambient constants entering the Mayer bond and its dominating envelopes.
struct PairContext {
  double beta;
  double m_mult;  // multipole closeness constant M
  double eps0;
  double r_bar;
};

struct MayerSplit {
  double f;       // e^{-beta v} 1_A - 1
  double a_odd;   // -sinh(beta v) 1_A
  double b_even;  // (cosh(beta v) - 1) 1_A - 1_{A^c}
};

MayerSplit mayer_bond_split(double v, bool event_a, double beta);

struct PairInteraction {
  double v;        // full dipole-dipole interaction
  double v_plus;   // part seen by the positive charge of dipole j
  double v_minus;  // part seen by the negative charge of dipole j
  double f;
  double a_odd;
  double b_even;
  double a_abs;    // dominating envelope of the odd part
  double b_abs;    // dominating envelope of the even part
  bool event_a;    // two-dipole stability
  bool event_b;    // multipole closeness d <= M min(max(r_i,l), max(r_j,l))
  double d;        // min cross distance between the two charge pairs
};

PairInteraction dipole_pair_interaction(const KernelTable& table, const Dipole& di,
                                        const Dipole& dj, double lambda,
                                        const PairContext& ctx);

// Truncated interaction v': the four-term combination of (g_lambda - mixed
// kernel) differences, with smearing radii tau^+ / tau^- attached to the
// positive / negative charge of each dipole. Vanishes exactly when all four
// ball pairs are disjoint, and identically when every tau equals lambda.
// Requires all tau >= lambda.
double truncated_pair_interaction(const KernelTable& table, const Dipole& di, const Dipole& dj,
                                  double tau_i_plus, double tau_i_minus, double tau_j_plus,
                                  double tau_j_minus, double lambda);

struct DipoleRadii {
  std::vector<double> plus;   // tau_i^+
  std::vector<double> minus;  // tau_i^-
};

struct IndexSplit {
  std::vector<int> i1;  // dipoles with r_i <= 2(tau^+ + tau^-), tau^+ = tau^-
  std::vector<int> i2;  // dipoles with r_i >  2(tau^+ + tau^-)
};

struct LowerBoundReport {
  double f_lambda;            // total energy
  double i1_dipole_energy;    // sum over I1 of g_lambda(r_i)
  double i2_ball_energy;      // 1/2 sum over I2 of (-log tau^+ - log tau^- + 2 kappa)
  double truncated_sum;       // 1/2 sum over ordered distinct pairs of v'_ij
  double stretch;             // sum over I1 of (r_i / tau_i^+)^2
  double slack;               // f_lambda + i1 + i2 - truncated_sum
};

// Evaluates every term of the energy lower bound for a matched
// configuration under the given truncation radii and index split; throws
// invalid_param naming the first offending index when the split or radii
// violate their preconditions.
LowerBoundReport energy_lower_bound_terms(const KernelTable& table,
                                          const MatchedConfiguration& matched,
                                          const DipoleRadii& radii, const IndexSplit& split,
                                          double lambda);

}  // namespace cgas
