#pragma once
// Minimal-distance stable matching of positive to negative charges, the
// two-dipole stability predicate, and blocking-pair search.

#include "cgas/geometry.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cgas {

// A configuration together with the pairing sigma: dipole i consists of
// xs[i] and ys[sigma[i]], with length r[i]. Immutable by convention.
struct MatchedConfiguration {
  ChargeConfiguration config;
  std::vector<int> sigma;
  std::vector<double> r;

  int n() const { return config.n(); }
  Dipole dipole(int i) const { return Dipole{config.xs[i], config.ys[sigma[i]]}; }

  // dist({x_i, y_sigma(i)}, {x_j, y_sigma(j)}), computed on demand.
  double pair_distance(int i, int j) const {
    return dipole_pair_distance(dipole(i), dipole(j));
  }
};

// Greedy minimal-distance matching: repeatedly match the globally smallest
// remaining cross distance |x_i - y_j|, breaking exact ties by smallest
// positive index then smallest negative index. Near-equal distances (within
// 1e-14 relative, not exactly equal) are rejected as degenerate only when
// the two candidate pairs share a charge, since disjoint near-ties cannot
// change the outcome. Throws degenerate_input accordingly.
MatchedConfiguration stable_match(const ChargeConfiguration& config);

// Event A_ij. With labels chosen so that a is the shorter dipole, true iff
// both cross distances |b.y - a.x| and |a.y - b.x| are at least a.length().
// Equivalent to the 4-point subsystem matching as given.
bool pair_stable_event(const Dipole& a, const Dipole& b);

// Lexicographically first pair (i, j), i < j, whose dipoles fail
// pair_stable_event; empty if the matching is stable.
std::optional<std::pair<int, int>> has_blocking_pair(const MatchedConfiguration& matched);

}  // namespace cgas
