#include "cgas/matching.hpp"

#include "cgas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

namespace cgas {

double dipole_pair_distance(const Dipole& a, const Dipole& b) {
  double d = (a.x - b.x).norm();
  d = std::min(d, (a.x - b.y).norm());
  d = std::min(d, (a.y - b.x).norm());
  d = std::min(d, (a.y - b.y).norm());
  return d;
}

void ChargeConfiguration::validate() const {
  if (xs.empty()) throw invalid_param("configuration: no charges");
  if (xs.size() != ys.size())
    throw invalid_param("configuration: " + std::to_string(xs.size()) + " positive vs " +
                        std::to_string(ys.size()) + " negative charges");
  if (!(box_side > 0.0) || !std::isfinite(box_side))
    throw invalid_param("configuration: box_side must be positive and finite");
  std::vector<Point> all;
  all.reserve(2 * xs.size());
  for (const Point& p : xs) all.push_back(p);
  for (const Point& p : ys) all.push_back(p);
  for (const Point& p : all)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw invalid_param("configuration: non-finite coordinate");
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b)
      if (all[a].x() == all[b].x() && all[a].y() == all[b].y())
        throw degenerate_input("configuration: coincident charge positions");
}

namespace {

struct Candidate {
  double d;
  int i;  // positive index
  int j;  // negative index
};

bool shares_charge(const Candidate& a, const Candidate& b) {
  return a.i == b.i || a.j == b.j;
}

}  // namespace

MatchedConfiguration stable_match(const ChargeConfiguration& config) {
  config.validate();
  const int n = config.n();

  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cand.push_back(Candidate{(config.xs[i] - config.ys[j]).norm(), i, j});
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
  });

  MatchedConfiguration out;
  out.config = config;
  out.sigma.assign(n, -1);
  out.r.assign(n, 0.0);
  std::vector<char> y_taken(n, 0);

  int matched = 0;
  for (std::size_t k = 0; k < cand.size() && matched < n; ++k) {
    const Candidate& c = cand[k];
    if (out.sigma[c.i] >= 0 || y_taken[c.j]) continue;

    // Order ambiguity check: a later live candidate at a nearly but not
    // exactly equal distance that shares a charge with this one would make
    // the greedy outcome depend on noise below resolution.
    for (std::size_t m = k + 1; m < cand.size(); ++m) {
      const Candidate& c2 = cand[m];
      if (c2.d - c.d > 1e-14 * std::max(c2.d, c.d)) break;
      if (out.sigma[c2.i] >= 0 || y_taken[c2.j]) continue;
      if (c2.d != c.d && shares_charge(c, c2))
        throw degenerate_input("stable_match: near-equal cross distances for charges (" +
                               std::to_string(c.i) + "," + std::to_string(c.j) + ") and (" +
                               std::to_string(c2.i) + "," + std::to_string(c2.j) + ")");
    }

    out.sigma[c.i] = c.j;
    out.r[c.i] = c.d;
    y_taken[c.j] = 1;
    ++matched;
  }
  return out;
}

bool pair_stable_event(const Dipole& a, const Dipole& b) {
  const Dipole& s = (a.length() <= b.length()) ? a : b;
  const Dipole& t = (a.length() <= b.length()) ? b : a;
  const double r = s.length();
  return (t.y - s.x).norm() >= r && (s.y - t.x).norm() >= r;
}

std::optional<std::pair<int, int>> has_blocking_pair(const MatchedConfiguration& matched) {
  const int n = matched.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!pair_stable_event(matched.dipole(i), matched.dipole(j)))
        return std::make_pair(i, j);
  return std::nullopt;
}

}  // namespace cgas
