#include "cgas/kernel.hpp"

#include "cgas/errors.hpp"
#include "cgas/hash.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

namespace cgas {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 8-point Gauss-Legendre rule on [-1, 1] (positive half; nodes symmetric).
constexpr double kGlx[4] = {0.18343464249564980494, 0.52553240991632898582,
                            0.79666647741362673959, 0.96028985649753623168};
constexpr double kGlw[4] = {0.36268378337836198297, 0.31370664587788728734,
                            0.22238103445337447054, 0.10122853629037625915};

// Area of the intersection of discs of radii a and b at center distance d.
double lens_area(double d, double a, double b) {
  if (d >= a + b) return 0.0;
  if (d <= std::abs(a - b)) {
    double m = std::min(a, b);
    return kPi * m * m;
  }
  double ca = std::clamp((d * d + a * a - b * b) / (2.0 * d * a), -1.0, 1.0);
  double cb = std::clamp((d * d + b * b - a * a) / (2.0 * d * b), -1.0, 1.0);
  double s = (-d + a + b) * (d + a - b) * (d - a + b) * (d + a + b);
  return a * a * std::acos(ca) + b * b * std::acos(cb) - 0.5 * std::sqrt(std::max(s, 0.0));
}

// Radial density of the difference of two independent uniform draws from
// discs of radii a and b; supported on [0, a+b] with unit total mass.
double difference_density(double t, double a, double b) {
  return 2.0 * t * lens_area(t, a, b) / (kPi * a * a * b * b);
}

struct RadialProfile {
  double s_max = 0.0;
  std::vector<double> v;  // profile at s_k = s_max * k / n
  double mass = 0.0;      // integrated density, should be 1
};

// Tabulates s -> Int_0^{s_max} w(t) (-log max(s, t)) dt on a uniform grid
// by accumulating per-cell Gauss-Legendre integrals of w and w log.
RadialProfile build_radial_profile(int n_cells, double s_max, double a, double b) {
  const int n = n_cells;
  std::vector<double> cell_w(n), cell_wlog(n);
  for (int k = 0; k < n; ++k) {
    double lo = s_max * k / n;
    double hi = s_max * (k + 1) / n;
    double mid = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    double iw = 0.0, iwl = 0.0;
    for (int q = 0; q < 4; ++q) {
      for (double sgn : {-1.0, 1.0}) {
        double t = mid + sgn * half * kGlx[q];
        double w = difference_density(t, a, b) * half * kGlw[q];
        iw += w;
        iwl += w * std::log(t);
      }
    }
    cell_w[k] = iw;
    cell_wlog[k] = iwl;
  }

  RadialProfile p;
  p.s_max = s_max;
  p.v.assign(n + 1, 0.0);
  std::vector<double> suffix(n + 1, 0.0);
  for (int k = n - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + cell_wlog[k];
  double prefix = 0.0;
  p.v[0] = -suffix[0];
  for (int k = 1; k <= n; ++k) {
    prefix += cell_w[k - 1];
    double s = s_max * k / n;
    p.v[k] = -std::log(s) * prefix - suffix[k];
  }
  p.mass = prefix;
  return p;
}

// 4-point Lagrange interpolation on a uniform grid over [0, s_max].
double lagrange4(const std::vector<double>& v, double s_max, double s) {
  const int n = static_cast<int>(v.size()) - 1;
  double u = s * static_cast<double>(n) / s_max;
  if (u <= 0.0) return v[0];
  if (u >= static_cast<double>(n)) return v[n];
  int base = std::clamp(static_cast<int>(u) - 1, 0, n - 3);
  double x = u - static_cast<double>(base);
  double w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
  double w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
  double w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
  double w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
  return w0 * v[base] + w1 * v[base + 1] + w2 * v[base + 2] + w3 * v[base + 3];
}

// Cache of mixed-radius profiles keyed by the radius ratio in (0, 1).
std::map<double, std::shared_ptr<const RadialProfile>>& mixed_cache() {
  static std::map<double, std::shared_ptr<const RadialProfile>> cache;
  return cache;
}
std::mutex mixed_cache_mutex;
constexpr int kMixedCells = 4096;
constexpr std::size_t kMixedCacheCap = 512;

std::shared_ptr<const RadialProfile> mixed_profile(double ratio) {
  {
    std::lock_guard<std::mutex> lock(mixed_cache_mutex);
    auto it = mixed_cache().find(ratio);
    if (it != mixed_cache().end()) return it->second;
  }
  auto built = std::make_shared<const RadialProfile>(
      build_radial_profile(kMixedCells, 1.0 + ratio, ratio, 1.0));
  if (!(std::abs(built->mass - 1.0) <= 1e-6))
    throw numeric_failure("mixed kernel profile: density mass " + std::to_string(built->mass) +
                          " at ratio " + std::to_string(ratio));
  std::lock_guard<std::mutex> lock(mixed_cache_mutex);
  // Eviction keeps memory bounded; values do not depend on cache state.
  if (mixed_cache().size() >= kMixedCacheCap) mixed_cache().clear();
  return mixed_cache().emplace(ratio, built).first->second;
}

}  // namespace

KernelTable build_kernel_table(double step) {
  if (!(step > 0.0) || step > 1e-4)
    throw invalid_param("kernel table: step must lie in (0, 1e-4], got " + std::to_string(step));
  int n = static_cast<int>(std::ceil(2.0 / step - 1e-9));
  RadialProfile p = build_radial_profile(n, 2.0, 1.0, 1.0);
  if (!(std::abs(p.mass - 1.0) <= 1e-9))
    throw numeric_failure("kernel table: density mass off by " + std::to_string(p.mass - 1.0));
  if (!(std::abs(p.v.back() + std::log(2.0)) <= 1e-8))
    throw numeric_failure("kernel table: end value " + std::to_string(p.v.back()) +
                          " does not match -log 2");
  KernelTable t;
  t.values_ = std::move(p.v);
  t.kappa_ = t.values_[0];
  return t;
}

double KernelTable::g1(double s) const {
  if (!(s >= 0.0)) throw invalid_param("g1: radial argument must be >= 0");
  if (s >= 2.0) return -std::log(s);
  return lagrange4(values_, 2.0, s);
}

std::uint64_t KernelTable::checksum() const {
  return fnv1a64(values_.data(), values_.size() * sizeof(double));
}

namespace {
constexpr char kTableMagic[8] = {'C', 'G', 'K', 'T', 'B', 'L', '0', '1'};
static_assert(std::endian::native == std::endian::little,
              "table serialization assumes a little-endian host");
}  // namespace

void KernelTable::dump(std::ostream& os) const {
  os.write(kTableMagic, 8);
  std::uint64_t count = values_.size();
  double step_v = step();
  os.write(reinterpret_cast<const char*>(&count), 8);
  os.write(reinterpret_cast<const char*>(&step_v), 8);
  os.write(reinterpret_cast<const char*>(&kappa_), 8);
  os.write(reinterpret_cast<const char*>(values_.data()),
           static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!os) throw numeric_failure("kernel table dump: stream write failed");
}

KernelTable KernelTable::load(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kTableMagic, 8) != 0)
    throw numeric_failure("kernel table load: bad magic");
  std::uint64_t count = 0;
  double step_v = 0.0, kappa_v = 0.0;
  is.read(reinterpret_cast<char*>(&count), 8);
  is.read(reinterpret_cast<char*>(&step_v), 8);
  is.read(reinterpret_cast<char*>(&kappa_v), 8);
  if (!is || count < 5 || count > (1ull << 32))
    throw numeric_failure("kernel table load: bad header");
  KernelTable t;
  t.values_.resize(count);
  is.read(reinterpret_cast<char*>(t.values_.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw numeric_failure("kernel table load: truncated data");
  double expect_step = 2.0 / static_cast<double>(count - 1);
  if (std::abs(step_v - expect_step) > 1e-15 || t.values_[0] != kappa_v)
    throw numeric_failure("kernel table load: inconsistent header");
  t.kappa_ = kappa_v;
  return t;
}

double eval_g_lambda(const KernelTable& table, double dist, double lambda) {
  if (!(lambda > 0.0)) throw invalid_param("eval_g_lambda: lambda must be > 0");
  if (!(dist >= 0.0)) throw invalid_param("eval_g_lambda: distance must be >= 0");
  if (dist >= 2.0 * lambda) return -std::log(dist);
  return -std::log(lambda) + table.g1(dist / lambda);
}

double eval_g_lambda(const KernelTable& table, const Point& z, double lambda) {
  return eval_g_lambda(table, z.norm(), lambda);
}

double z_beta(const KernelTable& table, double beta) {
  if (!(beta > 2.0)) throw invalid_param("z_beta: requires beta > 2, integral diverges");
  const int n = static_cast<int>(table.values().size()) - 1;
  double core = 0.0;
  for (int k = 0; k < n; ++k) {
    double lo = 2.0 * k / n;
    double hi = 2.0 * (k + 1) / n;
    double mid = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    for (int q = 0; q < 4; ++q) {
      for (double sgn : {-1.0, 1.0}) {
        double r = mid + sgn * half * kGlx[q];
        core += half * kGlw[q] * std::exp(beta * table.g1(r)) * r;
      }
    }
  }
  double tail = std::pow(2.0, 2.0 - beta) / (beta - 2.0);
  return 2.0 * kPi * (core + tail);
}

double mixed_smeared_kernel(const KernelTable& table, double dist, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw invalid_param("mixed kernel: radii must be > 0");
  if (!(dist >= 0.0)) throw invalid_param("mixed kernel: distance must be >= 0");
  if (dist >= a + b) return -std::log(dist);
  if (a == b) return -std::log(a) + table.g1(dist / a);
  double m = std::max(a, b);
  double ratio = std::min(a, b) / m;
  auto profile = mixed_profile(ratio);
  return -std::log(m) + lagrange4(profile->v, profile->s_max, dist / m);
}

double total_energy(const KernelTable& table, const ChargeConfiguration& config, double lambda) {
  config.validate();
  const int n = config.n();
  double f = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      f += eval_g_lambda(table, config.xs[i] - config.xs[j], lambda) +
           eval_g_lambda(table, config.ys[i] - config.ys[j], lambda);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f -= eval_g_lambda(table, config.xs[i] - config.ys[j], lambda);
  return f;
}

MayerSplit mayer_bond_split(double v, bool event_a, double beta) {
  if (!event_a) return MayerSplit{-1.0, 0.0, -1.0};
  double bv = beta * v;
  return MayerSplit{std::expm1(-bv), -std::sinh(bv), std::cosh(bv) - 1.0};
}

PairInteraction dipole_pair_interaction(const KernelTable& table, const Dipole& di,
                                        const Dipole& dj, double lambda,
                                        const PairContext& ctx) {
  PairInteraction out;
  out.v_plus = eval_g_lambda(table, di.x - dj.x, lambda) -
               eval_g_lambda(table, di.y - dj.x, lambda);
  out.v_minus = eval_g_lambda(table, di.x - dj.y, lambda) -
                eval_g_lambda(table, di.y - dj.y, lambda);
  out.v = out.v_plus - out.v_minus;
  out.event_a = pair_stable_event(di, dj);
  MayerSplit ms = mayer_bond_split(out.v, out.event_a, ctx.beta);
  out.f = ms.f;
  out.a_odd = ms.a_odd;
  out.b_even = ms.b_even;

  double ri = di.length(), rj = dj.length();
  out.d = dipole_pair_distance(di, dj);
  out.event_b =
      out.d <= ctx.m_mult * std::min(std::max(ri, lambda), std::max(rj, lambda));
  bool in_range = out.d <= 16.0 * ctx.eps0 * ctx.r_bar;
  out.a_abs = (!out.event_b && in_range)
                  ? ri * rj / (out.d * std::max({ri, rj, out.d}))
                  : 0.0;
  out.b_abs = out.a_abs * out.a_abs + (out.event_b ? 1.0 : 0.0);
  return out;
}

double truncated_pair_interaction(const KernelTable& table, const Dipole& di, const Dipole& dj,
                                  double tau_i_plus, double tau_i_minus, double tau_j_plus,
                                  double tau_j_minus, double lambda) {
  if (!(lambda > 0.0)) throw invalid_param("truncated interaction: lambda must be > 0");
  const double taus[4] = {tau_i_plus, tau_i_minus, tau_j_plus, tau_j_minus};
  const char* names[4] = {"tau_i_plus", "tau_i_minus", "tau_j_plus", "tau_j_minus"};
  for (int k = 0; k < 4; ++k)
    if (!(taus[k] >= lambda))
      throw invalid_param(std::string("truncated interaction: ") + names[k] +
                          " below the smearing scale");

  auto term = [&](const Point& z, double ta, double tb) {
    double s = z.norm();
    return eval_g_lambda(table, s, lambda) - mixed_smeared_kernel(table, s, ta, tb);
  };
  return term(di.x - dj.x, tau_i_plus, tau_j_plus) +
         term(di.y - dj.y, tau_i_minus, tau_j_minus) -
         term(di.y - dj.x, tau_i_minus, tau_j_plus) -
         term(di.x - dj.y, tau_i_plus, tau_j_minus);
}

LowerBoundReport energy_lower_bound_terms(const KernelTable& table,
                                          const MatchedConfiguration& matched,
                                          const DipoleRadii& radii, const IndexSplit& split,
                                          double lambda) {
  if (!(lambda > 0.0)) throw invalid_param("lower bound: lambda must be > 0");
  const int n = matched.n();
  if (static_cast<int>(radii.plus.size()) != n || static_cast<int>(radii.minus.size()) != n)
    throw invalid_param("lower bound: radii arrays must have one entry per dipole");

  // 0 = unassigned, 1 = I1, 2 = I2.
  std::vector<char> side(n, 0);
  auto assign = [&](const std::vector<int>& idx, char tag) {
    for (int i : idx) {
      if (i < 0 || i >= n)
        throw invalid_param("lower bound: dipole " + std::to_string(i) + " out of range");
      if (side[i] != 0)
        throw invalid_param("lower bound: dipole " + std::to_string(i) + " assigned twice");
      side[i] = tag;
    }
  };
  assign(split.i1, 1);
  assign(split.i2, 2);
  for (int i = 0; i < n; ++i) {
    if (side[i] == 0)
      throw invalid_param("lower bound: dipole " + std::to_string(i) + " unassigned");
    if (!(radii.plus[i] >= lambda) || !(radii.minus[i] >= lambda))
      throw invalid_param("lower bound: dipole " + std::to_string(i) +
                          " has a radius below the smearing scale");
    double sum2 = 2.0 * (radii.plus[i] + radii.minus[i]);
    if (side[i] == 1) {
      if (radii.plus[i] != radii.minus[i])
        throw invalid_param("lower bound: dipole " + std::to_string(i) +
                            " in I1 must have equal radii");
      if (!(matched.r[i] <= sum2))
        throw invalid_param("lower bound: dipole " + std::to_string(i) + " too long for I1");
    } else if (!(matched.r[i] > sum2)) {
      throw invalid_param("lower bound: dipole " + std::to_string(i) + " too short for I2");
    }
  }

  LowerBoundReport rep{};
  rep.f_lambda = total_energy(table, matched.config, lambda);
  for (int i : split.i1) {
    rep.i1_dipole_energy += eval_g_lambda(table, matched.r[i], lambda);
    double q = matched.r[i] / radii.plus[i];
    rep.stretch += q * q;
  }
  for (int i : split.i2)
    rep.i2_ball_energy +=
        0.5 * (-std::log(radii.plus[i]) - std::log(radii.minus[i]) + 2.0 * table.kappa());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      rep.truncated_sum +=
          truncated_pair_interaction(table, matched.dipole(i), matched.dipole(j), radii.plus[i],
                                     radii.minus[i], radii.plus[j], radii.minus[j], lambda);
  rep.slack = rep.f_lambda + rep.i1_dipole_energy + rep.i2_ball_energy - rep.truncated_sum;
  return rep;
}

}  // namespace cgas
