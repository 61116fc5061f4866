#pragma once

#include <cstdint>

// Model parameters of the two-component gas and every derived scale the rest
// of the library consumes. All formulas are pure closed forms; the heavier
// numerics live in the kernel and activity modules.
//
// Conventions used throughout:
//   beta      inverse temperature, > 2
//   lambda    smearing radius, in (0,1)
//   log       natural logarithm everywhere
//   beta_p    4 - 2/p, the cluster-convergence thresholds
//
// Threshold comparisons (beta == beta_p) are exact floating-point equality on
// the user-supplied beta. A caller probing the logarithmic correction at a
// threshold must pass beta_threshold(p) itself, not an approximation of it.

namespace cgas {

struct ModelParams {
    double beta = 3.5;    // inverse temperature, > 2
    double lambda = 0.01; // smearing radius, 0 < lambda < 1
    int n_dipoles = 1;    // N >= 1
    double m_mult = 20.0; // multipole proximity constant M, > 10
    double eps0 = 0.5;    // dilute-scale fraction, in (0,1)
    int p0 = 1;           // series truncation for beta >= 4, >= 1
};

// throws invalid_param if any field is outside its domain
void validate(const ModelParams& params);

// Integer extended by the two infinities. Used for the largest convergent
// cluster size, which is genuinely -inf on (2,3] and +inf on [4,inf); a
// sentinel int would invite arithmetic on garbage.
class ExtendedInt {
  public:
    static ExtendedInt minus_infinity() { return ExtendedInt(Tag::minus_inf, 0); }
    static ExtendedInt plus_infinity() { return ExtendedInt(Tag::plus_inf, 0); }
    static ExtendedInt finite(std::int64_t n) { return ExtendedInt(Tag::finite, n); }

    bool is_finite() const { return tag_ == Tag::finite; }
    bool is_minus_inf() const { return tag_ == Tag::minus_inf; }
    bool is_plus_inf() const { return tag_ == Tag::plus_inf; }

    // value of a finite element; throws invalid_param on +-inf
    std::int64_t value() const;

    // comparisons against ordinary integers, with the obvious order
    bool at_least(std::int64_t k) const { return !is_minus_inf() && (is_plus_inf() || n_ >= k); }
    bool at_most(std::int64_t k) const { return !is_plus_inf() && (is_minus_inf() || n_ <= k); }

    friend bool operator==(const ExtendedInt& a, const ExtendedInt& b) {
        return a.tag_ == b.tag_ && (a.tag_ != Tag::finite || a.n_ == b.n_);
    }

  private:
    enum class Tag { minus_inf, finite, plus_inf };
    ExtendedInt(Tag tag, std::int64_t n) : tag_(tag), n_(n) {}
    Tag tag_;
    std::int64_t n_;
};

// beta_p = 4 - 2/p for p >= 1; throws invalid_param for p < 1
double beta_threshold(int p);

// Largest q >= 2 with beta > beta_q: -inf on (2,3], +inf on [4,inf),
// finite in between. Throws invalid_param for beta <= 2.
ExtendedInt p_star(double beta);

struct DerivedScales {
    double beta = 0.0;
    double lambda = 0.0;
    int p0 = 1;

    ExtendedInt p_star = ExtendedInt::minus_infinity();
    ExtendedInt p_beta = ExtendedInt::minus_infinity(); // = p_star below 4, p0 above
    double r_crit = 0.0; // lambda^{-(beta-2)/(4-beta)} below 4, +inf above
    double r_bar = 0.0;  // r_crit below 4, lambda^{-2 p0} above
    double delta = 0.0;  // optimal error rate, with the |log lambda| threshold factor
    double alpha = 0.0;  // (4-beta)/2 below 4, 1/2 above
    double q_beta = 0.0; // 3/(2-beta/2) - 1 below 4 (can be fractional), p0 above

    // gamma_k: lambda^{2(k-1)} for k <= p_star, r_bar^{-2} beyond it, with an
    // extra |log lambda| factor exactly at k = p_star+1 when beta sits on the
    // threshold beta_{p_star+1}. k >= 1.
    double gamma(int k) const;
};

DerivedScales derived_scales(const ModelParams& params);

} // namespace cgas
