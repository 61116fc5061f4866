#include "cgas/params.hpp"
#include "cgas/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cgas {

void validate(const ModelParams& p) {
    if (!(p.beta > 2.0)) throw invalid_param("beta must be > 2, got " + std::to_string(p.beta));
    if (!(p.lambda > 0.0 && p.lambda < 1.0))
        throw invalid_param("lambda must lie in (0,1), got " + std::to_string(p.lambda));
    if (p.n_dipoles < 1) throw invalid_param("n_dipoles must be >= 1");
    if (!(p.m_mult > 10.0)) throw invalid_param("m_mult must be > 10, got " + std::to_string(p.m_mult));
    if (!(p.eps0 > 0.0 && p.eps0 < 1.0))
        throw invalid_param("eps0 must lie in (0,1), got " + std::to_string(p.eps0));
    if (p.p0 < 1) throw invalid_param("p0 must be >= 1");
}

std::int64_t ExtendedInt::value() const {
    if (tag_ != Tag::finite) throw invalid_param("ExtendedInt: value() on an infinite element");
    return n_;
}

double beta_threshold(int p) {
    if (p < 1) throw invalid_param("beta_threshold: p must be >= 1");
    return 4.0 - 2.0 / static_cast<double>(p);
}

ExtendedInt p_star(double beta) {
    if (!(beta > 2.0)) throw invalid_param("p_star: beta must be > 2");
    if (beta >= 4.0) return ExtendedInt::plus_infinity();
    if (beta <= 3.0) return ExtendedInt::minus_infinity();
    // beta in (3,4): the condition beta > 4 - 2/q holds for q < 2/(4-beta),
    // which is bounded; walk up to stay consistent with the exact-equality
    // threshold convention instead of trusting a single floor() rounding.
    std::int64_t q = 2;
    while (beta > beta_threshold(static_cast<int>(q) + 1)) ++q;
    return ExtendedInt::finite(q);
}

// is beta exactly one of the thresholds beta_p, p >= 2?
static bool on_threshold(double beta) {
    if (!(beta > 3.0 && beta < 4.0) && beta != 3.0) return false;
    // p ranges over a short window around 2/(4-beta)
    const double p_real = 2.0 / (4.0 - beta);
    const auto p_mid = static_cast<std::int64_t>(std::llround(p_real));
    for (std::int64_t p = p_mid - 2; p <= p_mid + 2; ++p)
        if (p >= 2 && beta == beta_threshold(static_cast<int>(p))) return true;
    return false;
}

double DerivedScales::gamma(int k) const {
    if (k < 1) throw invalid_param("gamma: k must be >= 1");
    if (p_star.at_least(k)) return std::pow(lambda, 2.0 * (k - 1));
    const double base = 1.0 / (r_bar * r_bar);
    if (p_star.is_finite() && k == p_star.value() + 1 &&
        beta == beta_threshold(static_cast<int>(p_star.value()) + 1))
        return base * std::abs(std::log(lambda));
    return base;
}

DerivedScales derived_scales(const ModelParams& params) {
    validate(params);
    DerivedScales s;
    s.beta = params.beta;
    s.lambda = params.lambda;
    s.p0 = params.p0;
    s.p_star = p_star(params.beta);
    s.p_beta = params.beta < 4.0 ? s.p_star : ExtendedInt::finite(params.p0);

    const double beta = params.beta;
    const double lambda = params.lambda;
    if (beta < 4.0) {
        s.r_crit = std::pow(lambda, -(beta - 2.0) / (4.0 - beta));
        s.r_bar = s.r_crit;
        s.alpha = (4.0 - beta) / 2.0;
        s.q_beta = 3.0 / (2.0 - beta / 2.0) - 1.0;
        const double log_factor = on_threshold(beta) ? 1.0 + std::abs(std::log(lambda)) : 1.0;
        s.delta = log_factor / (s.r_crit * s.r_crit);
    } else {
        s.r_crit = std::numeric_limits<double>::infinity();
        s.r_bar = std::pow(lambda, -2.0 * params.p0);
        s.alpha = 0.5;
        s.q_beta = static_cast<double>(params.p0);
        s.delta = std::pow(lambda, 2.0 * params.p0);
    }
    return s;
}

} // namespace cgas
