#include "imlab/thresholds.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace imlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double min1p(double p) { return std::min(1.0, p); }

// n - 3 - sigma (n - 6)
double morawetz_b(int n, double sigma) { return n - 3.0 - sigma * (n - 6.0); }

void require_dimension(int n) {
    if (n < 3) throw ParameterError("threshold calculus needs n >= 3 (got " + std::to_string(n) + ")");
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

}  // namespace

ProblemParams::ProblemParams(int n_, double p_, double s_, double sigma_)
    : n(n_), p(p_), s(s_), sigma(sigma_) {
    require_dimension(n);
    const double lo = 4.0 / n;
    const double hi = 4.0 / (n - 2);
    if (!(p > lo)) throw ParameterError("p=" + fmt(p) + " violates p > 4/n = " + fmt(lo));
    if (!(p < hi)) throw ParameterError("p=" + fmt(p) + " violates p < 4/(n-2) = " + fmt(hi));
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s=" + fmt(s) + " violates 0 < s < 1");
    if (!(sigma > 0.0)) throw ParameterError("sigma=" + fmt(sigma) + " violates sigma > 0");
    if (!(sigma <= s)) throw ParameterError("sigma=" + fmt(sigma) + " violates sigma <= s");
}

double critical_regularity(int n, double p) {
    if (!(p > 0.0)) throw ParameterError("critical_regularity needs p > 0");
    return 0.5 * n - 2.0 / p;
}

double s1(int n, double p) { return n * p / (2.0 * (p + 2.0)); }

double s2(int n, double p) {
    const double m = min1p(p);
    return (1.0 + m * critical_regularity(n, p)) / (1.0 + m);
}

SPlus s_plus(int n, double p, double sigma) {
    require_dimension(n);
    if (!(sigma > 0.0))
        throw ParameterError("s_plus needs sigma > 0; the sigma -> 0 limit is remark3_slope");
    const double sc = critical_regularity(n, p);
    if (!(sc > 0.0)) throw ParameterError("s_plus needs s_c > 0");
    const double A = min1p(p) * sigma;
    const double B = morawetz_b(n, sigma);

    SPlus r{};
    r.a = A;
    r.b = sc * B - 2.0 * A * sc;
    r.c = A * sc * sc - sc * B;
    const double disc = r.b * r.b - 4.0 * r.a * r.c;
    r.real_roots = disc >= 0.0;
    if (!r.real_roots) {
        r.value = kNaN;
        r.residual = kNaN;
        return r;
    }
    // Cancellation-free pair of roots.
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (r.b + std::copysign(sq, r.b));
    const double x1 = q / r.a;
    const double x2 = q != 0.0 ? r.c / q : x1;
    r.value = std::max(x1, x2);
    r.residual = std::abs((r.a * r.value + r.b) * r.value + r.c);
    return r;
}

double sigma0_supremum(int n, double p) {
    const double c8 = 8.0 - p * (n + 2.0);
    const double rhs = (n - 3.0) * (p * n - 4.0);
    if (c8 > 0.0) return rhs > 0.0 ? rhs / (2.0 * c8) : 0.0;
    if (c8 == 0.0) return rhs > 0.0 ? kInf : 0.0;
    // c8 < 0: sigma0 > rhs / (2 c8); every sigma0 > 0 works iff rhs >= 0.
    return rhs >= 0.0 ? kInf : 0.0;
}

bool sigma0_feasible(int n, double p, double sigma0, double s) {
    return 2.0 * sigma0 * (8.0 - p * (n + 2.0)) < (n - 3.0) * (p * n - 4.0) && sigma0 <= s;
}

double remark3_slope(int n, double p) {
    if (n < 4) throw ParameterError("remark3_slope needs n >= 4 (for n = 3 s_+ does not depend on sigma)");
    const double sc = critical_regularity(n, p);
    return (sc - 1.0) * (sc - 1.0) * min1p(p) / ((n - 3.0) * sc);
}

bool admissible_pair_check(double q, double r, int n) {
    if (!(q >= 2.0) || !(r >= 2.0)) return false;
    if (q == 2.0 && std::isinf(r) && n == 2) return false;
    const double lhs = (std::isinf(q) ? 0.0 : 2.0 / q) + (std::isinf(r) ? 0.0 : n / r);
    return std::abs(lhs - 0.5 * n) <= 1e-12 * std::max(1.0, 0.5 * n);
}

std::vector<std::pair<double, double>> working_admissible_pairs(int n, double sigma, double p,
                                                                double epsilon) {
    const double m = n - 3.0 + 4.0 * sigma;
    const double e = epsilon;
    return {
        {2.0, 2.0 * n / (n - 2.0)},
        {m / sigma, 2.0 * n * m / (n * m - 4.0 * sigma)},
        {2.0 * p * (2.0 + e) / e, 2.0 * n * p * (2.0 + e) / (n * p * (2.0 + e) - 2.0 * e)},
        {2.0 + e, 2.0 * n * (2.0 + e) / (n * (2.0 + e) - 4.0)},
    };
}

InterpolationExponents interpolation_exponents(int n, double p, double sigma, std::optional<double> s) {
    require_dimension(n);
    if (!(sigma > 0.0)) throw ParameterError("interpolation_exponents needs sigma > 0");
    InterpolationExponents out{};
    const double m = n - 3.0 + 4.0 * sigma;
    const double denom_eps = m - 2.0 * p * sigma;
    const double denom_theta = 2.0 * p * morawetz_b(n, sigma);

    std::ostringstream note;
    const double p_lo = 4.0 * m / (n * (n - 3.0 + 2.0 * sigma) + 4.0 * sigma);
    if (!(p > p_lo)) {
        std::ostringstream msg;
        msg << "p=" << p << " violates the lower bound 4(n-3+4 sigma)/(n(n-3+2 sigma)+4 sigma) = " << p_lo;
        throw ParameterError(msg.str());
    }
    bool in_range = true;
    if (s) {
        const double p_hi = 4.0 / (n - 2.0 * *s);
        if (!(p < p_hi)) {
            in_range = false;
            note << "p=" << p << " violates p < 4/(n-2s) = " << p_hi << "; ";
        }
    }

    if (std::abs(denom_eps) <= 1e-14 * std::max(1.0, m)) {
        out.degenerate = true;
        out.epsilon = kNaN;
        note << "epsilon has a pole: n-3+4 sigma-2p sigma = 0";
        if (n == 3 && std::abs(p - 2.0) < 1e-14) note << " for every sigma (n=3, p=2)";
        note << "; lower sigma or change p";
    } else {
        out.epsilon = 4.0 * p * sigma / denom_eps;
    }
    out.theta = denom_theta != 0.0 ? m * (4.0 - p * (n - 2.0)) / denom_theta : kNaN;

    out.valid = in_range && !out.degenerate && out.epsilon > 0.0 && out.theta > 0.0 &&
                out.theta <= 1.0;
    if (!out.degenerate && !(out.epsilon > 0.0)) note << "epsilon <= 0; ";
    if (!(out.theta > 0.0 && out.theta <= 1.0)) note << "theta outside (0, 1]; ";
    out.note = note.str();
    return out;
}

double holder_alpha(int n, double p, double s, double sigma, double e) {
    const double m = n - 3.0 + 4.0 * sigma;
    return p * (1.0 - n / (2.0 * s)) +
           (8.0 * sigma + e * (sigma * (n + 2.0) - s * m)) / (2.0 * s * sigma * (2.0 + e));
}

double holder_beta(int n, double p, double s, double e) {
    return (n / s) * (0.5 * p - (8.0 + e * (n + 2.0)) / (2.0 * n * (2.0 + e)));
}

HolderExponents morawetz_holder_exponents(int n, double p, double s, double sigma, double epsilon) {
    require_dimension(n);
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("morawetz_holder_exponents needs s in (0, 1)");
    if (!(sigma > 0.0 && sigma <= s)) throw ParameterError("morawetz_holder_exponents needs 0 < sigma <= s");
    if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");

    HolderExponents out{};
    out.alpha = holder_alpha(n, p, s, sigma, epsilon);
    out.beta = holder_beta(n, p, s, epsilon);
    out.alpha_limit = p * (1.0 - n / (2.0 * s)) + 2.0 / s;
    out.beta_limit = (n / s) * (0.5 * p - 2.0 / n);

    std::ostringstream note;
    const double sigma_cond = sigma * (n - 2.0) / (n - 3.0 + 4.0 * sigma);
    bool ok = true;
    if (!(sigma_cond < s)) {
        ok = false;
        note << "sigma(n-2)/(n-3+4 sigma) = " << sigma_cond << " is not < s; ";
    }
    if (!(p > 4.0 / n) || !(p < 4.0 / (n - 2.0 * s))) {
        ok = false;
        note << "p outside (4/n, 4/(n-2s)) = (" << 4.0 / n << ", " << 4.0 / (n - 2.0 * s) << "); ";
    }
    if (!(out.alpha_limit > 0.0) || !(out.beta_limit > 0.0)) {
        ok = false;
        note << "epsilon -> 0 limits not positive (alpha " << out.alpha_limit << ", beta "
             << out.beta_limit << "); ";
    }

    // Both exponents decrease in epsilon: bisect for the largest epsilon in
    // (0, 1] where both remain positive.
    out.suggested_epsilon = kNaN;
    if (ok) {
        auto positive = [&](double e) {
            return holder_alpha(n, p, s, sigma, e) > 0.0 && holder_beta(n, p, s, e) > 0.0;
        };
        double hi = 1.0;
        if (positive(hi)) {
            out.suggested_epsilon = 0.5 * hi;
        } else {
            double lo = 0.0;
            for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                (positive(mid) ? lo : hi) = mid;
            }
            out.suggested_epsilon = 0.5 * lo;
        }
    }
    out.feasible = ok && out.alpha > 0.0 && out.beta > 0.0;
    if (ok && !out.feasible) note << "alpha or beta not positive at the supplied epsilon; ";
    out.note = note.str();
    return out;
}

ParameterSelection select_parameters(int n, double p, double s, double sigma, double data_norm,
                                     double eta, double epsilon_plus) {
    require_dimension(n);
    if (!(sigma > 0.0)) throw ParameterError("select_parameters needs sigma > 0");
    if (!(data_norm >= 0.0)) throw ParameterError("data_norm must be >= 0");
    if (!(eta > 0.0)) throw ParameterError("eta must be > 0");

    ParameterSelection out{};
    const double sc = critical_regularity(n, p);
    const double B = morawetz_b(n, sigma);
    const double m = min1p(p);
    const double lam_exp = sc * B / sigma;              // L ~ lambda^{lam_exp}
    const double n_exp = m * (sc - s) + epsilon_plus;  // increment ~ N^{n_exp}

    if (!(s > sc)) {
        out.note = "s must exceed s_c = " + fmt(sc);
        return out;
    }
    out.gamma = sc * (1.0 - s) * B / (sigma * (s - sc)) + n_exp;
    if (out.gamma >= 0.0) {
        out.note = "Gamma = " + fmt(out.gamma) +
                   " >= 0: s is not above the larger root of s_c(1-s)[n-3-sigma(n-6)] = "
                   "min{1,p} sigma (s_c-s)^2";
        return out;
    }
    const RegularityReport thr = s0(n, p);
    if (thr.feasible && !(s > thr.s_0)) {
        out.note = "s=" + fmt(s) + " does not exceed s_0(n,p) = " + fmt(thr.s_0) + " (" +
                   thr.dominant + " dominates)";
        return out;
    }
    if (!(n_exp < 0.0)) {
        out.note = "min{1,p}(s-s_c) must exceed epsilon_plus";
        return out;
    }

    // lambda(N) from the energy condition, clamped to >= 1; the increment
    // condition is then decreasing in N, so bisect on log N.
    auto lambda_of = [&](double N) {
        if (data_norm == 0.0) return 1.0;
        const double base = std::pow(N, 1.0 - s) * data_norm / eta;
        return std::max(1.0, std::pow(base, 1.0 / (s - sc)));
    };
    auto log_increment = [&](double log_n) {
        const double N = std::exp(log_n);
        return lam_exp * std::log(lambda_of(N)) + n_exp * log_n;
    };
    const double target = std::log(eta);
    double lo = std::log(2.0);
    double log_n;
    if (log_increment(lo) <= target) {
        log_n = lo;
    } else {
        double hi = lo;
        while (log_increment(hi) > target) {
            hi *= 2.0;
            if (hi > 700.0) {
                out.note = "no representable N satisfies the increment condition";
                return out;
            }
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (log_increment(mid) > target ? lo : hi) = mid;
        }
        log_n = hi;
    }
    out.N = std::exp(log_n);
    out.lambda = lambda_of(out.N);
    out.L = std::ceil(std::pow(out.lambda, lam_exp) * (1.0 - 1e-15));
    out.energy_condition = std::pow(out.N, 1.0 - s) * std::pow(out.lambda, sc - s) * data_norm;
    out.increment_condition = std::pow(out.lambda, lam_exp) * std::pow(out.N, n_exp);
    out.feasible = true;
    return out;
}

namespace {

RegularityReport threshold_core(int n, double p) {
    require_dimension(n);
    RegularityReport rep;
    rep.n = n;
    rep.p = p;
    const double lo = 4.0 / n;
    const double hi = 4.0 / (n - 2.0);
    if (!(p > lo && p < hi)) {
        rep.note = "p=" + fmt(p) + " outside (4/n, 4/(n-2)) = (" + fmt(lo) + ", " + fmt(hi) + ")";
        rep.s_c = rep.s_1 = rep.s_2 = rep.s_3 = rep.s_0 = rep.sigma0 = kNaN;
        return rep;
    }
    rep.s_c = critical_regularity(n, p);
    rep.s_1 = s1(n, p);
    rep.s_2 = s2(n, p);
    rep.s1_dominates_s2 = rep.s_2 <= rep.s_1;

    const double sup = sigma0_supremum(n, p);
    const bool any_sigma = sup > 0.0;
    // For n = 3 the s_+ quadratic does not involve sigma, so s_3 is defined
    // even when the sigma0 constraint admits nothing.
    const bool sigma_free = n == 3;
    if (!any_sigma && !sigma_free) {
        rep.note = "no sigma0 > 0 satisfies 2 sigma0[8-p(n+2)] < (n-3)(pn-4)";
        rep.s_3 = rep.s_0 = rep.sigma0 = kNaN;
        return rep;
    }

    auto sigma_of = [&](double s) { return any_sigma ? std::min(s, sup) : s; };
    auto candidate = [&](double s) {
        const SPlus sp = s_plus(n, p, sigma_of(s));
        return std::max({rep.s_1, rep.s_2, sp.real_roots ? sp.value : 1.0});
    };

    // g(s) = candidate(s) - s is strictly decreasing: s_+ is non-increasing in sigma
    // and sigma_of is non-decreasing in s.
    double a = rep.s_c;
    double b = 1.0;
    if (candidate(b) - b >= 0.0) {
        rep.note = "no fixed point s = max(s_1, s_2, s_+(sigma0(s))) in (s_c, 1)";
        rep.s_3 = rep.s_0 = rep.sigma0 = kNaN;
        return rep;
    }
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        (candidate(mid) - mid > 0.0 ? a : b) = mid;
    }
    const double s_star = 0.5 * (a + b);
    rep.sigma0 = sigma_of(s_star);
    const SPlus sp = s_plus(n, p, rep.sigma0);
    rep.s_3 = sp.value;
    rep.quad_a = sp.a;
    rep.quad_b = sp.b;
    rep.quad_c = sp.c;
    rep.s_0 = std::max({rep.s_1, rep.s_2, rep.s_3});
    rep.feasible = true;
    rep.sigma0_feasible = any_sigma && sigma0_feasible(n, p, rep.sigma0, s_star);
    if (any_sigma && rep.sigma0 >= sup)
        rep.note = "sigma0 is the supremum of the strict constraint; s_3 is its limit value";
    if (!any_sigma) rep.note = "sigma0 constraint admits no sigma0 > 0 (p <= 8/5); s_3 uses the sigma-free n=3 root";

    if (rep.s_3 >= rep.s_1 && rep.s_3 >= rep.s_2) rep.dominant = "s_3";
    else if (rep.s_1 >= rep.s_2) rep.dominant = "s_1";
    else rep.dominant = "s_2";
    return rep;
}

}  // namespace

RegularityReport s0(int n, double p) { return threshold_core(n, p); }

RegularityReport s0(int n, double p, double s, double sigma, const ThresholdOptions& opts) {
    RegularityReport rep = threshold_core(n, p);
    rep.s = s;
    rep.sigma = sigma;
    if (!(s > 0.0 && s < 1.0) || !(sigma > 0.0 && sigma <= s)) {
        rep.note += (rep.note.empty() ? "" : "; ") + std::string("need 0 < sigma <= s < 1");
        return rep;
    }
    try {
        rep.interpolation = interpolation_exponents(n, p, sigma, s);
    } catch (const ParameterError& e) {
        rep.note += std::string(rep.note.empty() ? "" : "; ") + e.what();
    }
    HolderExponents h0 = morawetz_holder_exponents(n, p, s, sigma, 0.0);
    if (std::isfinite(h0.suggested_epsilon))
        h0 = morawetz_holder_exponents(n, p, s, sigma, h0.suggested_epsilon);
    rep.holder = h0;
    if (rep.feasible)
        rep.selection = select_parameters(n, p, s, sigma, opts.data_norm, opts.eta, opts.epsilon_plus);
    return rep;
}

std::vector<RegularityReport> table1() {
    return {s0(3, 2.0), s0(3, 3.0), s0(4, 1.5)};
}

}  // namespace imlab
