#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imlab {

/// (n, p, s, sigma) for the threshold calculus. Construction rejects
/// n < 3, p outside (4/n, 4/(n-2)), s outside (0, 1) and sigma outside (0, s].
struct ProblemParams {
    ProblemParams(int n, double p, double s, double sigma);

    int n;
    double p;
    double s;
    double sigma;
};

/// s_c = n/2 - 2/p.
double critical_regularity(int n, double p);
/// np / (2(p+2)).
double s1(int n, double p);
/// (1 + min{1,p} s_c) / (1 + min{1,p}).
double s2(int n, double p);

/// Larger root of  s_c (1-s) [n-3-sigma(n-6)] = min{1,p} sigma (s_c - s)^2,
/// written as a s^2 + b s + c = 0.
struct SPlus {
    double value;       ///< NaN when the discriminant is negative
    bool real_roots;
    double a, b, c;     ///< polynomial coefficients
    double residual;    ///< |a v^2 + b v + c| at the returned root
};
SPlus s_plus(int n, double p, double sigma);

/// 2 sigma0 [8 - p(n+2)] < (n-3)(pn-4) and sigma0 <= s.
bool sigma0_feasible(int n, double p, double sigma0, double s);

/// Supremum of the sigma0 satisfying the strict inequality alone
/// (+inf when every sigma0 > 0 works, 0 when none does).
double sigma0_supremum(int n, double p);

/// Linear coefficient in s_+ = 1 - coeff * sigma + O(sigma^2):
/// (s_c - 1)^2 min{1,p} / ((n-3) s_c). Requires n >= 4.
double remark3_slope(int n, double p);

/// 2/q + n/r = n/2 (to 1e-12), 2 <= q, r <= inf, (q, r, n) != (2, inf, 2).
bool admissible_pair_check(double q, double r, int n);

/// The four pair families used by the argument, for given sigma, p and epsilon:
/// (2, 2n/(n-2)); ((n-3+4s)/s, 2n(n-3+4s)/(n(n-3+4s)-4s));
/// (2p(2+e)/e, 2np(2+e)/(np(2+e)-2e)); (2+e, 2n(2+e)/(n(2+e)-4)).
std::vector<std::pair<double, double>> working_admissible_pairs(int n, double sigma, double p,
                                                                double epsilon);

struct InterpolationExponents {
    double epsilon;  ///< 4 p sigma / (n - 3 + 4 sigma - 2 p sigma)
    double theta;    ///< (n-3+4 sigma)[4 - p(n-2)] / (2p [n-3-sigma(n-6)])
    bool degenerate = false;  ///< vanishing denominator in epsilon
    bool valid = false;       ///< epsilon > 0 and 0 < theta <= 1 and p in range
    std::string note;
};
/// Throws ParameterError when p is at or below 4(n-3+4 sigma)/(n(n-3+2 sigma)+4 sigma).
/// `s`, when given, adds the upper bound p < 4/(n-2s) (flagged, not thrown).
InterpolationExponents interpolation_exponents(int n, double p, double sigma,
                                               std::optional<double> s = std::nullopt);

struct HolderExponents {
    double alpha;
    double beta;
    double alpha_limit;        ///< p(1 - n/(2s)) + 2/s
    double beta_limit;         ///< (n/s)(p/2 - 2/n)
    double suggested_epsilon;  ///< half the largest epsilon in (0, 1] keeping both positive
    bool feasible = false;
    std::string note;
};
HolderExponents morawetz_holder_exponents(int n, double p, double s, double sigma, double epsilon);

/// alpha(eps), beta(eps) alone.
double holder_alpha(int n, double p, double s, double sigma, double epsilon);
double holder_beta(int n, double p, double s, double epsilon);

struct ParameterSelection {
    bool feasible = false;
    std::string note;
    double gamma = 0.0;  ///< exponent of N after eliminating lambda
    double N = 0.0;
    double lambda = 0.0;
    double L = 0.0;
    /// N^{1-s} lambda^{s_c-s} data_norm
    double energy_condition = 0.0;
    /// lambda^{s_c[n-3-sigma(n-6)]/sigma} N^{min{1,p}(s_c-s)+eps_plus}
    double increment_condition = 0.0;
};
/// Smallest N >= 2 (and lambda >= 1) satisfying both smallness conditions with
/// threshold eta; L = ceil(lambda^{s_c[n-3-sigma(n-6)]/sigma}).
ParameterSelection select_parameters(int n, double p, double s, double sigma, double data_norm,
                                     double eta = 0.1, double epsilon_plus = 0.01);

struct RegularityReport {
    int n = 0;
    double p = 0.0;
    double s_c = 0.0;
    double s_1 = 0.0;
    double s_2 = 0.0;
    double s_3 = 0.0;
    double s_0 = 0.0;
    double sigma0 = 0.0;
    double quad_a = 0.0, quad_b = 0.0, quad_c = 0.0;  ///< s_+ quadratic at sigma0

    bool feasible = false;          ///< a fixed point s_0 in (s_c, 1) was found
    bool sigma0_feasible = false;   ///< sigma0 meets the strict constraint
    bool s1_dominates_s2 = false; ///< s_2 <= s_1
    std::string dominant;           ///< which of s_1, s_2, s_3 attains the max
    std::string note;

    // Filled when (s, sigma) are supplied.
    std::optional<double> s;
    std::optional<double> sigma;
    std::optional<InterpolationExponents> interpolation;
    std::optional<HolderExponents> holder;
    std::optional<ParameterSelection> selection;
};

struct ThresholdOptions {
    double eta = 0.1;
    double epsilon_plus = 0.01;
    double data_norm = 1.0;
};

/// s_0 = max(s_1, s_2, s_3) with s_3 = s_+(sigma0(s_0)), sigma0(s) = min(s, sup feasible),
/// solved as a fixed point by bisection on (s_c, 1).
RegularityReport s0(int n, double p);
RegularityReport s0(int n, double p, double s, double sigma, const ThresholdOptions& opts = {});

/// Rows (3, 2), (3, 3), (4, 3/2).
std::vector<RegularityReport> table1();

}  // namespace imlab
