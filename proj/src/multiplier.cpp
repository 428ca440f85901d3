#include "imlab/multiplier.hpp"

#include "imlab/errors.hpp"

#include <cmath>
#include <utility>

namespace imlab {

double smoothstep5(double t) noexcept {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double lp_bump(double r) noexcept {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return smoothstep5(2.0 - r);
}

double i_symbol(double r, double N, double s) noexcept {
    if (r <= N) return 1.0;
    const double ratio = r / N;
    if (r >= 2.0 * N) return std::pow(ratio, s - 1.0);
    return std::pow(ratio, (s - 1.0) * smoothstep5(std::log2(ratio)));
}

double japanese_bracket(double r) noexcept { return std::sqrt(1.0 + r * r); }

MultiplierSymbol::MultiplierSymbol(Kind kind, double order, double scale, std::string name,
                                   std::function<double(double)> fn)
    : kind_(kind), order_(order), scale_(scale), name_(std::move(name)), fn_(std::move(fn)) {}

MultiplierSymbol MultiplierSymbol::fractional(double s) {
    MultiplierSymbol m(Kind::fractional, s, 0.0, "abs_grad^" + std::to_string(s), [s](double r) {
        if (r == 0.0) return s == 0.0 ? 1.0 : 0.0;
        return std::pow(r, s);
    });
    m.drops_zero_mode_ = s < 0.0;
    return m;
}

MultiplierSymbol MultiplierSymbol::bracket(double s) {
    return {Kind::bracket, s, 0.0, "bracket^" + std::to_string(s),
            [s](double r) { return std::pow(1.0 + r * r, 0.5 * s); }};
}

MultiplierSymbol MultiplierSymbol::lp_low(double N) {
    if (!(N > 0.0)) throw ParameterError("Littlewood-Paley scale must be positive");
    return {Kind::lp_low, 0.0, N, "P_le", [N](double r) { return lp_bump(r / N); }};
}

MultiplierSymbol MultiplierSymbol::lp_band(double N) {
    if (!(N > 0.0)) throw ParameterError("Littlewood-Paley scale must be positive");
    return {Kind::lp_band, 0.0, N, "P_N",
            [N](double r) { return lp_bump(r / N) - lp_bump(2.0 * r / N); }};
}

MultiplierSymbol MultiplierSymbol::lp_high(double N) {
    if (!(N > 0.0)) throw ParameterError("Littlewood-Paley scale must be positive");
    return {Kind::lp_high, 0.0, N, "P_gt", [N](double r) { return 1.0 - lp_bump(r / N); }};
}

MultiplierSymbol MultiplierSymbol::i_operator(double N, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw ParameterError("I-operator needs s in (0, 1), got " + std::to_string(s));
    if (!(N > 1.0)) throw ParameterError("I-operator needs N > 1, got " + std::to_string(N));
    return {Kind::i_operator, s, N, "I_N", [N, s](double r) { return i_symbol(r, N, s); }};
}

MultiplierSymbol MultiplierSymbol::custom(std::string name, std::function<double(double)> fn) {
    return {Kind::custom, 0.0, 0.0, std::move(name), std::move(fn)};
}

MultiplierSymbol operator*(const MultiplierSymbol& a, const MultiplierSymbol& b) {
    MultiplierSymbol m = MultiplierSymbol::custom(
        a.name() + "*" + b.name(), [fa = a.fn_, fb = b.fn_](double r) { return fa(r) * fb(r); });
    m.drops_zero_mode_ = a.drops_zero_mode_ || b.drops_zero_mode_;
    return m;
}

}  // namespace imlab
