#pragma once

#include <functional>
#include <string>

namespace imlab {

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3, clamped to [0, 1] outside (0, 1).
double smoothstep5(double t) noexcept;

/// Littlewood-Paley bump: 1 for r <= 1, 0 for r >= 2, smoothstep5(2 - r) between.
double lp_bump(double r) noexcept;

/// I-operator symbol m_N(r).
///
///   r <= N       : 1
///   r >= 2N      : (r/N)^(s-1)
///   N < r < 2N   : (r/N)^((s-1) * w(log2(r/N)))   with w = smoothstep5
///
/// The band formula is C^2, meets both endpoint branches and is non-increasing
/// because d/dt[t w(t)] >= 0 on [0, 1].
double i_symbol(double r, double N, double s) noexcept;

/// <xi> = (1 + |xi|^2)^{1/2}, |xi| in cycles per length.
double japanese_bracket(double r) noexcept;

/// Radial Fourier symbol. Every symbol is a function of |xi| only.
class MultiplierSymbol {
  public:
    enum class Kind { fractional, bracket, lp_low, lp_band, lp_high, i_operator, custom };

    /// |xi|^s. At xi = 0 the value is 1 for s = 0 and 0 otherwise
    /// (negative orders drop the zero mode).
    static MultiplierSymbol fractional(double s);
    /// <xi>^s.
    static MultiplierSymbol bracket(double s);
    /// phi(xi/N), phi(xi/N) - phi(2 xi/N), 1 - phi(xi/N).
    static MultiplierSymbol lp_low(double N);
    static MultiplierSymbol lp_band(double N);
    static MultiplierSymbol lp_high(double N);
    /// m_N with smoothness index s in (0, 1).
    static MultiplierSymbol i_operator(double N, double s);
    static MultiplierSymbol custom(std::string name, std::function<double(double)> fn);

    Kind kind() const noexcept { return kind_; }
    double order() const noexcept { return order_; }
    double scale() const noexcept { return scale_; }
    const std::string& name() const noexcept { return name_; }

    /// Fractional symbol of negative order; it vanishes on the zero mode.
    bool discards_zero_mode() const noexcept {
        return drops_zero_mode_;
    }

    double operator()(double r) const { return fn_(r); }

    /// Pointwise product; the result is a custom symbol that still drops the
    /// zero mode if either factor does.
    friend MultiplierSymbol operator*(const MultiplierSymbol& a, const MultiplierSymbol& b);

  private:
    MultiplierSymbol(Kind kind, double order, double scale, std::string name,
                     std::function<double(double)> fn);

    Kind kind_;
    double order_;
    double scale_;
    std::string name_;
    std::function<double(double)> fn_;
    bool drops_zero_mode_ = false;
};

}  // namespace imlab
