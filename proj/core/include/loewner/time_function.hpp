#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace loewner {

/// Location and exponent of a declared integrable power singularity
/// c * (t - t0)^{-alpha}, 0 < alpha < 1.
struct SingularMark {
    double t = 0.0;
    double alpha = 0.0;
};

inline constexpr double kOrderInf = std::numeric_limits<double>::infinity();

/// Piecewise real function of time on [0, +inf) drawn from a closed
/// vocabulary: constants, power singularities anchored at the left end of
/// their piece, and piecewise-smooth callables. The restricted vocabulary is
/// what makes L^d norms and Caratheodory integration exact where they need
/// to be.
class TimeFunction {
public:
    struct Piece {
        double begin = 0.0;
        double end = std::numeric_limits<double>::infinity();
        enum class Kind { constant, power, smooth } kind = Kind::constant;
        double value = 0.0;                // constant
        double coeff = 0.0;                // power: coeff * (t - begin)^{-alpha}
        double alpha = 0.0;                // 0 < alpha < 1
        std::function<double(double)> fn;  // smooth

        double eval(double t) const;
    };

    /// Zero function.
    TimeFunction();

    static TimeFunction constant(double v);
    /// values[i] on [breaks[i-1], breaks[i]); breaks are interior, increasing.
    static TimeFunction piecewise_constant(const std::vector<double>& breaks,
                                           const std::vector<double>& values);
    /// coeff * t^{-alpha} on [0, inf), 0 < alpha < 1.
    static TimeFunction power(double coeff, double alpha);
    static TimeFunction smooth(std::function<double(double)> fn,
                               std::vector<double> interior_breaks = {});
    static TimeFunction from_pieces(std::vector<Piece> pieces);

    double operator()(double t) const;

    /// Exact for constant and power pieces, adaptive quadrature for smooth
    /// pieces. Requires 0 <= a <= b.
    double integrate(double a, double b) const;

    /// (integral_0^T |f|^d)^(1/d); d = kOrderInf gives the essential sup
    /// (sampled sup on smooth pieces). Throws CertificateError when the
    /// norm diverges.
    double lp_norm(double d, double horizon) const;
    bool has_finite_lp(double d, double horizon) const;

    /// Interior piece boundaries in (0, horizon).
    std::vector<double> interior_breakpoints(double horizon) const;
    /// Declared power singularities with anchor < horizon.
    std::vector<SingularMark> singularities(double horizon) const;

    TimeFunction scaled(double k) const;
    TimeFunction abs() const;

    /// Pieces of this function clipped to [a, b); used to glue piecewise
    /// certificates.
    std::vector<Piece> clipped_pieces(double a, double b) const;

    const std::vector<Piece>& pieces() const { return pieces_; }

private:
    explicit TimeFunction(std::vector<Piece> pieces);
    const Piece& piece_at(double t) const;

    std::vector<Piece> pieces_;
};

} // namespace loewner
