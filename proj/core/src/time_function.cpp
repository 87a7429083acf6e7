#include "loewner/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "loewner/quadrature.hpp"

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_pieces(const std::vector<TimeFunction::Piece>& pieces) {
    if (pieces.empty()) throw std::invalid_argument("TimeFunction: no pieces");
    if (pieces.front().begin != 0.0)
        throw std::invalid_argument("TimeFunction: coverage must start at t = 0");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (!(p.end > p.begin)) throw std::invalid_argument("TimeFunction: empty piece");
        if (p.kind == TimeFunction::Piece::Kind::power && !(p.alpha > 0.0 && p.alpha < 1.0))
            throw std::invalid_argument("TimeFunction: power exponent must lie in (0,1)");
        if (p.kind == TimeFunction::Piece::Kind::smooth && !p.fn)
            throw std::invalid_argument("TimeFunction: smooth piece without callable");
        if (i + 1 < pieces.size() && pieces[i + 1].begin != p.end)
            throw std::invalid_argument("TimeFunction: pieces must be contiguous");
    }
    if (pieces.back().end != kInf)
        throw std::invalid_argument("TimeFunction: last piece must extend to +inf");
}

} // namespace

double TimeFunction::Piece::eval(double t) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::power: {
            const double dt = t - begin;
            if (dt <= 0.0) return coeff >= 0.0 ? kInf : -kInf;
            return coeff * std::pow(dt, -alpha);
        }
        case Kind::smooth:
            return fn(t);
    }
    return 0.0;
}

TimeFunction::TimeFunction() : pieces_{Piece{}} {}

TimeFunction::TimeFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    validate_pieces(pieces_);
}

TimeFunction TimeFunction::constant(double v) {
    Piece p;
    p.value = v;
    return TimeFunction({p});
}

TimeFunction TimeFunction::piecewise_constant(const std::vector<double>& breaks,
                                              const std::vector<double>& values) {
    if (values.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise_constant: need one more value than breaks");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw std::invalid_argument("piecewise_constant: breaks must be increasing");
    std::vector<Piece> pieces;
    double start = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        Piece p;
        p.begin = start;
        p.end = (i < breaks.size()) ? breaks[i] : kInf;
        p.value = values[i];
        pieces.push_back(p);
        start = p.end;
    }
    return TimeFunction(std::move(pieces));
}

TimeFunction TimeFunction::power(double coeff, double alpha) {
    Piece p;
    p.kind = Piece::Kind::power;
    p.coeff = coeff;
    p.alpha = alpha;
    return TimeFunction({p});
}

TimeFunction TimeFunction::smooth(std::function<double(double)> fn,
                                  std::vector<double> interior_breaks) {
    if (!std::is_sorted(interior_breaks.begin(), interior_breaks.end()))
        throw std::invalid_argument("smooth: breaks must be increasing");
    std::vector<Piece> pieces;
    double start = 0.0;
    for (std::size_t i = 0; i <= interior_breaks.size(); ++i) {
        Piece p;
        p.kind = Piece::Kind::smooth;
        p.begin = start;
        p.end = (i < interior_breaks.size()) ? interior_breaks[i] : kInf;
        p.fn = fn;
        pieces.push_back(p);
        start = p.end;
    }
    return TimeFunction(std::move(pieces));
}

TimeFunction TimeFunction::from_pieces(std::vector<Piece> pieces) {
    return TimeFunction(std::move(pieces));
}

const TimeFunction::Piece& TimeFunction::piece_at(double t) const {
    for (const auto& p : pieces_)
        if (t < p.end) return p;
    return pieces_.back();
}

double TimeFunction::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("TimeFunction: negative time");
    return piece_at(t).eval(t);
}

double TimeFunction::integrate(double a, double b) const {
    if (!(a >= 0.0) || !(b >= a)) throw std::invalid_argument("TimeFunction::integrate: bad interval");
    if (a == b) return 0.0;
    double total = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.begin);
        const double hi = std::min(b, p.end);
        if (hi <= lo) continue;
        switch (p.kind) {
            case Piece::Kind::constant:
                total += p.value * (hi - lo);
                break;
            case Piece::Kind::power: {
                const double e = 1.0 - p.alpha;
                total += p.coeff / e * (std::pow(hi - p.begin, e) - std::pow(lo - p.begin, e));
                break;
            }
            case Piece::Kind::smooth:
                total += integrate_adaptive(p.fn, lo, hi);
                break;
        }
    }
    return total;
}

bool TimeFunction::has_finite_lp(double d, double horizon) const {
    if (!(d >= 1.0)) throw std::invalid_argument("lp_norm: order must satisfy d >= 1");
    for (const auto& p : pieces_) {
        if (p.begin >= horizon) break;
        if (p.kind != Piece::Kind::power || p.coeff == 0.0) continue;
        if (d == kInf || p.alpha * d >= 1.0) return false;
    }
    return true;
}

double TimeFunction::lp_norm(double d, double horizon) const {
    if (!(horizon > 0.0)) throw std::invalid_argument("lp_norm: horizon must be positive");
    if (!has_finite_lp(d, horizon))
        throw CertificateError("lp_norm: divergent L^d norm for the requested order");
    if (d == kInf) {
        double sup = 0.0;
        for (const auto& p : pieces_) {
            const double lo = p.begin;
            const double hi = std::min(horizon, p.end);
            if (hi <= lo) continue;
            switch (p.kind) {
                case Piece::Kind::constant:
                    sup = std::max(sup, std::abs(p.value));
                    break;
                case Piece::Kind::power:
                    // coeff == 0 here, else divergent above
                    break;
                case Piece::Kind::smooth: {
                    const int m = 129;
                    for (int i = 0; i < m; ++i) {
                        const double t = lo + (hi - lo) * (i + 0.5) / m;
                        sup = std::max(sup, std::abs(p.fn(t)));
                    }
                    break;
                }
            }
        }
        return sup;
    }
    double total = 0.0;
    for (const auto& p : pieces_) {
        const double lo = p.begin;
        const double hi = std::min(horizon, p.end);
        if (hi <= lo) continue;
        switch (p.kind) {
            case Piece::Kind::constant:
                total += std::pow(std::abs(p.value), d) * (hi - lo);
                break;
            case Piece::Kind::power: {
                const double e = 1.0 - p.alpha * d;
                total += std::pow(std::abs(p.coeff), d) / e * std::pow(hi - lo, e);
                break;
            }
            case Piece::Kind::smooth:
                total += integrate_adaptive([&](double t) { return std::pow(std::abs(p.fn(t)), d); }, lo, hi);
                break;
        }
    }
    return std::pow(total, 1.0 / d);
}

std::vector<double> TimeFunction::interior_breakpoints(double horizon) const {
    std::vector<double> out;
    for (const auto& p : pieces_)
        if (p.begin > 0.0 && p.begin < horizon) out.push_back(p.begin);
    return out;
}

std::vector<SingularMark> TimeFunction::singularities(double horizon) const {
    std::vector<SingularMark> out;
    for (const auto& p : pieces_)
        if (p.kind == Piece::Kind::power && p.coeff != 0.0 && p.begin < horizon)
            out.push_back({p.begin, p.alpha});
    return out;
}

TimeFunction TimeFunction::scaled(double k) const {
    std::vector<Piece> pieces = pieces_;
    for (auto& p : pieces) {
        switch (p.kind) {
            case Piece::Kind::constant:
                p.value *= k;
                break;
            case Piece::Kind::power:
                p.coeff *= k;
                break;
            case Piece::Kind::smooth: {
                auto fn = p.fn;
                p.fn = [fn, k](double t) { return k * fn(t); };
                break;
            }
        }
    }
    return TimeFunction(std::move(pieces));
}

TimeFunction TimeFunction::abs() const {
    std::vector<Piece> pieces = pieces_;
    for (auto& p : pieces) {
        switch (p.kind) {
            case Piece::Kind::constant:
                p.value = std::fabs(p.value);
                break;
            case Piece::Kind::power:
                p.coeff = std::fabs(p.coeff);
                break;
            case Piece::Kind::smooth: {
                auto fn = p.fn;
                p.fn = [fn](double t) { return std::fabs(fn(t)); };
                break;
            }
        }
    }
    return TimeFunction(std::move(pieces));
}

std::vector<TimeFunction::Piece> TimeFunction::clipped_pieces(double a, double b) const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.begin);
        const double hi = std::min(b, p.end);
        if (hi <= lo) continue;
        Piece q = p;
        if (q.kind == Piece::Kind::power && lo != q.begin) {
            // re-anchoring a power piece would move its singularity; keep the
            // original anchor by wrapping it as a smooth tail
            const double coeff = q.coeff;
            const double alpha = q.alpha;
            const double anchor = q.begin;
            q.kind = Piece::Kind::smooth;
            q.fn = [coeff, alpha, anchor](double t) { return coeff * std::pow(t - anchor, -alpha); };
        }
        q.begin = lo;
        q.end = hi;
        out.push_back(q);
    }
    return out;
}

} // namespace loewner
