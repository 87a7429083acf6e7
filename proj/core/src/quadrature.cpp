#include "loewner/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace loewner {

namespace {

QuadRule make_rule(int order) {
    if (order < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    QuadRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

} // namespace

const QuadRule& gauss_legendre(int order) {
    static std::mutex mtx;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
    const QuadRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

namespace {

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double rel_tol, double abs_tol, int depth, int max_depth) {
    const double mid = 0.5 * (a + b);
    const double left = integrate_gl(f, a, mid, 16);
    const double right = integrate_gl(f, mid, b, 16);
    const double refined = left + right;
    if (depth >= max_depth) return refined;
    if (std::abs(refined - whole) <= abs_tol + rel_tol * std::abs(refined)) return refined;
    return adapt(f, a, mid, left, rel_tol, 0.5 * abs_tol, depth + 1, max_depth) +
           adapt(f, mid, b, right, rel_tol, 0.5 * abs_tol, depth + 1, max_depth);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: b < a");
    if (a == b) return 0.0;
    const double whole = integrate_gl(f, a, b, 16);
    return adapt(f, a, b, whole, rel_tol, abs_tol, 0, max_depth);
}

} // namespace loewner
