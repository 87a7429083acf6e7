#pragma once

#include <functional>
#include <vector>

namespace loewner {

/// Gauss-Legendre rule on [-1, 1].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the requested order; nodes are computed once per order and cached.
const QuadRule& gauss_legendre(int order);

/// Fixed-order Gauss-Legendre integral of f over [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order = 32);

/// Panel-bisecting adaptive Gauss-Legendre integral of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13, double abs_tol = 1e-15, int max_depth = 28);

} // namespace loewner
