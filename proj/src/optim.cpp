#include "polycop/optim.hpp"

#include <algorithm>
#include <cmath>

namespace polycop {

namespace {

double relative_gradient_norm(const std::vector<double>& g, const std::vector<double>& x,
                              double f) {
    double gn = 0.0;
    const double denom = std::max(std::fabs(f), 1.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        gn = std::max(gn, std::fabs(g[i]) * std::max(std::fabs(x[i]), 1.0) / denom);
    return gn;
}

}  // namespace

std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x,
                                     double fd_step) {
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = fd_step * (1.0 + std::fabs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0, const OptimOptions& opts) {
    const std::size_t p = x0.size();
    OptimResult res;
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evaluations = 1;

    // Inverse Hessian approximation, dense row-major.
    std::vector<double> H(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) H[i * p + i] = 1.0;

    std::vector<double> g = numeric_gradient(f, res.x, opts.fd_step);
    res.evaluations += static_cast<int>(2 * p);
    res.gradient_norm = relative_gradient_norm(g, res.x, res.value);

    std::vector<double> dir(p), xn(p), gn(p), s(p), yv(p), Hy(p);
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        if (res.gradient_norm < opts.tolerance) {
            res.converged = true;
            return res;
        }
        // dir = -H g
        for (std::size_t i = 0; i < p; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < p; ++j) v += H[i * p + j] * g[j];
            dir[i] = -v;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
        if (!(slope < 0.0)) {
            // Not a descent direction; reset to steepest descent.
            std::fill(H.begin(), H.end(), 0.0);
            for (std::size_t i = 0; i < p; ++i) H[i * p + i] = 1.0;
            for (std::size_t i = 0; i < p; ++i) dir[i] = -g[i];
            slope = 0.0;
            for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
            if (!(slope < 0.0)) return res;  // gradient is numerically zero
        }

        // Backtracking Armijo search.
        double alpha = 1.0;
        double fn = res.value;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < p; ++i) xn[i] = res.x[i] + alpha * dir[i];
            fn = f(xn);
            res.evaluations++;
            if (std::isfinite(fn) && fn <= res.value + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // No progress possible along this direction at representable steps.
            return res;
        }

        gn = numeric_gradient(f, xn, opts.fd_step);
        res.evaluations += static_cast<int>(2 * p);
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            s[i] = xn[i] - res.x[i];
            yv[i] = gn[i] - g[i];
            sy += s[i] * yv[i];
            ss += s[i] * s[i];
            yy += yv[i] * yv[i];
        }
        res.x = xn;
        res.value = fn;
        g = gn;
        res.gradient_norm = relative_gradient_norm(g, res.x, res.value);

        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            // BFGS update of the inverse Hessian.
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < p; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < p; ++j) v += H[i * p + j] * yv[j];
                Hy[i] = v;
            }
            double yHy = 0.0;
            for (std::size_t i = 0; i < p; ++i) yHy += yv[i] * Hy[i];
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    H[i * p + j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] -
                                           s[i] * Hy[j]);
        }
    }
    res.converged = res.gradient_norm < opts.tolerance;
    return res;
}

}  // namespace polycop
