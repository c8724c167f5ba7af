#ifndef PFB_QUADRATURE_HPP
#define PFB_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "pfb/errors.hpp"

namespace pfb {

struct GaussRule {
    std::vector<double> x; // nodes on (-1,1)
    std::vector<double> w; // weights, sum = 2
};

// Gauss-Legendre rule by Newton iteration on P_n, seeded with the Chebyshev
// angle approximation of the k-th root.  Accurate to ~1e-15 for n <= 64.
inline GaussRule compute_gauss_rule(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.x[k] = -x;
        rule.x[n - 1 - k] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.w[k] = w;
        rule.w[n - 1 - k] = w;
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_gauss_rule(n)).first;
    return it->second;
}

struct PanelRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Composite rule: nodes_per_panel Gauss-Legendre points on each [breaks[i], breaks[i+1]].
inline PanelRule panel_rule(const std::vector<double>& breaks, int nodes_per_panel) {
    const GaussRule& g = gauss_rule(nodes_per_panel);
    PanelRule r;
    r.x.reserve((breaks.size() - 1) * nodes_per_panel);
    r.w.reserve((breaks.size() - 1) * nodes_per_panel);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i], b = breaks[i + 1];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int j = 0; j < nodes_per_panel; ++j) {
            r.x.push_back(mid + half * g.x[j]);
            r.w.push_back(half * g.w[j]);
        }
    }
    return r;
}

// Halve every panel (keeps grading, doubles the node count).
inline std::vector<double> halve_panels(const std::vector<double>& breaks) {
    std::vector<double> out;
    out.reserve(2 * breaks.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        out.push_back(breaks[i]);
        out.push_back(0.5 * (breaks[i] + breaks[i + 1]));
    }
    out.push_back(breaks.back());
    return out;
}

// Uniform panels on [a, r_core] followed by geometrically growing panels up to
// r_max (ratio > 1).  Used for potentials with exponential tails, where a
// uniform mesh out to the truncation radius wastes nodes on dead tail.
inline std::vector<double> graded_breaks(double a, double r_core, double r_max,
                                         int core_panels, double ratio = 1.6) {
    std::vector<double> breaks;
    for (int i = 0; i <= core_panels; ++i)
        breaks.push_back(a + (r_core - a) * i / core_panels);
    double h = (r_core - a) / core_panels;
    double r = r_core;
    while (r < r_max) {
        h *= ratio;
        r = std::min(r + h, r_max);
        breaks.push_back(r);
    }
    return breaks;
}

// Adaptive quadrature by panel bisection: a panel is accepted when the
// 15-point Gauss value agrees with the sum over its two halves.
inline double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol = 1e-10, double abs_tol = 1e-14,
                                 int max_depth = 48) {
    const GaussRule& g = gauss_rule(15);
    auto panel = [&](double lo, double hi) {
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double s = 0.0;
        for (int j = 0; j < 15; ++j)
            s += g.w[j] * f(mid + half * g.x[j]);
        return half * s;
    };
    struct Seg {
        double lo, hi, val;
        int depth;
    };
    std::vector<Seg> stack{{a, b, panel(a, b), 0}};
    double total = 0.0;
    double coarse_total = std::abs(stack[0].val);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double mid = 0.5 * (s.lo + s.hi);
        double v1 = panel(s.lo, mid), v2 = panel(mid, s.hi);
        double err = std::abs(v1 + v2 - s.val);
        double tol = std::max(abs_tol, rel_tol * std::max(coarse_total, std::abs(v1 + v2)));
        if (err < tol || s.depth >= max_depth) {
            if (s.depth >= max_depth && err > 1e3 * tol)
                throw convergence_error("adaptive quadrature: panel not converged");
            total += v1 + v2;
        } else {
            stack.push_back({s.lo, mid, v1, s.depth + 1});
            stack.push_back({mid, s.hi, v2, s.depth + 1});
        }
    }
    return total;
}

// Same, but with interior split points (kernel kinks, PV subtraction points...).
inline double adaptive_integrate(const std::function<double(double)>& f,
                                 std::vector<double> pts, double rel_tol = 1e-10,
                                 double abs_tol = 1e-14) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += adaptive_integrate(f, pts[i], pts[i + 1], rel_tol, abs_tol);
    return total;
}

// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville scheme).
inline double extrapolate_to_zero(const std::vector<double>& xs, std::vector<double> ys) {
    const std::size_t n = xs.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i)
            ys[i] = (xs[i] * ys[i + 1] - xs[i + k] * ys[i]) / (xs[i] - xs[i + k]);
    return ys[0];
}

} // namespace pfb

#endif
