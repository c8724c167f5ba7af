#ifndef PFB_POTENTIAL_HPP
#define PFB_POTENTIAL_HPP

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pfb/errors.hpp"
#include "pfb/quadrature.hpp"
#include "pfb/special.hpp"

namespace pfb {

enum class PotentialKind { SquareWell, Exponential, Gaussian, TabulatedRadial };

inline const char* kind_name(PotentialKind k) {
    switch (k) {
    case PotentialKind::SquareWell: return "SquareWell";
    case PotentialKind::Exponential: return "Exponential";
    case PotentialKind::Gaussian: return "Gaussian";
    default: return "TabulatedRadial";
    }
}

// Radial attractive potential V <= 0 with a scaling parameter kappa acting as
// V_kappa(x) = V(x/kappa)/kappa^2 (the zoom that preserves ||K_0||).
class Potential {
public:
    static Potential square_well(double depth, double radius, int d = 3) {
        return Potential(PotentialKind::SquareWell, depth, radius, d);
    }
    static Potential exponential(double depth, double range, int d = 3) {
        return Potential(PotentialKind::Exponential, depth, range, d);
    }
    static Potential gaussian(double depth, double width, int d = 3) {
        return Potential(PotentialKind::Gaussian, depth, width, d);
    }
    // Nodes must be strictly increasing, starting at r = 0; values are clamped
    // to <= 0 and the profile is identically 0 beyond the last node.
    static Potential tabulated(std::vector<double> r, std::vector<double> v, int d = 3) {
        Potential p(PotentialKind::TabulatedRadial, 0.0, 0.0, d);
        if (r.size() < 2 || r.size() != v.size())
            throw domain_error("tabulated potential: need >= 2 matching (r, value) nodes");
        for (std::size_t i = 0; i + 1 < r.size(); ++i)
            if (!(r[i] < r[i + 1]))
                throw domain_error("tabulated potential: nodes must be strictly increasing");
        if (r.front() != 0.0)
            throw domain_error("tabulated potential: grid must start at r = 0");
        for (double& val : v)
            val = std::min(val, 0.0);
        p.tab_r_ = std::move(r);
        p.tab_v_ = std::move(v);
        p.range_ = p.tab_r_.back();
        p.compute_pchip_slopes();
        return p;
    }

    // V_kappa(r): profile evaluated at r/kappa, divided by kappa^2
    double operator()(double r) const {
        if (r < 0.0)
            throw domain_error("potential evaluated at negative radius");
        const double s = r / kappa_;
        const double inv_k2 = 1.0 / (kappa_ * kappa_);
        switch (kind_) {
        case PotentialKind::SquareWell:
            return s <= range_ ? -depth_ * inv_k2 : 0.0;
        case PotentialKind::Exponential:
            return -depth_ * std::exp(-s / range_) * inv_k2;
        case PotentialKind::Gaussian:
            return -depth_ * std::exp(-0.5 * s * s / (range_ * range_)) * inv_k2;
        default:
            return pchip_eval(s) * inv_k2;
        }
    }

    Potential scaled(double kappa) const {
        if (!(kappa > 0.0))
            throw domain_error("potential scale must be positive");
        Potential p = *this;
        p.kappa_ *= kappa; // composition: (V_a)_b = V_{ab}
        return p;
    }

    PotentialKind kind() const { return kind_; }
    int dimension() const { return d_; }
    double scale() const { return kappa_; }
    double depth() const { return depth_; }
    double range_parameter() const { return range_; }

    // Radius of a jump discontinuity (square well edge), 0 if the profile is smooth.
    double edge_radius() const {
        return kind_ == PotentialKind::SquareWell ? kappa_ * range_ : 0.0;
    }
    bool compact_support() const {
        return kind_ == PotentialKind::SquareWell || kind_ == PotentialKind::TabulatedRadial;
    }
    // End of support for compact kinds, 0 otherwise.
    double support_end() const { return compact_support() ? kappa_ * range_ : 0.0; }

    // Truncation radius for half-line discretizations: exact support end for
    // compact kinds, 25 e-foldings for the exponential, 10 sigma for the Gaussian.
    double suggested_rmax() const {
        switch (kind_) {
        case PotentialKind::SquareWell: return kappa_ * range_;
        case PotentialKind::Exponential: return 25.0 * kappa_ * range_;
        case PotentialKind::Gaussian: return 10.0 * kappa_ * range_;
        default: return kappa_ * range_;
        }
    }

    // (integral |V|^q dx)^{1/q} over R^d by radial quadrature.
    double lp_norm(double q) const {
        if (!(q > 1.0))
            throw domain_error("lp_norm: exponent must exceed 1");
        const double rmax = lp_tail_radius(q);
        auto f = [&](double r) { return std::pow(-(*this)(r), q) * std::pow(r, d_ - 1); };
        std::vector<double> pts{0.0, rmax};
        if (edge_radius() > 0.0)
            pts.push_back(edge_radius());
        double integral = unit_sphere_area(d_) * adaptive_integrate(f, pts, 1e-11, 1e-300);
        return std::pow(integral, 1.0 / q);
    }

    // Rollnik double integral  II = int int |V(x)||V(y)| / |x-y|^2 dx dy  (d = 3 only),
    // reduced over angles to 8 pi^2 int int |V(r)||V(r')| r r' ln((r+r')/|r-r'|) dr dr'.
    double rollnik_norm() const {
        if (d_ != 3)
            throw domain_error("rollnik_norm: defined for d = 3 only");
        const double rmax = suggested_rmax();
        auto outer = [&](double r) {
            auto inner = [&](double rp) {
                if (rp == r)
                    return 0.0; // integrable log endpoint; never sampled by Gauss nodes
                return -(*this)(rp) * rp * std::log((r + rp) / std::abs(r - rp));
            };
            std::vector<double> pts{0.0, rmax};
            if (r > 0.0 && r < rmax)
                pts.push_back(r);
            if (edge_radius() > 0.0)
                pts.push_back(edge_radius());
            return -(*this)(r) * r * adaptive_integrate(inner, pts, 1e-9, 1e-300);
        };
        std::vector<double> opts{0.0, rmax};
        if (edge_radius() > 0.0)
            opts.push_back(edge_radius());
        double dbl = adaptive_integrate(outer, opts, 1e-9, 1e-300);
        return 8.0 * std::numbers::pi * std::numbers::pi * dbl;
    }

    // D_V = sqrt(2) pi (Gamma(d/2-1)/Gamma(d/2+1)) (Gamma(d)/Gamma(d/2))^{2/d} ||V||_{d/2}^2,
    // an upper bound for ||K_0||.
    double lieb_bound() const {
        double n = lp_norm(0.5 * d_);
        return lieb_constant(d_) * n * n;
    }
    static double lieb_constant(int d) {
        return std::numbers::sqrt2 * std::numbers::pi *
               (std::tgamma(0.5 * d - 1.0) / std::tgamma(0.5 * d + 1.0)) *
               std::pow(std::tgamma(double(d)) / std::tgamma(0.5 * d), 2.0 / d);
    }

    std::string describe() const {
        char buf[160];
        if (kind_ == PotentialKind::TabulatedRadial)
            std::snprintf(buf, sizeof buf, "TabulatedRadial(nodes=%zu,rlast=%g,kappa=%g,d=%d)",
                          tab_r_.size(), range_, kappa_, d_);
        else
            std::snprintf(buf, sizeof buf, "%s(%g,%g,kappa=%g,d=%d)", kind_name(kind_), depth_,
                          range_, kappa_, d_);
        return buf;
    }

    const std::vector<double>& tab_nodes() const { return tab_r_; }
    const std::vector<double>& tab_values() const { return tab_v_; }

private:
    Potential(PotentialKind kind, double depth, double range, int d)
        : kind_(kind), depth_(depth), range_(range), d_(d) {
        if (d < 3)
            throw domain_error("potential: dimension must be >= 3");
        if (kind != PotentialKind::TabulatedRadial) {
            if (depth < 0.0)
                throw domain_error("potential: depth must be nonnegative");
            if (!(range > 0.0))
                throw domain_error("potential: range parameter must be positive");
        }
    }

    double lp_tail_radius(double q) const {
        switch (kind_) {
        case PotentialKind::SquareWell:
        case PotentialKind::TabulatedRadial:
            return kappa_ * range_;
        case PotentialKind::Exponential:
            // e^{-q r/(kappa a)} below 1e-40 relative
            return kappa_ * range_ * std::max(30.0, 95.0 / q);
        default:
            return kappa_ * range_ * std::max(8.0, 14.0 / std::sqrt(q));
        }
    }

    // Monotone piecewise-cubic slopes (Fritsch-Carlson weighted harmonic mean);
    // keeps the interpolant free of overshoot so clamping stays a no-op between
    // nodes of one sign.
    void compute_pchip_slopes() {
        const std::size_t n = tab_r_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = tab_r_[i + 1] - tab_r_[i];
            delta[i] = (tab_v_[i + 1] - tab_v_[i]) / h[i];
        }
        tab_m_.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] > 0.0) {
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                tab_m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (m * d0 <= 0.0)
                m = 0.0;
            else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0))
                m = 3.0 * d0;
            return m;
        };
        tab_m_[0] = n > 2 ? endpoint(h[0], h[1], delta[0], delta[1]) : delta[0];
        tab_m_[n - 1] =
            n > 2 ? endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]) : delta[n - 2];
    }

    double pchip_eval(double s) const {
        if (s >= tab_r_.back())
            return 0.0; // documented: zero extrapolation beyond the grid
        if (s <= tab_r_.front())
            return tab_v_.front();
        std::size_t lo = 0, hi = tab_r_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (tab_r_[mid] <= s ? lo : hi) = mid;
        }
        double h = tab_r_[lo + 1] - tab_r_[lo];
        double t = (s - tab_r_[lo]) / h;
        double t2 = t * t, t3 = t2 * t;
        double val = (2 * t3 - 3 * t2 + 1) * tab_v_[lo] + (t3 - 2 * t2 + t) * h * tab_m_[lo] +
                     (-2 * t3 + 3 * t2) * tab_v_[lo + 1] + (t3 - t2) * h * tab_m_[lo + 1];
        return std::min(val, 0.0);
    }

    PotentialKind kind_;
    double depth_;
    double range_;
    int d_;
    double kappa_ = 1.0;
    std::vector<double> tab_r_, tab_v_, tab_m_;
};

} // namespace pfb

#endif
