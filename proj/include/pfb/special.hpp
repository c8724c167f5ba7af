#ifndef PFB_SPECIAL_HPP
#define PFB_SPECIAL_HPP

#include <cmath>
#include <numbers>

namespace pfb {

// Modified spherical Bessel functions in the exponentially scaled forms that
// stay O(1) for all arguments:
//   scaled_iv(l,z) = z i_l(z) e^{-z},   scaled_kv(l,z) = z k_l(z) e^{+z},
// with the normalization k_0(z) = e^{-z}/z (so z k_0 e^{z} = 1).  The product
//   (2/q) scaled_iv(l, q r<) scaled_kv(l, q r>) e^{-q(r> - r<)}
// is then the sector Green kernel of -u''/2 + l(l+1)u/(2r^2) - E u with
// E = -q^2/2, evaluated without overflow even at E = -1e6.

inline double double_factorial_odd(int l) {
    // (2l+1)!!
    double v = 1.0;
    for (int j = 3; j <= 2 * l + 1; j += 2)
        v *= j;
    return v;
}

inline double scaled_iv(int l, double z) {
    if (z <= 0.0)
        return 0.0;
    if (z < l + 2.0) {
        // e^{-z} z^{l+1} sum_k (z^2/2)^k / (k! (2l+2k+1)!!); converges in a few terms
        double term = std::pow(z, l + 1) / double_factorial_odd(l);
        double sum = term;
        double z2h = 0.5 * z * z;
        for (int k = 1; k < 200; ++k) {
            term *= z2h / (k * (2.0 * l + 2.0 * k + 1.0));
            sum += term;
            if (term < 1e-18 * sum)
                break;
        }
        return sum * std::exp(-z);
    }
    // upward recurrence, stable for z > l
    double im = 0.5 * (1.0 - std::exp(-2.0 * z));                        // l = 0
    double ic = ((z - 1.0) + (z + 1.0) * std::exp(-2.0 * z)) / (2.0 * z); // l = 1
    if (l == 0)
        return im;
    for (int j = 1; j < l; ++j) {
        double in = im - (2.0 * j + 1.0) / z * ic;
        im = ic;
        ic = in;
    }
    return ic;
}

inline double scaled_kv(int l, double z) {
    if (l <= 0)
        return 1.0; // z k_0 e^{z} = 1; l = -1 shares k_0 by convention
    double km = 1.0;
    double kc = 1.0 + 1.0 / z;
    for (int j = 1; j < l; ++j) {
        double kn = km + (2.0 * j + 1.0) / z * kc;
        km = kc;
        kc = kn;
    }
    return kc;
}

// Surface area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
inline double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

} // namespace pfb

#endif
