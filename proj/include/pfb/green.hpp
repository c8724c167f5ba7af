#ifndef PFB_GREEN_HPP
#define PFB_GREEN_HPP

#include <cmath>

#include "pfb/errors.hpp"
#include "pfb/potential.hpp"
#include "pfb/special.hpp"

namespace pfb {

// Angular sector of the free operator h0 = -Laplacian/2 at spectral parameter E <= 0.
struct SectorSpec {
    int d = 3;      // spatial dimension
    int ell = 0;    // angular momentum sector
    double E = 0.0; // E <= 0; q = sqrt(-2E)

    double q() const { return std::sqrt(-2.0 * E); }

    void validate() const {
        if (d < 3 || ell < 0 || E > 0.0)
            throw domain_error("sector: need d >= 3, ell >= 0, E <= 0");
        if (d > 3 && (ell != 0 || E != 0.0))
            throw domain_error("sector: d > 3 supported only for ell = 0, E = 0");
    }
};

// Kernel of (h0 - E)^{-1} in sector ell after u(r) = r psi(r) (d = 3):
//   E = 0:  g = 2/(2l+1) r_<^{l+1} r_>^{-l}
//   E < 0:  g = (2/q) (q r_<) i_l(q r_<) (q r_>) k_l(q r_>)
// and for d > 3 (l = 0, E = 0, measure dr):  g = 2/(d-2) r_>^{2-d} (r r')^{(d-1)/2}.
// Solves -u''/2 + l(l+1)/(2r^2) u - E u = delta(r - r'), so g' jumps by -2 across
// the diagonal.
inline double radial_green(const SectorSpec& s, double r, double r2) {
    s.validate();
    if (!(r > 0.0) || !(r2 > 0.0))
        throw domain_error("radial_green: radii must be positive");
    const double rlo = std::min(r, r2), rhi = std::max(r, r2);
    if (s.d > 3)
        return 2.0 / (s.d - 2) * std::pow(rhi, 2.0 - s.d) *
               std::pow(r * r2, 0.5 * (s.d - 1.0));
    if (s.E == 0.0)
        return 2.0 / (2.0 * s.ell + 1.0) * std::pow(rlo, s.ell + 1.0) *
               std::pow(rhi, double(-s.ell));
    const double q = s.q();
    return 2.0 / q * scaled_iv(s.ell, q * rlo) * scaled_kv(s.ell, q * rhi) *
           std::exp(-q * (rhi - rlo));
}

// |V|^{1/2}(h0 - E)^{-1}|V|^{1/2} kernel in sector ell.
inline double bs_kernel(const Potential& p, const SectorSpec& s, double r, double r2) {
    double v1 = -p(r), v2 = -p(r2);
    if (v1 == 0.0 || v2 == 0.0)
        return 0.0;
    return std::sqrt(v1) * radial_green(s, r, r2) * std::sqrt(v2);
}

} // namespace pfb

#endif
