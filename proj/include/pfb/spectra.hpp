#ifndef PFB_SPECTRA_HPP
#define PFB_SPECTRA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "pfb/errors.hpp"
#include "pfb/green.hpp"
#include "pfb/potential.hpp"
#include "pfb/quadrature.hpp"

namespace pfb {

// Panel mesh policy for the half-line Nystrom discretization.  base_panels are
// laid uniformly over the potential core (split at a square-well edge) with a
// geometric tail out to r_max for infinite-range profiles; each refinement
// level halves every panel.  Eigenvalues converge at O(h^2) (the kernel has a
// diagonal kink), so two successive levels give a Richardson value with an
// error estimate.
struct MeshPolicy {
    int nodes_per_panel = 12;
    int base_panels = 16;
    int levels = 3; // >= 2 for extrapolation
    double r_max = 0.0; // 0: derive from the potential (suggested_rmax)
    double rel_tol = 1e-3; // successive-level agreement declaring convergence

    void validate() const {
        if (nodes_per_panel < 4 || base_panels < 2 || levels < 2)
            throw domain_error("mesh policy: need >= 4 nodes/panel, >= 2 panels, >= 2 levels");
        if (rel_tol <= 0.0)
            throw domain_error("mesh policy: tolerance must be positive");
    }
};

// Base panel breaks for a potential: exact support for compact kinds, uniform
// core plus geometric tail (ratio 1.6) for exponential/Gaussian tails.
inline std::vector<double> base_breaks(const Potential& p, const MeshPolicy& mesh) {
    double rmax = mesh.r_max > 0.0 ? mesh.r_max : p.suggested_rmax();
    if (p.compact_support()) {
        std::vector<double> br;
        double edge = std::min(p.support_end(), rmax);
        for (int i = 0; i <= mesh.base_panels; ++i)
            br.push_back(edge * i / mesh.base_panels);
        if (rmax > edge)
            br.push_back(rmax); // dead region; kernel rows vanish there
        return br;
    }
    // core out to ~quarter of rmax, tail graded geometrically
    double core = std::min(6.0 * p.scale() * p.range_parameter(), rmax);
    int core_panels = std::max(2, mesh.base_panels / 2);
    return graded_breaks(0.0, core, rmax, core_panels, 1.6);
}

struct KernelMatrix {
    Eigen::MatrixXd A;
    std::vector<double> nodes, weights;
    SectorSpec sector;
    bool resolution_warning = false; // mesh too coarse to see the potential at all
};

// A_ij = sqrt(w_i) k(r_i, r_j) sqrt(w_j): symmetric, same spectrum as the
// Nystrom operator W^{1/2} K W^{1/2}.
inline KernelMatrix assemble(const Potential& p, const SectorSpec& s,
                             const std::vector<double>& breaks, int nodes_per_panel) {
    s.validate();
    PanelRule rule = panel_rule(breaks, nodes_per_panel);
    const int n = int(rule.x.size());
    KernelMatrix km;
    km.sector = s;
    km.nodes = rule.x;
    km.weights = rule.w;
    km.A.resize(n, n);
    std::vector<double> sqv(n), sw(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        double v = -p(rule.x[i]);
        any = any || v > 0.0;
        sqv[i] = std::sqrt(std::max(v, 0.0));
        sw[i] = std::sqrt(rule.w[i]);
    }
    km.resolution_warning = !any;
    for (int i = 0; i < n; ++i) {
        km.A(i, i) = sw[i] * sw[i] * sqv[i] * sqv[i] * radial_green(s, rule.x[i], rule.x[i]);
        for (int j = i + 1; j < n; ++j) {
            double k = sqv[i] == 0.0 || sqv[j] == 0.0
                           ? 0.0
                           : sqv[i] * radial_green(s, rule.x[i], rule.x[j]) * sqv[j];
            km.A(i, j) = km.A(j, i) = sw[i] * k * sw[j];
        }
    }
    return km;
}

inline KernelMatrix assemble(const Potential& p, const SectorSpec& s, const MeshPolicy& mesh) {
    mesh.validate();
    return assemble(p, s, base_breaks(p, mesh), mesh.nodes_per_panel);
}

struct SpectralResult {
    double lambda_max = 0.0;   // Richardson-extrapolated top eigenvalue
    double error_estimate = 0.0;
    bool converged = false;
    bool resolution_warning = false;
    // eigenvalues (descending) of the two finest levels, for counting queries
    std::vector<double> eigs_fine, eigs_coarse;

    // extrapolated k-th eigenvalue and its uncertainty
    double eig(std::size_t k) const {
        if (k >= eigs_fine.size())
            return 0.0;
        double fine = eigs_fine[k];
        double coarse = k < eigs_coarse.size() ? eigs_coarse[k] : fine;
        return fine + (fine - coarse) / 3.0;
    }
    double eig_error(std::size_t k) const {
        if (k >= eigs_fine.size())
            return 0.0;
        double coarse = k < eigs_coarse.size() ? eigs_coarse[k] : eigs_fine[k];
        return std::abs(eigs_fine[k] - coarse) / 3.0;
    }
};

inline std::vector<double> eigenvalues_desc(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
    std::vector<double> e(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(e.begin(), e.end(), std::greater<double>());
    return e;
}

// Full spectral solve over the refinement ladder; O(h^2) Richardson on the top
// eigenvalue, converged when the last two levels agree to rel_tol.
inline SpectralResult sector_spectrum(const Potential& p, const SectorSpec& s,
                                      const MeshPolicy& mesh) {
    mesh.validate();
    std::vector<double> breaks = base_breaks(p, mesh);
    SpectralResult res;
    double prev_top = 0.0;
    for (int lv = 0; lv < mesh.levels; ++lv) {
        if (lv > 0)
            breaks = halve_panels(breaks);
        KernelMatrix km = assemble(p, s, breaks, mesh.nodes_per_panel);
        res.resolution_warning = km.resolution_warning;
        res.eigs_coarse = std::move(res.eigs_fine);
        res.eigs_fine = eigenvalues_desc(km.A);
        double top = res.eigs_fine.empty() ? 0.0 : res.eigs_fine.front();
        if (lv > 0) {
            res.lambda_max = top + (top - prev_top) / 3.0;
            res.error_estimate = std::abs(top - prev_top) / 3.0;
            res.converged = std::abs(top - prev_top) <=
                            mesh.rel_tol * std::max(std::abs(top), 1e-30) + 1e-15;
        } else {
            res.lambda_max = top;
        }
        prev_top = top;
    }
    res.lambda_max = std::max(res.lambda_max, 0.0);
    return res;
}

// ||K_E|| restricted to sector ell.
inline SpectralResult top_norm(const Potential& p, const SectorSpec& s, const MeshPolicy& mesh) {
    return sector_spectrum(p, s, mesh);
}

struct CountResult {
    int count = 0;
    bool borderline = false; // some eigenvalue within tolerance of the threshold
};

// Number of eigenvalues >= threshold, using extrapolated eigenvalues; an
// eigenvalue closer to the threshold than max(10 x its Richardson error, tol)
// flags the result as borderline.
inline CountResult count_above(const SpectralResult& spec, double threshold,
                               double border_tol = 1e-9) {
    if (threshold <= 0.0)
        throw domain_error("count_above: threshold must be positive");
    CountResult cr;
    for (std::size_t k = 0; k < spec.eigs_fine.size(); ++k) {
        double lam = spec.eig(k);
        double guard = std::max(10.0 * spec.eig_error(k), border_tol);
        if (lam < 0.25 * threshold)
            break; // spectrum is sorted; nothing below can reach the threshold
        if (std::abs(lam - threshold) < guard)
            cr.borderline = true;
        if (lam >= threshold)
            ++cr.count;
    }
    return cr;
}

inline CountResult count_above(const Potential& p, const SectorSpec& s, double threshold,
                               const MeshPolicy& mesh) {
    return count_above(sector_spectrum(p, s, mesh), threshold);
}

// Cache of sector spectra keyed by (ell, E); one spectrum answers counting
// queries for every mass on a grid.
struct SectorCache {
    std::map<std::pair<int, std::int64_t>, SpectralResult> spectra;

    const SpectralResult& get(const Potential& p, int ell, double E, const MeshPolicy& mesh) {
        std::int64_t ebits;
        static_assert(sizeof ebits == sizeof E);
        std::memcpy(&ebits, &E, sizeof E);
        auto key = std::make_pair(ell, ebits);
        auto it = spectra.find(key);
        if (it == spectra.end())
            it = spectra.emplace(key, sector_spectrum(p, {p.dimension(), ell, E}, mesh)).first;
        return it->second;
    }
};

struct TotalCount {
    int total = 0;
    std::vector<int> per_sector; // unweighted count in sector ell
    bool borderline = false;
};

// N_{[1/m, inf)}(K_E) summed over sectors with multiplicity 2l+1 (d = 3).
// Sectors are scanned until the first one whose top eigenvalue falls below the
// threshold; sector tops decay in ell (checked), so later sectors are empty.
inline TotalCount bs_count_total(const Potential& p, double m, double E, const MeshPolicy& mesh,
                                 SectorCache* cache = nullptr) {
    if (p.dimension() != 3)
        throw domain_error("bs_count_total: sector sum implemented for d = 3");
    if (!(m > 0.0))
        throw domain_error("bs_count_total: mass must be positive");
    if (E > 0.0)
        throw domain_error("bs_count_total: E must be <= 0");
    const double threshold = 1.0 / m;
    TotalCount tc;
    SectorCache local;
    SectorCache& sc = cache ? *cache : local;
    double prev_top = 0.0;
    for (int ell = 0;; ++ell) {
        const SpectralResult& spec = sc.get(p, ell, E, mesh);
        if (ell > 0 && spec.lambda_max > prev_top + 1e-9)
            throw convergence_error("bs_count_total: sector tops not decaying in ell");
        prev_top = spec.lambda_max;
        if (spec.lambda_max < threshold && std::abs(spec.lambda_max - threshold) > 1e-9) {
            break;
        }
        CountResult cr = count_above(spec, threshold);
        tc.per_sector.push_back(cr.count);
        tc.total += (2 * ell + 1) * cr.count;
        tc.borderline = tc.borderline || cr.borderline;
        if (cr.count == 0)
            break;
        if (ell > 64)
            throw convergence_error("bs_count_total: sector sum did not terminate");
    }
    return tc;
}

} // namespace pfb

#endif
