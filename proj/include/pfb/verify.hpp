#ifndef PFB_VERIFY_HPP
#define PFB_VERIFY_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pfb/config.hpp"
#include "pfb/field.hpp"
#include "pfb/oracle.hpp"
#include "pfb/phase.hpp"
#include "pfb/potential.hpp"
#include "pfb/spectra.hpp"

namespace pfb {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string devs(double dev, double tol) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "max dev %.3g (tol %.3g)", dev, tol);
    return buf;
}

} // namespace detail

// Invariant checks of the configured setup: structural identities that must
// hold for any admissible potential/cutoff, evaluated at the config's
// parameters.  Each check is independent; exceptions become failures.
inline std::vector<CheckResult> verify_all(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    auto run = [&](const std::string& name, auto&& fn) {
        CheckResult cr;
        cr.name = name;
        try {
            fn(cr);
        } catch (const std::exception& e) {
            cr.pass = false;
            cr.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(cr));
    };

    const Potential p = cfg.potential();
    const Cutoff c = cfg.cutoff();
    const int d = p.dimension();
    const double m = cfg.mass, alpha = cfg.alpha, eps = cfg.eps;
    const MeshPolicy mesh = cfg.mesh;
    MeshPolicy quick = mesh;
    quick.levels = 2;

    run("potential scaling identity", [&](CheckResult& cr) {
        double dev = 0.0;
        for (double kappa : {0.5, 2.0}) {
            Potential pk = p.scaled(kappa);
            for (double r : {0.3, 0.7, 1.3, 2.9}) {
                double lhs = pk(r);
                double rhs = p(r / kappa) / (kappa * kappa);
                dev = std::max(dev, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-300));
            }
        }
        Potential pc = p.scaled(2.0).scaled(3.0), pd = p.scaled(6.0);
        for (double r : {0.4, 1.9, 5.0})
            dev = std::max(dev, std::abs(pc(r) - pd(r)) / (std::abs(pd(r)) + 1e-300));
        cr.pass = dev <= 1e-14;
        cr.detail = detail::devs(dev, 1e-14);
    });

    run("Lp-norm homogeneity", [&](CheckResult& cr) {
        Potential dbl = [&] { // same profile, doubled depth
            switch (p.kind()) {
            case PotentialKind::SquareWell:
                return Potential::square_well(2.0 * p.depth(), p.range_parameter(), d);
            case PotentialKind::Exponential:
                return Potential::exponential(2.0 * p.depth(), p.range_parameter(), d);
            case PotentialKind::Gaussian:
                return Potential::gaussian(2.0 * p.depth(), p.range_parameter(), d);
            default: {
                std::vector<double> vs = p.tab_values();
                for (double& v : vs)
                    v *= 2.0;
                return Potential::tabulated(p.tab_nodes(), vs, d);
            }
            }
        }()
                            .scaled(p.scale());
        double dev = 0.0;
        for (double q : {0.5 * d, 2.0}) {
            double n1 = p.lp_norm(q);
            dev = std::max(dev, std::abs(dbl.lp_norm(q) - 2.0 * n1) / (2.0 * n1));
        }
        cr.pass = dev <= 1e-10;
        cr.detail = detail::devs(dev, 1e-10);
    });

    run("critical Lp norm scale-invariant", [&](CheckResult& cr) {
        double q = 0.5 * d;
        double base = p.lp_norm(q);
        double dev = 0.0;
        for (double kappa : {0.5, 2.0, 10.0})
            dev = std::max(dev, std::abs(p.scaled(kappa).lp_norm(q) - base) / base);
        cr.pass = dev <= 1e-8;
        cr.detail = detail::devs(dev, 1e-8);
    });

    run("operator-norm bound scale-invariant", [&](CheckResult& cr) {
        double base = p.lieb_bound();
        double dev = 0.0;
        for (double kappa : {0.5, 2.0, 10.0})
            dev = std::max(dev, std::abs(p.scaled(kappa).lieb_bound() - base) / base);
        cr.pass = std::isfinite(base) && base > 0.0 && dev <= 1e-8;
        cr.detail = detail::devs(dev, 1e-8);
    });

    run("top eigenvalue within operator-norm bound", [&](CheckResult& cr) {
        double bound = p.lieb_bound();
        double top = top_norm(p, {d, 0, 0.0}, quick).lambda_max;
        cr.pass = top <= bound * (1.0 + 1e-8);
        char buf[120];
        std::snprintf(buf, sizeof buf, "||K_0|| = %.6g <= D_V = %.6g", top, bound);
        cr.detail = buf;
    });

    run("kernel matrix symmetric", [&](CheckResult& cr) {
        SectorSpec s{d, 0, 0.0};
        KernelMatrix km = assemble(p, s, quick);
        double dev = (km.A - km.A.transpose()).cwiseAbs().maxCoeff();
        double scale = km.A.cwiseAbs().maxCoeff() + 1e-300;
        cr.pass = dev <= 1e-14 * scale;
        cr.detail = detail::devs(dev / scale, 1e-14);
    });

    run("resolvent-kernel symmetry in its arguments", [&](CheckResult& cr) {
        double dev = 0.0;
        std::vector<SectorSpec> specs{{d, 0, 0.0}};
        if (d == 3) {
            specs.push_back({3, 1, 0.0});
            specs.push_back({3, 0, -0.8});
            specs.push_back({3, 2, -2.5});
        }
        for (const auto& s : specs)
            for (double r : {0.2, 0.9, 1.7})
                for (double r2 : {0.5, 1.1, 3.0}) {
                    double g1 = radial_green(s, r, r2), g2 = radial_green(s, r2, r);
                    dev = std::max(dev, std::abs(g1 - g2) / (std::abs(g1) + 1e-300));
                }
        cr.pass = dev <= 1e-14;
        cr.detail = detail::devs(dev, 1e-14);
    });

    run("resolvent-kernel derivative jump = -2", [&](CheckResult& cr) {
        std::vector<SectorSpec> specs{{d, 0, 0.0}};
        if (d == 3) {
            specs.push_back({3, 2, 0.0});
            specs.push_back({3, 0, -1.0});
            specs.push_back({3, 1, -0.3});
        }
        double dev = 0.0;
        for (const auto& s : specs) {
            const double rp = 0.8;
            auto jump_at = [&](double h) {
                double g0 = radial_green(s, rp, rp);
                double sp = (-3.0 * g0 + 4.0 * radial_green(s, rp + h, rp) -
                             radial_green(s, rp + 2.0 * h, rp)) /
                            (2.0 * h);
                double sm = (3.0 * g0 - 4.0 * radial_green(s, rp - h, rp) +
                             radial_green(s, rp - 2.0 * h, rp)) /
                            (2.0 * h);
                return sp - sm;
            };
            dev = std::max(dev, std::abs(jump_at(1e-4) + 2.0) / 2.0);
        }
        cr.pass = dev <= 1e-5;
        cr.detail = detail::devs(dev, 1e-5);
    });

    if (d == 3) {
        run("sector tops positive, nonincreasing in |E|", [&](CheckResult& cr) {
            double prev = 0.0;
            bool mono = true, positive = true, floor_ok = true;
            int i = 0;
            for (double E : {0.0, -0.25, -1.0, -4.0}) {
                SpectralResult sr = top_norm(p, {3, 0, E}, quick);
                if (!(sr.lambda_max > 0.0))
                    positive = false;
                if (i > 0 && sr.lambda_max > prev * (1.0 + 1e-12))
                    mono = false;
                if (!sr.eigs_fine.empty() &&
                    sr.eigs_fine.back() < -1e-10 * sr.eigs_fine.front())
                    floor_ok = false;
                prev = sr.lambda_max;
                ++i;
            }
            cr.pass = mono && positive && floor_ok;
            cr.detail = std::string("positive=") + (positive ? "y" : "n") +
                        " monotone=" + (mono ? "y" : "n") +
                        " spectrum floor ok=" + (floor_ok ? "y" : "n");
        });

        run("spectral scaling invariance", [&](CheckResult& cr) {
            double dev = 0.0;
            for (double E : {0.0, -1.0}) {
                double base = top_norm(p, {3, 0, E}, mesh).lambda_max;
                for (double kappa : {0.5, 2.0}) {
                    double sc =
                        top_norm(p.scaled(kappa), {3, 0, E / (kappa * kappa)}, mesh).lambda_max;
                    dev = std::max(dev, std::abs(sc - base) / base);
                }
            }
            cr.pass = dev <= 1e-6;
            cr.detail = detail::devs(dev, 1e-6);
        });

        run("mesh refinement consistency", [&](CheckResult& cr) {
            MeshPolicy fine = mesh;
            fine.base_panels = mesh.base_panels * 2;
            SpectralResult a = top_norm(p, {3, 0, -eps}, mesh);
            SpectralResult b = top_norm(p, {3, 0, -eps}, fine);
            double dev = std::abs(a.lambda_max - b.lambda_max);
            double allow = 10.0 * (a.error_estimate + b.error_estimate) +
                           1e-12 * std::abs(a.lambda_max);
            cr.pass = dev <= allow && a.converged && b.converged;
            cr.detail = detail::devs(dev, allow);
        });
    }

    // threshold and classification identities need m_eps, hence d = 3
    double mc_val = 0.0;
    if (d == 3) {
        run("threshold ordering m_c < m_eps", [&](CheckResult& cr) {
            PhaseThresholds th = phase_thresholds(p, c, eps, mesh);
            mc_val = th.m_c;
            cr.pass = th.converged && th.m_c > 0.0 && th.m_eps > th.m_c;
            char buf[120];
            std::snprintf(buf, sizeof buf, "m_c = %.10g, m_eps = %.10g", th.m_c, th.m_eps);
            cr.detail = buf;
        });

        run("coupling thresholds decrease in m", [&](CheckResult& cr) {
            PhaseThresholds th = phase_thresholds(p, c, eps, quick);
            double prev0 = 0.0, preve = 0.0;
            bool ok = true;
            int i = 0;
            for (double f : {0.3, 0.6, 0.9}) {
                double mm = f * th.m_c;
                double a0 = alpha0(th, mm), ae = alpha_eps(th, mm);
                if (!(ae > a0))
                    ok = false;
                if (i > 0 && !(a0 < prev0 && ae < preve))
                    ok = false;
                prev0 = a0;
                preve = ae;
                ++i;
            }
            cr.pass = ok;
            cr.detail = ok ? "alpha_0, alpha_eps strictly decreasing; alpha_eps > alpha_0"
                           : "ordering violated";
        });

        run("classification band structure", [&](CheckResult& cr) {
            PhaseThresholds th = phase_thresholds(p, c, eps, quick);
            double mm = std::min(m, 0.5 * th.m_c);
            double a0 = alpha0(th, mm), ae = alpha_eps(th, mm);
            bool ok = classify(th, mm, 0.5 * a0).verdict == Verdict::NoGroundState &&
                      classify(th, mm, 0.5 * (a0 + ae)).verdict == Verdict::Undetermined &&
                      classify(th, mm, 1.5 * ae).verdict == Verdict::GroundState;
            for (double a : {0.5 * a0, 1.5 * ae})
                ok = ok && classify(th, mm, a).verdict == classify(th, mm, -a).verdict;
            // m < m_-(alpha)  <=>  |alpha| < alpha_0(m)
            for (double f : {0.999999, 1.000001}) {
                double a = f * a0;
                bool lhs = mm < mass_bounds(th, a).m_minus;
                bool rhs = a < alpha0(th, mm);
                ok = ok && lhs == rhs;
            }
            cr.pass = ok;
            cr.detail = ok ? "verdict bands ordered, even in alpha, threshold identity holds"
                           : "band structure violated";
        });
    }

    run("cutoff admissibility report", [&](CheckResult& cr) {
        CutoffValidation rep = validate_cutoff(c);
        cr.pass = rep.all_pass;
        std::string bad;
        for (const auto& it : rep.items)
            if (!it.pass)
                bad += (bad.empty() ? "" : "; ") + it.name;
        cr.detail = rep.all_pass ? "all cutoff conditions hold" : "failing: " + bad;
    });

    run("boson-line function real at s = 0", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? alpha : 1.0;
        auto D0 = dplus(c, m, a, 0.0);
        double n1 = cutoff_norm(c, 1.0);
        double expect = m + a * a * ((d - 1.0) / d) * n1 * n1;
        double dev = std::abs(D0.real() - expect) / expect;
        cr.pass = D0.imag() == 0.0 && dev <= 1e-8;
        cr.detail = detail::devs(dev, 1e-8) + (D0.imag() == 0.0 ? "; Im = 0" : "; Im != 0");
    });

    run("boson-line imaginary part positive (s > 0)", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? alpha : 1.0;
        double L2 = c.kind() == CutoffKind::PowerGaussian ? c.lambda() * c.lambda() : 1.0;
        bool ok = true;
        for (double s : {0.5 * L2, L2, 2.0 * L2})
            ok = ok && dplus(c, m, a, s).imag() > 0.0;
        cr.pass = ok;
        cr.detail = ok ? "Im D_+ > 0 on the probe grid" : "Im D_+ <= 0 somewhere";
    });

    run("imaginary part: subtraction vs smoothed-pole route", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? alpha : 1.0;
        double L2 = c.kind() == CutoffKind::PowerGaussian ? c.lambda() * c.lambda() : 1.0;
        double s = 0.7 * L2;
        double im1 = dplus(c, m, a, s).imag();
        double im2 = dplus_im_lorentzian(c, m, a, s);
        double dev = std::abs(im1 - im2) / std::max(1.0, std::abs(im1));
        cr.pass = dev <= 1e-5;
        cr.detail = detail::devs(dev, 1e-5);
    });

    run("effective mass quadratic in alpha", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? std::abs(alpha) : 0.3;
        double d1 = effective_mass(m, a, c) - m;
        double d2 = effective_mass(m, 2.0 * a, c) - m;
        double dev = std::abs(d2 - 4.0 * d1) / (4.0 * d1);
        double deva = std::abs(effective_mass(m, -a, c) - effective_mass(m, a, c));
        cr.pass = dev <= 1e-12 && deva == 0.0;
        cr.detail = detail::devs(dev, 1e-12);
    });

    run("energy-shift integral: dual quadratures", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? alpha : 1.0;
        double g1 = energy_shift_g(m, a, c);
        double g2 = energy_shift_g_tensor(m, a, c);
        double dev = std::abs(g1 - g2) / std::max(std::abs(g1), 1e-300);
        bool zero_ok = energy_shift_g(m, 0.0, c) == 0.0;
        bool even_ok = std::abs(energy_shift_g(m, -a, c) - g1) <= 1e-12 * std::abs(g1);
        cr.pass = dev <= 1e-6 && zero_ok && even_ok;
        cr.detail = detail::devs(dev, 1e-6) + std::string(zero_ok ? "; g(0)=0" : "; g(0)!=0") +
                    (even_ok ? "; even" : "; not even");
    });

    run("coupling-aggregate positive, free-field closed form", [&](CheckResult& cr) {
        double phi_a = lambda_aggregate(c, m, alpha);
        double n32 = cutoff_norm(c, 1.5);
        double expect0 = (d - 1.0) * n32 * n32 / (m * m);
        double phi_0 = lambda_aggregate(c, m, 0.0);
        double dev = std::abs(phi_0 - expect0) / expect0;
        cr.pass = phi_a > 0.0 && std::isfinite(phi_a) && dev <= 1e-8;
        cr.detail = detail::devs(dev, 1e-8);
    });

    run("no zero of the boson-line function", [&](CheckResult& cr) {
        double a = alpha != 0.0 ? alpha : 1.0;
        double inf = inf_abs_dplus(c, m, a);
        cr.pass = inf > 0.0;
        char buf[80];
        std::snprintf(buf, sizeof buf, "inf |D_+| = %.6g", inf);
        cr.detail = buf;
    });

    if (d == 3) {
        run("spectral vs shooting-oracle counts", [&](CheckResult& cr) {
            SectorCache cache;
            bool all_ok = true;
            int compared = 0;
            std::string mism;
            for (double E : {cfg.count.E, -0.7}) {
                if (E > 0.0)
                    continue;
                TotalCount bs = bs_count_total(p, cfg.count.m, E, quick, &cache);
                OracleTotal ot = oracle_count_total(p, cfg.count.m, E);
                if (bs.borderline || ot.borderline)
                    continue;
                ++compared;
                if (bs.total != ot.total) {
                    all_ok = false;
                    char buf[120];
                    std::snprintf(buf, sizeof buf, " E=%g: %d vs %d", E, bs.total, ot.total);
                    mism += buf;
                }
            }
            cr.pass = all_ok && compared > 0;
            char buf[120];
            std::snprintf(buf, sizeof buf, "%d non-borderline comparisons%s", compared,
                          all_ok ? ", all equal" : mism.c_str());
            cr.detail = buf;
        });

        run("oracle count nondecreasing in m", [&](CheckResult& cr) {
            int n1 = oracle_count_total(p, cfg.count.m, 0.0).total;
            int n2 = oracle_count_total(p, 2.0 * cfg.count.m, 0.0).total;
            cr.pass = n2 >= n1;
            char buf[80];
            std::snprintf(buf, sizeof buf, "N(m)=%d, N(2m)=%d", n1, n2);
            cr.detail = buf;
        });

        run("critical mass bracketing (oracle)", [&](CheckResult& cr) {
            double mc = mc_val > 0.0 ? mc_val : critical_mass(p, mesh).value;
            int below = count_bound_states(p, 0.99 * mc, 0).count;
            int above = count_bound_states(p, 1.01 * mc, 0).count;
            cr.pass = below == 0 && above >= 1;
            char buf[120];
            std::snprintf(buf, sizeof buf, "N(0.99 m_c)=%d, N(1.01 m_c)=%d (m_c=%.8g)", below,
                          above, mc);
            cr.detail = buf;
        });

        run("ground energy below -eps/m when m > m_eps", [&](CheckResult& cr) {
            double me = m_epsilon(p, eps, mesh).value;
            double mm = 1.05 * me;
            GroundEnergy ge = ground_energy(p, mm);
            cr.pass = ge.exists && ge.value <= -eps / mm + 1e-6 && ge.residual <= 1e-6;
            char buf[160];
            std::snprintf(buf, sizeof buf, "E_0(%.6g) = %.10g vs -eps/m = %.10g (res %.2g)",
                          mm, ge.value, -eps / mm, ge.residual);
            cr.detail = buf;
        });

        run("design search deterministic and admissible", [&](CheckResult& cr) {
            double mc = mc_val > 0.0 ? mc_val : critical_mass(p, mesh).value;
            double mm = std::min(m, 0.5 * mc);
            DesignResult r1 = design_potential(p, c, mm, cfg.design, mesh);
            DesignResult r2 = design_potential(p, c, mm, cfg.design, mesh);
            bool same = r1.kappa == r2.kappa && r1.eps == r2.eps &&
                        r1.alpha_minus == r2.alpha_minus && r1.alpha_plus == r2.alpha_plus;
            double gap = r1.alpha_plus - r1.alpha_minus;
            bool adm = gap > 0.0 && gap < cfg.design.delta && r1.xi * r1.kappa > 1.0 &&
                       rho_kappa(r1.kappa, r1.xi) > r1.rhs;
            cr.pass = same && adm;
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "kappa=%.8g eps=%.6g gap=%.6g (delta=%g) repeat=%s", r1.kappa,
                          r1.eps, gap, cfg.design.delta, same ? "identical" : "DIFFERS");
            cr.detail = buf;
        });
    }

    run("config serialization round-trip", [&](CheckResult& cr) {
        nlohmann::json j1 = cfg.to_json();
        nlohmann::json j2 = RunConfig::from_json(j1).to_json();
        cr.pass = j1 == j2;
        cr.detail = cr.pass ? "to_json(from_json(x)) == x" : "round-trip mismatch";
    });

    return out;
}

} // namespace pfb

#endif
