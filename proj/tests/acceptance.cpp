// Acceptance gate: each criterion prints one [PASS]/[FAIL] line; the exit code
// is the number of failures.  An optional argument (1..10) runs one criterion.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "pfb/config.hpp"
#include "pfb/field.hpp"
#include "pfb/oracle.hpp"
#include "pfb/phase.hpp"
#include "pfb/potential.hpp"
#include "pfb/spectra.hpp"

using namespace pfb;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Named {
    std::string name;
    Potential pot;
};

std::vector<Named> catalog() {
    std::vector<Named> cat;
    cat.push_back({"square-well", Potential::square_well(1.0, 1.0)});
    cat.push_back({"exponential", Potential::exponential(1.0, 1.0)});
    cat.push_back({"gaussian", Potential::gaussian(1.0, 1.0)});
    std::vector<double> r, v;
    for (int i = 0; i <= 10; ++i) {
        double x = i / 10.0;
        r.push_back(x);
        v.push_back(-(1.0 - x * x) * (1.0 - x * x));
    }
    cat.push_back({"tabulated-bump", Potential::tabulated(std::move(r), std::move(v))});
    return cat;
}

const MeshPolicy kQuick{12, 16, 2};

// 1: square-well critical mass equals pi^2/8 to 1e-6 in under 5 s
Outcome criterion_01() {
    auto t0 = Clock::now();
    CriticalMass cm = critical_mass(Potential::square_well(1.0, 1.0), MeshPolicy{});
    double dev = std::abs(cm.value - 1.2337005501361698);
    double t = elapsed(t0);
    return {dev < 1e-6 && t < 5.0 && cm.converged,
            fmt("m_c=%.10f dev=%.2e t=%.2fs", cm.value, dev, t)};
}

// 2: exponential-well critical mass equals j_{0,1}^2/8 to 1e-5 in under 5 s
Outcome criterion_02() {
    auto t0 = Clock::now();
    CriticalMass cm = critical_mass(Potential::exponential(1.0, 1.0), MeshPolicy{});
    double dev = std::abs(cm.value - 0.72289824536834807);
    double t = elapsed(t0);
    return {dev < 1e-5 && t < 5.0 && cm.converged,
            fmt("m_c=%.10f dev=%.2e t=%.2fs", cm.value, dev, t)};
}

// 3: spectral counts equal the shooting-oracle counts on >= 100 clean samples
Outcome criterion_03() {
    auto t0 = Clock::now();
    const double ms[12] = {0.35, 0.8,  1.5,  2.2,  3.1,  4.4,
                           6.3,  8.9, 12.6, 17.8, 25.2, 35.6};
    const double Es[5] = {0.0, -0.01, -0.17, -0.56, -2.0};
    int kept = 0, skipped = 0, disagree = 0;
    std::string first_bad;
    for (const Named& n : catalog()) {
        for (double E : Es) {
            SectorCache cache;
            for (double m : ms) {
                TotalCount bs = bs_count_total(n.pot, m, E, kQuick, &cache);
                OracleTotal ot = oracle_count_total(n.pot, m, E);
                if (bs.borderline || ot.borderline) {
                    ++skipped;
                    continue;
                }
                ++kept;
                std::vector<int> ps = bs.per_sector;
                while (!ps.empty() && ps.back() == 0)
                    ps.pop_back();
                if (bs.total != ot.total || ps != ot.per_sector) {
                    ++disagree;
                    if (first_bad.empty())
                        first_bad = fmt(" first=%s m=%g E=%g bs=%d oracle=%d", n.name.c_str(),
                                        m, E, bs.total, ot.total);
                }
            }
        }
    }
    double t = elapsed(t0);
    return {kept >= 100 && disagree == 0 && t < 120.0,
            fmt("samples=%d skipped=%d disagreements=%d t=%.1fs%s", kept, skipped, disagree, t,
                first_bad.c_str())};
}

// 4: ||K_E|| decreases in |E|, vanishes at depth, and is continuous at the edge
Outcome criterion_04() {
    const double Es[10] = {0.0,  -1e-6, -1e-4, -1e-2, -0.1,
                           -0.5, -1.0,  -10.0, -100.0, -1e4};
    bool all = true;
    std::string detail;
    for (const Named& n : catalog()) {
        double tops[10];
        for (int i = 0; i < 10; ++i)
            tops[i] = top_norm(n.pot, {3, 0, Es[i]}, kQuick).lambda_max;
        bool mono = true;
        for (int i = 0; i + 1 < 10; ++i)
            mono = mono && tops[i + 1] <= tops[i] + 1e-10;
        bool deep = tops[9] < 1e-3 * tops[0];
        double edge = std::abs(tops[1] - tops[0]);
        bool cont = edge < 1e-3;
        all = all && mono && deep && cont;
        detail += fmt("%s[mono=%d deep=%d edge=%.2e] ", n.name.c_str(), int(mono), int(deep),
                      edge);
    }
    return {all, detail};
}

// 5: the discrete spectra obey the exact scaling lambda(K_E[V_kappa]) =
//    lambda(K_{kappa^2 E}[V]) to 1e-6
Outcome criterion_05() {
    bool all = true;
    double worst = 0.0;
    for (const Named& n : catalog()) {
        for (double kappa : {0.5, 2.0}) {
            for (double E : {0.0, -1.0}) {
                double a = top_norm(n.pot.scaled(kappa), {3, 0, E}, kQuick).lambda_max;
                double b = top_norm(n.pot, {3, 0, kappa * kappa * E}, kQuick).lambda_max;
                worst = std::max(worst, std::abs(a - b));
            }
        }
    }
    all = worst < 1e-6;
    return {all, fmt("max |lambda(V_kappa,E) - lambda(V,kappa^2 E)| = %.2e", worst)};
}

// 6: the operator norm respects its closed-form upper bound across the catalog
Outcome criterion_06() {
    bool all = true;
    std::string detail;
    for (const Named& n : catalog()) {
        double top = top_norm(n.pot, {3, 0, 0.0}, kQuick).lambda_max;
        double bound = n.pot.lieb_bound();
        bool ok = top <= bound;
        all = all && ok;
        detail += fmt("%s[%.4f<=%.4f] ", n.name.c_str(), top, bound);
    }
    double recip = 3.0 / (std::numbers::sqrt2 * std::pow(std::numbers::pi, 2.0 / 3.0) *
                          std::pow(4.0, 5.0 / 3.0));
    double dev = std::abs(1.0 / Potential::lieb_constant(3) - recip);
    all = all && dev < 1e-12;
    return {all, detail + fmt("constant dev=%.1e", dev)};
}

// 7: coupling thresholds: alpha_0 = 0.20487 +- 1e-4 at the default
//    configuration, verdicts match the threshold inequalities on a 50-point
//    coupling grid, and alpha_eps decreases to alpha_0 as eps -> 0
Outcome criterion_07() {
    Potential sw = Potential::square_well(1.0, 1.0);
    Cutoff c = Cutoff::power_gaussian(2.0, 1.0);
    MeshPolicy mesh{};
    CriticalMass mc = critical_mass(sw, mesh);
    double n1 = cutoff_norm(c, 1.0);
    double C = (2.0 / 3.0) * n1 * n1;

    PhaseThresholds th;
    th.m_c = mc.value;
    th.m_eps = m_epsilon(sw, 0.1, mesh).value;
    th.eps = 0.1;
    th.coupling_norm2 = C;

    double a0 = alpha0(th, 1.0);
    bool pass_a0 = std::abs(a0 - 0.20487) < 1e-4;

    double ae = alpha_eps(th, 1.0);
    bool grid_ok = true;
    for (int i = 0; i < 50; ++i) {
        double alpha = 0.5 * i / 49.0;
        Verdict v = classify(th, 1.0, alpha).verdict;
        grid_ok = grid_ok && ((v == Verdict::NoGroundState) == (alpha < a0)) &&
                  ((v == Verdict::GroundState) == (alpha > ae));
    }

    bool ladder_ok = true;
    double prev = 1e300, last = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        double me = m_epsilon(sw, eps, mesh).value;
        last = std::sqrt((me - 1.0) / C);
        ladder_ok = ladder_ok && last > a0 && last < prev;
        prev = last;
    }
    ladder_ok = ladder_ok && (last - a0) < 2e-3;

    return {pass_a0 && grid_ok && ladder_ok,
            fmt("alpha0=%.6f grid=%d ladder=%d gap(eps=1e-5)=%.1e", a0, int(grid_ok),
                int(ladder_ok), last - a0)};
}

// 8: the boson line equals m_eff at s = 0, relaxes to m at large s, never
//    vanishes, and its two imaginary-part routes agree to 1e-5
Outcome criterion_08() {
    Cutoff c = Cutoff::power_gaussian(2.0, 1.0);
    const double m = 1.0, alpha = 0.1;
    std::complex<double> d0 = dplus(c, m, alpha, 0.0);
    double edge_dev = std::abs(d0.real() - effective_mass(m, alpha, c));
    bool edge_ok = edge_dev < 1e-8 && d0.imag() == 0.0;

    double tail_dev = std::abs(dplus(c, m, alpha, 1e4).real() - m);
    bool tail_ok = tail_dev < 1e-4;

    double inf = inf_abs_dplus(c, m, alpha);
    bool nz = inf > 0.0;

    double worst = 0.0;
    for (double s : {0.3, 0.7, 1.5, 3.0}) {
        double direct = dplus(c, m, alpha, s).imag();
        worst = std::max(worst, std::abs(dplus_im_lorentzian(c, m, alpha, s) - direct));
    }
    bool im_ok = worst < 1e-5;

    return {edge_ok && tail_ok && nz && im_ok,
            fmt("edge=%.1e tail=%.1e inf|D|=%.3f im_routes=%.1e", edge_dev, tail_dev, inf,
                worst)};
}

// 9: the potential-design search returns an admissible, deterministic result
//    with threshold gap below delta = 0.05 in under a minute
Outcome criterion_09() {
    auto t0 = Clock::now();
    Potential sw = Potential::square_well(1.0, 1.0);
    Cutoff c = Cutoff::power_gaussian(2.0, 1.0);
    DesignParams params; // delta = 0.05
    DesignResult a = design_potential(sw, c, 1.0, params, MeshPolicy{});
    DesignResult b = design_potential(sw, c, 1.0, params, MeshPolicy{});
    double gap = a.alpha_plus - a.alpha_minus;
    bool det = a.kappa == b.kappa && a.eps == b.eps && a.alpha_minus == b.alpha_minus &&
               a.alpha_plus == b.alpha_plus;
    bool adm = gap > 0.0 && gap < params.delta && a.xi * a.kappa > 1.0 &&
               rho_kappa(a.kappa, a.xi) > a.rhs;
    double t = elapsed(t0);
    return {det && adm && t < 60.0,
            fmt("gap=%.4f kappa=%.4g eps=%.4g deterministic=%d t=%.1fs", gap, a.kappa, a.eps,
                int(det), t)};
}

// 10: the two vacuum-energy quadrature schemes agree to 1e-6 and vanish with
//     the coupling
Outcome criterion_10() {
    Cutoff c = Cutoff::power_gaussian(2.0, 1.0);
    double a = energy_shift_g(1.0, 0.1, c);
    double b = energy_shift_g_tensor(1.0, 0.1, c);
    double dev = std::abs(a - b) / std::max(1.0, std::abs(a));
    bool zero_ok = energy_shift_g(1.0, 0.0, c) == 0.0 && energy_shift_g_tensor(1.0, 0.0, c) == 0.0;
    return {dev <= 1e-6 && zero_ok, fmt("g=%.12g dev=%.2e zero_at_alpha0=%d", a, dev,
                                        int(zero_ok))};
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "square-well critical mass", criterion_01},
        {2, "exponential-well critical mass", criterion_02},
        {3, "count cross-validation against the shooting oracle", criterion_03},
        {4, "operator norm monotone and edge-continuous in E", criterion_04},
        {5, "exact discrete scaling covariance", criterion_05},
        {6, "operator-norm upper bound", criterion_06},
        {7, "coupling thresholds and verdict equivalences", criterion_07},
        {8, "boson line edge/tail/no-zero/dual imaginary part", criterion_08},
        {9, "potential-design admissibility", criterion_09},
        {10, "vacuum-energy dual quadratures", criterion_10},
    };
    int which = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const Entry& e : entries) {
        if (which != 0 && which != e.id)
            continue;
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("[%s] %02d %s — %s\n", o.pass ? "PASS" : "FAIL", e.id, e.name,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures;
}
