// Command-line front end: binding/no-binding phase diagnostics for the
// dipole-coupled Pauli-Fierz particle, Birman-Schwinger route plus an
// independent shooting oracle.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pfb/config.hpp"
#include "pfb/oracle.hpp"
#include "pfb/phase.hpp"
#include "pfb/spectra.hpp"
#include "pfb/verify.hpp"

namespace {

using namespace pfb;

void emit(const RunConfig& cfg, const std::string& csv, const nlohmann::json& j) {
    std::string payload = cfg.out_format == "csv" ? csv : j.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f)
            throw domain_error("cannot open output file '" + cfg.out_path + "'");
        f << payload;
    }
}

nlohmann::json base_json(const RunConfig& cfg) {
    return {{"schema_version", schema_version}, {"provenance", cfg.provenance()}};
}

int cmd_critical_mass(const RunConfig& cfg) {
    Potential p = cfg.potential();
    CriticalMass mc = critical_mass(p, cfg.mesh);
    CriticalMass me = m_epsilon(p, cfg.eps, cfg.mesh);
    std::cerr << "m_c   = " << fmt17(mc.value) << "  (+/- " << fmt17(mc.error)
              << (mc.converged ? ", converged" : ", NOT converged") << ")\n"
              << "m_eps = " << fmt17(me.value) << "  (+/- " << fmt17(me.error)
              << (me.converged ? ", converged" : ", NOT converged") << ") at eps = "
              << fmt17(cfg.eps) << "\n";
    CsvWriter w({"quantity", "value", "error", "converged", "schema_version", "provenance"});
    w.cell("m_c").cell(mc.value).cell(mc.error).cell(int(mc.converged)).cell(schema_version)
        .cell(cfg.provenance());
    w.cell("m_eps").cell(me.value).cell(me.error).cell(int(me.converged)).cell(schema_version)
        .cell(cfg.provenance());
    nlohmann::json j = base_json(cfg);
    j["potential"] = p.describe();
    j["eps"] = cfg.eps;
    j["m_c"] = {{"value", mc.value}, {"error", mc.error}, {"converged", mc.converged}};
    j["m_eps"] = {{"value", me.value}, {"error", me.error}, {"converged", me.converged}};
    emit(cfg, w.str(), j);
    return (mc.converged && me.converged) ? 0 : 3;
}

int cmd_phase_diagram(const RunConfig& cfg) {
    Potential p = cfg.potential();
    Cutoff c = cfg.cutoff();
    PhaseThresholds th = phase_thresholds(p, c, cfg.eps, cfg.mesh);
    const SweepSpec& s = cfg.sweep;
    if (s.m_points < 1 || s.alpha_points < 1)
        throw domain_error("phase-diagram: sweep needs at least one point per axis");
    const int n = s.m_points * s.alpha_points;
    std::vector<PhaseDiagnosis> rows(n);
    std::vector<std::pair<double, double>> pts(n);
    for (int i = 0; i < s.m_points; ++i)
        for (int k = 0; k < s.alpha_points; ++k) {
            double m = s.m_points > 1
                           ? s.m_min + (s.m_max - s.m_min) * i / (s.m_points - 1.0)
                           : s.m_min;
            double a = s.alpha_points > 1
                           ? s.alpha_min + (s.alpha_max - s.alpha_min) * k /
                                               (s.alpha_points - 1.0)
                           : s.alpha_min;
            pts[i * s.alpha_points + k] = {m, a};
        }
    const int workers = std::max(1, std::min(cfg.workers, n));
    auto work = [&](int t) {
        for (int i = t; i < n; i += workers)
            rows[i] = classify(th, pts[i].first, pts[i].second);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(work, t);
        for (auto& th_ : pool)
            th_.join();
    }
    CsvWriter w({"m", "alpha", "verdict", "m_minus", "m_plus", "alpha0", "alpha_eps",
                 "schema_version", "provenance"});
    nlohmann::json jrows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        const auto& r = rows[i];
        w.cell(pts[i].first).cell(pts[i].second).cell(verdict_name(r.verdict))
            .cell(r.m_minus).cell(r.m_plus).cell(r.alpha0).cell(r.alpha_eps)
            .cell(schema_version).cell(cfg.provenance());
        jrows.push_back({{"m", pts[i].first},
                         {"alpha", pts[i].second},
                         {"verdict", verdict_name(r.verdict)},
                         {"m_minus", r.m_minus},
                         {"m_plus", r.m_plus},
                         {"alpha0", r.alpha0},
                         {"alpha_eps", r.alpha_eps},
                         {"provenance", r.provenance}});
    }
    nlohmann::json j = base_json(cfg);
    j["m_c"] = th.m_c;
    j["m_eps"] = th.m_eps;
    j["eps"] = th.eps;
    j["rows"] = jrows;
    emit(cfg, w.str(), j);
    std::cerr << "phase sweep: " << n << " points, m_c = " << fmt17(th.m_c)
              << ", m_eps = " << fmt17(th.m_eps) << "\n";
    return th.converged ? 0 : 3;
}

int cmd_count(const RunConfig& cfg) {
    Potential p = cfg.potential();
    const double m = cfg.count.m, E = cfg.count.E;
    SectorCache cache;
    TotalCount bs = bs_count_total(p, m, E, cfg.mesh, &cache);
    OracleTotal ot = oracle_count_total(p, m, E);
    auto join = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ";" : "") + std::to_string(v[i]);
        return s;
    };
    std::cerr << "spectral route: total " << bs.total << " (per sector " << join(bs.per_sector)
              << (bs.borderline ? ", borderline" : "") << ")\n"
              << "oracle route:   total " << ot.total << " (per sector " << join(ot.per_sector)
              << (ot.borderline ? ", borderline" : "") << ")\n"
              << (bs.total == ot.total ? "routes agree" : "ROUTES DISAGREE") << "\n";
    CsvWriter w({"route", "m", "E", "total", "borderline", "per_sector", "schema_version",
                 "provenance"});
    w.cell("birman-schwinger").cell(m).cell(E).cell(bs.total).cell(int(bs.borderline))
        .cell(join(bs.per_sector)).cell(schema_version).cell(cfg.provenance());
    w.cell("shooting-oracle").cell(m).cell(E).cell(ot.total).cell(int(ot.borderline))
        .cell(join(ot.per_sector)).cell(schema_version).cell(cfg.provenance());
    nlohmann::json j = base_json(cfg);
    j["m"] = m;
    j["E"] = E;
    j["birman_schwinger"] = {{"total", bs.total},
                             {"per_sector", bs.per_sector},
                             {"borderline", bs.borderline}};
    j["shooting_oracle"] = {{"total", ot.total},
                            {"per_sector", ot.per_sector},
                            {"borderline", ot.borderline}};
    j["agree"] = bs.total == ot.total;
    emit(cfg, w.str(), j);
    return 0;
}

int cmd_field_constants(const RunConfig& cfg) {
    Cutoff c = cfg.cutoff();
    CutoffValidation rep = validate_cutoff(c);
    for (const auto& it : rep.items)
        std::cerr << (it.pass ? "[ok]   " : "[FAIL] ") << it.name
                  << (it.note.empty() ? "" : " (" + it.note + ")") << "\n";
    FieldConstants fc = field_constants(cfg.mass, cfg.alpha, c);
    auto D0 = dplus(c, cfg.mass, cfg.alpha, 0.0);
    double inf = inf_abs_dplus(c, cfg.mass, cfg.alpha);
    CsvWriter w({"quantity", "value", "schema_version", "provenance"});
    auto row = [&](const char* q, double v) {
        w.cell(q).cell(v).cell(schema_version).cell(cfg.provenance());
    };
    row("m_eff", fc.m_eff);
    row("energy_shift_g", fc.g);
    row("coupling_aggregate", fc.phi_aggregate);
    row("norm_phihat_over_omega", fc.norm_omega1);
    row("norm_phihat_over_omega32", fc.norm_omega32);
    row("norm_phihat_over_omega52", fc.norm_omega52);
    row("norm_sqrt_omega_phihat", fc.norm_sqrt_omega);
    row("dplus0_re", D0.real());
    row("dplus0_im", D0.imag());
    row("inf_abs_dplus", inf);
    nlohmann::json j = base_json(cfg);
    j["cutoff"] = c.describe();
    j["m"] = cfg.mass;
    j["alpha"] = cfg.alpha;
    j["m_eff"] = fc.m_eff;
    j["energy_shift_g"] = fc.g;
    j["coupling_aggregate"] = fc.phi_aggregate;
    j["norms"] = {{"phihat_over_omega", fc.norm_omega1},
                  {"phihat_over_omega32", fc.norm_omega32},
                  {"phihat_over_omega52", fc.norm_omega52},
                  {"sqrt_omega_phihat", fc.norm_sqrt_omega}};
    j["dplus0"] = {{"re", D0.real()}, {"im", D0.imag()}};
    j["inf_abs_dplus"] = inf;
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : rep.items)
        items.push_back({{"name", it.name}, {"pass", it.pass}, {"value", it.value}});
    j["cutoff_checks"] = items;
    emit(cfg, w.str(), j);
    return rep.all_pass ? 0 : 1;
}

int cmd_design(const RunConfig& cfg) {
    Potential p = cfg.potential();
    Cutoff c = cfg.cutoff();
    DesignResult r = design_potential(p, c, cfg.mass, cfg.design, cfg.mesh);
    std::cerr << "kappa = " << fmt17(r.kappa) << ", eps = " << fmt17(r.eps)
              << ", alpha_- = " << fmt17(r.alpha_minus) << ", alpha_+ = " << fmt17(r.alpha_plus)
              << " (gap " << fmt17(r.alpha_plus - r.alpha_minus) << " < delta = "
              << fmt17(cfg.design.delta) << ")\n";
    CsvWriter w({"kappa", "eps", "alpha_minus", "alpha_plus", "xi", "rhs", "schema_version",
                 "provenance"});
    w.cell(r.kappa).cell(r.eps).cell(r.alpha_minus).cell(r.alpha_plus).cell(r.xi).cell(r.rhs)
        .cell(schema_version).cell(cfg.provenance());
    nlohmann::json j = base_json(cfg);
    j["kappa"] = r.kappa;
    j["eps"] = r.eps;
    j["alpha_minus"] = r.alpha_minus;
    j["alpha_plus"] = r.alpha_plus;
    j["xi"] = r.xi;
    j["rhs"] = r.rhs;
    j["delta"] = cfg.design.delta;
    emit(cfg, w.str(), j);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    std::vector<CheckResult> checks = verify_all(cfg);
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << c.detail << "\n";
    }
    std::cout << (all ? "all invariants hold" : "INVARIANT VIOLATIONS PRESENT") << "\n";
    if (!cfg.out_path.empty()) {
        CsvWriter w({"check", "pass", "detail", "schema_version", "provenance"});
        nlohmann::json items = nlohmann::json::array();
        for (const auto& c : checks) {
            w.cell(c.name).cell(int(c.pass)).cell(c.detail).cell(schema_version)
                .cell(cfg.provenance());
            items.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        }
        nlohmann::json j = base_json(cfg);
        j["checks"] = items;
        j["all_pass"] = all;
        emit(cfg, w.str(), j);
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"binding/no-binding phase diagnostics for the dipole-coupled "
                 "Pauli-Fierz particle"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<double> opt_m, opt_alpha, opt_eps, opt_delta, opt_D, opt_eps_var;
    std::optional<std::string> opt_out, opt_format;
    std::optional<int> opt_workers;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--m", opt_m, "override: particle mass");
    app.add_option("--alpha", opt_alpha, "override: coupling constant");
    app.add_option("--eps", opt_eps, "override: energy gap eps > 0");
    app.add_option("--delta", opt_delta, "override: design target gap delta");
    app.add_option("--D", opt_D, "override: design constant D");
    app.add_option("--eps-var", opt_eps_var, "override: design constant eps_var");
    app.add_option("--out", opt_out, "output file (default: stdout)");
    app.add_option("--format", opt_format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", opt_workers, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);

    auto* sc_mc = app.add_subcommand("critical-mass", "critical masses m_c and m_eps");
    auto* sc_pd = app.add_subcommand("phase-diagram", "verdict sweep over an (m, alpha) grid");
    auto* sc_ct = app.add_subcommand("count", "bound-state counts, spectral vs oracle route");
    std::optional<double> opt_count_m, opt_count_E;
    sc_ct->add_option("--m", opt_count_m, "counting mass");
    sc_ct->add_option("--E", opt_count_E, "energy threshold E <= 0 (counts states <= E/m)");
    auto* sc_fc = app.add_subcommand("field-constants",
                                     "effective mass, energy shift, coupling norms");
    auto* sc_dg = app.add_subcommand("design", "scaled-potential design search");
    auto* sc_vf = app.add_subcommand("verify", "run the invariant checks");
    // let the shared options above be written after the subcommand as well
    for (auto* sc : {sc_mc, sc_pd, sc_ct, sc_fc, sc_dg, sc_vf})
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        pfb::RunConfig cfg =
            config_path.empty() ? pfb::RunConfig() : pfb::RunConfig::load_file(config_path);
        if (opt_m)
            cfg.mass = *opt_m;
        if (opt_alpha)
            cfg.alpha = *opt_alpha;
        if (opt_eps)
            cfg.eps = *opt_eps;
        if (opt_delta)
            cfg.design.delta = *opt_delta;
        if (opt_D)
            cfg.design.D = *opt_D;
        if (opt_eps_var)
            cfg.design.eps_var = *opt_eps_var;
        if (opt_out)
            cfg.out_path = *opt_out;
        if (opt_format)
            cfg.out_format = *opt_format;
        if (opt_workers)
            cfg.workers = *opt_workers;
        if (opt_count_m)
            cfg.count.m = *opt_count_m;
        if (opt_count_E)
            cfg.count.E = *opt_count_E;
        if (!(cfg.mass > 0.0) || !(cfg.eps > 0.0))
            throw pfb::domain_error("mass and eps must be positive");
        cfg.mesh.validate();
        cfg.design.validate();

        if (sc_mc->parsed())
            return cmd_critical_mass(cfg);
        if (sc_pd->parsed())
            return cmd_phase_diagram(cfg);
        if (sc_ct->parsed())
            return cmd_count(cfg);
        if (sc_fc->parsed())
            return cmd_field_constants(cfg);
        if (sc_dg->parsed())
            return cmd_design(cfg);
        if (sc_vf->parsed())
            return cmd_verify(cfg);
    } catch (const pfb::convergence_error& e) {
        std::cerr << "error (non-convergence): " << e.what() << "\n";
        return 3;
    } catch (const pfb::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
