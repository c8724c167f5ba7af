#ifndef PFB_CONFIG_HPP
#define PFB_CONFIG_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfb/errors.hpp"
#include "pfb/field.hpp"
#include "pfb/phase.hpp"
#include "pfb/potential.hpp"
#include "pfb/spectra.hpp"

namespace pfb {

constexpr int schema_version = 1;

// Full-precision decimal formatting (round-trips a double exactly).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SweepSpec {
    double m_min = 0.2, m_max = 1.2;
    int m_points = 6;
    double alpha_min = 0.0, alpha_max = 0.5;
    int alpha_points = 11;
};

struct CountSpec {
    double m = 8.0;
    double E = 0.0;
};

struct RunConfig {
    int dimension = 3;
    nlohmann::json potential_spec = {{"kind", "SquareWell"}, {"depth", 1.0}, {"radius", 1.0},
                                     {"scale", 1.0}};
    nlohmann::json cutoff_spec = {{"kind", "PowerGaussian"}, {"beta", 2.0}, {"lambda", 1.0}};
    double mass = 1.0;
    double alpha = 0.1;
    double eps = 0.1;
    MeshPolicy mesh;
    DesignParams design;
    SweepSpec sweep;
    CountSpec count;
    std::string out_path;     // empty: stdout
    std::string out_format = "csv"; // csv | json
    int workers = 1;

    Potential potential() const {
        const auto& j = potential_spec;
        std::string kind = j.value("kind", "SquareWell");
        int d = dimension;
        double scale = j.value("scale", 1.0);
        Potential p = [&] {
            if (kind == "SquareWell")
                return Potential::square_well(j.value("depth", 1.0), j.value("radius", 1.0), d);
            if (kind == "Exponential")
                return Potential::exponential(j.value("depth", 1.0), j.value("range", 1.0), d);
            if (kind == "Gaussian")
                return Potential::gaussian(j.value("depth", 1.0), j.value("width", 1.0), d);
            if (kind == "TabulatedRadial") {
                std::vector<double> r = j.at("r").get<std::vector<double>>();
                std::vector<double> v = j.at("v").get<std::vector<double>>();
                return Potential::tabulated(std::move(r), std::move(v), d);
            }
            throw domain_error("config: unknown potential kind '" + kind + "'");
        }();
        return scale == 1.0 ? p : p.scaled(scale);
    }

    Cutoff cutoff() const {
        const auto& j = cutoff_spec;
        std::string kind = j.value("kind", "PowerGaussian");
        if (kind == "PowerGaussian")
            return Cutoff::power_gaussian(j.value("beta", 2.0), j.value("lambda", 1.0),
                                          dimension);
        if (kind == "Tabulated") {
            std::vector<double> r = j.at("r").get<std::vector<double>>();
            std::vector<double> chi = j.at("chi").get<std::vector<double>>();
            return Cutoff::tabulated(std::move(r), std::move(chi), dimension);
        }
        throw domain_error("config: unknown cutoff kind '" + kind + "'");
    }

    std::string provenance() const {
        std::ostringstream os;
        os << "mesh:nodes_per_panel=" << mesh.nodes_per_panel
           << ";base_panels=" << mesh.base_panels << ";levels=" << mesh.levels << ";r_max=";
        if (mesh.r_max > 0.0)
            os << fmt17(mesh.r_max);
        else
            os << "auto";
        os << ";rel_tol=" << fmt17(mesh.rel_tol);
        return os.str();
    }

    nlohmann::json to_json() const {
        return {{"schema_version", schema_version},
                {"dimension", dimension},
                {"potential", potential_spec},
                {"cutoff", cutoff_spec},
                {"mass", mass},
                {"alpha", alpha},
                {"eps", eps},
                {"mesh",
                 {{"nodes_per_panel", mesh.nodes_per_panel},
                  {"base_panels", mesh.base_panels},
                  {"levels", mesh.levels},
                  {"r_max", mesh.r_max},
                  {"rel_tol", mesh.rel_tol}}},
                {"design",
                 {{"delta", design.delta},
                  {"D", design.D},
                  {"eps_var", design.eps_var},
                  {"eps_hi", design.eps_hi}}},
                {"sweep",
                 {{"m_min", sweep.m_min},
                  {"m_max", sweep.m_max},
                  {"m_points", sweep.m_points},
                  {"alpha_min", sweep.alpha_min},
                  {"alpha_max", sweep.alpha_max},
                  {"alpha_points", sweep.alpha_points}}},
                {"count", {{"m", count.m}, {"E", count.E}}},
                {"output", {{"path", out_path}, {"format", out_format}}},
                {"workers", workers}};
    }

    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig c;
        if (j.contains("schema_version") && j["schema_version"].get<int>() != schema_version)
            throw domain_error("config: unsupported schema_version");
        c.dimension = j.value("dimension", 3);
        if (j.contains("potential"))
            c.potential_spec = j["potential"];
        if (j.contains("cutoff"))
            c.cutoff_spec = j["cutoff"];
        c.mass = j.value("mass", 1.0);
        c.alpha = j.value("alpha", 0.1);
        c.eps = j.value("eps", 0.1);
        if (j.contains("mesh")) {
            const auto& m = j["mesh"];
            c.mesh.nodes_per_panel = m.value("nodes_per_panel", 12);
            c.mesh.base_panels = m.value("base_panels", 16);
            c.mesh.levels = m.value("levels", 3);
            c.mesh.r_max = m.value("r_max", 0.0);
            c.mesh.rel_tol = m.value("rel_tol", 1e-3);
        }
        if (j.contains("design")) {
            const auto& d = j["design"];
            c.design.delta = d.value("delta", 0.05);
            c.design.D = d.value("D", 1.0);
            c.design.eps_var = d.value("eps_var", 1.0);
            c.design.eps_hi = d.value("eps_hi", 1.0);
        }
        if (j.contains("sweep")) {
            const auto& s = j["sweep"];
            c.sweep.m_min = s.value("m_min", 0.2);
            c.sweep.m_max = s.value("m_max", 1.2);
            c.sweep.m_points = s.value("m_points", 6);
            c.sweep.alpha_min = s.value("alpha_min", 0.0);
            c.sweep.alpha_max = s.value("alpha_max", 0.5);
            c.sweep.alpha_points = s.value("alpha_points", 11);
        }
        if (j.contains("count")) {
            c.count.m = j["count"].value("m", 8.0);
            c.count.E = j["count"].value("E", 0.0);
        }
        if (j.contains("output")) {
            c.out_path = j["output"].value("path", std::string());
            c.out_format = j["output"].value("format", std::string("csv"));
        }
        c.workers = j.value("workers", 1);
        if (c.out_format != "csv" && c.out_format != "json")
            throw domain_error("config: output format must be 'csv' or 'json'");
        if (c.workers < 1)
            throw domain_error("config: workers must be >= 1");
        if (!(c.mass > 0.0) || !(c.eps > 0.0))
            throw domain_error("config: mass and eps must be positive");
        return c;
    }

    static RunConfig load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw domain_error("config: cannot open '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw domain_error(std::string("config: ") + e.what());
        }
        return from_json(j);
    }
};

// Minimal CSV table with always-quoted strings and %.17g numerics.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : ncol_(header.size()) {
        row(std::move(header));
    }
    CsvWriter& cell(const std::string& s) {
        std::string esc;
        esc.reserve(s.size() + 2);
        esc += '"';
        for (char ch : s) {
            if (ch == '"')
                esc += '"';
            esc += ch;
        }
        esc += '"';
        cells_.push_back(std::move(esc));
        return maybe_flush();
    }
    CsvWriter& cell(double v) {
        cells_.push_back(fmt17(v));
        return maybe_flush();
    }
    CsvWriter& cell(int v) {
        cells_.push_back(std::to_string(v));
        return maybe_flush();
    }
    std::string str() const { return body_; }

private:
    void row(std::vector<std::string> cells) {
        for (auto& c : cells)
            cell(c);
    }
    CsvWriter& maybe_flush() {
        if (cells_.size() == ncol_) {
            for (std::size_t i = 0; i < cells_.size(); ++i) {
                body_ += cells_[i];
                body_ += i + 1 < cells_.size() ? "," : "\n";
            }
            cells_.clear();
        }
        return *this;
    }
    std::size_t ncol_;
    std::vector<std::string> cells_;
    std::string body_;
};

} // namespace pfb

#endif
