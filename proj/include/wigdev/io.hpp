#pragma once

// File formats: phase-space fields as CSV or a column-major binary dump
// with a JSON header, profiles as two-column CSV, time series as one CSV
// per snapshot plus a JSON manifest.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "approx.hpp"
#include "dynamics.hpp"
#include "grid.hpp"
#include "profiles.hpp"
#include "projection.hpp"

namespace wigdev::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct IoError : Error {
    using Error::Error;
};

inline std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, mode);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << std::setprecision(17);
    return f;
}

inline std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

inline void write_json(const fs::path& path, const json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

inline json read_json(const fs::path& path) {
    auto f = open_in(path);
    return json::parse(f);
}

inline json grid_json(const Grid1D& g) {
    return {{"min", g.x_min()}, {"max", g.x_max()}, {"n", g.size()}, {"spacing", g.dx()}, {"hbar", g.hbar()}};
}

inline Grid1D grid_from_json(const json& j) {
    return Grid1D(j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<std::size_t>(),
                  j.at("hbar").get<double>());
}

// x,p,value rows, x outer.
inline void write_field_csv(const fs::path& path, const RealField& F) {
    auto f = open_out(path);
    f << "x,p,value\n";
    const auto& xg = F.grid().x();
    const auto& pg = F.grid().p();
    for (std::size_t i = 0; i < F.nx(); ++i)
        for (std::size_t k = 0; k < F.np(); ++k) f << xg[i] << ',' << pg[k] << ',' << F(i, k) << '\n';
}

inline RealField read_field_csv(const fs::path& path, const PhaseGrid& pg) {
    auto f = open_in(path);
    std::string line;
    std::getline(f, line);
    if (line != "x,p,value") throw IoError(path.string() + ": expected header x,p,value");
    RealField F(pg);
    for (std::size_t i = 0; i < F.nx(); ++i)
        for (std::size_t k = 0; k < F.np(); ++k) {
            if (!std::getline(f, line)) throw IoError(path.string() + ": too few rows");
            std::istringstream s(line);
            std::string a, b, c;
            std::getline(s, a, ',');
            std::getline(s, b, ',');
            std::getline(s, c, ',');
            F(i, k) = std::stod(c);
        }
    return F;
}

// <stem>.bin holds float64 values with x varying fastest; <stem>.json
// describes the grid and layout.
inline void write_field_binary(const fs::path& stem, const RealField& F) {
    const auto& pg = F.grid();
    json h{{"format", "wigdev-field"},
           {"dtype", "float64"},
           {"order", "column-major"},
           {"endianness", std::endian::native == std::endian::little ? "little" : "big"},
           {"shape", {F.nx(), F.np()}},
           {"x", grid_json(pg.x())},
           {"p", grid_json(pg.p())},
           {"hbar", pg.hbar()}};
    write_json(fs::path(stem).replace_extension(".json"), h);
    auto f = open_out(fs::path(stem).replace_extension(".bin"), std::ios::out | std::ios::binary);
    std::vector<double> col(F.nx());
    for (std::size_t k = 0; k < F.np(); ++k) {
        for (std::size_t i = 0; i < F.nx(); ++i) col[i] = F(i, k);
        f.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(col.size() * sizeof(double)));
    }
}

inline RealField read_field_binary(const fs::path& stem) {
    const json h = read_json(fs::path(stem).replace_extension(".json"));
    if (h.value("format", "") != "wigdev-field" || h.value("order", "") != "column-major")
        throw IoError(stem.string() + ": not a column-major wigdev field");
    const auto x = grid_from_json(h.at("x"));
    const auto pg = PhaseGrid::wigner_dual(x);
    if (!pg.p().same_as(grid_from_json(h.at("p")))) throw IoError(stem.string() + ": momentum axis is not Wigner-dual");
    RealField F(pg);
    auto f = open_in(fs::path(stem).replace_extension(".bin"), std::ios::in | std::ios::binary);
    std::vector<double> col(F.nx());
    for (std::size_t k = 0; k < F.np(); ++k) {
        if (!f.read(reinterpret_cast<char*>(col.data()), static_cast<std::streamsize>(col.size() * sizeof(double))))
            throw IoError(stem.string() + ": truncated binary field");
        for (std::size_t i = 0; i < F.nx(); ++i) F(i, k) = col[i];
    }
    return F;
}

inline void write_profile_csv(const fs::path& path, const Profile& g) {
    auto f = open_out(path);
    f << "p,g\n";
    for (std::size_t k = 0; k < g.values.size(); ++k) f << g.p_grid[k] << ',' << g.values[k] << '\n';
}

// Reads (p, g) rows; the momenta must be uniform, symmetric and a power of two in number.
inline Profile read_profile_csv(const fs::path& path, double anchor, double hbar) {
    auto f = open_in(path);
    std::string line;
    std::getline(f, line);
    if (line != "p,g") throw IoError(path.string() + ": expected header p,g");
    std::vector<double> p, g;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError(path.string() + ": malformed row '" + line + "'");
        p.push_back(std::stod(line.substr(0, comma)));
        g.push_back(std::stod(line.substr(comma + 1)));
    }
    if (p.size() < 8) throw IoError(path.string() + ": too few samples");
    const double dp = (p.back() - p.front()) / static_cast<double>(p.size() - 1);
    for (std::size_t k = 0; k < p.size(); ++k)
        if (std::abs(p[k] - (p.front() + static_cast<double>(k) * dp)) > 1e-9 * std::max(1.0, std::abs(p[k])))
            throw IoError(path.string() + ": momenta are not uniformly spaced");
    Profile out{Grid1D::centered(0.0, dp, p.size(), hbar), std::move(g), anchor};
    if (std::abs(out.p_grid.x_min() - p.front()) > 1e-9 * dp)
        throw IoError(path.string() + ": momentum grid must run from -n/2 dp to (n/2 - 1) dp");
    return out;
}

// One CSV per snapshot (p,g at the anchor or x,p,value for fields) plus manifest.json.
inline void write_time_profile(const fs::path& dir, const TimeProfile& g, const std::string& stem) {
    json manifest{{"kind", "profile-series"}, {"anchor", g.anchor}, {"p", grid_json(g.p_grid)}, {"snapshots", json::array()}};
    for (std::size_t m = 0; m < g.times.size(); ++m) {
        std::ostringstream name;
        name << stem << '_' << std::setw(4) << std::setfill('0') << m << ".csv";
        write_profile_csv(dir / name.str(), Profile{g.p_grid, g.values[m], g.anchor});
        manifest["snapshots"].push_back({{"t", g.times[m]}, {"file", name.str()}});
    }
    write_json(dir / (stem + "_manifest.json"), manifest);
}

inline void write_field_series(const fs::path& dir, const std::vector<double>& times,
                               const std::vector<RealField>& fields, const std::string& stem) {
    if (times.size() != fields.size()) throw DimensionError("write_field_series: one field per time required");
    json manifest{{"kind", "field-series"}, {"snapshots", json::array()}};
    if (!fields.empty()) {
        manifest["x"] = grid_json(fields.front().grid().x());
        manifest["p"] = grid_json(fields.front().grid().p());
    }
    for (std::size_t m = 0; m < times.size(); ++m) {
        std::ostringstream name;
        name << stem << '_' << std::setw(4) << std::setfill('0') << m << ".csv";
        write_field_csv(dir / name.str(), fields[m]);
        manifest["snapshots"].push_back({{"t", times[m]}, {"file", name.str()}});
    }
    write_json(dir / (stem + "_manifest.json"), manifest);
}

inline json witness_json(const WitnessReport& r) {
    return {{"N_bound", r.N_bound}, {"N_used", r.N_used}, {"overlap", r.overlap}, {"tolerance", r.tolerance}};
}

inline json certificate_json(const Certificate& c) {
    return {{"N", c.N},           {"eps", c.eps},           {"tail", c.tail},         {"lambda_1", c.lambda_1},
            {"eigen_gap", c.eigen_gap}, {"bound_13", c.bound_13}, {"bound_15", c.bound_15}};
}

inline json profile_report_json(const ProfileReport& r) {
    return {{"l2_norm", r.l2_norm},     {"fourier_l1", r.fourier_l1}, {"bound", r.bound},
            {"saturation", r.saturation}, {"admissible", r.admissible}, {"degenerate", r.degenerate},
            {"note", r.note}};
}

}  // namespace wigdev::io
