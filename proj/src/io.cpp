#include "filament/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "filament/errors.hpp"
#include "filament/spectral.hpp"

namespace filament::io {

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto a = cell.find_first_not_of(" \t\r");
        const auto b = cell.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    return out;
}

bool parse_number(const std::string& text, double& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto cells = split(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = parse_number(cells[i], row[i]);
        if (!numeric) {
            if (t.header.empty() && t.rows.empty()) {
                t.header = std::move(cells);
                continue;
            }
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": non-numeric row");
        }
        if (!t.rows.empty() && row.size() != t.rows.front().size()) {
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": ragged row");
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw InvalidInput(path.string() + " has no data rows");
    return t;
}

// Index of the named column, falling back to a positional default.
std::size_t column(const Table& t, const std::string& name, std::size_t fallback) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == name) return i;
    }
    if (fallback >= t.rows.front().size()) {
        throw InvalidInput("missing column '" + name + "'");
    }
    return fallback;
}

bool has_column(const Table& t, const std::string& name) {
    for (const auto& h : t.header) {
        if (h == name) return true;
    }
    return false;
}

double grid_length_from_s(const Table& t, std::size_t col) {
    if (t.rows.size() < 2) throw InvalidInput("need at least two rows to infer L");
    return static_cast<double>(t.rows.size()) * (t.rows[1][col] - t.rows[0][col]);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    return out;
}

template <class Row>
void write_rows(const fs::path& path, const std::string& header, std::size_t n, Row&& row) {
    auto out = open_out(path);
    out << header << '\n';
    for (std::size_t j = 0; j < n; ++j) {
        const auto values = row(j);
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << (i ? "," : "") << format_double(values[i]);
        }
        out << '\n';
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curve_csv(const fs::path& path, const DiscreteCurve& curve) {
    const auto s = spectral::nodes(curve.size(), curve.length());
    write_rows(path, "s,x,y,z", curve.size(), [&](std::size_t j) {
        const auto& p = curve[j];
        return std::vector<double>{s[j], p.x(), p.y(), p.z()};
    });
}

void write_profile_csv(const fs::path& path, const GeometryProfile& profile) {
    const auto s = spectral::nodes(profile.size(), profile.length());
    write_rows(path, "s,k,tau", profile.size(), [&](std::size_t j) {
        return std::vector<double>{s[j], profile.curvature()[j], profile.torsion()[j]};
    });
}

void write_wave_csv(const fs::path& path, const hasimoto::WaveFunction& wave) {
    const auto s = spectral::nodes(wave.size(), wave.length());
    const auto psi = wave.psi();
    write_rows(path, "s,re,im", wave.size(), [&](std::size_t j) {
        return std::vector<double>{s[j], psi[j].real(), psi[j].imag()};
    });
}

DiscreteCurve read_curve_csv(const fs::path& path, const Vec3& period_shift, double length) {
    const auto t = read_table(path);
    const bool with_s = has_column(t, "s") || t.rows.front().size() >= 4;
    const std::size_t off = with_s ? 1 : 0;
    const std::size_t cx = column(t, "x", off), cy = column(t, "y", off + 1),
                      cz = column(t, "z", off + 2);
    std::vector<Vec3> pts;
    for (const auto& r : t.rows) pts.emplace_back(r[cx], r[cy], r[cz]);
    if (length > 0.0) return DiscreteCurve(std::move(pts), length, period_shift);
    if (with_s) {
        const double L = grid_length_from_s(t, column(t, "s", 0));
        return DiscreteCurve(std::move(pts), L, period_shift);
    }
    // Measure the length on a unit parameter grid; the integral does not depend on it.
    DiscreteCurve unit(pts, 1.0, period_shift);
    const double L = diagnostics::length(unit);
    return DiscreteCurve(std::move(pts), L, period_shift);
}

GeometryProfile read_profile_csv(const fs::path& path, double length) {
    const auto t = read_table(path);
    const std::size_t ck = column(t, "k", 1), ct = column(t, "tau", 2);
    std::vector<double> k, tau;
    for (const auto& r : t.rows) {
        k.push_back(r[ck]);
        tau.push_back(r[ct]);
    }
    const double L = length > 0.0 ? length : grid_length_from_s(t, column(t, "s", 0));
    return GeometryProfile(std::move(k), std::move(tau), L);
}

hasimoto::WaveFunction read_wave_csv(const fs::path& path, const Json& metadata) {
    const auto t = read_table(path);
    const std::size_t cr = column(t, "re", 1), ci = column(t, "im", 2);
    std::vector<hasimoto::Complex> psi;
    for (const auto& r : t.rows) psi.emplace_back(r[cr], r[ci]);
    const double L = metadata.contains("L") ? metadata.at("L").get<double>()
                                            : grid_length_from_s(t, column(t, "s", 0));
    return hasimoto::WaveFunction(psi, L, metadata.value("mu", 0.0), metadata.value("base_point", 0.0));
}

Json curve_envelope(const DiscreteCurve& curve) {
    const auto& d = curve.period_shift();
    return Json{{"kind", "curve"},
                {"N", curve.size()},
                {"L", curve.length()},
                {"columns", {"s", "x", "y", "z"}},
                {"period_shift", {d.x(), d.y(), d.z()}}};
}

Json profile_envelope(const GeometryProfile& profile) {
    return Json{{"kind", "profile"},
                {"N", profile.size()},
                {"L", profile.length()},
                {"columns", {"s", "k", "tau"}},
                {"continued_nodes", profile.continued_nodes()}};
}

Json wave_envelope(const hasimoto::WaveFunction& wave) {
    return Json{{"kind", "wave"},
                {"N", wave.size()},
                {"L", wave.length()},
                {"mu", wave.mu()},
                {"base_point", wave.base_point()},
                {"columns", {"s", "re", "im"}}};
}

void write_report_csv(const fs::path& path, const diagnostics::DiagnosticsReport& r) {
    auto out = open_out(path);
    out << "t,I1,I2,dI1_analytic,dI2_analytic,dI2_material,dI1_measured,dI2_measured,closure_defect";
    if (r.dual_path_error) out << ",dual_path_error";
    out << '\n';
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        out << format_double(r.times[i]);
        for (double v : {r.I1[i], r.I2[i], r.dI1_analytic[i], r.dI2_analytic[i], r.dI2_material[i],
                         r.dI1_measured[i], r.dI2_measured[i], r.closure_defect[i]}) {
            out << ',' << format_double(v);
        }
        if (r.dual_path_error) out << ',' << format_double((*r.dual_path_error)[i]);
        out << '\n';
    }
}

Json report_summary(const diagnostics::DiagnosticsReport& r) {
    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    Json j{{"samples", r.times.size()},
           {"t_final", r.times.empty() ? 0.0 : r.times.back()},
           {"max_relative_length_drift", r.max_length_drift()},
           {"max_relative_energy_drift", r.max_energy_drift()},
           {"max_abs_dI1_analytic", max_abs(r.dI1_analytic)},
           {"max_abs_dI2_analytic", max_abs(r.dI2_analytic)},
           {"max_abs_dI2_material", max_abs(r.dI2_material)},
           {"max_closure_defect", max_abs(r.closure_defect)},
           {"max_dI1_rate_mismatch", max_diff(r.dI1_measured, r.dI1_analytic)},
           {"max_dI2_rate_mismatch", max_diff(r.dI2_measured, r.dI2_analytic)},
           {"max_dI2_material_rate_mismatch", max_diff(r.dI2_measured, r.dI2_material)}};
    if (r.dual_path_error) j["max_dual_path_error"] = max_abs(*r.dual_path_error);
    return j;
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const Json& value) {
    auto out = open_out(path);
    out << value.dump(2) << '\n';
}

}  // namespace filament::io
