#include "gqed/config.hpp"

#include "gqed/errors.hpp"
#include "gqed/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace gqed {

int RunConfig::atom_index(const std::string& label) const {
    for (size_t i = 0; i < atom_labels.size(); ++i)
        if (atom_labels[i] == label) return static_cast<int>(i);
    throw ConfigError("unknown atom label '" + label + "'");
}

namespace {

struct Line {
    int number;
    std::string key;
    std::string value;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

class Parser {
  public:
    Parser(const std::string& text, const std::string& filename) : m_file(filename) {
        std::istringstream is(text);
        std::string raw;
        int number = 0;
        std::string section;
        while (std::getline(is, raw)) {
            ++number;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(number, "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) fail(number, "empty section name");
                m_sections[section];  // remember even if empty
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(number, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(number, "empty key");
            if (section.empty()) fail(number, "key outside of any [section]");
            m_sections[section].push_back({number, key, value});
        }
    }

    bool has(const std::string& section) const { return m_sections.count(section) > 0; }

    const std::vector<Line>& lines(const std::string& section) const {
        static const std::vector<Line> empty;
        const auto it = m_sections.find(section);
        return it == m_sections.end() ? empty : it->second;
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(m_file + ":" + std::to_string(line) + ": " + msg);
    }

    double number(const Line& l, const std::string& text) const {
        const std::string t = trim(text);
        double v = 0.0;
        const char* begin = t.data();
        const char* end = t.data() + t.size();
        const auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr != end)
            fail(l.number, "expected a number, got '" + t + "'");
        return v;
    }

    int integer(const Line& l, const std::string& text) const {
        const std::string t = trim(text);
        int v = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size())
            fail(l.number, "expected an integer, got '" + t + "'");
        return v;
    }

  private:
    std::string m_file;
    std::map<std::string, std::vector<Line>> m_sections;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& filename) {
    Parser p(text, filename);
    RunConfig cfg;

    // [atoms]: label = omega, in waveguide order of first appearance
    std::vector<double> omegas;
    for (const Line& l : p.lines("atoms")) {
        for (const auto& existing : cfg.atom_labels)
            if (existing == l.key) p.fail(l.number, "duplicate atom label '" + l.key + "'");
        cfg.atom_labels.push_back(l.key);
        omegas.push_back(p.number(l, l.value));
    }
    if (cfg.atom_labels.empty()) throw ConfigError(filename + ": no atoms");

    // [geometry] options
    std::optional<double> wavenumber, mirror_x, velocity;
    double units = 1.0;
    for (const Line& l : p.lines("geometry")) {
        if (l.key == "wavenumber") wavenumber = p.number(l, l.value);
        else if (l.key == "mirror") mirror_x = p.number(l, l.value);
        else if (l.key == "velocity") velocity = p.number(l, l.value);
        else if (l.key == "units") units = p.number(l, l.value);
        else p.fail(l.number, "unknown geometry key '" + l.key + "'");
    }
    if (!(units > 0.0)) throw ConfigError(filename + ": units must be positive");

    // [connections]: coordinate form "atom x gamma" or gap form "atom gamma"
    std::vector<double> gaps;
    std::optional<double> mirror_gap;
    bool have_gap_section = p.has("gap_phases");
    for (const Line& l : p.lines("gap_phases")) {
        if (l.key == "values") {
            for (const auto& f : split_fields(l.value)) gaps.push_back(p.number(l, f));
        } else if (l.key == "mirror_gap") {
            mirror_gap = p.number(l, l.value);
        } else {
            p.fail(l.number, "unknown gap_phases key '" + l.key + "'");
        }
    }

    std::vector<CoordinateSpec> coord_points;
    std::vector<GapPointSpec> gap_points;
    for (const Line& l : p.lines("connections")) {
        if (l.key != "point") p.fail(l.number, "unknown connections key '" + l.key + "'");
        const auto fields = split_fields(l.value);
        int atom = -1;
        if (!fields.empty()) {
            for (size_t i = 0; i < cfg.atom_labels.size(); ++i)
                if (cfg.atom_labels[i] == fields[0]) atom = static_cast<int>(i);
            if (atom < 0) p.fail(l.number, "unknown atom label '" + fields[0] + "'");
        }
        if (have_gap_section) {
            if (fields.size() != 2)
                p.fail(l.number, "gap-phase form needs 'point = <atom> <gamma>'");
            gap_points.push_back({atom, p.number(l, fields[1]) * units});
        } else {
            if (fields.size() != 3)
                p.fail(l.number, "coordinate form needs 'point = <atom> <x> <gamma>'");
            coord_points.push_back(
                {atom, p.number(l, fields[1]), p.number(l, fields[2]) * units});
        }
    }
    if (coord_points.empty() && gap_points.empty())
        throw ConfigError(filename + ": no connection points");

    for (double& w : omegas) w *= units;

    try {
        if (have_gap_section) {
            if (mirror_x) throw ConfigError("use mirror_gap in gap-phase form");
            cfg.geometry = geometry_from_gap_phases(omegas, gap_points, gaps, mirror_gap);
        } else {
            if (!wavenumber) throw ConfigError("coordinate form requires a wavenumber");
            cfg.geometry = geometry_from_coordinates(omegas, coord_points, *wavenumber,
                                                     mirror_x, velocity);
        }
    } catch (const ConfigError& e) {
        throw ConfigError(filename + ": " + e.what());
    }

    if (p.has("drive")) {
        DriveSpec d;
        for (const Line& l : p.lines("drive")) {
            if (l.key == "alpha") {
                const auto fields = split_fields(l.value);
                if (fields.size() == 1)
                    d.alpha = complex(p.number(l, fields[0]), 0.0);
                else if (fields.size() == 2)
                    d.alpha = complex(p.number(l, fields[0]), p.number(l, fields[1]));
                else
                    p.fail(l.number, "alpha takes one or two numbers");
            } else if (l.key == "omega_d") {
                d.omega_d = p.number(l, l.value);
            } else if (l.key == "port") {
                d.port = p.integer(l, l.value);
            } else {
                p.fail(l.number, "unknown drive key '" + l.key + "'");
            }
        }
        d.alpha *= std::sqrt(units);
        d.omega_d *= units;
        cfg.drive = d;
    }

    if (p.has("simulation")) {
        SimulationSpec s;
        for (const Line& l : p.lines("simulation")) {
            if (l.key == "rho0") s.rho0 = l.value;
            else if (l.key == "t_final") s.t_final = p.number(l, l.value) / units;
            else if (l.key == "dt") s.dt = p.number(l, l.value) / units;
            else if (l.key == "sample_stride") s.sample_stride = p.integer(l, l.value);
            else if (l.key == "observables") s.observables = split_fields(l.value);
            else p.fail(l.number, "unknown simulation key '" + l.key + "'");
        }
        cfg.simulation = s;
    }

    if (p.has("scan")) {
        ScanSpec s;
        for (const Line& l : p.lines("scan")) {
            if (l.key == "start") s.start = p.number(l, l.value);
            else if (l.key == "stop") s.stop = p.number(l, l.value);
            else if (l.key == "step") s.step = p.number(l, l.value);
            else p.fail(l.number, "unknown scan key '" + l.key + "'");
        }
        cfg.scan = s;
    }

    if (p.has("spectrum")) {
        SpectrumSpec s;
        for (const Line& l : p.lines("spectrum")) {
            if (l.key == "delta_start") s.delta_start = p.number(l, l.value) * units;
            else if (l.key == "delta_stop") s.delta_stop = p.number(l, l.value) * units;
            else if (l.key == "points") s.points = p.integer(l, l.value);
            else if (l.key == "omega_ref") s.omega_ref = p.number(l, l.value) * units;
            else p.fail(l.number, "unknown spectrum key '" + l.key + "'");
        }
        cfg.spectrum = s;
    }

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::vector<std::string> default_labels(int n_atoms) {
    std::vector<std::string> labels;
    for (int i = 0; i < n_atoms; ++i) {
        std::string name;
        int v = i;
        do {
            name.insert(name.begin(), static_cast<char>('a' + v % 26));
            v = v / 26 - 1;
        } while (v >= 0);
        labels.push_back(name);
    }
    return labels;
}

void write_geometry_config(std::ostream& os, const std::vector<std::string>& labels,
                           const Geometry& geometry, const std::vector<double>& gaps) {
    os << "[atoms]\n";
    for (int j = 0; j < geometry.n_atoms(); ++j)
        os << labels[static_cast<size_t>(j)] << " = "
           << format_double(geometry.omega[static_cast<size_t>(j)]) << "\n";
    os << "\n[connections]\n";
    for (const auto& pt : geometry.points)
        os << "point = " << labels[static_cast<size_t>(pt.atom)] << " "
           << format_double(pt.gamma) << "\n";
    os << "\n[gap_phases]\n";
    os << "values =";
    for (double g : gaps) os << " " << format_double(g);
    os << "\n";
    if (geometry.mirror_theta)
        os << "mirror_gap = "
           << format_double(geometry.points.front().theta - *geometry.mirror_theta) << "\n";
}

}  // namespace gqed
