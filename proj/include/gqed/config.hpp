#pragma once

#include "gqed/geometry.hpp"
#include "gqed/slh.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Line-oriented config format: named [sections] of key = value pairs.
// Parse failures carry file:line diagnostics. See README for the grammar.

namespace gqed {

struct SimulationSpec {
    std::string rho0;  // product state string over {e, g}, e.g. "eg"
    double t_final = 0.0;
    double dt = 0.0;
    int sample_stride = 1;
    std::vector<std::string> observables;
};

struct ScanSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

struct SpectrumSpec {
    double delta_start = 0.0;
    double delta_stop = 0.0;
    int points = 0;
    std::optional<double> omega_ref;  // default: first atom's frequency
};

struct RunConfig {
    std::vector<std::string> atom_labels;
    Geometry geometry;
    std::optional<DriveSpec> drive;
    std::optional<SimulationSpec> simulation;
    std::optional<ScanSpec> scan;
    std::optional<SpectrumSpec> spectrum;

    int atom_index(const std::string& label) const;  // throws on unknown label
};

RunConfig parse_config(const std::string& text, const std::string& filename);
RunConfig parse_config_file(const std::string& path);

// Emit a geometry as a config (gap-phase form). geometry must match the
// gaps it was built from so the file re-parses bitwise-identically.
void write_geometry_config(std::ostream& os, const std::vector<std::string>& labels,
                           const Geometry& geometry, const std::vector<double>& gaps);

std::vector<std::string> default_labels(int n_atoms);

}  // namespace gqed
