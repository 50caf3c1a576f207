#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

// Declarative description of atoms coupled to a 1D waveguide at one or more
// connection points. The canonical coordinate is the cumulative phase
// theta_p = k * x_p, so the phase acquired between two points is
// |theta_q - theta_p|; phases are kept unreduced (no mod 2 pi).

namespace gqed {

struct ConnectionPoint {
    int atom = 0;        // 0-based atom index
    double theta = 0.0;  // cumulative phase coordinate k * x
    double gamma = 0.0;  // bare relaxation rate at this point
};

struct Geometry {
    std::vector<double> omega;           // transition frequency per atom
    std::vector<ConnectionPoint> points; // sorted by theta, left to right
    std::optional<double> mirror_theta;  // semi-infinite waveguide, mirror at left
    std::optional<double> wavenumber;    // set when built from coordinates
    std::optional<double> velocity;      // metadata only

    int n_atoms() const { return static_cast<int>(omega.size()); }
    int n_points() const { return static_cast<int>(points.size()); }
    std::vector<int> atom_points(int atom) const;  // point indices, in order
    double max_gamma() const;
};

struct CoordinateSpec {
    int atom;
    double x;
    double gamma;
};

Geometry geometry_from_coordinates(std::vector<double> omegas,
                                   std::vector<CoordinateSpec> points,
                                   double wavenumber,
                                   std::optional<double> mirror_x = {},
                                   std::optional<double> velocity = {});

struct GapPointSpec {
    int atom;
    double gamma;
};

// Points are listed left to right; gaps[i] is the phase between point i and
// point i+1 (n_points - 1 values). With a mirror, mirror_gap is the one-way
// phase from the mirror to the first point.
Geometry geometry_from_gap_phases(std::vector<double> omegas,
                                  std::vector<GapPointSpec> points,
                                  std::vector<double> gaps,
                                  std::optional<double> mirror_gap = {});

enum class PairTopology { Separate, Braided, Nested };

struct PairClass {
    PairTopology topology;
    // For Nested: which atom encloses the other. Unused otherwise.
    int outer = -1;
    int inner = -1;
};

std::string to_string(PairTopology t);

// Phase acquired between connection points p and q (point indices).
double phase_between(const Geometry& g, int p, int q);

// Full symmetric table of phases between all point pairs.
Eigen::MatrixXd phase_table(const Geometry& g);

PairClass classify_pair(const Geometry& g, int atom_j, int atom_k);

struct ValidationIssue {
    bool is_error;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const {
        for (const auto& i : issues)
            if (i.is_error) return false;
        return true;
    }
    std::vector<std::string> errors() const;
    std::vector<std::string> warnings() const;
};

ValidationReport validate_geometry(const Geometry& g);

// Throws ConfigError listing all validation errors.
void require_valid(const Geometry& g);

// Gaps between consecutive points (n_points - 1 values).
std::vector<double> gap_phases(const Geometry& g);

// Replace a mirror geometry by its open-waveguide image: every point at
// theta acquires a partner at 2*theta_mirror - theta and both carry half the
// bare rate. The master-equation coefficients of the two descriptions agree.
Geometry unfold_mirror(const Geometry& g);

}  // namespace gqed
