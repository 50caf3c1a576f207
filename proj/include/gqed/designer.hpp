#pragma once

#include "gqed/coefficients.hpp"
#include "gqed/geometry.hpp"

#include <array>
#include <span>

// Inverse design of decoherence-free coupling graphs: pick gap phases so
// every individual and collective decay vanishes while the requested
// exchange couplings are realized. Every emitted solution is re-verified
// through the closed-form coefficients.

namespace gqed {

inline constexpr double design_tolerance = 1e-12;  // in units of gamma_ref

struct DesignSolution {
    std::vector<double> gap_phases;  // between consecutive connection points
    Geometry geometry;
    Eigen::MatrixXd achieved_g;
    double max_individual_decay = 0.0;
    double max_collective_decay = 0.0;
    double max_coupling_error = 0.0;  // vs targets (0 for untargeted pairs)
    bool feasible = false;
};

// 1D chain with the braided point ordering 1,2,1,3,2,4,3,...  Targets are the
// nearest-neighbor couplings g_{j,j+1}; each must satisfy
// |g| <= sqrt(gamma_j gamma_{j+1}).
DesignSolution design_chain(std::span<const double> gammas,
                            std::span<const double> target_couplings);

enum class SignPattern { AllEqual, OneFlipped };

// Three atoms braided as 1,2,3,1,2,3 with equal rates. AllEqual gives all
// couplings +sqrt(3)/2 gamma; OneFlipped gives g12 = g23 = -g13.
DesignSolution design_all_to_all_3(const std::array<double, 3>& gammas,
                                   SignPattern pattern);

// Same layout with the two genuinely free phases exposed: phi3 (gap between
// the 3rd and 4th point) and phi4 (between the 4th and 5th). The three
// couplings follow as g13 ~ sin(phi3), g23 ~ sin(phi3+phi4), g12 ~ sin(phi4)
// and cannot be chosen independently.
DesignSolution design_all_to_all_3_free(const std::array<double, 3>& gammas,
                                        double phi3, double phi4);

// Best-effort all-to-all design for N atoms: least-squares over the N-1 free
// first-block positions. targets is symmetric with zero diagonal; the
// solution is marked infeasible when the residual exceeds design_tolerance.
DesignSolution design_all_to_all(std::span<const double> gammas,
                                 const Eigen::MatrixXd& targets);

struct PairReport {
    int atom_j;
    int atom_k;
    PairTopology topology;
    double g;
    double gamma_coll;
    bool protected_pair;  // |g| above tolerance with all decays below it
};

struct DecoherenceFreeReport {
    Eigen::VectorXd gamma_ind;
    std::vector<PairReport> pairs;
    int protected_pair_count() const;
};

DecoherenceFreeReport verify_decoherence_free(const Geometry& geo);

}  // namespace gqed
