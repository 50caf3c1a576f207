#pragma once

#include "gqed/geometry.hpp"
#include "gqed/operator_algebra.hpp"

// Closed-form master-equation coefficients for a geometry:
//   delta_omega_j = sum_{n<m} sqrt(g_jn g_jm) sin phi_{jn,jm}
//   g_{j,k}       = sum_{n,m} sqrt(g_jn g_km)/2 sin phi_{jn,km}
//   Gamma_j       = |sum_n sqrt(g_jn) e^{i phi_{j1,jn}}|^2
//   Gamma_coll,jk = sum_{n,m} sqrt(g_jn g_km) cos phi_{jn,km}
// Mirror geometries are evaluated on their unfolded image. These closed
// forms are the independent counterpart of the SLH cascade construction.

namespace gqed {

struct CoefficientSet {
    Eigen::VectorXd delta_omega;  // interference Lamb shift per atom
    Eigen::VectorXd omega_prime;  // omega_j + delta_omega_j
    Eigen::VectorXd gamma_ind;    // individual decay Gamma_j
    Eigen::MatrixXd g;            // exchange couplings, zero diagonal
    Eigen::MatrixXd gamma_coll;   // collective decays; diagonal holds Gamma_j

    int n_atoms() const { return static_cast<int>(delta_omega.size()); }
    // The decay matrix (Gamma_j on the diagonal, Gamma_coll off it).
    const Eigen::MatrixXd& decay_matrix() const { return gamma_coll; }
};

double lamb_shift(const Geometry& geo, int atom);
double exchange_coupling(const Geometry& geo, int atom_j, int atom_k);
double individual_decay(const Geometry& geo, int atom);
// The equivalent double-cosine form of Gamma_j, kept as a cross-check.
double individual_decay_double_sum(const Geometry& geo, int atom);
double collective_decay(const Geometry& geo, int atom_j, int atom_k);

CoefficientSet coefficient_set(const Geometry& geo);

enum class TableSetup { SmallAtoms, SmallAtomsMirror, Separate, Braided, Nested };

// Closed-form two-atom coefficients for equal rates and equal gap phases.
CoefficientSet table1_coefficients(TableSetup setup, double phi, double gamma);

// The corresponding explicit geometry (omega_a = omega_b = 0).
Geometry table_setup_geometry(TableSetup setup, double phi, double gamma);

// Action of the closed-form generator on a state:
//   -i[H, rho] + sum_{j,k} C_{jk} (sm_j rho sp_k - 1/2 {sp_j sm_k, rho})
// with C the decay matrix. Independent of the jump-operator route.
Matrix apply_coefficient_generator(const CoefficientSet& c, const Matrix& rho);

Matrix coefficient_hamiltonian(const CoefficientSet& c);

// Jump-operator form via eigendecomposition of the decay matrix (PSD up to
// roundoff; tiny negative eigenvalues are clamped).
MasterEquationGenerator generator_from_coefficients(const CoefficientSet& c);

double min_decay_eigenvalue(const CoefficientSet& c);

}  // namespace gqed
