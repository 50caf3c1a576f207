#pragma once

#include "gqed/operator_algebra.hpp"

#include <span>
#include <vector>

// SLH triplets (S, L, H) for cascaded quantum networks and their three
// composition rules. S entries are plain complex scalars (propagation
// phases); all coupling operators and H must be pre-embedded on a common
// Hilbert space. Identity-proportional terms are dropped from H after each
// composition since they never contribute to the dynamics.

namespace gqed {

struct SlhTriplet {
    Eigen::MatrixXcd S;       // n_ports x n_ports scalar scattering matrix
    std::vector<Matrix> L;    // one coupling operator per port, units sqrt(rate)
    Matrix H;                 // Hermitian, units of angular frequency

    int n_ports() const { return static_cast<int>(S.rows()); }
    Eigen::Index dim() const { return H.rows(); }
};

// (I_n, 0, 0) on the given Hilbert-space dimension; n_ports may be 0,
// which is the neutral element of concatenation.
SlhTriplet identity_channel(int n_ports, Eigen::Index dim);

// One-port pure phase shifter (e^{i phi}, 0, 0).
SlhTriplet phase_shift(double phi, Eigen::Index dim);

// One-port coherent source (1, alpha I, 0) supplying |alpha|^2 photons/s.
SlhTriplet coherent_source(complex alpha, Eigen::Index dim);

// One-port emitter node (1, c op, H) used for connection points.
SlhTriplet emitter(const Matrix& coupling_op, const Matrix& H);

// g2 <| g1: output of g1 feeds input of g2.
SlhTriplet series(const SlhTriplet& g2, const SlhTriplet& g1);

// g1 [+] g2: parallel composition, block-diagonal S, stacked L.
SlhTriplet concatenate(const SlhTriplet& g1, const SlhTriplet& g2);

// Feed output port `out_port` back into input port `in_port` (0-based).
SlhTriplet feedback(const SlhTriplet& g, int out_port, int in_port);

// Move any identity-proportional component of each L_j into H. Needed after
// composing with coherent sources: the generator is unchanged, but the jump
// operators become purely atomic and the drive appears as a Hamiltonian term.
SlhTriplet strip_scalar_couplings(const SlhTriplet& g);

// rhodot = -i[H, rho] + sum_j D[L_j] rho.
MasterEquationGenerator master_equation_from_triplet(const SlhTriplet& g);

struct DriveSpec {
    complex alpha{0.0, 0.0};  // amplitude, units sqrt(photons/time)
    double omega_d = 0.0;     // drive angular frequency
    int port = 0;             // input port receiving the drive
};

// Compose g with a coherent source on drive.port and move to the frame
// rotating at omega_d (each atom's sigma_z/2 coefficient shifts by -omega_d).
// atom_frequencies has one entry per atom and fixes the qubit count.
SlhTriplet attach_drive(const SlhTriplet& g, const DriveSpec& drive,
                        std::span<const double> atom_frequencies);

}  // namespace gqed
