#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <string>
#include <vector>

// Dense complex-matrix algebra for multi-qubit operators and the Lindblad
// building blocks. All operators live on the full 2^N space; atom 0 is the
// leftmost tensor factor (most significant bit of the basis index). Basis
// per qubit: index 0 = ground, index 1 = excited, so sigma_z = diag(-1,+1).
// hbar = 1 and rates are in units of gamma_ref = 1 throughout the library.

namespace gqed {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr complex im{0.0, 1.0};

// Largest supported atom count for dense 2^N operators.
inline constexpr int max_atoms = 12;

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix sigma_plus_2x2();
Matrix sigma_minus_2x2();

// I (x) ... (x) local (x) ... (x) I with `local` in slot atom_index.
Matrix embed_qubit_op(const Matrix& local, int atom_index, int n_atoms);

// Embedded single-atom operators on the 2^n_atoms space.
Matrix sigma_minus(int atom_index, int n_atoms);
Matrix sigma_plus(int atom_index, int n_atoms);
Matrix sigma_z(int atom_index, int n_atoms);

// Product state from a string over {e, g}, e.g. "eg" = atom 0 excited.
Matrix basis_ket(const std::string& levels);
Matrix density_from_ket(const Matrix& ket);

// D[L]rho = L rho L^dag - 1/2 {L^dag L, rho}
Matrix lindblad_dissipator(const Matrix& L, const Matrix& rho);

// A rho B^dag + B rho A^dag - 1/2 {A^dag B + B^dag A, rho}; the cross term of
// D[A + B] = D[A] + D[B] + cross(A, B).
Matrix dissipator_cross(const Matrix& A, const Matrix& B, const Matrix& rho);

double hermiticity_error(const Matrix& A);
bool is_power_of_two(Eigen::Index n);
int atom_count_for_dim(Eigen::Index dim);  // log2, throws unless a power of 2

// max |entry| of A - (tr A / dim) I, i.e. distance from a pure identity term.
Matrix drop_identity_component(const Matrix& A);

double trace_distance_from_one(const Matrix& rho);
double min_eigenvalue_hermitian(const Matrix& A);

complex expectation(const Matrix& rho, const Matrix& op);
double purity(const Matrix& rho);

// Hamiltonian + jump operators; the master equation reads
// rhodot = -i[H, rho] + sum_j D[L_j] rho.
struct MasterEquationGenerator {
    Matrix H;
    std::vector<Matrix> jump_ops;

    Eigen::Index dim() const { return H.rows(); }
    Matrix apply(const Matrix& rho) const;
};

}  // namespace gqed
