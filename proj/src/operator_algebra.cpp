#include "gqed/operator_algebra.hpp"

#include "gqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <unsupported/Eigen/KroneckerProduct>

namespace gqed {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, -im, im, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << -1, 0, 0, 1;
    return m;
}

Matrix sigma_minus_2x2() {
    // |g><e|, basis (g, e)
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

Matrix sigma_plus_2x2() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}

Matrix embed_qubit_op(const Matrix& local, int atom_index, int n_atoms) {
    if (local.rows() != 2 || local.cols() != 2)
        throw std::invalid_argument("embed_qubit_op: local operator must be 2x2");
    if (n_atoms < 1 || n_atoms > max_atoms)
        throw std::invalid_argument("embed_qubit_op: n_atoms out of range [1, " +
                                    std::to_string(max_atoms) + "]");
    if (atom_index < 0 || atom_index >= n_atoms)
        throw std::invalid_argument("embed_qubit_op: atom_index out of range");

    const Eigen::Index left = Eigen::Index(1) << atom_index;
    const Eigen::Index right = Eigen::Index(1) << (n_atoms - atom_index - 1);
    Matrix m = Eigen::kroneckerProduct(Matrix::Identity(left, left), local).eval();
    return Eigen::kroneckerProduct(m, Matrix::Identity(right, right)).eval();
}

Matrix sigma_minus(int atom_index, int n_atoms) {
    return embed_qubit_op(sigma_minus_2x2(), atom_index, n_atoms);
}

Matrix sigma_plus(int atom_index, int n_atoms) {
    return embed_qubit_op(sigma_plus_2x2(), atom_index, n_atoms);
}

Matrix sigma_z(int atom_index, int n_atoms) {
    return embed_qubit_op(pauli_z(), atom_index, n_atoms);
}

Matrix basis_ket(const std::string& levels) {
    const int n = static_cast<int>(levels.size());
    if (n < 1 || n > max_atoms)
        throw std::invalid_argument("basis_ket: need between 1 and " +
                                    std::to_string(max_atoms) + " levels");
    Eigen::Index index = 0;
    for (char c : levels) {
        index <<= 1;
        if (c == 'e')
            index |= 1;
        else if (c != 'g')
            throw std::invalid_argument("basis_ket: levels must be 'e' or 'g'");
    }
    Matrix ket = Matrix::Zero(Eigen::Index(1) << n, 1);
    ket(index, 0) = 1;
    return ket;
}

Matrix density_from_ket(const Matrix& ket) {
    return ket * ket.adjoint();
}

namespace {

void check_same_dim(const Matrix& a, const Matrix& b, const char* where) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

}  // namespace

Matrix lindblad_dissipator(const Matrix& L, const Matrix& rho) {
    check_same_dim(L, rho, "lindblad_dissipator");
    const Matrix LdL = L.adjoint() * L;
    return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

Matrix dissipator_cross(const Matrix& A, const Matrix& B, const Matrix& rho) {
    check_same_dim(A, B, "dissipator_cross");
    check_same_dim(A, rho, "dissipator_cross");
    const Matrix anti = A.adjoint() * B + B.adjoint() * A;
    return A * rho * B.adjoint() + B * rho * A.adjoint() -
           0.5 * (anti * rho + rho * anti);
}

double hermiticity_error(const Matrix& A) {
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

bool is_power_of_two(Eigen::Index n) {
    return n > 0 && (n & (n - 1)) == 0;
}

int atom_count_for_dim(Eigen::Index dim) {
    if (!is_power_of_two(dim))
        throw std::invalid_argument("operator dimension is not a power of two");
    int n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    return n;
}

Matrix drop_identity_component(const Matrix& A) {
    const complex mean = A.trace() / static_cast<double>(A.rows());
    return A - mean * Matrix::Identity(A.rows(), A.cols());
}

double trace_distance_from_one(const Matrix& rho) {
    return std::abs(rho.trace() - complex(1.0));
}

double min_eigenvalue_hermitian(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

complex expectation(const Matrix& rho, const Matrix& op) {
    check_same_dim(rho, op, "expectation");
    return (op * rho).trace();
}

double purity(const Matrix& rho) {
    return (rho * rho).trace().real();
}

Matrix MasterEquationGenerator::apply(const Matrix& rho) const {
    Matrix out = -im * (H * rho - rho * H);
    for (const Matrix& L : jump_ops) out += lindblad_dissipator(L, rho);
    return out;
}

}  // namespace gqed
