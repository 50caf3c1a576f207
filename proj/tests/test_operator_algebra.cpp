#include "gqed/operator_algebra.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace gqed;
using namespace gqed::testing;

TEST_CASE("embedding a single-atom operator is the operator itself") {
    CHECK(max_abs_diff(embed_qubit_op(pauli_z(), 0, 1), pauli_z()) == 0.0);
}

TEST_CASE("embedding into slot 1 of 2 puts identity on the left") {
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 1) = 1;  // |g g><g e|
    expected(2, 3) = 1;  // |e g><e e|
    CHECK(max_abs_diff(embed_qubit_op(sigma_minus_2x2(), 1, 2), expected) == 0.0);
}

TEST_CASE("operators on distinct tensor slots commute") {
    const Matrix a = sigma_minus(0, 2);
    const Matrix b = sigma_plus(1, 2);
    CHECK(max_abs_diff(a * b, b * a) == 0.0);
}

TEST_CASE("embedding preserves products on the same slot") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix a = random_matrix(2, rng);
        const Matrix b = random_matrix(2, rng);
        const int n = 1 + static_cast<int>(rng() % 3);
        const int slot = static_cast<int>(rng() % static_cast<unsigned>(n));
        CHECK(max_abs_diff(embed_qubit_op((a * b).eval(), slot, n),
                           embed_qubit_op(a, slot, n) * embed_qubit_op(b, slot, n)) < 1e-13);
    }
}

TEST_CASE("embedding rejects bad arguments") {
    CHECK_THROWS(embed_qubit_op(pauli_z(), 2, 2));
    CHECK_THROWS(embed_qubit_op(pauli_z(), -1, 2));
    CHECK_THROWS(embed_qubit_op(pauli_z(), 0, max_atoms + 1));
    CHECK_THROWS(embed_qubit_op(Matrix::Identity(3, 3), 0, 1));
}

TEST_CASE("basis kets use atom 0 as the most significant bit") {
    const Matrix eg = basis_ket("eg");
    CHECK(eg(2, 0) == complex(1.0));
    CHECK(eg.cwiseAbs().sum() == 1.0);
    CHECK(expectation(density_from_ket(eg), sigma_z(0, 2)).real() == doctest::Approx(1.0));
    CHECK(expectation(density_from_ket(eg), sigma_z(1, 2)).real() == doctest::Approx(-1.0));
    CHECK_THROWS(basis_ket("xg"));
}

TEST_CASE("dissipator of sigma_minus empties the excited state") {
    const double gamma = 0.7;
    const Matrix L = std::sqrt(gamma) * sigma_minus_2x2();
    const Matrix excited = density_from_ket(basis_ket("e"));
    const Matrix ground = density_from_ket(basis_ket("g"));
    CHECK(max_abs_diff(lindblad_dissipator(L, excited), (gamma * (ground - excited)).eval()) <
          1e-15);
    CHECK(lindblad_dissipator(L, ground).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dissipator output is traceless for random inputs") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const Eigen::Index dim = Eigen::Index(1) << n;
        const Matrix L = random_matrix(dim, rng);
        const Matrix rho = random_density(dim, rng);
        CHECK(std::abs(lindblad_dissipator(L, rho).trace()) < 1e-12);
    }
}

TEST_CASE("dissipator cross term: A = B doubles the dissipator") {
    Rng rng(33);
    const Matrix A = random_matrix(4, rng);
    const Matrix rho = random_density(4, rng);
    CHECK(max_abs_diff(dissipator_cross(A, A, rho),
                       (2.0 * lindblad_dissipator(A, rho)).eval()) < 1e-12);
}

TEST_CASE("dissipator cross term with B = 0 vanishes") {
    Rng rng(34);
    const Matrix A = random_matrix(4, rng);
    const Matrix rho = random_density(4, rng);
    CHECK(dissipator_cross(A, Matrix::Zero(4, 4), rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("D[A+B] = D[A] + D[B] + cross(A,B) on random pairs") {
    Rng rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const Eigen::Index dim = Eigen::Index(1) << n;
        const Matrix A = trial % 2 == 0 ? random_matrix(dim, rng)
                                        : (std::sqrt(0.5) * sigma_minus(0, n)).eval();
        const Matrix B = trial % 2 == 0
                             ? random_matrix(dim, rng)
                             : (std::sqrt(0.5) * sigma_minus(n - 1, n)).eval();
        const Matrix rho = random_density(dim, rng);
        const Matrix lhs = lindblad_dissipator((A + B).eval(), rho);
        const Matrix rhs = lindblad_dissipator(A, rho) + lindblad_dissipator(B, rho) +
                           dissipator_cross(A, B, rho);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS(lindblad_dissipator(Matrix::Identity(2, 2), Matrix::Identity(4, 4)));
    CHECK_THROWS(dissipator_cross(Matrix::Identity(2, 2), Matrix::Identity(4, 4),
                                  Matrix::Identity(4, 4)));
    CHECK_THROWS(expectation(Matrix::Identity(2, 2), Matrix::Identity(4, 4)));
}

TEST_CASE("power-of-two dimension bookkeeping") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(4096));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(12));
    CHECK(atom_count_for_dim(1) == 0);
    CHECK(atom_count_for_dim(16) == 4);
    CHECK_THROWS(atom_count_for_dim(6));
}

TEST_CASE("hermiticity error and identity dropping") {
    Rng rng(55);
    const Matrix h = random_hermitian(4, rng);
    CHECK(hermiticity_error(h) == 0.0);
    const Matrix shifted = h + 3.7 * Matrix::Identity(4, 4);
    CHECK(max_abs_diff(drop_identity_component(shifted), drop_identity_component(h)) < 1e-14);
    CHECK(std::abs(drop_identity_component(shifted).trace()) < 1e-13);
}

TEST_CASE("expectation examples") {
    CHECK(expectation(density_from_ket(basis_ket("e")), pauli_z()).real() ==
          doctest::Approx(1.0));
    const Matrix mixed = 0.5 * Matrix::Identity(2, 2);
    CHECK(std::abs(expectation(mixed, pauli_x())) < 1e-15);
    CHECK(std::abs(expectation(mixed, sigma_minus_2x2())) < 1e-15);
}

TEST_CASE("generator apply is trace preserving and hermiticity preserving") {
    Rng rng(66);
    MasterEquationGenerator gen;
    gen.H = random_hermitian(4, rng);
    gen.jump_ops = {random_matrix(4, rng), random_matrix(4, rng)};
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix rho = random_density(4, rng);
        const Matrix rhodot = gen.apply(rho);
        CHECK(std::abs(rhodot.trace()) < 1e-12);
        CHECK(hermiticity_error(rhodot) < 1e-12);
    }
}
