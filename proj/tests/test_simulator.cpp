#include "gqed/simulator.hpp"

#include "gqed/cascade.hpp"
#include "gqed/coefficients.hpp"
#include "gqed/errors.hpp"
#include "test_helpers.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <doctest.h>

using namespace gqed;
using namespace gqed::testing;

namespace {

MasterEquationGenerator pure_decay(double gamma) {
    MasterEquationGenerator gen;
    gen.H = Matrix::Zero(2, 2);
    gen.jump_ops = {std::sqrt(gamma) * sigma_minus_2x2()};
    return gen;
}

}  // namespace

TEST_CASE("pure decay follows the exponential law") {
    const double gamma = 1.0;
    const Matrix rho0 = density_from_ket(basis_ket("e"));
    EvolveOptions opts;
    opts.t_final = 5.0 / gamma;
    opts.dt = 1e-3 / gamma;
    opts.store_states = false;
    const std::vector<Observable> obs = {{"pe", density_from_ket(basis_ket("e"))}};
    const Trajectory traj = evolve(rho0, pure_decay(gamma), opts, obs);
    const auto& pe = traj.values("pe");
    for (size_t i = 0; i < traj.times.size(); ++i)
        CHECK(std::abs(pe[i] - std::exp(-gamma * traj.times[i])) < 1e-8);
}

TEST_CASE("decoherence-free braided exchange gives a clean Rabi swap") {
    const double gamma = 1.0;
    const Geometry geo = table_setup_geometry(TableSetup::Braided, pi / 2, gamma);
    const MasterEquationGenerator gen = derive_master_equation(geo);
    EvolveOptions opts;
    opts.t_final = 3.0 * pi / gamma;
    opts.dt = 1e-3 / gamma;
    opts.store_states = false;
    const std::vector<Observable> obs = {{"P_ge", density_from_ket(basis_ket("ge"))}};
    const Trajectory traj =
        evolve(density_from_ket(basis_ket("eg")), gen, opts, obs);
    const auto& p = traj.values("P_ge");
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double s = std::sin(gamma * traj.times[i]);
        CHECK(std::abs(p[i] - s * s) < 1e-6);
    }
}

TEST_CASE("null generator leaves the state untouched") {
    MasterEquationGenerator gen;
    gen.H = Matrix::Zero(4, 4);
    Rng rng(51);
    const Matrix rho0 = random_density(4, rng);
    EvolveOptions opts;
    opts.t_final = 1.0;
    opts.dt = 0.01;
    const Trajectory traj = evolve(rho0, gen, opts);
    CHECK(max_abs_diff(traj.final_state, rho0) == 0.0);
}

TEST_CASE("trajectories preserve trace, hermiticity, and positivity") {
    Rng rng(52);
    for (int trial = 0; trial < 5; ++trial) {
        const Geometry geo = random_geometry(rng, 2, 2, false);
        const MasterEquationGenerator gen = derive_master_equation(geo);
        EvolveOptions opts;
        opts.t_final = 3.0;
        opts.dt = std::min(1e-3, 0.05 / generator_norm_scale(gen));
        opts.sample_stride = 100;
        const Matrix rho0 = random_density(gen.dim(), rng);
        const Trajectory traj = evolve(rho0, gen, opts);
        for (const Matrix& rho : traj.states) {
            CHECK(trace_distance_from_one(rho) < 1e-9);
            CHECK(hermiticity_error(rho) < 1e-10);
            CHECK(min_eigenvalue_hermitian(rho) > -1e-7);
        }
    }
}

TEST_CASE("RK4 converges at fourth order on the decay problem") {
    const double gamma = 1.0;
    const Matrix rho0 = density_from_ket(basis_ket("e"));
    auto final_at = [&](double dt) {
        EvolveOptions opts;
        opts.t_final = 2.0;
        opts.dt = dt;
        opts.store_states = false;
        return evolve(rho0, pure_decay(gamma), opts).final_state;
    };
    const double e1 = max_abs_diff(final_at(0.05), final_at(0.025));
    const double e2 = max_abs_diff(final_at(0.025), final_at(0.0125));
    CHECK(e1 / e2 > 8.0);
    CHECK(e1 / e2 < 24.0);
    CHECK(e1 <= 16.0 * e2 * 1.5);
}

TEST_CASE("purity stays 1 when every jump operator vanishes") {
    const Geometry geo = table_setup_geometry(TableSetup::Braided, pi / 2, 1.0);
    const MasterEquationGenerator gen = derive_master_equation(geo);
    EvolveOptions opts;
    opts.t_final = 5.0;
    opts.dt = 1e-3;
    opts.sample_stride = 200;
    const Trajectory traj = evolve(density_from_ket(basis_ket("eg")), gen, opts);
    for (const Matrix& rho : traj.states) CHECK(std::abs(purity(rho) - 1.0) < 1e-6);
}

TEST_CASE("the stability guard rejects oversized steps") {
    MasterEquationGenerator gen;
    gen.H = 100.0 * pauli_z();
    EvolveOptions opts;
    opts.t_final = 1.0;
    opts.dt = 0.01;  // dt * ||H|| = 1.41 > 0.1
    CHECK_THROWS_AS(evolve(density_from_ket(basis_ket("g")), gen, opts), NumericError);
}

TEST_CASE("evolve validates its inputs") {
    MasterEquationGenerator gen;
    gen.H = Matrix::Zero(2, 2);
    EvolveOptions opts;
    opts.t_final = 1.0;
    opts.dt = 0.01;
    CHECK_THROWS(evolve(Matrix::Identity(2, 2), gen, opts));  // trace 2
    CHECK_THROWS(evolve(Matrix::Zero(4, 4), gen, opts));
    opts.dt = -1.0;
    CHECK_THROWS(evolve(density_from_ket(basis_ket("g")), gen, opts));
}

TEST_CASE("steady state of a decaying qubit is the ground state") {
    const Matrix rho = steady_state(pure_decay(0.8));
    CHECK(max_abs_diff(rho, density_from_ket(basis_ket("g"))) < 1e-10);
}

TEST_CASE("driven qubit: null-space steady state matches long-time integration") {
    const double gamma = 1.0;
    const complex alpha{0.02, 0.0};
    const Geometry geo = geometry_from_gap_phases({0.0}, {{0, gamma}}, {});
    const MasterEquationGenerator gen =
        driven_master_equation(geo, DriveSpec{alpha, 0.0, 0});

    const Matrix direct = steady_state(gen);
    CHECK(std::abs(gen.apply(direct).cwiseAbs().maxCoeff()) < 1e-10 * gamma);
    CHECK(trace_distance_from_one(direct) < 1e-12);
    CHECK(min_eigenvalue_hermitian(direct) > -1e-9);

    EvolveOptions opts;
    opts.t_final = 50.0 / gamma;
    opts.dt = 1e-3 / gamma;
    opts.store_states = false;
    opts.sample_stride = 1 << 20;
    const Matrix integrated =
        evolve(density_from_ket(basis_ket("g")), gen, opts).final_state;
    CHECK(max_abs_diff(direct, integrated) < 1e-8);
}

TEST_CASE("fully decoherence-free generators have no unique steady state") {
    const Geometry geo = table_setup_geometry(TableSetup::Braided, pi / 2, 1.0);
    const MasterEquationGenerator gen = derive_master_equation(geo);
    CHECK_THROWS_AS(steady_state(gen), DegenerateSteadyState);
    try {
        steady_state(gen);
    } catch (const DegenerateSteadyState& e) {
        CHECK(e.null_space_dim > 1);
    }
}

TEST_CASE("RK4 agrees with the Liouvillian matrix exponential") {
    Rng rng(54);
    for (int trial = 0; trial < 5; ++trial) {
        const Geometry geo = random_geometry(rng, 2, 2, false);
        const MasterEquationGenerator gen = derive_master_equation(geo);
        const Eigen::Index d = gen.dim();
        Matrix rho0 = random_density(d, rng);

        EvolveOptions opts;
        opts.t_final = 1.5;
        opts.dt = std::min(1e-3, 0.05 / generator_norm_scale(gen));
        opts.store_states = false;
        const Matrix via_rk4 = evolve(rho0, gen, opts).final_state;

        const double t_end = std::ceil(opts.t_final / opts.dt - 1e-9) * opts.dt;
        const Eigen::MatrixXcd propagator = (liouvillian_matrix(gen) * t_end).exp();
        const Eigen::VectorXcd v0 = Eigen::Map<Eigen::VectorXcd>(rho0.data(), d * d);
        const Eigen::VectorXcd vt = propagator * v0;
        const Matrix via_expm = Eigen::Map<const Matrix>(vt.data(), d, d);
        CHECK(max_abs_diff(via_rk4, via_expm) < 1e-9);
    }
}

TEST_CASE("liouvillian matrix action agrees with the direct generator") {
    Rng rng(53);
    const Geometry geo = random_geometry(rng, 2, 2, false);
    const MasterEquationGenerator gen = derive_master_equation(geo);
    const Eigen::MatrixXcd liou = liouvillian_matrix(gen);
    const Eigen::Index d = gen.dim();
    for (int k = 0; k < 10; ++k) {
        Matrix rho = random_density(d, rng);
        const Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(rho.data(), d * d);
        const Eigen::VectorXcd lv = liou * v;
        const Matrix from_matrix = Eigen::Map<const Matrix>(lv.data(), d, d);
        CHECK(max_abs_diff(from_matrix, gen.apply(rho)) < 1e-12);
    }
}
