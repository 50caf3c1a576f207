#include "gqed/simulator.hpp"

#include "gqed/errors.hpp"

#include <Eigen/SVD>

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace gqed {

const std::vector<double>& Trajectory::values(const std::string& name) const {
    for (size_t i = 0; i < observable_names.size(); ++i)
        if (observable_names[i] == name) return observable_values[i];
    throw std::invalid_argument("trajectory has no observable named '" + name + "'");
}

double generator_norm_scale(const MasterEquationGenerator& gen) {
    double scale = gen.H.norm();
    double dissipative = 0.0;
    for (const Matrix& L : gen.jump_ops) dissipative += (L.adjoint() * L).norm();
    return std::max(scale, dissipative);
}

namespace {

void check_density_matrix(const Matrix& rho) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    if (trace_distance_from_one(rho) > 1e-9)
        throw std::invalid_argument("density matrix trace deviates from 1");
    if (hermiticity_error(rho) > 1e-10)
        throw std::invalid_argument("density matrix is not Hermitian");
}

}  // namespace

Trajectory evolve(const Matrix& rho0, const MasterEquationGenerator& gen,
                  const EvolveOptions& opts, const std::vector<Observable>& observables) {
    check_density_matrix(rho0);
    if (gen.dim() != rho0.rows())
        throw std::invalid_argument("evolve: generator/state dimension mismatch");
    if (!(opts.dt > 0.0) || !(opts.t_final >= 0.0))
        throw std::invalid_argument("evolve: need dt > 0 and t_final >= 0");

    const double scale = generator_norm_scale(gen);
    if (opts.dt * scale > rk4_stability_threshold) {
        std::ostringstream os;
        os << "evolve: dt = " << opts.dt << " violates the stability guard; need dt <= "
           << rk4_stability_threshold / scale;
        throw NumericError(os.str());
    }

    const int stride = std::max(1, opts.sample_stride);
    const long n_steps = static_cast<long>(std::ceil(opts.t_final / opts.dt - 1e-9));

    Trajectory traj;
    for (const auto& obs : observables) {
        if (obs.op.rows() != rho0.rows())
            throw std::invalid_argument("evolve: observable dimension mismatch");
        traj.observable_names.push_back(obs.name);
    }
    traj.observable_values.assign(observables.size(), {});

    Matrix rho = rho0;
    auto record = [&](long step) {
        traj.times.push_back(static_cast<double>(step) * opts.dt);
        if (opts.store_states) traj.states.push_back(rho);
        for (size_t i = 0; i < observables.size(); ++i)
            traj.observable_values[i].push_back(expectation(rho, observables[i].op).real());
    };

    record(0);
    for (long step = 0; step < n_steps; ++step) {
        const Matrix k1 = gen.apply(rho);
        const Matrix k2 = gen.apply(rho + 0.5 * opts.dt * k1);
        const Matrix k3 = gen.apply(rho + 0.5 * opts.dt * k2);
        const Matrix k4 = gen.apply(rho + opts.dt * k3);
        rho += (opts.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (!rho.allFinite()) throw NumericError("evolve: non-finite state encountered");
        if ((step + 1) % stride == 0 || step + 1 == n_steps) record(step + 1);
    }
    traj.final_state = rho;
    return traj;
}

Eigen::MatrixXcd liouvillian_matrix(const MasterEquationGenerator& gen) {
    const Eigen::Index d = gen.dim();
    const Matrix id = Matrix::Identity(d, d);
    // Column-major vec: vec(A rho B) = (B^T (x) A) vec(rho).
    Eigen::MatrixXcd liou =
        -im * (Eigen::kroneckerProduct(id, gen.H) -
               Eigen::kroneckerProduct(gen.H.transpose(), id))
                  .eval();
    for (const Matrix& L : gen.jump_ops) {
        const Matrix LdL = L.adjoint() * L;
        liou += Eigen::kroneckerProduct(L.conjugate(), L).eval();
        liou -= 0.5 * Eigen::kroneckerProduct(id, LdL).eval();
        liou -= 0.5 * Eigen::kroneckerProduct(LdL.transpose(), id).eval();
    }
    return liou;
}

Matrix steady_state(const MasterEquationGenerator& gen) {
    const Eigen::Index d = gen.dim();
    const Eigen::MatrixXcd liou = liouvillian_matrix(gen);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(liou, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
    int null_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol) ++null_dim;
    if (null_dim != 1) {
        std::ostringstream os;
        os << "steady state is not unique: Liouvillian null space has dimension "
           << null_dim;
        throw DegenerateSteadyState(os.str(), null_dim);
    }

    Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
    Matrix rho = Eigen::Map<Matrix>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const complex tr = rho.trace();
    if (std::abs(tr) < 1e-14 * static_cast<double>(d))
        throw NumericError("steady state has vanishing trace");
    rho /= tr;
    return rho;
}

}  // namespace gqed
