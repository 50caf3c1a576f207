#include "gqed/coefficients.hpp"

#include "gqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gqed {

namespace {

const Geometry& open_view(const Geometry& geo, Geometry& storage) {
    if (!geo.mirror_theta) return geo;
    storage = unfold_mirror(geo);
    return storage;
}

}  // namespace

double lamb_shift(const Geometry& geo, int atom) {
    Geometry storage;
    const Geometry& g = open_view(geo, storage);
    const auto pts = g.atom_points(atom);
    double shift = 0.0;
    for (size_t n = 0; n < pts.size(); ++n)
        for (size_t m = n + 1; m < pts.size(); ++m) {
            const auto& a = g.points[static_cast<size_t>(pts[n])];
            const auto& b = g.points[static_cast<size_t>(pts[m])];
            shift += std::sqrt(a.gamma * b.gamma) * std::sin(phase_between(g, pts[n], pts[m]));
        }
    return shift;
}

double exchange_coupling(const Geometry& geo, int atom_j, int atom_k) {
    if (atom_j == atom_k)
        throw std::invalid_argument("exchange_coupling: need two distinct atoms");
    Geometry storage;
    const Geometry& g = open_view(geo, storage);
    double coupling = 0.0;
    for (int p : g.atom_points(atom_j))
        for (int q : g.atom_points(atom_k)) {
            const auto& a = g.points[static_cast<size_t>(p)];
            const auto& b = g.points[static_cast<size_t>(q)];
            coupling += 0.5 * std::sqrt(a.gamma * b.gamma) * std::sin(phase_between(g, p, q));
        }
    return coupling;
}

double individual_decay(const Geometry& geo, int atom) {
    Geometry storage;
    const Geometry& g = open_view(geo, storage);
    const auto pts = g.atom_points(atom);
    if (pts.empty()) return 0.0;
    complex amp{0.0, 0.0};
    const double theta0 = g.points[static_cast<size_t>(pts.front())].theta;
    for (int p : pts) {
        const auto& pt = g.points[static_cast<size_t>(p)];
        amp += std::sqrt(pt.gamma) * std::exp(im * (pt.theta - theta0));
    }
    return std::norm(amp);
}

double individual_decay_double_sum(const Geometry& geo, int atom) {
    Geometry storage;
    const Geometry& g = open_view(geo, storage);
    const auto pts = g.atom_points(atom);
    double rate = 0.0;
    for (int p : pts)
        for (int q : pts) {
            const auto& a = g.points[static_cast<size_t>(p)];
            const auto& b = g.points[static_cast<size_t>(q)];
            rate += std::sqrt(a.gamma * b.gamma) * std::cos(phase_between(g, p, q));
        }
    return rate;
}

double collective_decay(const Geometry& geo, int atom_j, int atom_k) {
    if (atom_j == atom_k)
        throw std::invalid_argument("collective_decay: need two distinct atoms");
    Geometry storage;
    const Geometry& g = open_view(geo, storage);
    double rate = 0.0;
    for (int p : g.atom_points(atom_j))
        for (int q : g.atom_points(atom_k)) {
            const auto& a = g.points[static_cast<size_t>(p)];
            const auto& b = g.points[static_cast<size_t>(q)];
            rate += std::sqrt(a.gamma * b.gamma) * std::cos(phase_between(g, p, q));
        }
    return rate;
}

CoefficientSet coefficient_set(const Geometry& geo) {
    const int n = geo.n_atoms();
    if (n == 0) throw ConfigError("coefficient_set: no atoms");
    CoefficientSet c;
    c.delta_omega.resize(n);
    c.omega_prime.resize(n);
    c.gamma_ind.resize(n);
    c.g = Eigen::MatrixXd::Zero(n, n);
    c.gamma_coll = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        c.delta_omega(j) = lamb_shift(geo, j);
        c.omega_prime(j) = geo.omega[static_cast<size_t>(j)] + c.delta_omega(j);
        c.gamma_ind(j) = individual_decay(geo, j);
        c.gamma_coll(j, j) = c.gamma_ind(j);
        for (int k = j + 1; k < n; ++k) {
            c.g(j, k) = c.g(k, j) = exchange_coupling(geo, j, k);
            c.gamma_coll(j, k) = c.gamma_coll(k, j) = collective_decay(geo, j, k);
        }
    }
    return c;
}

CoefficientSet table1_coefficients(TableSetup setup, double phi, double gamma) {
    CoefficientSet c;
    c.delta_omega.resize(2);
    c.omega_prime.resize(2);
    c.gamma_ind.resize(2);
    c.g = Eigen::MatrixXd::Zero(2, 2);
    c.gamma_coll = Eigen::MatrixXd::Zero(2, 2);

    double dwa = 0, dwb = 0, g = 0, ga = 0, gb = 0, gcoll = 0;
    switch (setup) {
        case TableSetup::SmallAtoms:
            g = 0.5 * gamma * std::sin(phi);
            ga = gb = gamma;
            gcoll = gamma * std::cos(phi);
            break;
        case TableSetup::SmallAtomsMirror:
            dwa = 0.5 * gamma * std::sin(phi);
            dwb = 0.5 * gamma * std::sin(3 * phi);
            g = 0.5 * gamma * (std::sin(phi) + std::sin(2 * phi));
            ga = gamma * (1 + std::cos(phi));
            gb = gamma * (1 + std::cos(3 * phi));
            gcoll = gamma * (std::cos(phi) + std::cos(2 * phi));
            break;
        case TableSetup::Separate:
            dwa = dwb = gamma * std::sin(phi);
            g = 0.5 * gamma * (std::sin(phi) + 2 * std::sin(2 * phi) + std::sin(3 * phi));
            ga = gb = 2 * gamma * (1 + std::cos(phi));
            gcoll = gamma * (std::cos(phi) + 2 * std::cos(2 * phi) + std::cos(3 * phi));
            break;
        case TableSetup::Braided:
            dwa = dwb = gamma * std::sin(2 * phi);
            g = 0.5 * gamma * (3 * std::sin(phi) + std::sin(3 * phi));
            ga = gb = 2 * gamma * (1 + std::cos(2 * phi));
            gcoll = gamma * (3 * std::cos(phi) + std::cos(3 * phi));
            break;
        case TableSetup::Nested:
            dwa = gamma * std::sin(3 * phi);
            dwb = gamma * std::sin(phi);
            g = gamma * (std::sin(phi) + std::sin(2 * phi));
            ga = 2 * gamma * (1 + std::cos(3 * phi));
            gb = 2 * gamma * (1 + std::cos(phi));
            gcoll = 2 * gamma * (std::cos(phi) + std::cos(2 * phi));
            break;
    }
    c.delta_omega << dwa, dwb;
    c.omega_prime = c.delta_omega;
    c.gamma_ind << ga, gb;
    c.g(0, 1) = c.g(1, 0) = g;
    c.gamma_coll(0, 0) = ga;
    c.gamma_coll(1, 1) = gb;
    c.gamma_coll(0, 1) = c.gamma_coll(1, 0) = gcoll;
    return c;
}

Geometry table_setup_geometry(TableSetup setup, double phi, double gamma) {
    const std::vector<double> omegas = {0.0, 0.0};
    switch (setup) {
        case TableSetup::SmallAtoms:
            return geometry_from_gap_phases(omegas, {{0, gamma}, {1, gamma}}, {phi});
        case TableSetup::SmallAtomsMirror:
            // Round trip from atom a is phi, so the one-way mirror gap is phi/2.
            return geometry_from_gap_phases(omegas, {{0, gamma}, {1, gamma}}, {phi},
                                            0.5 * phi);
        case TableSetup::Separate:
            return geometry_from_gap_phases(
                omegas, {{0, gamma}, {0, gamma}, {1, gamma}, {1, gamma}}, {phi, phi, phi});
        case TableSetup::Braided:
            return geometry_from_gap_phases(
                omegas, {{0, gamma}, {1, gamma}, {0, gamma}, {1, gamma}}, {phi, phi, phi});
        case TableSetup::Nested:
            return geometry_from_gap_phases(
                omegas, {{0, gamma}, {1, gamma}, {1, gamma}, {0, gamma}}, {phi, phi, phi});
    }
    throw std::invalid_argument("unknown table setup");
}

Matrix coefficient_hamiltonian(const CoefficientSet& c) {
    const int n = c.n_atoms();
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix H = Matrix::Zero(dim, dim);
    for (int j = 0; j < n; ++j) H += 0.5 * c.omega_prime(j) * sigma_z(j, n);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (c.g(j, k) == 0.0) continue;
            const Matrix flip = sigma_minus(j, n) * sigma_plus(k, n);
            H += c.g(j, k) * (flip + flip.adjoint());
        }
    return H;
}

Matrix apply_coefficient_generator(const CoefficientSet& c, const Matrix& rho) {
    const int n = c.n_atoms();
    const Matrix H = coefficient_hamiltonian(c);
    Matrix out = -im * (H * rho - rho * H);
    for (int j = 0; j < n; ++j) {
        const Matrix sm_j = sigma_minus(j, n);
        for (int k = 0; k < n; ++k) {
            const double cjk = c.gamma_coll(j, k);
            if (cjk == 0.0) continue;
            const Matrix sp_k = sigma_plus(k, n);
            const Matrix anticomm_op = sigma_plus(j, n) * sigma_minus(k, n);
            out += cjk * (sm_j * rho * sp_k -
                          0.5 * (anticomm_op * rho + rho * anticomm_op));
        }
    }
    return out;
}

MasterEquationGenerator generator_from_coefficients(const CoefficientSet& c) {
    const int n = c.n_atoms();
    MasterEquationGenerator gen;
    gen.H = coefficient_hamiltonian(c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.gamma_coll);
    for (int i = 0; i < n; ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda <= 0.0) continue;  // clamp roundoff-negative modes
        Matrix L = Matrix::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
        for (int j = 0; j < n; ++j) L += es.eigenvectors()(j, i) * sigma_minus(j, n);
        gen.jump_ops.push_back(std::sqrt(lambda) * L);
    }
    return gen;
}

double min_decay_eigenvalue(const CoefficientSet& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.gamma_coll,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace gqed
