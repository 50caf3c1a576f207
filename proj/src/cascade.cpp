#include "gqed/cascade.hpp"

#include "gqed/errors.hpp"
#include "gqed/simulator.hpp"

#include <cmath>

namespace gqed {

namespace {

// One-port triplet for a single connection point. The transition-frequency
// term is attached to the right-moving part of the atom's first point.
SlhTriplet point_triplet(const Geometry& geo, int point, bool right_moving,
                         bool carries_omega) {
    const int n = geo.n_atoms();
    const Eigen::Index dim = Eigen::Index(1) << n;
    const auto& pt = geo.points[static_cast<size_t>(point)];
    Matrix H = Matrix::Zero(dim, dim);
    if (right_moving && carries_omega)
        H = 0.5 * geo.omega[static_cast<size_t>(pt.atom)] * sigma_z(pt.atom, n);
    return emitter(std::sqrt(0.5 * pt.gamma) * sigma_minus(pt.atom, n), H);
}

std::vector<bool> first_point_flags(const Geometry& geo) {
    std::vector<bool> first(static_cast<size_t>(geo.n_points()), false);
    std::vector<bool> seen(static_cast<size_t>(geo.n_atoms()), false);
    for (int p = 0; p < geo.n_points(); ++p) {
        const int atom = geo.points[static_cast<size_t>(p)].atom;
        if (!seen[static_cast<size_t>(atom)]) {
            seen[static_cast<size_t>(atom)] = true;
            first[static_cast<size_t>(p)] = true;
        }
    }
    return first;
}

}  // namespace

SlhTriplet build_waveguide_slh(const Geometry& geo) {
    if (geo.mirror_theta)
        throw std::invalid_argument(
            "build_waveguide_slh: mirror geometry (use build_semi_infinite_slh)");
    require_valid(geo);

    const auto first = first_point_flags(geo);
    const auto gaps = gap_phases(geo);
    const Eigen::Index dim = Eigen::Index(1) << geo.n_atoms();

    // Right-movers enter at the leftmost point.
    SlhTriplet right = point_triplet(geo, 0, true, first[0]);
    for (int p = 1; p < geo.n_points(); ++p) {
        right = series(phase_shift(gaps[static_cast<size_t>(p - 1)], dim), right);
        right = series(point_triplet(geo, p, true, first[static_cast<size_t>(p)]), right);
    }

    // Left-movers enter at the rightmost point.
    const int last = geo.n_points() - 1;
    SlhTriplet left = point_triplet(geo, last, false, false);
    for (int p = last - 1; p >= 0; --p) {
        left = series(phase_shift(gaps[static_cast<size_t>(p)], dim), left);
        left = series(point_triplet(geo, p, false, false), left);
    }

    return concatenate(right, left);
}

SlhTriplet build_semi_infinite_slh(const Geometry& geo) {
    if (!geo.mirror_theta)
        throw std::invalid_argument("build_semi_infinite_slh: geometry has no mirror");
    require_valid(geo);

    const auto first = first_point_flags(geo);
    const auto gaps = gap_phases(geo);
    const Eigen::Index dim = Eigen::Index(1) << geo.n_atoms();
    const double roundtrip = 2.0 * (geo.points.front().theta - *geo.mirror_theta);

    // The input enters from the right, passes every point as a left-mover,
    // reflects off the mirror, and passes every point again as a right-mover.
    const int last = geo.n_points() - 1;
    SlhTriplet chain = point_triplet(geo, last, false, false);
    for (int p = last - 1; p >= 0; --p) {
        chain = series(phase_shift(gaps[static_cast<size_t>(p)], dim), chain);
        chain = series(point_triplet(geo, p, false, false), chain);
    }
    chain = series(phase_shift(roundtrip, dim), chain);
    chain = series(point_triplet(geo, 0, true, first[0]), chain);
    for (int p = 1; p < geo.n_points(); ++p) {
        chain = series(phase_shift(gaps[static_cast<size_t>(p - 1)], dim), chain);
        chain = series(point_triplet(geo, p, true, first[static_cast<size_t>(p)]), chain);
    }
    return chain;
}

MasterEquationGenerator derive_master_equation(const Geometry& geo) {
    const SlhTriplet g =
        geo.mirror_theta ? build_semi_infinite_slh(geo) : build_waveguide_slh(geo);
    return master_equation_from_triplet(g);
}

CoefficientSet slh_coefficients(const SlhTriplet& g, std::span<const double> bare_omegas) {
    const int n_atoms = static_cast<int>(bare_omegas.size());
    const Eigen::Index dim = Eigen::Index(1) << n_atoms;
    if (g.dim() != dim)
        throw std::invalid_argument("slh_coefficients: dimension mismatch");
    const double half_dim = std::pow(2.0, n_atoms - 1);

    CoefficientSet c;
    c.delta_omega = Eigen::VectorXd::Zero(n_atoms);
    c.omega_prime.resize(n_atoms);
    c.gamma_ind.resize(n_atoms);
    c.g = Eigen::MatrixXd::Zero(n_atoms, n_atoms);
    c.gamma_coll = Eigen::MatrixXd::Zero(n_atoms, n_atoms);

    // L_p = sum_j w_{p,j} sigma_-^{(j)}
    Eigen::MatrixXcd w(g.n_ports(), n_atoms);
    for (int p = 0; p < g.n_ports(); ++p) {
        Matrix residual = g.L[static_cast<size_t>(p)];
        for (int j = 0; j < n_atoms; ++j) {
            const complex wj =
                (sigma_plus(j, n_atoms) * g.L[static_cast<size_t>(p)]).trace() / half_dim;
            w(p, j) = wj;
            residual -= wj * sigma_minus(j, n_atoms);
        }
        if (residual.cwiseAbs().maxCoeff() > 1e-9)
            throw NumericError(
                "slh_coefficients: coupling operator is not a sigma_- combination");
    }

    Matrix h_residual = drop_identity_component(g.H);
    for (int j = 0; j < n_atoms; ++j) {
        c.omega_prime(j) = ((sigma_z(j, n_atoms) * g.H).trace() / (2.0 * half_dim)).real() * 2.0;
        c.delta_omega(j) = c.omega_prime(j) - bare_omegas[static_cast<size_t>(j)];
        h_residual -= 0.5 * c.omega_prime(j) * sigma_z(j, n_atoms);
        complex decay{0.0, 0.0};
        for (int p = 0; p < g.n_ports(); ++p) decay += w(p, j) * std::conj(w(p, j));
        c.gamma_ind(j) = decay.real();
        c.gamma_coll(j, j) = c.gamma_ind(j);
    }
    const double quarter_dim = n_atoms >= 2 ? std::pow(2.0, n_atoms - 2) : 1.0;
    for (int j = 0; j < n_atoms; ++j) {
        for (int k = j + 1; k < n_atoms; ++k) {
            const Matrix flip = sigma_minus(j, n_atoms) * sigma_plus(k, n_atoms);
            const complex gjk = (flip.adjoint() * g.H).trace() / quarter_dim;
            c.g(j, k) = c.g(k, j) = gjk.real();
            h_residual -= c.g(j, k) * (flip + flip.adjoint());
            complex coll{0.0, 0.0};
            for (int p = 0; p < g.n_ports(); ++p) coll += w(p, j) * std::conj(w(p, k));
            c.gamma_coll(j, k) = c.gamma_coll(k, j) = coll.real();
            if (std::abs(coll.imag()) > 1e-9)
                throw NumericError("slh_coefficients: complex collective decay");
        }
    }
    if (h_residual.cwiseAbs().maxCoeff() > 1e-9)
        throw NumericError(
            "slh_coefficients: Hamiltonian has terms beyond sigma_z and flip-flop");
    return c;
}

MasterEquationGenerator driven_master_equation(const Geometry& geo, const DriveSpec& drive) {
    if (geo.mirror_theta)
        throw std::invalid_argument("driven_master_equation: open waveguide required");
    const SlhTriplet bare = build_waveguide_slh(geo);
    const SlhTriplet driven = attach_drive(bare, drive, geo.omega);
    return master_equation_from_triplet(driven);
}

ScatteringResult transmission_reflection(const Geometry& geo, const DriveSpec& drive) {
    if (drive.port != 0)
        throw std::invalid_argument("transmission_reflection: probe must enter the left port");
    if (std::abs(drive.alpha) == 0.0)
        throw std::invalid_argument("transmission_reflection: need a nonzero probe amplitude");

    const MasterEquationGenerator gen = driven_master_equation(geo, drive);
    const int n = geo.n_atoms();

    Matrix rho;
    try {
        rho = steady_state(gen);
    } catch (const DegenerateSteadyState&) {
        // Physically the atoms start in the ground state with the probe on;
        // integrate long enough for any coupled component to relax.
        rho = density_from_ket(basis_ket(std::string(static_cast<size_t>(n), 'g')));
        const double scale = geo.max_gamma();
        if (scale > 0.0) {
            EvolveOptions opts;
            opts.dt = std::min(1e-3 / scale,
                               0.5 * rk4_stability_threshold / generator_norm_scale(gen));
            opts.t_final = 50.0 / scale;
            opts.store_states = false;
            opts.sample_stride = 1 << 20;
            rho = evolve(rho, gen, opts).final_state;
        }
    }

    // t = e^{i phi_total} + <L_R>/alpha, r = <L_L>/alpha. The stripped driven
    // generator holds the purely atomic parts of L_R, L_L.
    const double phi_total = geo.points.back().theta - geo.points.front().theta;
    ScatteringResult res;
    res.omega_d = drive.omega_d;
    res.t = std::exp(im * phi_total) + expectation(rho, gen.jump_ops[0]) / drive.alpha;
    res.r = expectation(rho, gen.jump_ops[1]) / drive.alpha;
    return res;
}

}  // namespace gqed
