#include "gqed/designer.hpp"

#include "gqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace gqed {

namespace {

// arcsin branch in [-pi/2, pi/2], lifted by 2 pi when negative so the gap
// phase is nonnegative; sin is unchanged.
double coupling_phase(double target, double gamma_a, double gamma_b) {
    const double bound = std::sqrt(gamma_a * gamma_b);
    if (std::abs(target) > bound) {
        std::ostringstream os;
        os << "unachievable coupling: |" << target << "| exceeds sqrt(gamma_j gamma_k) = "
           << bound;
        throw ConfigError(os.str());
    }
    double phi = std::asin(bound > 0.0 ? target / bound : 0.0);
    if (phi < 0.0) phi += 2.0 * pi;
    return phi;
}

// Smallest (2n+1) pi - known, n >= 0, that is strictly positive.
double odd_pi_complement(double known) {
    double phi = pi - known;
    while (phi <= 0.0) phi += 2.0 * pi;
    return phi;
}

// `gaps` must be the exact vector the geometry was built from so that a
// written config re-parses to the bitwise-identical geometry.
DesignSolution verify_solution(Geometry geometry, std::vector<double> gaps,
                               const Eigen::MatrixXd& targets) {
    DesignSolution sol;
    sol.gap_phases = std::move(gaps);
    sol.geometry = std::move(geometry);

    const CoefficientSet c = coefficient_set(sol.geometry);
    sol.achieved_g = c.g;
    sol.max_individual_decay = c.gamma_ind.cwiseAbs().maxCoeff();
    sol.max_collective_decay = 0.0;
    sol.max_coupling_error = 0.0;
    const int n = c.n_atoms();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            sol.max_collective_decay =
                std::max(sol.max_collective_decay, std::abs(c.gamma_coll(j, k)));
            sol.max_coupling_error =
                std::max(sol.max_coupling_error, std::abs(c.g(j, k) - targets(j, k)));
        }
    sol.feasible = sol.max_individual_decay < design_tolerance &&
                   sol.max_collective_decay < design_tolerance &&
                   sol.max_coupling_error < design_tolerance;
    return sol;
}

}  // namespace

DesignSolution design_chain(std::span<const double> gammas,
                            std::span<const double> target_couplings) {
    const int n = static_cast<int>(gammas.size());
    if (n < 2) throw ConfigError("design_chain: need at least two atoms");
    if (target_couplings.size() + 1 != gammas.size())
        throw ConfigError("design_chain: need exactly n-1 target couplings");
    for (double g : gammas)
        if (!(g > 0.0)) throw ConfigError("design_chain: rates must be positive");

    // Connection-point order 1,2,1,3,2,4,3,...,N-1,N (atoms 0-based below).
    std::vector<int> slot_atom;
    slot_atom.push_back(0);
    for (int j = 1; j < n; ++j) {
        slot_atom.push_back(j);
        slot_atom.push_back(j - 1);
    }
    slot_atom.push_back(n - 1);

    std::vector<double> gaps(static_cast<size_t>(2 * n - 1), 0.0);
    // Even-numbered gaps (1-based) set the nearest-neighbor couplings:
    // g_{j,j+1} = sqrt(gamma_j gamma_{j+1}) sin phi_{2j}.
    for (int j = 0; j + 1 < n; ++j)
        gaps[static_cast<size_t>(2 * j + 1)] = coupling_phase(
            target_couplings[static_cast<size_t>(j)], gammas[static_cast<size_t>(j)],
            gammas[static_cast<size_t>(j + 1)]);
    // Odd-numbered gaps absorb the N zero-decay constraints.
    gaps[0] = odd_pi_complement(gaps[1]);
    for (int a = 1; a + 1 < n; ++a)
        gaps[static_cast<size_t>(2 * a)] =
            odd_pi_complement(gaps[static_cast<size_t>(2 * a - 1)] +
                              gaps[static_cast<size_t>(2 * a + 1)]);
    gaps[static_cast<size_t>(2 * n - 2)] =
        odd_pi_complement(gaps[static_cast<size_t>(2 * n - 3)]);

    std::vector<GapPointSpec> points;
    for (int atom : slot_atom) points.push_back({atom, gammas[static_cast<size_t>(atom)]});
    Geometry geo = geometry_from_gap_phases(std::vector<double>(static_cast<size_t>(n), 0.0),
                                            points, gaps);

    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j)
        targets(j, j + 1) = targets(j + 1, j) = target_couplings[static_cast<size_t>(j)];
    return verify_solution(std::move(geo), std::move(gaps), targets);
}

namespace {

DesignSolution build_all3(const std::array<double, 3>& gammas, double phi2, double phi3,
                          double phi4) {
    const double phi1 = odd_pi_complement(phi2 + phi3);
    const double phi5 = odd_pi_complement(phi3 + phi4);
    std::vector<GapPointSpec> points = {{0, gammas[0]}, {1, gammas[1]}, {2, gammas[2]},
                                        {0, gammas[0]}, {1, gammas[1]}, {2, gammas[2]}};
    std::vector<double> gaps = {phi1, phi2, phi3, phi4, phi5};
    Geometry geo = geometry_from_gap_phases({0.0, 0.0, 0.0}, points, gaps);

    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(3, 3);
    targets(0, 1) = targets(1, 0) = std::sqrt(gammas[0] * gammas[1]) * std::sin(phi2 + phi3);
    targets(0, 2) = targets(2, 0) = std::sqrt(gammas[0] * gammas[2]) * std::sin(phi3);
    targets(1, 2) = targets(2, 1) = std::sqrt(gammas[1] * gammas[2]) * std::sin(phi3 + phi4);
    return verify_solution(std::move(geo), std::move(gaps), targets);
}

}  // namespace

DesignSolution design_all_to_all_3(const std::array<double, 3>& gammas, SignPattern pattern) {
    for (double g : gammas)
        if (!(g > 0.0)) throw ConfigError("design_all_to_all_3: rates must be positive");
    if (gammas[0] != gammas[1] || gammas[1] != gammas[2])
        throw ConfigError("design_all_to_all_3: equal rates required for this pattern");
    if (pattern == SignPattern::AllEqual)
        return build_all3(gammas, pi / 3.0, pi / 3.0, pi / 3.0);
    return build_all3(gammas, 4.0 * pi / 3.0, pi / 3.0, 4.0 * pi / 3.0);
}

DesignSolution design_all_to_all_3_free(const std::array<double, 3>& gammas, double phi3,
                                        double phi4) {
    for (double g : gammas)
        if (!(g > 0.0)) throw ConfigError("design_all_to_all_3_free: rates must be positive");
    if (!(phi3 > 0.0) || !(phi4 > 0.0))
        throw ConfigError("design_all_to_all_3_free: free phases must be positive");
    const double phi2 = odd_pi_complement(phi3 + phi4);
    return build_all3(gammas, phi2, phi3, phi4);
}

namespace {

// Residuals and Jacobian of g_{jk}(x) = sqrt(gamma_j gamma_k)
// sin(|x_k - x_j|) versus the targets, where x_j is the position of atom j's
// first connection point (x_0 = 0). The absolute value reflects the physical
// coupling, which depends on the positive propagation distance.
struct AllToAllLsq {
    const std::vector<double>& gammas;
    const Eigen::MatrixXd& targets;

    int n() const { return static_cast<int>(gammas.size()); }
    int n_residuals() const { return n() * (n() - 1) / 2; }

    Eigen::VectorXd residuals(const Eigen::VectorXd& x) const {
        Eigen::VectorXd r(n_residuals());
        int idx = 0;
        for (int j = 0; j < n(); ++j)
            for (int k = j + 1; k < n(); ++k) {
                const double xj = j == 0 ? 0.0 : x(j - 1);
                const double xk = x(k - 1);
                r(idx++) = std::sqrt(gammas[static_cast<size_t>(j)] *
                                     gammas[static_cast<size_t>(k)]) *
                               std::sin(std::abs(xk - xj)) -
                           targets(j, k);
            }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_residuals(), n() - 1);
        int idx = 0;
        for (int j = 0; j < n(); ++j)
            for (int k = j + 1; k < n(); ++k) {
                const double xj = j == 0 ? 0.0 : x(j - 1);
                const double xk = x(k - 1);
                const double sign = xk >= xj ? 1.0 : -1.0;
                const double c = sign *
                                 std::sqrt(gammas[static_cast<size_t>(j)] *
                                           gammas[static_cast<size_t>(k)]) *
                                 std::cos(std::abs(xk - xj));
                J(idx, k - 1) += c;
                if (j > 0) J(idx, j - 1) -= c;
                ++idx;
            }
        return J;
    }
};

Eigen::VectorXd levenberg_marquardt(const AllToAllLsq& problem, Eigen::VectorXd x) {
    double lambda = 1e-3;
    Eigen::VectorXd r = problem.residuals(x);
    for (int iter = 0; iter < 500; ++iter) {
        const Eigen::MatrixXd J = problem.jacobian(x);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        if (g.cwiseAbs().maxCoeff() < 1e-15) break;
        const Eigen::MatrixXd damped =
            JtJ + lambda * Eigen::MatrixXd::Identity(JtJ.rows(), JtJ.cols());
        const Eigen::VectorXd step = damped.ldlt().solve(g);
        const Eigen::VectorXd x_new = x - step;
        const Eigen::VectorXd r_new = problem.residuals(x_new);
        if (r_new.squaredNorm() < r.squaredNorm()) {
            x = x_new;
            r = r_new;
            lambda = std::max(lambda * 0.3, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    return x;
}

}  // namespace

DesignSolution design_all_to_all(std::span<const double> gammas,
                                 const Eigen::MatrixXd& targets) {
    const int n = static_cast<int>(gammas.size());
    if (n < 2) throw ConfigError("design_all_to_all: need at least two atoms");
    if (targets.rows() != n || targets.cols() != n)
        throw ConfigError("design_all_to_all: target matrix has wrong shape");
    std::vector<double> gv(gammas.begin(), gammas.end());
    for (double g : gv)
        if (!(g > 0.0)) throw ConfigError("design_all_to_all: rates must be positive");
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (targets(j, k) != targets(k, j))
                throw ConfigError("design_all_to_all: target matrix must be symmetric");

    const AllToAllLsq problem{gv, targets};

    // Structured starts: each first-row target fixes sin of the distance to
    // atom 0, leaving the branch (d or pi - d) and the side of atom 0 open.
    // Enumerate those combinations, then add fixed-seed random restarts.
    std::vector<Eigen::VectorXd> starts;
    std::vector<std::array<double, 8>> candidates;
    for (int k = 1; k < n; ++k) {
        const double bound = std::sqrt(gv[0] * gv[static_cast<size_t>(k)]);
        const double s = std::clamp(targets(0, k) / bound, -1.0, 1.0);
        const double d = std::asin(s);
        candidates.push_back({d, pi - d, pi + d, 2.0 * pi + d,
                              -d, -(pi - d), -(pi + d), -(2.0 * pi + d)});
    }
    const long combos = static_cast<long>(std::pow(8.0, n - 1));
    if (combos <= 4096) {
        for (long code = 0; code < combos; ++code) {
            Eigen::VectorXd x(n - 1);
            long rest = code;
            for (int i = 0; i < n - 1; ++i) {
                x(i) = candidates[static_cast<size_t>(i)][static_cast<size_t>(rest % 8)];
                rest /= 8;
            }
            starts.push_back(x);
        }
    }
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> uni(-2.0 * pi, 2.0 * pi);
    for (int trial = 0; trial < 64; ++trial) {
        Eigen::VectorXd x(n - 1);
        for (int i = 0; i < n - 1; ++i) x(i) = uni(rng);
        starts.push_back(x);
    }

    Eigen::VectorXd best;
    double best_norm = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        const Eigen::VectorXd x = levenberg_marquardt(problem, s);
        const double norm = problem.residuals(x).cwiseAbs().maxCoeff();
        if (norm < best_norm) {
            best_norm = norm;
            best = x;
        }
    }

    // Spatial first-block positions (no folding: the coupling depends on the
    // positive distance, which the model already respects). The second block
    // repeats the first an odd multiple of pi later, wide enough that every
    // pair interleaves.
    std::vector<double> psi(static_cast<size_t>(n), 0.0);
    double lo = 0.0;
    for (int k = 1; k < n; ++k) {
        psi[static_cast<size_t>(k)] = best(k - 1);
        lo = std::min(lo, best(k - 1));
    }
    for (double& v : psi) v -= lo;
    const double span = *std::max_element(psi.begin(), psi.end());
    double separation = pi;
    while (separation <= span) separation += 2.0 * pi;

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&psi](int a, int b) { return psi[static_cast<size_t>(a)] < psi[static_cast<size_t>(b)]; });

    std::vector<GapPointSpec> points;
    std::vector<double> thetas;
    for (int i = 0; i < n; ++i) {
        const int atom = order[static_cast<size_t>(i)];
        points.push_back({atom, gv[static_cast<size_t>(atom)]});
        thetas.push_back(psi[static_cast<size_t>(atom)]);
    }
    for (int i = 0; i < n; ++i) {
        const int atom = order[static_cast<size_t>(i)];
        points.push_back({atom, gv[static_cast<size_t>(atom)]});
        thetas.push_back(psi[static_cast<size_t>(atom)] + separation);
    }
    std::vector<double> gaps;
    for (size_t i = 0; i + 1 < thetas.size(); ++i) gaps.push_back(thetas[i + 1] - thetas[i]);
    Geometry geo = geometry_from_gap_phases(std::vector<double>(static_cast<size_t>(n), 0.0),
                                            points, gaps);
    return verify_solution(std::move(geo), std::move(gaps), targets);
}

int DecoherenceFreeReport::protected_pair_count() const {
    int count = 0;
    for (const auto& p : pairs)
        if (p.protected_pair) ++count;
    return count;
}

DecoherenceFreeReport verify_decoherence_free(const Geometry& geo) {
    const CoefficientSet c = coefficient_set(geo);
    DecoherenceFreeReport rep;
    rep.gamma_ind = c.gamma_ind;
    for (int j = 0; j < c.n_atoms(); ++j)
        for (int k = j + 1; k < c.n_atoms(); ++k) {
            PairReport pr;
            pr.atom_j = j;
            pr.atom_k = k;
            pr.topology = classify_pair(geo, j, k).topology;
            pr.g = c.g(j, k);
            pr.gamma_coll = c.gamma_coll(j, k);
            pr.protected_pair = std::abs(pr.g) > design_tolerance &&
                                c.gamma_ind(j) < design_tolerance &&
                                c.gamma_ind(k) < design_tolerance &&
                                std::abs(pr.gamma_coll) < design_tolerance;
            if (pr.protected_pair && pr.topology != PairTopology::Braided)
                throw NumericError(
                    "verify_decoherence_free: protected pair is not braided");
            rep.pairs.push_back(pr);
        }
    return rep;
}

}  // namespace gqed
