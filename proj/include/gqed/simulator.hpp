#pragma once

#include "gqed/operator_algebra.hpp"

#include <string>
#include <vector>

// Fixed-step RK4 time evolution of density matrices, vectorized-Liouvillian
// steady states, and observable extraction.

namespace gqed {

struct Observable {
    std::string name;
    Matrix op;
};

struct EvolveOptions {
    double t_final = 0.0;
    double dt = 0.0;
    int sample_stride = 1;     // record every n-th step
    bool store_states = true;  // keep sampled density matrices
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;  // sampled states; empty unless store_states
    Matrix final_state;          // always populated
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observable_values;  // [obs][sample]

    const std::vector<double>& values(const std::string& name) const;
};

// dt * max(||H||_F, sum_j ||L_j^dag L_j||_F) must stay below this.
inline constexpr double rk4_stability_threshold = 0.1;

double generator_norm_scale(const MasterEquationGenerator& gen);

Trajectory evolve(const Matrix& rho0, const MasterEquationGenerator& gen,
                  const EvolveOptions& opts,
                  const std::vector<Observable>& observables = {});

// Liouvillian as a dim^2 x dim^2 matrix acting on column-major vec(rho).
Eigen::MatrixXcd liouvillian_matrix(const MasterEquationGenerator& gen);

// Unique trace-one steady state; throws DegenerateSteadyState when the
// numerical null space is not one-dimensional.
Matrix steady_state(const MasterEquationGenerator& gen);

}  // namespace gqed
