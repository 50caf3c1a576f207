#include "gqed/commands.hpp"

#include "gqed/cascade.hpp"
#include "gqed/coefficients.hpp"
#include "gqed/errors.hpp"
#include "gqed/format.hpp"
#include "gqed/simulator.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace gqed {

int thread_count() {
    if (const char* env = std::getenv("GQED_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Static block partition; results are indexed, so output order never
// depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn) {
    const int threads = std::min(thread_count(), std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < n; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string label_of(const RunConfig& cfg, int atom) {
    return cfg.atom_labels[static_cast<size_t>(atom)];
}

}  // namespace

void cmd_coeffs(const RunConfig& cfg, std::ostream& table, std::ostream* csv) {
    require_valid(cfg.geometry);
    const CoefficientSet c = coefficient_set(cfg.geometry);
    const int n = c.n_atoms();

    table << "atom  omega  delta_omega  omega_prime  Gamma\n";
    for (int j = 0; j < n; ++j)
        table << label_of(cfg, j) << "  " << format_table(cfg.geometry.omega[static_cast<size_t>(j)])
              << "  " << format_table(c.delta_omega(j)) << "  "
              << format_table(c.omega_prime(j)) << "  " << format_table(c.gamma_ind(j))
              << "\n";
    table << "\nexchange couplings g:\n";
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            table << label_of(cfg, j) << "," << label_of(cfg, k) << "  "
                  << format_table(c.g(j, k)) << "\n";
    table << "\ncollective decays Gamma_coll:\n";
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            table << label_of(cfg, j) << "," << label_of(cfg, k) << "  "
                  << format_table(c.gamma_coll(j, k)) << "\n";

    if (csv) {
        *csv << "quantity,atom_i,atom_j,value\n";
        for (int j = 0; j < n; ++j)
            *csv << "delta_omega," << label_of(cfg, j) << ",," << format_double(c.delta_omega(j))
                 << "\n";
        for (int j = 0; j < n; ++j)
            *csv << "omega_prime," << label_of(cfg, j) << ",," << format_double(c.omega_prime(j))
                 << "\n";
        for (int j = 0; j < n; ++j)
            *csv << "Gamma," << label_of(cfg, j) << ",," << format_double(c.gamma_ind(j)) << "\n";
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                *csv << "g," << label_of(cfg, j) << "," << label_of(cfg, k) << ","
                     << format_double(c.g(j, k)) << "\n";
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                *csv << "Gamma_coll," << label_of(cfg, j) << "," << label_of(cfg, k) << ","
                     << format_double(c.gamma_coll(j, k)) << "\n";
    }
}

namespace {

// The scanned common gap phase of the Table-I convention: same point order
// and rates, every gap (and half the mirror round trip) set to phi.
Geometry geometry_at_common_phase(const Geometry& base, double phi) {
    std::vector<GapPointSpec> points;
    for (const auto& pt : base.points) points.push_back({pt.atom, pt.gamma});
    std::vector<double> gaps(points.empty() ? 0 : points.size() - 1, phi);
    std::optional<double> mirror_gap;
    if (base.mirror_theta) mirror_gap = 0.5 * phi;
    return geometry_from_gap_phases(base.omega, points, gaps, mirror_gap);
}

}  // namespace

void cmd_scan(const RunConfig& cfg, std::ostream& csv) {
    if (!cfg.scan) throw ConfigError("scan: missing [scan] section");
    require_valid(cfg.geometry);
    if (cfg.geometry.n_atoms() != 2)
        throw ConfigError("scan: requires a two-atom geometry");
    const ScanSpec& s = *cfg.scan;
    if (!(s.step > 0.0)) throw ConfigError("scan: step must be positive");
    if (s.stop < s.start) throw ConfigError("scan: stop must be >= start");

    const int n_rows = static_cast<int>(std::floor((s.stop - s.start) / s.step + 1e-9)) + 1;
    std::vector<std::array<double, 7>> rows(static_cast<size_t>(n_rows));
    parallel_for(n_rows, [&](int i) {
        const double phi = s.start + static_cast<double>(i) * s.step;
        const CoefficientSet c = coefficient_set(geometry_at_common_phase(cfg.geometry, phi));
        rows[static_cast<size_t>(i)] = {phi,           c.g(0, 1),         c.gamma_ind(0),
                                        c.gamma_ind(1), c.gamma_coll(0, 1), c.delta_omega(0),
                                        c.delta_omega(1)};
    });

    csv << "phi,g,Gamma_a,Gamma_b,Gamma_coll,delta_omega_a,delta_omega_b\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            csv << (i ? "," : "") << format_double(row[i]);
        csv << "\n";
    }
}

namespace {

Matrix observable_matrix(const RunConfig& cfg, const std::string& name) {
    const int n = cfg.geometry.n_atoms();
    if (name.rfind("P_", 0) == 0) {
        const std::string levels = name.substr(2);
        if (static_cast<int>(levels.size()) != n)
            throw ConfigError("observable '" + name + "': need one level per atom");
        return density_from_ket(basis_ket(levels));
    }
    if (name.rfind("pe_", 0) == 0) {
        const int j = cfg.atom_index(name.substr(3));
        const Eigen::Index dim = Eigen::Index(1) << n;
        return 0.5 * (Matrix::Identity(dim, dim) + sigma_z(j, n));
    }
    if (name.rfind("sz_", 0) == 0) return sigma_z(cfg.atom_index(name.substr(3)), n);
    throw ConfigError("unknown observable '" + name + "'");
}

}  // namespace

void cmd_simulate(const RunConfig& cfg, std::ostream& csv) {
    if (!cfg.simulation) throw ConfigError("simulate: missing [simulation] section");
    require_valid(cfg.geometry);
    const SimulationSpec& s = *cfg.simulation;
    if (static_cast<int>(s.rho0.size()) != cfg.geometry.n_atoms())
        throw ConfigError("simulate: rho0 needs one level per atom");

    const MasterEquationGenerator gen =
        cfg.drive ? driven_master_equation(cfg.geometry, *cfg.drive)
                  : derive_master_equation(cfg.geometry);

    bool want_purity = false;
    std::vector<Observable> observables;
    for (const auto& name : s.observables) {
        if (name == "purity") {
            want_purity = true;
            continue;
        }
        observables.push_back({name, observable_matrix(cfg, name)});
    }

    EvolveOptions opts;
    opts.t_final = s.t_final;
    opts.dt = s.dt;
    if (opts.dt <= 0.0) {
        // Default step 1e-3 / (max rate), capped by the stability guard.
        const double rate = std::max(cfg.geometry.max_gamma(), 1e-12);
        opts.dt = std::min(1e-3 / rate,
                           0.5 * rk4_stability_threshold /
                               std::max(generator_norm_scale(gen), 1e-12));
    }
    opts.sample_stride = s.sample_stride;
    opts.store_states = want_purity;
    const Trajectory traj =
        evolve(density_from_ket(basis_ket(s.rho0)), gen, opts, observables);

    csv << "t";
    for (const auto& name : s.observables) csv << "," << name;
    csv << "\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        csv << format_double(traj.times[i]);
        for (const auto& name : s.observables) {
            const double v = name == "purity" ? purity(traj.states[i])
                                              : traj.values(name)[i];
            csv << "," << format_double(v);
        }
        csv << "\n";
    }
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& csv) {
    if (!cfg.spectrum) throw ConfigError("spectrum: missing [spectrum] section");
    if (!cfg.drive) throw ConfigError("spectrum: missing [drive] section");
    require_valid(cfg.geometry);
    if (cfg.geometry.mirror_theta)
        throw ConfigError("spectrum: open waveguide required");
    const SpectrumSpec& s = *cfg.spectrum;
    if (s.points < 1) throw ConfigError("spectrum: need at least one point");
    const double omega_ref = s.omega_ref ? *s.omega_ref : cfg.geometry.omega[0];

    std::vector<std::array<double, 5>> rows(static_cast<size_t>(s.points));
    parallel_for(s.points, [&](int i) {
        const double delta =
            s.points == 1 ? s.delta_start
                          : s.delta_start + (s.delta_stop - s.delta_start) *
                                                static_cast<double>(i) /
                                                static_cast<double>(s.points - 1);
        DriveSpec drive = *cfg.drive;
        drive.omega_d = omega_ref + delta;
        const ScatteringResult res = transmission_reflection(cfg.geometry, drive);
        rows[static_cast<size_t>(i)] = {delta, std::norm(res.t), std::norm(res.r),
                                        std::arg(res.t), std::arg(res.r)};
    });

    csv << "Delta,T,R,arg_t,arg_r\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            csv << (i ? "," : "") << format_double(row[i]);
        csv << "\n";
    }
}

void cmd_classify(const RunConfig& cfg, std::ostream& out) {
    require_valid(cfg.geometry);
    const DecoherenceFreeReport rep = verify_decoherence_free(cfg.geometry);
    out << "atom  Gamma\n";
    for (int j = 0; j < cfg.geometry.n_atoms(); ++j)
        out << label_of(cfg, j) << "  " << format_table(rep.gamma_ind(j)) << "\n";
    out << "\npair  topology  g  Gamma_coll  protected\n";
    for (const auto& p : rep.pairs)
        out << label_of(cfg, p.atom_j) << "," << label_of(cfg, p.atom_k) << "  "
            << to_string(p.topology) << "  " << format_table(p.g) << "  "
            << format_table(p.gamma_coll) << "  " << (p.protected_pair ? "yes" : "no")
            << "\n";
    out << "\nprotected pairs: " << rep.protected_pair_count() << "\n";
}

namespace {

void report_design(const DesignSolution& sol, const std::optional<std::string>& out_path,
                   std::ostream& report) {
    const auto labels = default_labels(sol.geometry.n_atoms());
    if (out_path) {
        std::ofstream file(*out_path);
        if (!file) throw ConfigError("cannot write '" + *out_path + "'");
        write_geometry_config(file, labels, sol.geometry, sol.gap_phases);
    } else {
        write_geometry_config(report, labels, sol.geometry, sol.gap_phases);
        report << "\n";
    }

    const DecoherenceFreeReport rep = verify_decoherence_free(sol.geometry);
    report << (sol.feasible ? "feasible" : "INFEASIBLE") << "\n";
    report << "protected pairs: " << rep.protected_pair_count() << "\n";
    report << "max individual decay: " << format_table(sol.max_individual_decay) << "\n";
    report << "max collective decay: " << format_table(sol.max_collective_decay) << "\n";
    report << "max coupling error: " << format_table(sol.max_coupling_error) << "\n";
    report << "achieved couplings:\n";
    for (int j = 0; j < sol.achieved_g.rows(); ++j)
        for (int k = j + 1; k < sol.achieved_g.cols(); ++k)
            report << "  " << labels[static_cast<size_t>(j)] << ","
                   << labels[static_cast<size_t>(k)] << " = "
                   << format_table(sol.achieved_g(j, k)) << "\n";
    if (out_path) report << "geometry written to " << *out_path << "\n";
}

}  // namespace

void cmd_design_chain(std::span<const double> gammas, std::span<const double> targets,
                      const std::optional<std::string>& out_path, std::ostream& report) {
    report_design(design_chain(gammas, targets), out_path, report);
}

void cmd_design_all3(double gamma, SignPattern pattern,
                     const std::optional<std::string>& out_path, std::ostream& report) {
    report_design(design_all_to_all_3({gamma, gamma, gamma}, pattern), out_path, report);
}

}  // namespace gqed
