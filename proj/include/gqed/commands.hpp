#pragma once

#include "gqed/config.hpp"
#include "gqed/designer.hpp"

#include <iosfwd>
#include <optional>
#include <string>

// The CLI command bodies, writing to streams so they can be exercised
// in-process. Scan and spectrum points are evaluated concurrently (thread
// count from GQED_THREADS) with rows emitted in parameter order.

namespace gqed {

// Coefficient table (15 significant digits) plus optional CSV.
void cmd_coeffs(const RunConfig& cfg, std::ostream& table, std::ostream* csv);

// CSV phi,g,Gamma_a,Gamma_b,Gamma_coll,delta_omega_a,delta_omega_b for the
// two-atom setup with every gap phase set to the scanned value.
void cmd_scan(const RunConfig& cfg, std::ostream& csv);

// CSV t,<observables...> trajectory of the configured simulation.
void cmd_simulate(const RunConfig& cfg, std::ostream& csv);

// CSV Delta,T,R,arg_t,arg_r over the configured probe detunings.
void cmd_spectrum(const RunConfig& cfg, std::ostream& csv);

// Per-atom decay, pairwise topology/coupling table, protected pairs.
void cmd_classify(const RunConfig& cfg, std::ostream& out);

// Writes the designed geometry as a config and prints the verification
// report. Throws ConfigError when the requested couplings are unachievable.
void cmd_design_chain(std::span<const double> gammas, std::span<const double> targets,
                      const std::optional<std::string>& out_path, std::ostream& report);
void cmd_design_all3(double gamma, SignPattern pattern,
                     const std::optional<std::string>& out_path, std::ostream& report);

int thread_count();  // GQED_THREADS or hardware concurrency

}  // namespace gqed
