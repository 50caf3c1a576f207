#pragma once

#include "gqed/coefficients.hpp"
#include "gqed/geometry.hpp"
#include "gqed/slh.hpp"

// Builds the full SLH network for a geometry and extracts master equations
// and input-output scattering. Right- and left-moving modes are cascaded
// separately and concatenated (open waveguide) or cascaded through the
// mirror (semi-infinite waveguide). Each connection point couples with
// sqrt(gamma/2) to each direction; the bare atomic Hamiltonians ride with
// the right-moving chain.

namespace gqed {

// Open waveguide: 2-port triplet, port 0 = right-movers, port 1 = left-movers.
SlhTriplet build_waveguide_slh(const Geometry& geo);

// Semi-infinite waveguide (two small atoms + mirror): 1-port triplet.
SlhTriplet build_semi_infinite_slh(const Geometry& geo);

MasterEquationGenerator derive_master_equation(const Geometry& geo);

// Read the master-equation coefficients back out of a cascaded triplet by
// projecting H onto sigma_z and flip-flop terms and L onto sigma_-;
// bare_omegas are subtracted from the extracted omega' to recover the Lamb
// shifts. Throws if the triplet contains terms outside that span (e.g.
// drive terms).
CoefficientSet slh_coefficients(const SlhTriplet& g, std::span<const double> bare_omegas);

struct ScatteringResult {
    complex t;       // amplitude transmission
    complex r;       // amplitude reflection
    double omega_d;  // probe frequency
};

// Steady-state transmission and reflection of a coherent probe entering the
// left port of an open waveguide. Falls back to long-time integration from
// the ground state when the Liouvillian null space is degenerate.
ScatteringResult transmission_reflection(const Geometry& geo, const DriveSpec& drive);

// The driven rotating-frame generator used by transmission_reflection.
MasterEquationGenerator driven_master_equation(const Geometry& geo, const DriveSpec& drive);

}  // namespace gqed
