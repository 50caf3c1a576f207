#include "gqed/geometry.hpp"

#include "gqed/errors.hpp"
#include "gqed/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gqed {

std::vector<int> Geometry::atom_points(int atom) const {
    std::vector<int> out;
    for (int p = 0; p < n_points(); ++p)
        if (points[static_cast<size_t>(p)].atom == atom) out.push_back(p);
    return out;
}

double Geometry::max_gamma() const {
    double g = 0.0;
    for (const auto& p : points) g = std::max(g, p.gamma);
    return g;
}

Geometry geometry_from_coordinates(std::vector<double> omegas,
                                   std::vector<CoordinateSpec> points,
                                   double wavenumber,
                                   std::optional<double> mirror_x,
                                   std::optional<double> velocity) {
    if (!(wavenumber > 0.0))
        throw ConfigError("geometry: wavenumber must be positive");
    Geometry g;
    g.omega = std::move(omegas);
    g.wavenumber = wavenumber;
    g.velocity = velocity;
    for (const auto& p : points)
        g.points.push_back({p.atom, wavenumber * p.x, p.gamma});
    std::stable_sort(g.points.begin(), g.points.end(),
                     [](const ConnectionPoint& a, const ConnectionPoint& b) {
                         return a.theta < b.theta;
                     });
    if (mirror_x) g.mirror_theta = wavenumber * *mirror_x;
    return g;
}

Geometry geometry_from_gap_phases(std::vector<double> omegas,
                                  std::vector<GapPointSpec> points,
                                  std::vector<double> gaps,
                                  std::optional<double> mirror_gap) {
    if (!points.empty() && gaps.size() + 1 != points.size())
        throw ConfigError("geometry: need exactly (number of points - 1) gap phases, got " +
                          std::to_string(gaps.size()));
    for (double gap : gaps) {
        if (!std::isfinite(gap)) throw ConfigError("geometry: gap phases must be finite");
        if (gap < 0.0) throw ConfigError("geometry: gap phases must be nonnegative");
    }
    Geometry g;
    g.omega = std::move(omegas);
    double theta = 0.0;
    if (mirror_gap) {
        if (!std::isfinite(*mirror_gap) || *mirror_gap < 0.0)
            throw ConfigError("geometry: mirror gap phase must be nonnegative");
        g.mirror_theta = 0.0;
        theta = *mirror_gap;
    }
    for (size_t i = 0; i < points.size(); ++i) {
        if (i > 0) theta += gaps[i - 1];
        g.points.push_back({points[i].atom, theta, points[i].gamma});
    }
    return g;
}

std::string to_string(PairTopology t) {
    switch (t) {
        case PairTopology::Separate: return "separate";
        case PairTopology::Braided: return "braided";
        case PairTopology::Nested: return "nested";
    }
    return "?";
}

double phase_between(const Geometry& g, int p, int q) {
    return std::abs(g.points[static_cast<size_t>(q)].theta -
                    g.points[static_cast<size_t>(p)].theta);
}

Eigen::MatrixXd phase_table(const Geometry& g) {
    const int n = g.n_points();
    Eigen::MatrixXd t(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) t(p, q) = phase_between(g, p, q);
    return t;
}

namespace {

// True when every k-position falls strictly inside one gap between
// consecutive j-positions (positions are ranks in the sorted point order).
bool is_nested_inside(const std::vector<int>& outer_pos, const std::vector<int>& inner_pos) {
    if (outer_pos.size() < 2) return false;
    for (size_t gap = 0; gap + 1 < outer_pos.size(); ++gap) {
        const int lo = outer_pos[gap];
        const int hi = outer_pos[gap + 1];
        bool all_in = true;
        for (int p : inner_pos)
            if (p < lo || p > hi) {
                all_in = false;
                break;
            }
        if (all_in) return true;
    }
    return false;
}

}  // namespace

PairClass classify_pair(const Geometry& g, int atom_j, int atom_k) {
    if (atom_j == atom_k) throw std::invalid_argument("classify_pair: need two distinct atoms");
    const auto pj = g.atom_points(atom_j);
    const auto pk = g.atom_points(atom_k);
    if (pj.empty() || pk.empty())
        throw std::invalid_argument("classify_pair: atom has no connection points");

    if (pj.back() < pk.front() || pk.back() < pj.front())
        return {PairTopology::Separate};
    if (is_nested_inside(pj, pk)) return {PairTopology::Nested, atom_j, atom_k};
    if (is_nested_inside(pk, pj)) return {PairTopology::Nested, atom_k, atom_j};
    return {PairTopology::Braided};
}

std::vector<std::string> ValidationReport::errors() const {
    std::vector<std::string> out;
    for (const auto& i : issues)
        if (i.is_error) out.push_back(i.message);
    return out;
}

std::vector<std::string> ValidationReport::warnings() const {
    std::vector<std::string> out;
    for (const auto& i : issues)
        if (!i.is_error) out.push_back(i.message);
    return out;
}

ValidationReport validate_geometry(const Geometry& g) {
    ValidationReport rep;
    auto error = [&rep](std::string msg) { rep.issues.push_back({true, std::move(msg)}); };
    auto warn = [&rep](std::string msg) { rep.issues.push_back({false, std::move(msg)}); };

    if (g.omega.empty()) {
        error("no atoms");
        return rep;
    }
    if (g.n_atoms() > max_atoms)
        error("more than " + std::to_string(max_atoms) + " atoms (dimension cap)");
    for (double w : g.omega)
        if (!std::isfinite(w)) error("non-finite atom frequency");
    if (g.points.empty()) error("no connection points");

    for (int p = 0; p < g.n_points(); ++p) {
        const auto& pt = g.points[static_cast<size_t>(p)];
        if (pt.atom < 0 || pt.atom >= g.n_atoms())
            error("connection point " + std::to_string(p) + " references unknown atom");
        if (pt.gamma < 0.0)
            error("connection point " + std::to_string(p) + " has negative gamma");
        if (!std::isfinite(pt.gamma) || !std::isfinite(pt.theta))
            error("connection point " + std::to_string(p) + " has non-finite value");
    }

    for (int j = 0; j < g.n_atoms(); ++j)
        if (g.atom_points(j).empty())
            error("atom " + std::to_string(j) + " has no connection points");

    for (int p = 0; p + 1 < g.n_points(); ++p) {
        const double a = g.points[static_cast<size_t>(p)].theta;
        const double b = g.points[static_cast<size_t>(p + 1)].theta;
        if (b < a) error("connection points are not sorted by position");
        if (a == b) {
            // A zero gap phase is a degenerate but well-defined limit; true
            // coincident coordinates are rejected.
            if (g.wavenumber)
                error("coincident connection points");
            else
                warn("zero gap phase between points " + std::to_string(p) + " and " +
                     std::to_string(p + 1));
        }
    }

    if (g.mirror_theta) {
        if (!g.points.empty() && *g.mirror_theta > g.points.front().theta)
            error("mirror must lie left of all connection points");
        else if (!g.points.empty() && *g.mirror_theta == g.points.front().theta) {
            if (g.wavenumber)
                error("connection point coincides with the mirror");
            else
                warn("zero mirror gap phase");
        }
        bool two_small = g.n_atoms() == 2;
        for (int j = 0; two_small && j < g.n_atoms(); ++j)
            if (g.atom_points(j).size() != 1) two_small = false;
        if (!two_small)
            error("mirror geometries support exactly two atoms with one connection point each");
    }

    // Validity of the single-wavenumber description: large detunings make the
    // rotating-wave exchange terms unphysical.
    double rate_scale = 0.0;
    for (int j = 0; j < g.n_atoms(); ++j) {
        double amp = 0.0;
        for (int p : g.atom_points(j)) amp += std::sqrt(std::max(0.0, g.points[static_cast<size_t>(p)].gamma));
        rate_scale = std::max(rate_scale, amp * amp);
    }
    double max_detuning = 0.0;
    for (size_t j = 0; j < g.omega.size(); ++j)
        for (size_t k = j + 1; k < g.omega.size(); ++k)
            max_detuning = std::max(max_detuning, std::abs(g.omega[j] - g.omega[k]));
    if (rate_scale > 0.0 && max_detuning > 10.0 * rate_scale) {
        std::ostringstream os;
        os << "max detuning " << max_detuning << " exceeds 10x the decay scale "
           << rate_scale << "; waveguide-mediated terms may be invalid";
        warn(os.str());
    }

    return rep;
}

void require_valid(const Geometry& g) {
    const ValidationReport rep = validate_geometry(g);
    if (rep.ok()) return;
    std::string msg = "invalid geometry:";
    for (const auto& e : rep.errors()) msg += "\n  " + e;
    throw ConfigError(msg);
}

std::vector<double> gap_phases(const Geometry& g) {
    std::vector<double> gaps;
    for (int p = 0; p + 1 < g.n_points(); ++p)
        gaps.push_back(g.points[static_cast<size_t>(p + 1)].theta -
                       g.points[static_cast<size_t>(p)].theta);
    return gaps;
}

Geometry unfold_mirror(const Geometry& g) {
    if (!g.mirror_theta) throw std::invalid_argument("unfold_mirror: no mirror present");
    Geometry open;
    open.omega = g.omega;
    const double m = *g.mirror_theta;
    for (const auto& p : g.points) {
        open.points.push_back({p.atom, 2.0 * m - p.theta, 0.5 * p.gamma});
        open.points.push_back({p.atom, p.theta, 0.5 * p.gamma});
    }
    std::stable_sort(open.points.begin(), open.points.end(),
                     [](const ConnectionPoint& a, const ConnectionPoint& b) {
                         return a.theta < b.theta;
                     });
    return open;
}

}  // namespace gqed
