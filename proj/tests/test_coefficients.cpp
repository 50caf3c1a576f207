#include "gqed/coefficients.hpp"

#include "gqed/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace gqed;
using namespace gqed::testing;

namespace {

// Place atom b's block after atom a (separate) or strictly inside a's first
// gap (nested). u in (0, 1) randomizes the placement. Darkness survives
// widening a gap by multiples of 2 pi, which shifts all later points by the
// same amount and leaves every e^{i theta} untouched.
Geometry zero_decay_pair(ZeroDecayAtom a, const ZeroDecayAtom& b, PairTopology topology,
                         double u) {
    std::vector<ConnectionPoint> pts;
    auto add = [&pts](int atom, double theta, double gamma) {
        pts.push_back({atom, theta, gamma});
    };
    if (topology == PairTopology::Separate) {
        const double offset = a.thetas.back() + 0.1 + 6.0 * u;
        for (size_t i = 0; i < a.thetas.size(); ++i) add(0, a.thetas[i], a.gammas[i]);
        for (size_t i = 0; i < b.thetas.size(); ++i) add(1, offset + b.thetas[i], b.gammas[i]);
    } else {
        const double span_b = b.thetas.back();
        double gap = a.thetas[1] - a.thetas[0];
        while (gap < span_b + 0.2) {
            gap += 2.0 * pi;
            for (size_t i = 1; i < a.thetas.size(); ++i) a.thetas[i] += 2.0 * pi;
        }
        const double start = a.thetas[0] + 0.05 + u * (gap - span_b - 0.1);
        for (size_t i = 0; i < a.thetas.size(); ++i) add(0, a.thetas[i], a.gammas[i]);
        for (size_t i = 0; i < b.thetas.size(); ++i) add(1, start + b.thetas[i], b.gammas[i]);
    }
    Geometry g;
    g.omega = {0.0, 0.0};
    g.points = std::move(pts);
    std::stable_sort(g.points.begin(), g.points.end(),
                     [](const ConnectionPoint& x, const ConnectionPoint& y) {
                         return x.theta < y.theta;
                     });
    return g;
}

}  // namespace

TEST_CASE("lamb shift examples") {
    CHECK(lamb_shift(table_setup_geometry(TableSetup::SmallAtoms, 0.8, 1.0), 0) == 0.0);
    const double phi = 0.8, gamma = 1.3;
    CHECK(lamb_shift(table_setup_geometry(TableSetup::Braided, phi, gamma), 0) ==
          doctest::Approx(gamma * std::sin(2 * phi)).epsilon(1e-13));
    CHECK(lamb_shift(table_setup_geometry(TableSetup::Separate, phi, gamma), 0) ==
          doctest::Approx(gamma * std::sin(phi)).epsilon(1e-13));
}

TEST_CASE("exchange coupling examples") {
    const double phi = 0.8, g1 = 0.9, g2 = 0.4;
    const Geometry two_small =
        geometry_from_gap_phases({0.0, 0.0}, {{0, g1}, {1, g2}}, {phi});
    CHECK(exchange_coupling(two_small, 0, 1) ==
          doctest::Approx(0.5 * std::sqrt(g1 * g2) * std::sin(phi)).epsilon(1e-13));
    CHECK_THROWS(exchange_coupling(two_small, 1, 1));

    const double gamma = 1.7;
    CHECK(exchange_coupling(table_setup_geometry(TableSetup::Braided, phi, gamma), 0, 1) ==
          doctest::Approx(0.5 * gamma * (3 * std::sin(phi) + std::sin(3 * phi)))
              .epsilon(1e-13));
    CHECK(exchange_coupling(table_setup_geometry(TableSetup::Braided, pi / 2, gamma), 0, 1) ==
          doctest::Approx(gamma).epsilon(1e-13));
    CHECK(std::abs(exchange_coupling(table_setup_geometry(TableSetup::Nested, pi, gamma), 0,
                                     1)) < 1e-12 * gamma);
}

TEST_CASE("individual decay examples") {
    const Geometry single = geometry_from_gap_phases({0.0}, {{0, 0.8}}, {});
    CHECK(individual_decay(single, 0) == doctest::Approx(0.8).epsilon(1e-15));

    const Geometry dark = geometry_from_gap_phases({0.0}, {{0, 0.8}, {0, 0.8}}, {pi});
    CHECK(individual_decay(dark, 0) < 1e-12 * 0.8);

    // AM-GM: unequal rates keep every two-point atom bright.
    Rng rng(31);
    std::uniform_real_distribution<double> rate(0.01, 1.0);
    std::uniform_real_distribution<double> gap(0.0, 4 * pi);
    for (int trial = 0; trial < 500; ++trial) {
        const double g1 = rate(rng), g2 = rate(rng), phi = gap(rng);
        const Geometry g = geometry_from_gap_phases({0.0}, {{0, g1}, {0, g2}}, {phi});
        const double floor = (std::sqrt(g1) - std::sqrt(g2)) * (std::sqrt(g1) - std::sqrt(g2));
        CHECK(individual_decay(g, 0) >= floor - 1e-12);
        CHECK(individual_decay(g, 0) >= -1e-14);
    }
}

TEST_CASE("modulus-squared and double-sum forms of Gamma_j agree") {
    Rng rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const Geometry g = random_geometry(rng, 3, 4);
        for (int j = 0; j < g.n_atoms(); ++j)
            CHECK(individual_decay(g, j) ==
                  doctest::Approx(individual_decay_double_sum(g, j)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("collective decay examples") {
    const double phi = 1.1, gamma = 0.9;
    CHECK(collective_decay(table_setup_geometry(TableSetup::SmallAtoms, phi, gamma), 0, 1) ==
          doctest::Approx(gamma * std::cos(phi)).epsilon(1e-13));
    CHECK(collective_decay(table_setup_geometry(TableSetup::Braided, phi, gamma), 0, 1) ==
          doctest::Approx(gamma * (3 * std::cos(phi) + std::cos(3 * phi))).epsilon(1e-13));
    CHECK(std::abs(collective_decay(table_setup_geometry(TableSetup::Braided, pi / 2, gamma),
                                    0, 1)) < 1e-12 * gamma);
}

TEST_CASE("table 1 closed forms match the assembled coefficient sets") {
    const double gamma = 1.0;
    const TableSetup setups[] = {TableSetup::SmallAtoms, TableSetup::SmallAtomsMirror,
                                 TableSetup::Separate, TableSetup::Braided,
                                 TableSetup::Nested};
    for (const TableSetup setup : setups) {
        for (int i = 0; i <= 400; ++i) {
            const double phi = static_cast<double>(i) * (pi / 100.0);
            const CoefficientSet closed = table1_coefficients(setup, phi, gamma);
            const CoefficientSet assembled =
                coefficient_set(table_setup_geometry(setup, phi, gamma));
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(closed.delta_omega(j) - assembled.delta_omega(j)) <
                      1e-12 * gamma);
                CHECK(std::abs(closed.gamma_ind(j) - assembled.gamma_ind(j)) < 1e-12 * gamma);
            }
            CHECK(std::abs(closed.g(0, 1) - assembled.g(0, 1)) < 1e-12 * gamma);
            CHECK(std::abs(closed.gamma_coll(0, 1) - assembled.gamma_coll(0, 1)) <
                  1e-12 * gamma);
        }
    }
}

TEST_CASE("table 1 spot values") {
    const double phi = 0.37, gamma = 2.0;
    const CoefficientSet small = table1_coefficients(TableSetup::SmallAtoms, phi, gamma);
    CHECK(small.delta_omega(0) == 0.0);
    CHECK(small.g(0, 1) == doctest::Approx(0.5 * gamma * std::sin(phi)));
    CHECK(small.gamma_ind(0) == gamma);
    CHECK(small.gamma_coll(0, 1) == doctest::Approx(gamma * std::cos(phi)));

    const CoefficientSet nested = table1_coefficients(TableSetup::Nested, pi, gamma);
    CHECK(std::abs(nested.gamma_ind(0)) < 1e-12 * gamma);
    CHECK(std::abs(nested.gamma_ind(1)) < 1e-12 * gamma);
    CHECK(std::abs(nested.gamma_coll(0, 1)) < 1e-12 * gamma);
    CHECK(std::abs(nested.g(0, 1)) < 1e-12 * gamma);

    const CoefficientSet mirror = table1_coefficients(TableSetup::SmallAtomsMirror, phi, gamma);
    CHECK(mirror.delta_omega(0) == doctest::Approx(0.5 * gamma * std::sin(phi)));
    CHECK(mirror.delta_omega(1) == doctest::Approx(0.5 * gamma * std::sin(3 * phi)));
    CHECK(mirror.gamma_ind(0) == doctest::Approx(gamma * (1 + std::cos(phi))));
    CHECK(mirror.gamma_ind(1) == doctest::Approx(gamma * (1 + std::cos(3 * phi))));
}

TEST_CASE("trivial one-atom coefficient set") {
    const Geometry g = geometry_from_gap_phases({0.7}, {{0, 0.9}}, {});
    const CoefficientSet c = coefficient_set(g);
    CHECK(c.gamma_ind(0) == doctest::Approx(0.9));
    CHECK(c.delta_omega(0) == 0.0);
    CHECK(c.omega_prime(0) == doctest::Approx(0.7));
}

TEST_CASE("decay matrix is positive semidefinite for random geometries") {
    Rng rng(33);
    for (int trial = 0; trial < 2000; ++trial) {
        const Geometry g = random_geometry(rng, 4, 4);
        const CoefficientSet c = coefficient_set(g);
        const double max_rate = std::max(1e-300, c.gamma_ind.maxCoeff());
        CHECK(min_decay_eigenvalue(c) >= -1e-10 * max_rate);
    }
}

TEST_CASE("separate and nested dark pairs have no coupling channel") {
    Rng rng(34);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto topology = trial % 2 == 0 ? PairTopology::Separate : PairTopology::Nested;
        const Geometry g = zero_decay_pair(random_zero_decay_atom(rng),
                                           random_zero_decay_atom(rng), topology, uni(rng));
        REQUIRE(classify_pair(g, 0, 1).topology == topology);
        const CoefficientSet c = coefficient_set(g);
        REQUIRE(c.gamma_ind(0) < 1e-9);
        REQUIRE(c.gamma_ind(1) < 1e-9);
        CHECK(std::abs(c.g(0, 1)) < 1e-9);
        CHECK(std::abs(c.gamma_coll(0, 1)) < 1e-9);
    }
}

TEST_CASE("dark braided pairs keep g = sqrt(gamma_a gamma_b) sin phi2") {
    Rng rng(35);
    std::uniform_real_distribution<double> rate(0.05, 1.0);
    std::uniform_real_distribution<double> inner(0.1, pi - 0.1);
    for (int trial = 0; trial < 500; ++trial) {
        const double ga = rate(rng), gb = rate(rng), phi2 = inner(rng);
        // phi1 + phi2 = pi and phi2 + phi3 = pi make both atoms dark.
        const Geometry g = geometry_from_gap_phases(
            {0.0, 0.0}, {{0, ga}, {1, gb}, {0, ga}, {1, gb}},
            {pi - phi2, phi2, pi - phi2});
        const CoefficientSet c = coefficient_set(g);
        CHECK(c.gamma_ind(0) < 1e-12);
        CHECK(c.gamma_ind(1) < 1e-12);
        CHECK(std::abs(c.gamma_coll(0, 1)) < 1e-12);
        CHECK(c.g(0, 1) ==
              doctest::Approx(std::sqrt(ga * gb) * std::sin(phi2)).epsilon(1e-12));
    }
}

TEST_CASE("zero-rate connection points contribute nothing") {
    const Geometry with_dead = geometry_from_gap_phases(
        {0.0, 0.0}, {{0, 0.8}, {1, 0.0}, {1, 0.5}}, {0.3, 0.9});
    const Geometry without = geometry_from_gap_phases({0.0, 0.0}, {{0, 0.8}, {1, 0.5}},
                                                      {1.2});
    CHECK(individual_decay(with_dead, 1) == doctest::Approx(individual_decay(without, 1)));
    CHECK(exchange_coupling(with_dead, 0, 1) ==
          doctest::Approx(exchange_coupling(without, 0, 1)).epsilon(1e-13));
}

TEST_CASE("mirror coefficient set matches the semi-infinite closed forms") {
    // General-rate, general-phase mirror master equation coefficients.
    const double g1 = 0.8, g2 = 0.55, phi1 = 1.3, phi2 = 0.6;
    const Geometry g =
        geometry_from_gap_phases({0.0, 0.0}, {{0, g1}, {1, g2}}, {phi2}, 0.5 * phi1);
    const CoefficientSet c = coefficient_set(g);
    CHECK(c.delta_omega(0) == doctest::Approx(0.5 * g1 * std::sin(phi1)).epsilon(1e-13));
    CHECK(c.delta_omega(1) ==
          doctest::Approx(0.5 * g2 * std::sin(phi1 + 2 * phi2)).epsilon(1e-13));
    CHECK(c.gamma_ind(0) == doctest::Approx(g1 * (1 + std::cos(phi1))).epsilon(1e-13));
    CHECK(c.gamma_ind(1) ==
          doctest::Approx(g2 * (1 + std::cos(phi1 + 2 * phi2))).epsilon(1e-13));
    CHECK(c.g(0, 1) == doctest::Approx(0.5 * std::sqrt(g1 * g2) *
                                       (std::sin(phi2) + std::sin(phi1 + phi2)))
                           .epsilon(1e-13));
    CHECK(c.gamma_coll(0, 1) == doctest::Approx(std::sqrt(g1 * g2) *
                                                (std::cos(phi2) + std::cos(phi1 + phi2)))
                                    .epsilon(1e-13));
}

TEST_CASE("closed-form generator action matches the jump-operator form") {
    Rng rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        const Geometry g = random_geometry(rng, 3, 3);
        const CoefficientSet c = coefficient_set(g);
        const MasterEquationGenerator gen = generator_from_coefficients(c);
        const Matrix rho = random_density(Eigen::Index(1) << g.n_atoms(), rng);
        CHECK(max_abs_diff(apply_coefficient_generator(c, rho), gen.apply(rho)) < 1e-11);
    }
}
