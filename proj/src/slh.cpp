#include "gqed/slh.hpp"

#include "gqed/errors.hpp"

namespace gqed {

namespace {

void check_dims(const SlhTriplet& g, const char* where) {
    for (const Matrix& L : g.L)
        if (L.rows() != g.H.rows() || L.cols() != g.H.cols())
            throw std::invalid_argument(std::string(where) +
                                        ": L/H dimension mismatch");
}

void check_compatible(const SlhTriplet& a, const SlhTriplet& b, const char* where) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(where) +
                                    ": Hilbert-space dimension mismatch");
}

Matrix cleaned_hamiltonian(const Matrix& H) {
    return drop_identity_component(H);
}

}  // namespace

SlhTriplet identity_channel(int n_ports, Eigen::Index dim) {
    SlhTriplet g;
    g.S = Eigen::MatrixXcd::Identity(n_ports, n_ports);
    g.L.assign(static_cast<size_t>(n_ports), Matrix::Zero(dim, dim));
    g.H = Matrix::Zero(dim, dim);
    return g;
}

SlhTriplet phase_shift(double phi, Eigen::Index dim) {
    SlhTriplet g = identity_channel(1, dim);
    g.S(0, 0) = std::exp(im * phi);
    return g;
}

SlhTriplet coherent_source(complex alpha, Eigen::Index dim) {
    SlhTriplet g = identity_channel(1, dim);
    g.L[0] = alpha * Matrix::Identity(dim, dim);
    return g;
}

SlhTriplet emitter(const Matrix& coupling_op, const Matrix& H) {
    SlhTriplet g;
    g.S = Eigen::MatrixXcd::Identity(1, 1);
    g.L = {coupling_op};
    g.H = H;
    check_dims(g, "emitter");
    return g;
}

SlhTriplet series(const SlhTriplet& g2, const SlhTriplet& g1) {
    if (g1.n_ports() != g2.n_ports())
        throw std::invalid_argument("series: port-count mismatch");
    check_compatible(g1, g2, "series");

    const int n = g1.n_ports();
    const Eigen::Index d = g1.dim();

    SlhTriplet out;
    out.S = g2.S * g1.S;
    out.L.assign(static_cast<size_t>(n), Matrix::Zero(d, d));
    for (int i = 0; i < n; ++i) {
        out.L[i] = g2.L[i];
        for (int j = 0; j < n; ++j) out.L[i] += g2.S(i, j) * g1.L[j];
    }

    // H1 + H2 + (1/2i) [L2^dag S2 L1 - L1^dag S2^dag L2]
    Matrix interaction = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            interaction += g2.S(i, j) * (g2.L[i].adjoint() * g1.L[j]);
    out.H = g1.H + g2.H + (interaction - interaction.adjoint()) / (2.0 * im);
    out.H = cleaned_hamiltonian(out.H);
    return out;
}

SlhTriplet concatenate(const SlhTriplet& g1, const SlhTriplet& g2) {
    check_compatible(g1, g2, "concatenate");
    const int n1 = g1.n_ports();
    const int n2 = g2.n_ports();

    SlhTriplet out;
    out.S = Eigen::MatrixXcd::Zero(n1 + n2, n1 + n2);
    out.S.topLeftCorner(n1, n1) = g1.S;
    out.S.bottomRightCorner(n2, n2) = g2.S;
    out.L = g1.L;
    out.L.insert(out.L.end(), g2.L.begin(), g2.L.end());
    out.H = cleaned_hamiltonian(g1.H + g2.H);
    return out;
}

SlhTriplet feedback(const SlhTriplet& g, int out_port, int in_port) {
    const int n = g.n_ports();
    if (out_port < 0 || out_port >= n || in_port < 0 || in_port >= n)
        throw std::invalid_argument("feedback: port out of range");
    if (out_port == in_port)
        throw std::invalid_argument("feedback: out_port must differ from in_port");

    const complex s_jk = g.S(out_port, in_port);
    const complex denom = complex(1.0) - s_jk;
    if (std::abs(denom) < 1e-12)
        throw NumericError("feedback: singular feedback (1 - S_jk not invertible)");
    const complex inv = complex(1.0) / denom;

    const Eigen::Index d = g.dim();
    SlhTriplet out;
    out.S = Eigen::MatrixXcd::Zero(n - 1, n - 1);
    out.L.assign(static_cast<size_t>(n - 1), Matrix::Zero(d, d));

    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (i == out_port) continue;
        int col = 0;
        for (int j = 0; j < n; ++j) {
            if (j == in_port) continue;
            out.S(row, col) = g.S(i, j) + g.S(i, in_port) * inv * g.S(out_port, j);
            ++col;
        }
        out.L[static_cast<size_t>(row)] =
            g.L[static_cast<size_t>(i)] + g.S(i, in_port) * inv * g.L[static_cast<size_t>(out_port)];
        ++row;
    }

    // H + (1/2i) [L^dag S_{:k} (1 - S_jk)^{-1} L_j - H.c.]
    Matrix term = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i)
        term += g.S(i, in_port) * (g.L[static_cast<size_t>(i)].adjoint() *
                                   g.L[static_cast<size_t>(out_port)]);
    term *= inv;
    out.H = g.H + (term - term.adjoint()) / (2.0 * im);
    out.H = cleaned_hamiltonian(out.H);
    return out;
}

SlhTriplet strip_scalar_couplings(const SlhTriplet& g) {
    const Eigen::Index d = g.dim();
    SlhTriplet out = g;
    for (Matrix& L : out.L) {
        const complex beta = L.trace() / static_cast<double>(d);
        if (std::abs(beta) == 0.0) continue;
        L -= beta * Matrix::Identity(d, d);
        // D[L' + beta] = D[L'] - i[-(i/2)(beta L'^dag - beta* L'), .]
        out.H += -0.5 * im * (beta * L.adjoint() - std::conj(beta) * L);
    }
    out.H = cleaned_hamiltonian(out.H);
    return out;
}

MasterEquationGenerator master_equation_from_triplet(const SlhTriplet& g) {
    return MasterEquationGenerator{g.H, g.L};
}

SlhTriplet attach_drive(const SlhTriplet& g, const DriveSpec& drive,
                        std::span<const double> atom_frequencies) {
    const int n = g.n_ports();
    if (drive.port < 0 || drive.port >= n)
        throw std::invalid_argument("attach_drive: invalid drive port");
    const int n_atoms = static_cast<int>(atom_frequencies.size());
    if (atom_count_for_dim(g.dim()) != n_atoms)
        throw std::invalid_argument(
            "attach_drive: atom_frequencies size inconsistent with dimension");

    SlhTriplet source = identity_channel(0, g.dim());
    for (int p = 0; p < n; ++p)
        source = concatenate(source, p == drive.port
                                         ? coherent_source(drive.alpha, g.dim())
                                         : identity_channel(1, g.dim()));

    SlhTriplet driven = strip_scalar_couplings(series(g, source));

    // Rotating frame of the drive: omega_j -> omega_j - omega_d.
    for (int j = 0; j < n_atoms; ++j)
        driven.H -= 0.5 * drive.omega_d * sigma_z(j, n_atoms);
    driven.H = drop_identity_component(driven.H);
    return driven;
}

}  // namespace gqed
