#include <cmath>
#include <complex>
#include <sstream>

#include "doctest.h"
#include "specgap/galerkin.hpp"

using namespace specgap;

namespace {

GeneratorMatrix make(double xi, double tau, double U0, int N, int K, double m = 1.0,
                     double beta = 1.0) {
    ModelParams p;
    p.m = m;
    p.beta = beta;
    p.xi = xi;
    p.tau = tau;
    return assemble(p, Potential::cosine(U0), BasisSpec(N, K));
}

} // namespace

TEST_CASE("closed-form entries at unit parameters") {
    const GeneratorMatrix g = make(1.0, 0.3, 1.0, 4, 2);
    const BasisSpec& b = g.basis;
    const auto e = [&](int np, int kp, int n, int k) {
        return g.entries(b.index(np, kp), b.index(n, k));
    };
    // Raising with a mode shift picks up u_{k-k'} / 2: (1,1;0,0) = u_{-1}/2.
    CHECK(std::abs(e(1, 1, 0, 0) - cplx(0.0, -0.25)) < 1e-14);
    CHECK(std::abs(e(1, -1, 0, 0) - cplx(0.0, 0.25)) < 1e-14);
    // Diagonal-in-k raising carries i k / beta only (u_0 = 0).
    CHECK(std::abs(e(1, 0, 0, 0)) < 1e-14);
    CHECK(std::abs(e(2, 1, 1, 1) - cplx(0.0, 1.0) * std::sqrt(2.0)) < 1e-14);
    // Lowering diagonal-in-k carries i k / beta + tau.
    CHECK(std::abs(e(0, 0, 1, 0) - cplx(0.3, 0.0)) < 1e-14);
    CHECK(std::abs(e(0, 1, 1, 1) - cplx(0.3, 1.0)) < 1e-14);
    // Lowering with a mode shift picks up -u_{k-k'} / 2.
    CHECK(std::abs(e(0, 0, 1, 1) - cplx(0.0, -0.25)) < 1e-14);
    // Friction diagonal -xi n / m.
    CHECK(std::abs(e(2, 0, 2, 0) - cplx(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(e(3, -2, 3, -2) - cplx(-3.0, 0.0)) < 1e-14);
}

TEST_CASE("mass and friction scaling of the ladder factors") {
    const GeneratorMatrix g = make(0.7, 0.0, 0.0, 4, 1, 2.0, 0.5);
    const BasisSpec& b = g.basis;
    // Raising factor sqrt(beta (n+1) / m): n = 2 gives sqrt(0.75).
    const cplx raise = g.entries(b.index(3, 1), b.index(2, 1));
    CHECK(std::abs(raise - std::sqrt(0.75) * cplx(0.0, 2.0)) < 1e-14);  // i k / beta = 2i
    // Friction diagonal -xi n / m.
    CHECK(std::abs(g.entries(b.index(2, 0), b.index(2, 0)) - cplx(-0.7, 0.0)) < 1e-14);
}

TEST_CASE("row sparsity for the cosine band") {
    const GeneratorMatrix g = make(1.0, 0.2, 1.5, 6, 4);
    for (int r = 0; r < g.basis.dim(); ++r) {
        int nonzero = 0;
        for (int c = 0; c < g.basis.dim(); ++c) {
            if (std::abs(g.entries(r, c)) > 1e-14) ++nonzero;
        }
        CHECK(nonzero <= 7);
    }
}

TEST_CASE("flat potential decouples the Fourier modes") {
    const GeneratorMatrix g = make(1.0, 0.1, 0.0, 5, 3);
    const BasisSpec& b = g.basis;
    for (int r = 0; r < b.dim(); ++r) {
        for (int c = 0; c < b.dim(); ++c) {
            const auto [nr, kr] = b.unindex(r);
            const auto [nc, kc] = b.unindex(c);
            if (kr != kc || std::abs(nr - nc) > 1) {
                CHECK(std::abs(g.entries(r, c)) < 1e-15);
            }
        }
    }
}

TEST_CASE("equilibrium splits into diagonal symmetric part and skew transport") {
    const GeneratorMatrix g = make(1.3, 0.0, 1.0, 6, 3);
    const Eigen::MatrixXcd sym = (g.entries + g.entries.adjoint()) / 2.0;
    const Eigen::MatrixXcd skew = (g.entries - g.entries.adjoint()) / 2.0;
    Eigen::MatrixXcd friction = Eigen::MatrixXcd::Zero(g.basis.dim(), g.basis.dim());
    for (int i = 0; i < g.basis.dim(); ++i) {
        friction(i, i) = -g.params.xi * g.basis.unindex(i).first / g.params.m;
    }
    CHECK((sym - friction).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((skew + skew.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("entries are local: smaller cutoff is a restriction") {
    const GeneratorMatrix big = make(0.8, 0.4, 1.0, 6, 8);
    const GeneratorMatrix small = make(0.8, 0.4, 1.0, 6, 6);
    for (int n1 = 0; n1 <= 6; ++n1) {
        for (int k1 = -6; k1 <= 6; ++k1) {
            for (int n2 = 0; n2 <= 6; ++n2) {
                for (int k2 = -6; k2 <= 6; ++k2) {
                    const cplx a = big.entries(big.basis.index(n1, k1), big.basis.index(n2, k2));
                    const cplx b =
                        small.entries(small.basis.index(n1, k1), small.basis.index(n2, k2));
                    CHECK(std::abs(a - b) < 1e-15);
                }
            }
        }
    }
}

TEST_CASE("adjoint is the conjugate transpose and cross-validates") {
    const Potential pot = Potential::cosine(1.0);
    ModelParams p;
    p.xi = 0.7;
    p.tau = 0.25;
    const GeneratorMatrix g = assemble(p, pot, BasisSpec(6, 4));
    const GeneratorMatrix ga = adjoint(g, pot);
    CHECK((ga.entries - g.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ladder identities hold under quadrature") {
    const double r1 = hermite_ladder_check(BasisSpec(24, 1), 1.0, 1.0);
    CHECK(r1 >= 0.0);
    CHECK(r1 <= 1e-8);
    const double r2 = hermite_ladder_check(BasisSpec(24, 1), 2.0, 0.5);
    CHECK(r2 <= 1e-8);
}

TEST_CASE("triplet dump round-trips the matrix") {
    const GeneratorMatrix g = make(1.0, 0.2, 1.0, 4, 3);
    const BasisSpec& b = g.basis;
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
    std::istringstream in(triplet_dump(g));
    int np, kp, n, k;
    double re, im;
    int count = 0;
    int last_row = -1;
    bool rows_sorted = true;
    while (in >> np >> kp >> n >> k >> re >> im) {
        const int row = b.index(np, kp);
        rows_sorted = rows_sorted && row >= last_row;
        last_row = row;
        rebuilt(row, b.index(n, k)) += cplx(re, im);
        ++count;
    }
    CHECK(count > 0);
    CHECK(rows_sorted);
    CHECK((rebuilt - g.entries).cwiseAbs().maxCoeff() < 1e-15);
}
