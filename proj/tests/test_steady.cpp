#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "specgap/steady.hpp"

using namespace specgap;

namespace {

struct Setup {
    GeneratorMatrix gen;
    Potential pot;
    ModeVector mass;
};

Setup make(double xi, double tau, double U0, int K, double m = 1.0, double beta = 1.0) {
    ModelParams p;
    p.m = m;
    p.beta = beta;
    p.xi = xi;
    p.tau = tau;
    const Potential pot = Potential::cosine(U0);
    return Setup{assemble(p, pot, BasisSpec(2 * K, K)), pot, mass_coefficients(pot, beta, K)};
}

} // namespace

TEST_CASE("flat potential: tilted state is the shifted Gaussian") {
    const double xi = 2.0, tau = 0.5;
    const Setup s = make(xi, tau, 0.0, 8);
    const SteadyState st = stationary_density(s.gen, s.pot);
    CHECK(st.residual <= 1e-9 * st.matrix_norm);
    CHECK(st.realness_defect < 1e-12);
    // h_{n,0} = c^n / sqrt(n!) with c = tau sqrt(beta m) / xi; other modes 0.
    const double c = tau / xi;
    double fact = 1.0;
    for (int n = 0; n <= s.gen.basis.N; ++n) {
        if (n > 0) fact *= n;
        const cplx expected(std::pow(c, n) / std::sqrt(fact), 0.0);
        CHECK(std::abs(st.coeffs(s.gen.basis.index(n, 0)) - expected) < 1e-10);
        for (int k = 1; k <= s.gen.basis.K; ++k) {
            CHECK(std::abs(st.coeffs(s.gen.basis.index(n, k))) < 1e-10);
            CHECK(std::abs(st.coeffs(s.gen.basis.index(n, -k))) < 1e-10);
        }
    }
    CHECK(std::abs(mean_velocity(st, s.mass) - tau / xi) < 1e-12);
    CHECK(std::abs(kinetic_moment(st, s.mass) - (1.0 + tau * tau / (xi * xi))) < 1e-10);
    const IdentityResiduals ir = identity_residuals(st, s.pot, s.mass);
    CHECK(ir.velocity <= 1e-10);
    CHECK(ir.energy <= 1e-10);
}

TEST_CASE("flat potential: Fisher information equals the analytic value") {
    const Setup s = make(1.0, 0.5, 0.0, 8);
    const SteadyState st = stationary_density(s.gen, s.pot);
    const auto fisher = fisher_information(st, s.pot, s.mass);
    REQUIRE(fisher.has_value());
    // beta^2 tau v / xi = 0.25; the 5-sigma momentum window truncates the
    // Gaussian tails at the 1e-6 relative level.
    CHECK(std::abs(*fisher - 0.25) < 1e-5);
}

TEST_CASE("cosine potential: frozen velocities and exact identities") {
    {
        const Setup s = make(1.0, 0.1, 1.0, 16);
        const SteadyState st = stationary_density(s.gen, s.pot);
        CHECK(st.residual <= 1e-8);
        CHECK(st.realness_defect <= 1e-10);
        CHECK(std::abs(mean_velocity(st, s.mass) - 0.04860280) < 1e-6);
        const IdentityResiduals ir = identity_residuals(st, s.pot, s.mass);
        CHECK(ir.velocity <= 1e-8);
        CHECK(ir.energy <= 1e-8);
    }
    {
        const Setup s = make(2.0, 0.5, 1.0, 16);
        const SteadyState st = stationary_density(s.gen, s.pot);
        CHECK(std::abs(mean_velocity(st, s.mass) - 0.15691801) < 1e-6);
        const IdentityResiduals ir = identity_residuals(st, s.pot, s.mass);
        CHECK(ir.velocity <= 1e-8);
        CHECK(ir.energy <= 1e-8);
    }
}

TEST_CASE("cosine potential: Fisher information is available and bounded") {
    const Setup s = make(1.0, 0.2, 1.0, 12);
    const SteadyState st = stationary_density(s.gen, s.pot);
    const auto fisher = fisher_information(st, s.pot, s.mass);
    REQUIRE(fisher.has_value());
    CHECK(std::abs(*fisher - 0.01983911) < 1e-5);
    // Coarse a priori bound (beta tau / xi)^2 + (beta^2 tau / xi^2) sup|U'|.
    const double bound = 0.2 * 0.2 + 0.2 * s.pot.force_sup();
    CHECK(*fisher <= bound);
    CHECK(*fisher >= 0.0);
}

TEST_CASE("velocity is odd in the tilt and dissipation is nonnegative") {
    for (double tau : {0.1, 0.3}) {
        const Setup plus = make(1.0, tau, 1.0, 12);
        const Setup minus = make(1.0, -tau, 1.0, 12);
        const double vp = mean_velocity(stationary_density(plus.gen, plus.pot), plus.mass);
        const double vm = mean_velocity(stationary_density(minus.gen, minus.pot), minus.mass);
        CHECK(std::abs(vp + vm) < 1e-8);
        CHECK(tau * vp >= -1e-10);
    }
    // tau v also stays nonnegative at strong tilt and weak friction.
    const Setup strong = make(0.3, 1.0, 1.0, 14);
    const double v = mean_velocity(stationary_density(strong.gen, strong.pot), strong.mass);
    CHECK(1.0 * v >= -1e-10);
}

TEST_CASE("vanishing friction degenerates the kernel") {
    const Setup s = make(1e-9, 0.0, 0.0, 4);
    CHECK_THROWS_AS(stationary_density(s.gen, s.pot), degenerate_kernel_error);
}

TEST_CASE("tau expansion reproduces the stationary state") {
    ModelParams p;
    p.xi = 1.0;
    p.tau = 0.1;
    const Potential pot = Potential::cosine(1.0);
    const BasisSpec basis(20, 10);
    const SeriesResult series = perturbative_series(p, pot, basis, 8);
    REQUIRE(series.terms.size() == 9);
    CHECK_FALSE(series.diverging);
    const GeneratorMatrix gen = assemble(p, pot, basis);
    const SteadyState st = stationary_density(gen, pot);
    CHECK((series.partial_sum - st.coeffs).norm() < 1e-6);
}

TEST_CASE("tau expansion radius: frozen values and scaling band") {
    const Potential pot = Potential::cosine(1.0);
    const BasisSpec basis(20, 10);
    const std::vector<std::pair<double, double>> frozen = {
        {0.1, 0.319237}, {1.0, 1.575271}, {10.0, 1.300373}};
    std::vector<double> scaled;
    for (const auto& [xi, expected] : frozen) {
        ModelParams p;
        p.xi = xi;
        const SeriesResult s = perturbative_series(p, pot, basis, 0);
        REQUIRE(s.radius.has_value());
        CHECK(std::abs(*s.radius - expected) <= 1e-3 * expected);
        scaled.push_back(*s.radius / std::min(1.0, xi));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo <= 5.0);
}

TEST_CASE("tau expansion terms decay geometrically inside the radius") {
    ModelParams p;
    p.xi = 1.0;
    const Potential pot = Potential::cosine(1.0);
    const BasisSpec basis(20, 10);
    const SeriesResult probe = perturbative_series(p, pot, basis, 0);
    REQUIRE(probe.radius.has_value());
    p.tau = 0.5 * *probe.radius;
    const SeriesResult s = perturbative_series(p, pot, basis, 10);
    CHECK_FALSE(s.diverging);
    CHECK(s.term_norms[8] < 0.1 * s.term_norms[4]);

    // Far outside the radius the term norms must blow up and say so.
    p.tau = 5.0 * *probe.radius;
    const SeriesResult d = perturbative_series(p, pot, basis, 12);
    CHECK(d.diverging);
    CHECK(d.term_norms.back() > d.term_norms[1]);
}

TEST_CASE("diffusivity: flat potential is exact and Einstein holds") {
    ModelParams p;
    p.xi = 0.8;
    const Potential pot = Potential::cosine(0.0);
    const EinsteinResult r = diffusivity_and_einstein(p, pot, BasisSpec(16, 8));
    CHECK(std::abs(r.D - 1.0 / p.xi) < 1e-10);
    CHECK(r.defect <= 1e-8);

    p.tau = 0.1;
    CHECK_THROWS_AS(diffusivity_and_einstein(p, pot, BasisSpec(16, 8)), std::invalid_argument);
}

TEST_CASE("diffusivity: cosine potential with finite-difference mobility") {
    ModelParams p;
    p.xi = 1.0;
    const Potential pot = Potential::cosine(1.0);
    const EinsteinResult r = diffusivity_and_einstein(p, pot, BasisSpec(24, 12), 0.02);
    CHECK(std::abs(r.D - 0.4826655) < 1e-5);
    CHECK(r.defect <= 1e-3);
}
