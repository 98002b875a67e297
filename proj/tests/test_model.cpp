#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "specgap/model.hpp"

using namespace specgap;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("params validate positivity and finiteness") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.xi = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.xi = 1.0;
    p.beta = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.beta = 1.0;
    p.m = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.m = 1.0;
    p.tau = std::nan("");
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tau = -2.5;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("mode vector bounds and symmetrization") {
    ModeVector v(2);
    v(1) = cplx(0.5, 0.25);
    CHECK_THROWS_AS(v(3), std::invalid_argument);
    CHECK(v.conjugate_asymmetry() > 0.5);
    v.enforce_conjugate_symmetry();
    CHECK(std::abs(v(1) - cplx(0.25, 0.125)) < 1e-15);
    CHECK(std::abs(v(-1) - std::conj(v(1))) < 1e-15);
    CHECK(v.conjugate_asymmetry() < 1e-15);
}

TEST_CASE("cosine potential values and force coefficients") {
    const double U0 = 1.0;
    const Potential pot = Potential::cosine(U0);
    CHECK(pot.is_cosine());
    CHECK(pot.cosine_amplitude() == U0);
    CHECK(std::abs(pot.value(0.0)) < 1e-15);
    CHECK(std::abs(pot.value(pi) - 2.0 * U0) < 1e-14);
    CHECK(std::abs(pot.derivative(pi / 2) - U0) < 1e-14);

    const ModeVector u = pot.force_coefficients(4);
    CHECK(u.band() == 8);
    CHECK(std::abs(u(-1) - cplx(0.0, -U0 / 2)) < 1e-15);
    CHECK(std::abs(u(1) - cplx(0.0, U0 / 2)) < 1e-15);
    CHECK(std::abs(u(0)) < 1e-15);
    CHECK(std::abs(u(2)) < 1e-15);
    CHECK_THROWS_AS(pot.force_coefficients(0), std::invalid_argument);

    CHECK(pot.force_sup() == doctest::Approx(U0).epsilon(1e-12));
    CHECK(pot.hess_sup() == doctest::Approx(U0).epsilon(1e-12));
}

TEST_CASE("explicit fourier data reproduces the cosine potential") {
    // U0 (1 - cos q) as raw coefficients, with a duplicated entry that must
    // accumulate.
    const std::vector<std::pair<int, cplx>> terms = {
        {0, cplx(1.0, 0.0)}, {1, cplx(-0.25, 0.0)}, {1, cplx(-0.25, 0.0)}, {-1, cplx(-0.5, 0.0)}};
    const Potential pot = Potential::from_fourier(terms);
    CHECK_FALSE(pot.is_cosine());
    const Potential ref = Potential::cosine(1.0);
    for (double q : {0.0, 0.7, 2.1, 4.4, 6.1}) {
        CHECK(std::abs(pot.value(q) - ref.value(q)) < 1e-14);
        CHECK(std::abs(pot.derivative(q) - ref.derivative(q)) < 1e-14);
    }
}

TEST_CASE("fourier data must describe a real potential") {
    const std::vector<std::pair<int, cplx>> bad = {{1, cplx(0.0, 0.5)}};
    CHECK_THROWS_AS(Potential::from_fourier(bad), std::invalid_argument);
    // Conjugate-symmetric imaginary pair is a legitimate real function (sin q).
    const std::vector<std::pair<int, cplx>> good = {{1, cplx(0.0, 0.5)}, {-1, cplx(0.0, -0.5)}};
    const Potential pot = Potential::from_fourier(good);
    CHECK(std::abs(pot.value(pi / 2) - 1.0) < 1e-14);
}

TEST_CASE("bessel i0 against the standard library") {
    for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double ref = std::cyl_bessel_i(0.0, x);
        CHECK(std::abs(bessel_i0(x) - ref) <= 1e-13 * std::max(1.0, ref));
    }
}

TEST_CASE("partition constant: closed form equals quadrature") {
    const Potential cosine = Potential::cosine(1.0);
    // The same function entered as raw coefficients takes the quadrature path.
    const Potential generic = Potential::from_fourier(
        {{0, cplx(1.0, 0.0)}, {1, cplx(-0.5, 0.0)}, {-1, cplx(-0.5, 0.0)}});
    for (double beta : {0.5, 1.0, 2.0}) {
        const double closed = partition_constant(cosine, beta);
        const double quad = partition_constant(generic, beta);
        CHECK(std::abs(closed - quad) <= 1e-10 * closed);
        const double expected = 2.0 * pi * std::exp(-beta) * bessel_i0(beta);
        CHECK(std::abs(closed - expected) <= 1e-14 * expected);
    }
    CHECK(std::abs(partition_constant(Potential::cosine(0.0), 3.0) - 2.0 * pi) < 1e-12);
}

TEST_CASE("mass coefficients: closed form, symmetry, Parseval") {
    const Potential pot = Potential::cosine(1.0);
    const ModeVector c = mass_coefficients(pot, 1.0, 16);
    // c_0 = I0(beta U0 / 2) / sqrt(I0(beta U0)) for the cosine family.
    const double c0 = bessel_i0(0.5) / std::sqrt(bessel_i0(1.0));
    CHECK(std::abs(c(0) - c0) < 1e-10);
    CHECK(std::abs(c(0) - 0.9452) < 1e-4);
    double parseval = 0.0;
    for (int k = -16; k <= 16; ++k) {
        parseval += std::norm(c(k));
        CHECK(std::abs(c(k) - std::conj(c(-k))) < 1e-12);
        CHECK(std::abs(c(k).imag()) < 1e-12);  // even potential: real coefficients
    }
    CHECK(std::abs(parseval - 1.0) < 1e-10);

    // Flat potential: the constant function is the k = 0 basis vector itself.
    const ModeVector flat = mass_coefficients(Potential::cosine(0.0), 2.0, 8);
    CHECK(std::abs(flat(0) - 1.0) < 1e-12);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(flat(k)) < 1e-12);
}

TEST_CASE("model constants bundle") {
    const ModelConstants mc = model_constants(Potential::cosine(2.0), 1.0);
    CHECK(std::abs(mc.partition - 2.0 * pi * std::exp(-2.0) * bessel_i0(2.0)) < 1e-12);
    CHECK(mc.force_sup == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mc.hess_sup == doctest::Approx(2.0).epsilon(1e-12));
}
