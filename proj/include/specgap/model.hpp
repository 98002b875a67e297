// Model layer: physical parameters, periodic potential as Fourier data, and
// the scalar constants derived from them (partition constant, mass
// coefficients of the constant function, sup norms of U' and U'').
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "specgap/errors.hpp"

namespace specgap {

using cplx = std::complex<double>;

struct ModelParams {
    double m = 1.0;     // mass
    double beta = 1.0;  // inverse temperature
    double xi = 1.0;    // friction
    double tau = 0.0;   // nonequilibrium forcing strength
    // Throws std::invalid_argument unless m, beta, xi are positive finite and
    // tau is finite.
    void validate() const;
};

// Dense complex coefficients v_k indexed k = -band..band.
class ModeVector {
public:
    explicit ModeVector(int band);
    int band() const noexcept { return band_; }
    cplx& operator()(int k);
    const cplx& operator()(int k) const;
    // v_k <- (v_k + conj(v_{-k})) / 2, making the represented function exactly
    // real-valued.
    void enforce_conjugate_symmetry() noexcept;
    // max_k |v_k - conj(v_{-k})| before symmetrization.
    double conjugate_asymmetry() const noexcept;

private:
    void check(int k) const;
    int band_;
    std::vector<cplx> data_;
};

// Smooth real periodic potential on [0, 2pi), held as the finite Fourier data
// U(q) = sum_k v_k e^{-ikq}. Assembly consumes only the force coefficients
// u_k of U'(q) = sum_k u_k e^{-ikq}.
class Potential {
public:
    // U(q) = U0 (1 - cos q).
    static Potential cosine(double U0);
    // Explicit coefficient list {(k, v_k)}; must describe a real function.
    static Potential from_fourier(const std::vector<std::pair<int, cplx>>& coeffs);

    double value(double q) const;
    double derivative(double q) const;
    // Table of u_k for |k| <= 2K (conjugate-symmetric); requires K >= 1.
    ModeVector force_coefficients(int K) const;
    double force_sup() const;  // sup |U'|
    double hess_sup() const;   // sup |U''|
    int band() const noexcept { return coeffs_.band(); }
    bool is_cosine() const noexcept { return cosine_; }
    double cosine_amplitude() const;  // U0; only valid for the cosine family

private:
    Potential(ModeVector coeffs, bool cosine, double U0);
    ModeVector coeffs_;
    bool cosine_;
    double U0_;
};

// Modified Bessel function I0 via its power series, term-ratio stop at 1e-16.
double bessel_i0(double x);

// Partition constant Z_nu = int_0^{2pi} e^{-beta U(q)} dq. Closed form
// 2 pi e^{-beta U0} I0(beta U0) for the cosine family, periodic trapezoid
// quadrature with doubling otherwise.
double partition_constant(const Potential& pot, double beta);

// Coefficients c_k = (2 pi Z_nu)^{-1/2} int e^{-ikq} e^{-beta U(q)/2} dq of the
// constant function in the Fourier basis, for |k| <= K; conjugate-symmetric.
ModeVector mass_coefficients(const Potential& pot, double beta, int K);

struct ModelConstants {
    double partition;  // Z_nu
    double force_sup;  // sup |U'|
    double hess_sup;   // sup |U''|
};
ModelConstants model_constants(const Potential& pot, double beta);

} // namespace specgap
