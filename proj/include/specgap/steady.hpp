// Stationary state of the adjoint generator and the observables built on it:
// mean velocity, kinetic moment, stationary identities, Fisher information,
// the perturbative series in tau, and the diffusivity / Einstein relation.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "specgap/galerkin.hpp"

namespace specgap {

struct SteadyState {
    Eigen::VectorXcd coeffs;  // h_{nk} over the basis, k fastest
    ModelParams params;
    BasisSpec basis;
    double residual = 0.0;         // ||A* h||_2 after mass normalization
    double matrix_norm = 0.0;      // inf-norm of the adjoint matrix
    double realness_defect = 0.0;  // max |h_{n,-k} - conj(h_{nk})|
};

// Kernel of the adjoint matrix via one deflated inverse-iteration solve seeded
// by the mass vector, normalized to <1, h> = sum_k conj(c_k) h_{0k} = 1.
// Throws degenerate_kernel_error when the number of eigenvalues with modulus
// <= zero_tol differs from one, normalization_error when the mass functional
// of the kernel vector is below 1e-12 in modulus, and numerical_error when the
// polished residual still exceeds 1e-9 * ||A*||_inf.
SteadyState stationary_density(const GeneratorMatrix& gen, const Potential& pot,
                               double zero_tol = 1e-7);

// v_tau = (1/sqrt(beta m)) sum_k conj(c_k) h_{1k}; the imaginary part must be
// below 1e-10 (consistency_error otherwise).
double mean_velocity(const SteadyState& ss, const ModeVector& mass);

// E_tau[p^2/m] via p^2 = (m/beta)(sqrt(2) H_2 + H_0).
double kinetic_moment(const SteadyState& ss, const ModeVector& mass);

struct IdentityResiduals {
    double velocity;  // |v_tau - (tau - E_tau[U']) / xi|
    double energy;    // |tau v_tau + (xi/m)(1/beta - E_tau[p^2/m])|
};
IdentityResiduals identity_residuals(const SteadyState& ss, const Potential& pot,
                                     const ModeVector& mass);

// Grid reconstruction of int |d_p h|^2 / h dmu with doubling until 1e-8
// relative agreement; returns nullopt when min h on the grid falls below the
// positivity floor 1e-6 (truncation made h sign-indefinite: honest outcome).
std::optional<double> fisher_information(const SteadyState& ss, const Potential& pot,
                                         const ModeVector& mass);

struct SeriesResult {
    std::vector<Eigen::VectorXcd> terms;  // signed terms of the tau-expansion
    std::vector<double> term_norms;
    Eigen::VectorXcd partial_sum;
    bool diverging = false;        // last three term norms strictly increasing
    std::optional<double> radius;  // nullopt when the estimator hit its cap
};

// Iterates of the tau-expansion of the stationary state around equilibrium,
// built by repeated deflated solves with the tau = 0 adjoint system. The
// convergence-radius estimate is the reciprocal dominant-eigenvalue modulus of
// the iteration operator, obtained by block power iteration (block 4 with
// Rayleigh-Ritz values; the dominant eigenvalues generically form a conjugate
// quadruple, which a scalar iteration cannot resolve).
SeriesResult perturbative_series(const ModelParams& params, const Potential& pot,
                                 const BasisSpec& basis, int order);

struct EinsteinResult {
    double D;            // Green-Kubo diffusivity via the Poisson equation
    double mobility_fd;  // central difference (v_{+t} - v_{-t}) / (2t)
    double defect;       // |mobility_fd - beta D|
};

// Requires params.tau == 0; tau_fd <= 0 selects the default 0.05 min(xi, 1).
EinsteinResult diffusivity_and_einstein(const ModelParams& params, const Potential& pot,
                                        const BasisSpec& basis, double tau_fd = 0.0);

} // namespace specgap
