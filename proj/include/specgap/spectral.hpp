// Full dense spectrum, spectral gap, the N = 2K convergence protocol, and
// parameter sweeps executed on a worker pool.
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "specgap/galerkin.hpp"

namespace specgap {

// Eigenvalues of a general dense complex matrix (LAPACK zgeev, Schur-based).
Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXcd& a);

struct SpectrumResult {
    // Sorted by ascending Re(-lambda), ties by ascending Im(lambda).
    Eigen::VectorXcd eigenvalues;
    int zero_mode_index = -1;  // eigenvalue of smallest modulus
    double gap = 0.0;          // min over non-tagged eigenvalues of Re(-lambda)
    bool gap_negative = false;
    bool zero_mode_resolved = true;  // |lambda_zero| <= zero_tol
    bool spectrum_contained = true;  // all Re(lambda) <= zero_tol
};

SpectrumResult spectrum(const GeneratorMatrix& gen, double zero_tol = 1e-7);

struct ConvergenceTrace {
    std::vector<std::pair<int, double>> gaps;  // (K, gap) with N = 2K
    bool converged = false;
    double final_gap = 0.0;
};

// Iterates K = K_start..K_max with N = 2K; stops when the gap's relative
// variation against the mean of the previous three values drops below
// rel_tol (absolute variation < 1e-6 when that mean is below 1e-12). The
// converged flag is forced false while the gap is negative. K_start >= 4.
ConvergenceTrace converged_gap(const ModelParams& params, const Potential& pot,
                               int K_start, int K_max, double rel_tol = 1e-3);

struct SweepRow {
    double xi = 0, tau = 0, U0 = 0, m = 1, beta = 1;
    int K = 0, N = 0;
    double gap = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    bool failed = false;
    std::string error;
};

// One converged_gap run per (U0, xi, tau) grid point of the cosine family;
// row order is U0 outer, then xi, then tau; failures are captured per row and
// never abort the sweep. jobs <= 1 runs inline.
std::vector<SweepRow> sweep(const std::vector<double>& xi_list,
                            const std::vector<double>& tau_list,
                            const std::vector<double>& U0_list, double m, double beta,
                            int K_start, int K_max, double rel_tol, int jobs);

} // namespace specgap
