#include "specgap/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace specgap {

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("dense_eigenvalues: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXcd work = a;  // zgeev overwrites its input
    Eigen::VectorXcd w(n);
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr,
                      1, nullptr, 1);
    if (info != 0)
        throw numerical_error("dense_eigenvalues: zgeev failed (info = " +
                              std::to_string(info) + ")");
    return w;
}

SpectrumResult spectrum(const GeneratorMatrix& gen, double zero_tol) {
    const Eigen::VectorXcd raw = dense_eigenvalues(gen.entries);
    const Eigen::Index n = raw.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ra = -raw(a).real(), rb = -raw(b).real();
        if (ra != rb) return ra < rb;
        return raw(a).imag() < raw(b).imag();
    });

    SpectrumResult result;
    result.eigenvalues.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) result.eigenvalues(i) = raw(order[static_cast<std::size_t>(i)]);

    // The stationary mode is the eigenvalue of smallest modulus: small-|Re|
    // eigenvalues with large imaginary part must not be mistaken for it.
    Eigen::Index zero = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (std::abs(result.eigenvalues(i)) < std::abs(result.eigenvalues(zero))) zero = i;
    result.zero_mode_index = static_cast<int>(zero);
    result.zero_mode_resolved = std::abs(result.eigenvalues(zero)) <= zero_tol;

    double gap = std::numeric_limits<double>::infinity();
    double max_re = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        max_re = std::max(max_re, result.eigenvalues(i).real());
        if (i == zero) continue;
        gap = std::min(gap, -result.eigenvalues(i).real());
    }
    result.gap = gap;
    result.gap_negative = gap < 0.0;
    result.spectrum_contained = max_re <= zero_tol;
    return result;
}

ConvergenceTrace converged_gap(const ModelParams& params, const Potential& pot,
                               int K_start, int K_max, double rel_tol) {
    params.validate();
    if (K_start < 4)
        throw std::invalid_argument("converged_gap: K_start must be >= 4 "
                                    "(three history points are required)");
    if (K_max < K_start)
        throw std::invalid_argument("converged_gap: K_max must be >= K_start");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("converged_gap: rel_tol must be positive");

    ConvergenceTrace trace;
    for (int K = K_start; K <= K_max; ++K) {
        const BasisSpec basis(2 * K, K);
        const double gap = spectrum(assemble(params, pot, basis)).gap;
        trace.gaps.emplace_back(K, gap);
        trace.final_gap = gap;
        if (trace.gaps.size() >= 4 && gap >= 0.0) {
            const std::size_t sz = trace.gaps.size();
            const double mean = (trace.gaps[sz - 2].second + trace.gaps[sz - 3].second +
                                 trace.gaps[sz - 4].second) /
                                3.0;
            const bool close = std::abs(mean) < 1e-12
                                   ? std::abs(gap - mean) < 1e-6
                                   : std::abs(gap - mean) / std::abs(mean) < rel_tol;
            if (close) {
                trace.converged = true;
                return trace;
            }
        }
    }
    return trace;
}

std::vector<SweepRow> sweep(const std::vector<double>& xi_list,
                            const std::vector<double>& tau_list,
                            const std::vector<double>& U0_list, double m, double beta,
                            int K_start, int K_max, double rel_tol, int jobs) {
    if (xi_list.empty() || tau_list.empty() || U0_list.empty())
        throw std::invalid_argument("sweep: parameter lists must be non-empty");

    std::vector<SweepRow> rows;
    for (double U0 : U0_list)
        for (double xi : xi_list)
            for (double tau : tau_list) {
                SweepRow row;
                row.xi = xi;
                row.tau = tau;
                row.U0 = U0;
                row.m = m;
                row.beta = beta;
                rows.push_back(row);
            }

    auto run_row = [&](SweepRow& row) {
        try {
            const Potential pot = Potential::cosine(row.U0);
            const ModelParams params{m, beta, row.xi, row.tau};
            const ConvergenceTrace trace =
                converged_gap(params, pot, K_start, K_max, rel_tol);
            row.K = trace.gaps.back().first;
            row.N = 2 * row.K;
            row.gap = trace.final_gap;
            row.converged = trace.converged;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
            row.K = K_start;
            row.N = 2 * K_start;
        }
    };

    const int workers =
        std::min<int>(std::max(jobs, 1), static_cast<int>(rows.size()));
    if (workers <= 1) {
        for (SweepRow& row : rows) run_row(row);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) return;
                run_row(rows[i]);
            }
        });
    for (std::thread& t : pool) t.join();
    return rows;
}

} // namespace specgap
