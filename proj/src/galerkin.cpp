#include "specgap/galerkin.hpp"

#include <cmath>

#include "specgap/hermite.hpp"
#include "specgap/io.hpp"

namespace specgap {

namespace {

// Shared structure of the generator and its adjoint: both are sums of Hermite
// raising/lowering blocks with k-space stencils delta_{kk'} * z + w * u_{k-k'}.
struct ElementRule {
    cplx raise_delta(int k) const { return raise_dz * static_cast<double>(k) + raise_d0; }
    cplx lower_delta(int k) const { return lower_dz * static_cast<double>(k) + lower_d0; }
    cplx raise_dz, raise_d0, raise_u;
    cplx lower_dz, lower_d0, lower_u;
};

Eigen::MatrixXcd assemble_with_rule(const ModelParams& params, const Potential& pot,
                                    const BasisSpec& basis, const ElementRule& rule) {
    const ModeVector u = pot.force_coefficients(basis.K);
    const int B = std::min(pot.band(), 2 * basis.K);
    const double m = params.m;
    const double beta = params.beta;

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    for (int n = 0; n <= basis.N; ++n) {
        for (int k = -basis.K; k <= basis.K; ++k) {
            const int col = basis.index(n, k);
            mat(col, col) = -params.xi * n / m;
            if (n + 1 <= basis.N) {
                const double fac = std::sqrt(beta * (n + 1) / m);
                mat(basis.index(n + 1, k), col) += fac * rule.raise_delta(k);
                for (int dk = -B; dk <= B; ++dk) {
                    const int kp = k - dk;
                    if (kp < -basis.K || kp > basis.K) continue;
                    mat(basis.index(n + 1, kp), col) += fac * rule.raise_u * u(dk);
                }
            }
            if (n >= 1) {
                const double fac = std::sqrt(beta * n / m);
                mat(basis.index(n - 1, k), col) += fac * rule.lower_delta(k);
                for (int dk = -B; dk <= B; ++dk) {
                    const int kp = k - dk;
                    if (kp < -basis.K || kp > basis.K) continue;
                    mat(basis.index(n - 1, kp), col) += fac * rule.lower_u * u(dk);
                }
            }
        }
    }
    return mat;
}

} // namespace

GeneratorMatrix assemble(const ModelParams& params, const Potential& pot,
                         const BasisSpec& basis) {
    params.validate();
    const cplx i_unit(0.0, 1.0);
    // Raising: sqrt(beta(n+1)/m) [ (ik/beta) delta_{kk'} + u_{k-k'}/2 ]
    // Lowering: sqrt(beta n/m) [ (ik/beta + tau) delta_{kk'} - u_{k-k'}/2 ]
    ElementRule rule{
        i_unit / params.beta, 0.0, 0.5,
        i_unit / params.beta, params.tau, -0.5,
    };
    return {assemble_with_rule(params, pot, basis, rule), params, basis};
}

GeneratorMatrix adjoint(const GeneratorMatrix& gen, const Potential& pot) {
    const ModelParams& params = gen.params;
    const cplx i_unit(0.0, 1.0);
    // Direct assembly of the adjoint operator
    //   -L_ham + xi L_FD - tau d_p + (tau beta / m) p:
    // Raising: sqrt(beta(n+1)/m) [ (-ik/beta + tau) delta_{kk'} - u_{k-k'}/2 ]
    // Lowering: sqrt(beta n/m) [ (-ik/beta) delta_{kk'} + u_{k-k'}/2 ]
    ElementRule rule{
        -i_unit / params.beta, params.tau, -0.5,
        -i_unit / params.beta, 0.0, 0.5,
    };
    Eigen::MatrixXcd direct = assemble_with_rule(params, pot, gen.basis, rule);
    Eigen::MatrixXcd transposed = gen.entries.adjoint();

    const double scale = std::max(1.0, gen.entries.cwiseAbs().maxCoeff());
    const double defect = (direct - transposed).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw consistency_error(
            "adjoint: conjugate transpose disagrees with direct adjoint assembly "
            "(defect " + g17(defect) + ")");
    return {std::move(transposed), params, gen.basis};
}

double hermite_ladder_check(const BasisSpec& basis, double m, double beta) {
    if (!(m > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("hermite_ladder_check: m and beta must be positive");
    const int N = basis.N;
    // Wide standardized grid; the Gaussian weight makes truncation error
    // negligible against the 1e-8 acceptance threshold.
    const double L = std::sqrt(2.0 * (N + 1) + 1.0) + 8.0;
    const int npts = 8001;
    std::vector<double> y(npts);
    const double h = 2.0 * L / (npts - 1);
    for (int j = 0; j < npts; ++j) y[static_cast<std::size_t>(j)] = -L + j * h;

    const HermiteTable t = hermite_table(N + 1, y);
    Eigen::VectorXd weight(npts);
    for (int j = 0; j < npts; ++j) {
        const double yj = y[static_cast<std::size_t>(j)];
        double w = std::exp(-0.5 * yj * yj) / std::sqrt(2.0 * std::acos(-1.0));
        if (j == 0 || j == npts - 1) w *= 0.5;
        weight(j) = w * h;
    }
    auto norm = [&](const Eigen::VectorXd& f) {
        return std::sqrt((f.array().square() * weight.array()).sum());
    };
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), npts);

    // In the standardized variable: d_p = sqrt(beta/m) d_y and
    // p beta/m = sqrt(beta/m) y, so the sqrt(beta/m) scale factors out of the
    // lowering identity and appears squared in the L_FD relation.
    const double scale = std::sqrt(beta / m);
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
        const Eigen::VectorXd hn = t.value.row(n);
        const Eigen::VectorXd dhn = t.d1.row(n);
        const Eigen::VectorXd d2hn = t.d2.row(n);

        // d_p H_n = sqrt(beta n / m) H_{n-1}
        Eigen::VectorXd lower = scale * dhn;
        if (n >= 1) lower -= std::sqrt(beta * n / m) * Eigen::VectorXd(t.value.row(n - 1));
        worst = std::max(worst, norm(lower));

        // d_p^* H_n = (beta p / m - d_p) H_n = sqrt(beta (n+1) / m) H_{n+1}
        Eigen::VectorXd upper = scale * (yv.cwiseProduct(hn) - dhn) -
                                std::sqrt(beta * (n + 1) / m) *
                                    Eigen::VectorXd(t.value.row(n + 1));
        worst = std::max(worst, norm(upper));

        // L_FD H_n = (1/beta) d_p^2 H_n - (p/m) d_p H_n = -(n/m) H_n
        Eigen::VectorXd fd =
            (1.0 / m) * (d2hn - yv.cwiseProduct(dhn)) + (static_cast<double>(n) / m) * hn;
        worst = std::max(worst, norm(fd));
    }
    if (worst > 1e-8)
        throw consistency_error("hermite_ladder_check: residual " + g17(worst) +
                                " exceeds 1e-8");
    return worst;
}

std::string triplet_dump(const GeneratorMatrix& gen) {
    std::string out;
    const BasisSpec& b = gen.basis;
    for (int row = 0; row < b.dim(); ++row) {
        const auto [np, kp] = b.unindex(row);
        for (int col = 0; col < b.dim(); ++col) {
            const cplx v = gen.entries(row, col);
            if (v == cplx(0.0, 0.0)) continue;
            const auto [n, k] = b.unindex(col);
            out += std::to_string(np) + ' ' + std::to_string(kp) + ' ' +
                   std::to_string(n) + ' ' + std::to_string(k) + ' ' + g17(v.real()) +
                   ' ' + g17(v.imag()) + '\n';
        }
    }
    return out;
}

} // namespace specgap
