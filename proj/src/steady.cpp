#include "specgap/steady.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "specgap/hermite.hpp"
#include "specgap/io.hpp"
#include "specgap/spectral.hpp"

namespace specgap {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Coefficient vector of the constant function 1: mass coefficients embedded at
// Hermite level 0.
Eigen::VectorXcd mass_vector(const ModeVector& mass, const BasisSpec& basis) {
    if (mass.band() < basis.K)
        throw std::invalid_argument("mass_vector: coefficient band smaller than K");
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(basis.dim());
    for (int k = -basis.K; k <= basis.K; ++k) e(basis.index(0, k)) = mass(k);
    return e;
}

// Rank-one deflation of a singular system: solves with A + s m m^H where m is
// the unit mass direction, which maps the kernel line off zero while leaving
// the mean-zero complement untouched.
class DeflatedSolver {
public:
    DeflatedSolver(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& unit_mass)
        : mhat_(unit_mass), shift_(a.cwiseAbs().rowwise().sum().maxCoeff()) {
        Eigen::MatrixXcd shifted = a;
        shifted.noalias() += shift_ * mhat_ * mhat_.adjoint();
        lu_.compute(shifted);
        const Eigen::VectorXd diag = lu_.matrixLU().diagonal().cwiseAbs();
        const double dmax = diag.maxCoeff();
        if (!(dmax > 0.0) || diag.minCoeff() < 1e-14 * dmax)
            throw numerical_error(
                "DeflatedSolver: system singular on the mean-zero complement");
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const { return lu_.solve(rhs); }

    // Projection onto the complement, a solve, and a re-projection: the action
    // of the inverse restricted to mean-zero functions.
    Eigen::VectorXcd solve_deflated(const Eigen::VectorXcd& rhs) const {
        Eigen::VectorXcd w = project(rhs);
        w = lu_.solve(w);
        return project(w);
    }

    Eigen::VectorXcd project(const Eigen::VectorXcd& v) const {
        return v - mhat_ * mhat_.dot(v);
    }

    double shift() const noexcept { return shift_; }

private:
    Eigen::VectorXcd mhat_;
    double shift_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// Raising-only part of the adjoint perturbation: (L_pert^* v)_{n+1,k} =
// sqrt(beta(n+1)/m) v_{n,k}.
Eigen::VectorXcd apply_pert_adjoint(const Eigen::VectorXcd& v, const BasisSpec& basis,
                                    double m, double beta) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(v.size());
    for (int n = 0; n < basis.N; ++n) {
        const double fac = std::sqrt(beta * (n + 1) / m);
        for (int k = -basis.K; k <= basis.K; ++k)
            w(basis.index(n + 1, k)) = fac * v(basis.index(n, k));
    }
    return w;
}

double realness_defect_of(const Eigen::VectorXcd& h, const BasisSpec& basis) {
    double worst = 0.0;
    for (int n = 0; n <= basis.N; ++n)
        for (int k = 0; k <= basis.K; ++k)
            worst = std::max(worst, std::abs(h(basis.index(n, -k)) -
                                             std::conj(h(basis.index(n, k)))));
    return worst;
}

cplx mass_pairing(const Eigen::VectorXcd& e, const Eigen::VectorXcd& h) {
    return e.dot(h);  // antilinear in the first argument
}

double real_checked(cplx v, double tol, const char* what) {
    if (std::abs(v.imag()) > tol)
        throw consistency_error(std::string(what) + ": imaginary defect " +
                                g17(std::abs(v.imag())) + " exceeds " + g17(tol));
    return v.real();
}

} // namespace

SteadyState stationary_density(const GeneratorMatrix& gen, const Potential& pot,
                               double zero_tol) {
    const GeneratorMatrix adj = adjoint(gen, pot);
    const BasisSpec& basis = gen.basis;
    const double beta = gen.params.beta;

    // Kernel multiplicity from the full spectrum of the adjoint.
    const Eigen::VectorXcd ev = dense_eigenvalues(adj.entries);
    int near_zero = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) <= zero_tol) ++near_zero;
    if (near_zero != 1)
        throw degenerate_kernel_error(
            "stationary_density: " + std::to_string(near_zero) +
            " eigenvalues within " + g17(zero_tol) +
            " of zero; no unique stationary state at this resolution");

    const ModeVector mass = mass_coefficients(pot, beta, basis.K);
    const Eigen::VectorXcd e = mass_vector(mass, basis);
    const Eigen::VectorXcd mhat = e / e.norm();
    const DeflatedSolver solver(adj.entries, mhat);
    const double norm_inf = adj.entries.cwiseAbs().rowwise().sum().maxCoeff();

    // One inverse-iteration step seeded by the mass direction reproduces the
    // kernel line exactly up to roundoff (the deflated matrix maps the kernel
    // vector onto the mass direction).
    Eigen::VectorXcd h = solver.solve(mhat);
    h /= h.norm();
    cplx mass_h = mass_pairing(e, h);
    if (std::abs(mass_h) < 1e-12)
        throw normalization_error(
            "stationary_density: mass functional of the kernel vector is " +
            g17(std::abs(mass_h)) + "; cannot normalize");
    h /= mass_h;

    const double tol = 1e-9 * norm_inf;
    double residual = (adj.entries * h).norm();
    if (residual > tol) {
        // One more polish pass through the deflated system.
        Eigen::VectorXcd y = solver.solve(h / h.norm());
        y /= y.norm();
        const cplx mass_y = mass_pairing(e, y);
        if (std::abs(mass_y) < 1e-12)
            throw normalization_error(
                "stationary_density: mass functional vanished during polish");
        y /= mass_y;
        const double res_y = (adj.entries * y).norm();
        if (res_y < residual) {
            h = std::move(y);
            residual = res_y;
        }
        if (residual > tol)
            throw numerical_error("stationary_density: kernel residual " +
                                  g17(residual) + " exceeds " + g17(tol));
    }

    SteadyState ss{h, gen.params, basis, residual, norm_inf,
                   realness_defect_of(h, basis)};
    return ss;
}

double mean_velocity(const SteadyState& ss, const ModeVector& mass) {
    cplx sum = 0.0;
    for (int k = -ss.basis.K; k <= ss.basis.K; ++k)
        sum += std::conj(mass(k)) * ss.coeffs(ss.basis.index(1, k));
    sum /= std::sqrt(ss.params.beta * ss.params.m);
    return real_checked(sum, 1e-10, "mean_velocity");
}

double kinetic_moment(const SteadyState& ss, const ModeVector& mass) {
    cplx s0 = 0.0, s2 = 0.0;
    for (int k = -ss.basis.K; k <= ss.basis.K; ++k) {
        s0 += std::conj(mass(k)) * ss.coeffs(ss.basis.index(0, k));
        s2 += std::conj(mass(k)) * ss.coeffs(ss.basis.index(2, k));
    }
    const cplx v = (std::sqrt(2.0) * s2 + s0) / ss.params.beta;
    return real_checked(v, 1e-10, "kinetic_moment");
}

IdentityResiduals identity_residuals(const SteadyState& ss, const Potential& pot,
                                     const ModeVector& mass) {
    const BasisSpec& basis = ss.basis;
    const ModelParams& p = ss.params;
    const ModeVector u = pot.force_coefficients(basis.K);

    // Coefficients of U'(q) as an n = 0 basis function: d_k = sum_j c_j u_{j-k}.
    cplx mean_force = 0.0;
    for (int k = -basis.K; k <= basis.K; ++k) {
        cplx dk = 0.0;
        for (int j = -basis.K; j <= basis.K; ++j) dk += mass(j) * u(j - k);
        mean_force += std::conj(dk) * ss.coeffs(basis.index(0, k));
    }
    const double e_force = real_checked(mean_force, 1e-8, "identity_residuals");

    const double v = mean_velocity(ss, mass);
    const double kin = kinetic_moment(ss, mass);
    IdentityResiduals r{};
    r.velocity = std::abs(v - (p.tau - e_force) / p.xi);
    r.energy = std::abs(p.tau * v + (p.xi / p.m) * (1.0 / p.beta - kin));
    return r;
}

std::optional<double> fisher_information(const SteadyState& ss, const Potential& pot,
                                         const ModeVector& mass) {
    const BasisSpec& basis = ss.basis;
    const double m = ss.params.m, beta = ss.params.beta;
    const double z = partition_constant(pot, beta);
    const double sigma = std::sqrt(m / beta);
    const double pmax = 5.0 * sigma + m * std::abs(ss.params.tau) / ss.params.xi;
    (void)mass;

    // Reconstructs h and d_p h on a (q, p) tensor grid and integrates
    // |d_p h|^2 / h against mu; grids are doubled until 1e-8 agreement.
    auto evaluate = [&](int nq, int np, double& min_h) {
        const double hq = two_pi / nq;
        const double hp = 2.0 * pmax / (np - 1);

        std::vector<double> y(static_cast<std::size_t>(np));
        for (int j = 0; j < np; ++j)
            y[static_cast<std::size_t>(j)] = (-pmax + j * hp) * std::sqrt(beta / m);
        const HermiteTable t = hermite_table(basis.N, y);

        // S(n, q-index) = sum_k h_{nk} G_k(q).
        Eigen::MatrixXcd s(basis.N + 1, nq);
        const double gnorm = std::sqrt(z / two_pi);
        for (int jq = 0; jq < nq; ++jq) {
            const double q = jq * hq;
            const double wexp = gnorm * std::exp(0.5 * beta * pot.value(q));
            for (int n = 0; n <= basis.N; ++n) {
                cplx acc = 0.0;
                for (int k = -basis.K; k <= basis.K; ++k)
                    acc += ss.coeffs(basis.index(n, k)) * std::polar(1.0, k * q);
                s(n, jq) = acc * wexp;
            }
        }

        min_h = std::numeric_limits<double>::infinity();
        double integral = 0.0;
        const double kappa_norm = std::sqrt(beta / (two_pi * m));
        for (int jq = 0; jq < nq; ++jq) {
            const double q = jq * hq;
            const double nu_w = std::exp(-beta * pot.value(q)) / z;
            for (int jp = 0; jp < np; ++jp) {
                const double pval = -pmax + jp * hp;
                cplx hval = 0.0, dval = 0.0;
                for (int n = 0; n <= basis.N; ++n) {
                    hval += s(n, jq) * t.value(n, jp);
                    if (n >= 1)
                        dval += s(n, jq) * std::sqrt(beta * n / m) * t.value(n - 1, jp);
                }
                const double hr = hval.real();
                min_h = std::min(min_h, hr);
                if (min_h < 1e-6) return 0.0;  // caller checks min_h
                const double kappa_w =
                    kappa_norm * std::exp(-0.5 * beta * pval * pval / m);
                double w = hq * hp * nu_w * kappa_w;
                if (jp == 0 || jp == np - 1) w *= 0.5;
                integral += w * std::norm(dval) / hr;
            }
        }
        return integral;
    };

    double min_h = 0.0;
    double prev = evaluate(256, 257, min_h);
    if (min_h < 1e-6) return std::nullopt;
    for (int nq = 512; nq <= 4096; nq *= 2) {
        const double cur = evaluate(nq, nq + 1, min_h);
        if (min_h < 1e-6) return std::nullopt;
        if (std::abs(cur - prev) <= 1e-8 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw resolution_error("fisher_information: quadrature did not converge under doubling");
}

SeriesResult perturbative_series(const ModelParams& params, const Potential& pot,
                                 const BasisSpec& basis, int order) {
    params.validate();
    if (order < 0) throw std::invalid_argument("perturbative_series: order must be >= 0");

    ModelParams base = params;
    base.tau = 0.0;
    const GeneratorMatrix adj0 = adjoint(assemble(base, pot, basis), pot);
    const ModeVector mass = mass_coefficients(pot, params.beta, basis.K);
    const Eigen::VectorXcd e = mass_vector(mass, basis);
    const Eigen::VectorXcd mhat = e / e.norm();
    const DeflatedSolver solver(adj0.entries, mhat);

    const auto step = [&](const Eigen::VectorXcd& v) {
        return solver.solve_deflated(
            apply_pert_adjoint(v, basis, params.m, params.beta));
    };

    SeriesResult result;
    result.terms.push_back(e);
    result.term_norms.push_back(e.norm());
    result.partial_sum = e;
    for (int n = 1; n <= order; ++n) {
        Eigen::VectorXcd t = -params.tau * step(result.terms.back());
        result.term_norms.push_back(t.norm());
        result.partial_sum += t;
        result.terms.push_back(std::move(t));
    }
    const std::size_t sz = result.term_norms.size();
    result.diverging = sz >= 3 && result.term_norms[sz - 1] > result.term_norms[sz - 2] &&
                       result.term_norms[sz - 2] > result.term_norms[sz - 3];

    // Block power iteration for the dominant modulus of the iteration operator.
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int block = 4;
    Eigen::MatrixXcd b(basis.dim(), block);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (int j = 0; j < block; ++j) b(i, j) = cplx(normal(rng), normal(rng));
    b = Eigen::HouseholderQR<Eigen::MatrixXcd>(b).householderQ() *
        Eigen::MatrixXcd::Identity(basis.dim(), block);

    double prev_rho = -1.0;
    int streak = 0;
    for (int it = 0; it < 10000; ++it) {
        Eigen::MatrixXcd c(basis.dim(), block);
        for (int j = 0; j < block; ++j) c.col(j) = step(b.col(j));
        const Eigen::MatrixXcd h = b.adjoint() * c;
        const Eigen::VectorXcd ritz = dense_eigenvalues(h);
        const double rho = ritz.cwiseAbs().maxCoeff();
        if (prev_rho >= 0.0 && std::abs(rho - prev_rho) <= 1e-8 * std::max(rho, 1e-300)) {
            if (++streak >= 3) {
                result.radius = rho > 1e-12 ? 1.0 / rho
                                            : std::numeric_limits<double>::infinity();
                return result;
            }
        } else {
            streak = 0;
        }
        prev_rho = rho;
        b = Eigen::HouseholderQR<Eigen::MatrixXcd>(c).householderQ() *
            Eigen::MatrixXcd::Identity(basis.dim(), block);
    }
    result.radius = std::nullopt;  // estimator hit its cap: radius unavailable
    return result;
}

EinsteinResult diffusivity_and_einstein(const ModelParams& params, const Potential& pot,
                                        const BasisSpec& basis, double tau_fd) {
    params.validate();
    if (params.tau != 0.0)
        throw std::invalid_argument("diffusivity_and_einstein: requires tau = 0");
    if (tau_fd <= 0.0) tau_fd = 0.05 * std::min(params.xi, 1.0);

    const GeneratorMatrix gen0 = assemble(params, pot, basis);
    const ModeVector mass = mass_coefficients(pot, params.beta, basis.K);
    const Eigen::VectorXcd e = mass_vector(mass, basis);
    const Eigen::VectorXcd mhat = e / e.norm();

    // Poisson equation -L Phi = p/m on the mean-zero complement.
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(basis.dim());
    const double vel_scale = 1.0 / std::sqrt(params.beta * params.m);
    for (int k = -basis.K; k <= basis.K; ++k)
        rhs(basis.index(1, k)) = vel_scale * mass(k);
    const DeflatedSolver solver(-gen0.entries, mhat);
    const Eigen::VectorXcd phi = solver.solve_deflated(rhs);
    const double D = real_checked(phi.dot(rhs), 1e-10, "diffusivity");

    auto velocity_at = [&](double tau) {
        ModelParams p = params;
        p.tau = tau;
        const GeneratorMatrix gen = assemble(p, pot, basis);
        return mean_velocity(stationary_density(gen, pot), mass);
    };
    const double mobility = (velocity_at(tau_fd) - velocity_at(-tau_fd)) / (2.0 * tau_fd);
    return {D, mobility, std::abs(mobility - params.beta * D)};
}

} // namespace specgap
