#include "specgap/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace specgap {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform-grid trapezoid over one period (spectrally accurate for smooth
// periodic integrands); endpoint weight folds into the single sum.
template <typename F>
cplx periodic_trapezoid(F&& f, int n) {
    cplx sum = 0.0;
    const double h = two_pi / n;
    for (int j = 0; j < n; ++j) sum += f(j * h);
    return sum * h;
}

} // namespace

void ModelParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(m)) throw std::invalid_argument("ModelParams: m must be positive");
    if (!positive(beta)) throw std::invalid_argument("ModelParams: beta must be positive");
    if (!positive(xi)) throw std::invalid_argument("ModelParams: xi must be positive");
    if (!std::isfinite(tau)) throw std::invalid_argument("ModelParams: tau must be finite");
}

ModeVector::ModeVector(int band) : band_(band) {
    if (band < 0) throw std::invalid_argument("ModeVector: band must be >= 0");
    data_.assign(2 * static_cast<std::size_t>(band) + 1, cplx(0.0, 0.0));
}

void ModeVector::check(int k) const {
    if (k < -band_ || k > band_)
        throw std::invalid_argument("ModeVector: index outside coefficient band");
}

cplx& ModeVector::operator()(int k) {
    check(k);
    return data_[static_cast<std::size_t>(k + band_)];
}

const cplx& ModeVector::operator()(int k) const {
    check(k);
    return data_[static_cast<std::size_t>(k + band_)];
}

void ModeVector::enforce_conjugate_symmetry() noexcept {
    for (int k = 0; k <= band_; ++k) {
        const cplx a = data_[static_cast<std::size_t>(band_ + k)];
        const cplx b = data_[static_cast<std::size_t>(band_ - k)];
        const cplx sym = 0.5 * (a + std::conj(b));
        data_[static_cast<std::size_t>(band_ + k)] = sym;
        data_[static_cast<std::size_t>(band_ - k)] = std::conj(sym);
    }
}

double ModeVector::conjugate_asymmetry() const noexcept {
    double worst = 0.0;
    for (int k = 0; k <= band_; ++k) {
        const cplx a = data_[static_cast<std::size_t>(band_ + k)];
        const cplx b = data_[static_cast<std::size_t>(band_ - k)];
        worst = std::max(worst, std::abs(a - std::conj(b)));
    }
    return worst;
}

Potential::Potential(ModeVector coeffs, bool cosine, double U0)
    : coeffs_(std::move(coeffs)), cosine_(cosine), U0_(U0) {}

Potential Potential::cosine(double U0) {
    if (!std::isfinite(U0)) throw std::invalid_argument("Potential: U0 must be finite");
    ModeVector v(1);
    v(0) = U0;
    v(1) = -0.5 * U0;
    v(-1) = -0.5 * U0;
    return Potential(std::move(v), true, U0);
}

Potential Potential::from_fourier(const std::vector<std::pair<int, cplx>>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("Potential: empty coefficient list");
    int band = 0;
    double scale = 0.0;
    for (const auto& [k, v] : coeffs) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("Potential: non-finite coefficient");
        band = std::max(band, std::abs(k));
        scale = std::max(scale, std::abs(v));
    }
    ModeVector v(band);
    for (const auto& [k, c] : coeffs) v(k) += c;
    if (v.conjugate_asymmetry() > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument(
            "Potential: coefficients must describe a real-valued function "
            "(v_{-k} = conj(v_k))");
    v.enforce_conjugate_symmetry();
    return Potential(std::move(v), false, 0.0);
}

double Potential::value(double q) const {
    double v = coeffs_(0).real();
    for (int k = 1; k <= band(); ++k)
        v += 2.0 * std::real(coeffs_(k) * std::polar(1.0, -k * q));
    return v;
}

double Potential::derivative(double q) const {
    double v = 0.0;
    const cplx i_unit(0.0, 1.0);
    for (int k = 1; k <= band(); ++k)
        v += 2.0 * std::real(-i_unit * static_cast<double>(k) * coeffs_(k) *
                             std::polar(1.0, -k * q));
    return v;
}

ModeVector Potential::force_coefficients(int K) const {
    if (K < 1) throw std::invalid_argument("force_coefficients: K must be >= 1");
    ModeVector u(2 * K);
    const cplx i_unit(0.0, 1.0);
    const int top = std::min(band(), 2 * K);
    for (int k = -top; k <= top; ++k) u(k) = -i_unit * static_cast<double>(k) * coeffs_(k);
    return u;
}

double Potential::force_sup() const {
    if (cosine_) return std::abs(U0_);
    double sup = 0.0;
    const int n = 8192;
    for (int j = 0; j < n; ++j) sup = std::max(sup, std::abs(derivative(j * two_pi / n)));
    return sup;
}

double Potential::hess_sup() const {
    if (cosine_) return std::abs(U0_);
    double sup = 0.0;
    const int n = 8192;
    for (int j = 0; j < n; ++j) {
        const double q = j * two_pi / n;
        double v = 0.0;
        for (int k = 1; k <= band(); ++k)
            v += 2.0 * std::real(-static_cast<double>(k) * k * coeffs_(k) *
                                 std::polar(1.0, -k * q));
        sup = std::max(sup, std::abs(v));
    }
    return sup;
}

double Potential::cosine_amplitude() const {
    if (!cosine_)
        throw std::invalid_argument("cosine_amplitude: potential is not the cosine family");
    return U0_;
}

double bessel_i0(double x) {
    const double quarter_x2 = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 1000; ++j) {
        term *= quarter_x2 / (static_cast<double>(j) * j);
        sum += term;
        if (term <= 1e-16 * sum) return sum;
    }
    throw resolution_error("bessel_i0: series did not reach the term-ratio target");
}

double partition_constant(const Potential& pot, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("partition_constant: beta must be positive");
    if (pot.is_cosine()) {
        const double U0 = pot.cosine_amplitude();
        return two_pi * std::exp(-beta * U0) * bessel_i0(beta * U0);
    }
    auto f = [&](double q) { return cplx(std::exp(-beta * pot.value(q)), 0.0); };
    double prev = periodic_trapezoid(f, 1024).real();
    for (int n = 2048; n <= (1 << 21); n *= 2) {
        const double cur = periodic_trapezoid(f, n).real();
        if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw resolution_error("partition_constant: quadrature did not converge under doubling");
}

ModeVector mass_coefficients(const Potential& pot, double beta, int K) {
    if (!(beta > 0.0)) throw std::invalid_argument("mass_coefficients: beta must be positive");
    if (K < 0) throw std::invalid_argument("mass_coefficients: K must be >= 0");
    const double z = partition_constant(pot, beta);
    const double norm = 1.0 / std::sqrt(two_pi * z);

    auto compute = [&](int n) {
        ModeVector c(K);
        const double h = two_pi / n;
        for (int j = 0; j < n; ++j) {
            const double q = j * h;
            const double w = std::exp(-0.5 * beta * pot.value(q));
            for (int k = -K; k <= K; ++k) c(k) += w * std::polar(1.0, -k * q);
        }
        for (int k = -K; k <= K; ++k) c(k) *= h * norm;
        return c;
    };

    ModeVector prev = compute(1024);
    for (int n = 2048; n <= (1 << 21); n *= 2) {
        ModeVector cur = compute(n);
        double diff = 0.0;
        double scale = 1.0;
        for (int k = -K; k <= K; ++k) {
            diff = std::max(diff, std::abs(cur(k) - prev(k)));
            scale = std::max(scale, std::abs(cur(k)));
        }
        if (diff <= 1e-12 * scale) {
            cur.enforce_conjugate_symmetry();
            return cur;
        }
        prev = std::move(cur);
    }
    throw resolution_error("mass_coefficients: quadrature did not converge under doubling");
}

ModelConstants model_constants(const Potential& pot, double beta) {
    return {partition_constant(pot, beta), pot.force_sup(), pot.hess_sup()};
}

} // namespace specgap
