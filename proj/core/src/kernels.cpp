#include "hawkes/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

namespace {

constexpr double kPowerLawQuadTol = 1e-10;

struct Overloaded_ {
    template <class... F>
    struct set;
};

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// I0 = int_0^d e^{-i w u} du, I1 = int_0^d u e^{-i w u} du, stable for small w*d.
void segment_integrals(double d, double omega, Complex& i0, Complex& i1) {
    const double x = omega * d;
    if (std::abs(x) < 1e-3) {
        const Complex ix(0.0, x);
        // truncated Taylor series in (i w d)
        i0 = d * (1.0 - ix / 2.0 + ix * ix / 6.0 - ix * ix * ix / 24.0);
        i1 = d * d * (0.5 - ix / 3.0 + ix * ix / 8.0 - ix * ix * ix / 30.0);
        return;
    }
    const Complex iw(0.0, omega);
    const Complex e = std::exp(-iw * d);
    i0 = (1.0 - e) / iw;
    i1 = (i0 - d * e) / iw;
}

Complex power_law_phi_hat(const PowerLawKernel& k, double omega) {
    if (k.alpha == 0.0) return {0.0, 0.0};
    if (omega == 0.0) {
        return {-k.alpha * std::pow(k.gamma, k.beta + 1.0) / (k.beta + 1.0), 0.0};
    }
    // phi_hat(-w) = conj(phi_hat(w)) for a real kernel
    const double w = std::abs(omega);

    // Quadrature window: long enough that the tail series in 1/(i w) converges
    // fast, but never longer than the point where the absolute tail mass is
    // negligible anyway.
    const double t_series = 40.0 * (std::abs(k.beta) + 1.0) / w;
    const double t_absolute = k.gamma * std::pow(10.0, 12.0 / std::abs(k.beta + 1.0));
    const double t0 = std::min(std::max(100.0 * k.gamma, t_series), t_absolute);

    using boost::math::quadrature::gauss_kronrod;
    const auto re = gauss_kronrod<double, 15>::integrate(
        [&](double t) { return std::pow(t + k.gamma, k.beta) * std::cos(w * t); },
        0.0, t0, 20, kPowerLawQuadTol);
    const auto im = gauss_kronrod<double, 15>::integrate(
        [&](double t) { return std::pow(t + k.gamma, k.beta) * std::sin(w * t); },
        0.0, t0, 20, kPowerLawQuadTol);
    Complex result(re, -im);

    // Tail sum_{m>=0} f^(m)(t0) e^{-i w t0}/(i w)^{m+1}, f = (t+gamma)^beta.
    if (t0 < t_absolute) {
        const Complex iw(0.0, w);
        const Complex phase = std::exp(-iw * t0);
        Complex denom = iw;
        double deriv = std::pow(t0 + k.gamma, k.beta);
        double factor = k.beta;
        Complex tail = deriv / denom;
        for (int m = 1; m <= 6; ++m) {
            deriv *= factor / (t0 + k.gamma);
            denom *= iw;
            tail += deriv / denom;
            factor -= 1.0;
        }
        result += phase * tail;
    }
    result *= k.alpha;
    return omega < 0.0 ? std::conj(result) : result;
}

Complex tabulated_phi_hat(const TabulatedKernel& k, double omega) {
    Complex sum(0.0, 0.0);
    if (k.values.size() < 2) return sum;
    Complex i0, i1;
    segment_integrals(k.dt, omega, i0, i1);
    const Complex rot = std::exp(Complex(0.0, -omega * k.dt));
    Complex phase(1.0, 0.0);
    for (std::size_t j = 0; j + 1 < k.values.size(); ++j) {
        const double v0 = k.values[j];
        const double slope = (k.values[j + 1] - v0) / k.dt;
        sum += phase * (v0 * i0 + slope * i1);
        phase *= rot;
    }
    return sum;
}

} // namespace

// ---------------------------------------------------------------------------

KernelSpec KernelSpec::zero(int n) {
    KernelSpec s;
    s.n = n;
    s.entries.assign(static_cast<std::size_t>(n) * n, ZeroKernel{});
    return s;
}

KernelSpec KernelSpec::exponential_1d(double alpha, double beta) {
    KernelSpec s;
    s.n = 1;
    s.entries = {ExponentialKernel{alpha, beta}};
    return s;
}

KernelSpec KernelSpec::power_law_1d(double alpha, double beta, double gamma) {
    KernelSpec s;
    s.n = 1;
    s.entries = {PowerLawKernel{alpha, beta, gamma}};
    return s;
}

KernelSpec KernelSpec::bisymmetric(const KernelEntry& diag, const KernelEntry& anti) {
    KernelSpec s;
    s.n = 2;
    s.entries = {diag, anti, anti, diag};
    return s;
}

void KernelSpec::validate() const {
    if (n < 1) throw ValidationError("KernelSpec: dimension must be >= 1");
    if (entries.size() != static_cast<std::size_t>(n) * n)
        throw ValidationError("KernelSpec: expected n*n entries");
    for (const auto& e : entries) {
        std::visit(Overloaded{
                       [](const ZeroKernel&) {},
                       [](const ExponentialKernel& k) {
                           if (k.alpha < 0.0) throw ValidationError("exponential kernel: alpha must be >= 0");
                           if (!(k.beta > 0.0)) throw ValidationError("exponential kernel: beta must be > 0");
                       },
                       [](const PowerLawKernel& k) {
                           if (k.alpha < 0.0) throw ValidationError("power-law kernel: alpha must be >= 0");
                           if (!(k.beta < -1.0)) throw ValidationError("power-law kernel: beta must be < -1");
                           if (!(k.gamma > 0.0)) throw ValidationError("power-law kernel: gamma must be > 0");
                       },
                       [](const TabulatedKernel& k) {
                           if (!(k.dt > 0.0)) throw ValidationError("tabulated kernel: grid step must be > 0");
                           if (k.values.empty()) throw ValidationError("tabulated kernel: values must be non-empty");
                           for (double v : k.values)
                               if (v < 0.0 || !std::isfinite(v))
                                   throw ValidationError("tabulated kernel: values must be finite and >= 0");
                       },
                   },
                   e);
    }
}

void BackgroundRate::validate() const {
    if (mu.size() == 0) throw ValidationError("BackgroundRate: empty");
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
            throw ValidationError("BackgroundRate: components must be strictly positive");
}

// ---------------------------------------------------------------------------

double kernel_value(const KernelEntry& entry, double t) {
    if (t < 0.0) return 0.0;
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [&](const ExponentialKernel& k) { return k.alpha * std::exp(-k.beta * t); },
                          [&](const PowerLawKernel& k) { return k.alpha * std::pow(t + k.gamma, k.beta); },
                          [&](const TabulatedKernel& k) {
                              if (k.values.size() < 2) return 0.0;
                              const double extent = k.dt * static_cast<double>(k.values.size() - 1);
                              if (t >= extent) return t == extent ? k.values.back() : 0.0;
                              const auto j = static_cast<std::size_t>(t / k.dt);
                              const double u = t / k.dt - static_cast<double>(j);
                              return k.values[j] * (1.0 - u) + k.values[j + 1] * u;
                          },
                      },
                      entry);
}

double kernel_integral(const KernelEntry& entry) {
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [](const ExponentialKernel& k) { return k.alpha / k.beta; },
                          [](const PowerLawKernel& k) {
                              return -k.alpha * std::pow(k.gamma, k.beta + 1.0) / (k.beta + 1.0);
                          },
                          [](const TabulatedKernel& k) {
                              if (k.values.size() < 2) return 0.0;
                              double s = 0.0;
                              for (std::size_t j = 0; j + 1 < k.values.size(); ++j)
                                  s += 0.5 * (k.values[j] + k.values[j + 1]) * k.dt;
                              return s;
                          },
                      },
                      entry);
}

Complex entry_phi_hat(const KernelEntry& entry, double omega) {
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return Complex(0.0, 0.0); },
                          [&](const ExponentialKernel& k) {
                              return Complex(k.alpha) / Complex(k.beta, omega);
                          },
                          [&](const PowerLawKernel& k) { return power_law_phi_hat(k, omega); },
                          [&](const TabulatedKernel& k) { return tabulated_phi_hat(k, omega); },
                      },
                      entry);
}

double kernel_history_cutoff(const KernelEntry& entry, double floor_fraction) {
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [&](const ExponentialKernel& k) {
                              if (k.alpha == 0.0) return 0.0;
                              return -std::log(floor_fraction) / k.beta;
                          },
                          [&](const PowerLawKernel& k) {
                              if (k.alpha == 0.0) return 0.0;
                              return k.gamma * (std::pow(floor_fraction, 1.0 / k.beta) - 1.0);
                          },
                          [](const TabulatedKernel& k) {
                              if (k.values.size() < 2) return 0.0;
                              return k.dt * static_cast<double>(k.values.size() - 1);
                          },
                      },
                      entry);
}

// ---------------------------------------------------------------------------

CMat phi_hat(const KernelSpec& spec, double omega) {
    CMat m(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) m(i, j) = entry_phi_hat(spec.entry(i, j), omega);
    return m;
}

Mat phi_hat_zero(const KernelSpec& spec) {
    Mat m(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) m(i, j) = kernel_integral(spec.entry(i, j));
    return m;
}

double spectral_radius(const KernelSpec& spec) {
    spec.validate();
    const Mat m = phi_hat_zero(spec);
    if (spec.n == 1) return std::abs(m(0, 0));
    Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_radius: eigenvalue iteration failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

MeanIntensity mean_intensity(const KernelSpec& spec, const BackgroundRate& mu) {
    spec.validate();
    mu.validate();
    if (mu.mu.size() != spec.n)
        throw ValidationError("mean_intensity: mu dimension does not match kernel");
    const double rho = spectral_radius(spec);
    if (!(rho < 1.0))
        throw ValidationError("mean_intensity: spectral radius " + std::to_string(rho) +
                              " >= 1, process not stationary");
    const Mat a = Mat::Identity(spec.n, spec.n) - phi_hat_zero(spec);
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw NumericalError("mean_intensity: (I - phi_hat(0)) is singular");
    MeanIntensity out;
    out.lambda_bar = lu.solve(mu.mu);
    for (Eigen::Index i = 0; i < out.lambda_bar.size(); ++i)
        if (!(out.lambda_bar[i] > 0.0) || !std::isfinite(out.lambda_bar[i]))
            throw NumericalError("mean_intensity: non-positive or non-finite component");
    out.sigma = out.lambda_bar.asDiagonal();
    return out;
}

CMat psi_hat_from_phi_hat(const CMat& phi_hat_value) {
    const CMat a = CMat::Identity(phi_hat_value.rows(), phi_hat_value.cols()) - phi_hat_value;
    Eigen::FullPivLU<CMat> lu(a);
    if (!lu.isInvertible())
        throw NumericalError("psi_hat_from_phi_hat: (I - phi_hat) is singular");
    return phi_hat_value * lu.inverse();
}

CMat phi_hat_from_psi_hat(const CMat& psi_hat_value) {
    const CMat a = CMat::Identity(psi_hat_value.rows(), psi_hat_value.cols()) + psi_hat_value;
    Eigen::FullPivLU<CMat> lu(a);
    if (!lu.isInvertible())
        throw NumericalError("phi_hat_from_psi_hat: (I + psi_hat) is singular");
    return lu.solve(psi_hat_value);
}

} // namespace hawkes
