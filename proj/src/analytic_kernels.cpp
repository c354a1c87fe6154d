#include "hecke/analytic_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hecke {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2k} / (2k (2k - 1)) for k = 1..8.
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,           -3617.0 / 122400.0,
};

const double kLogGammaHalf = 0.5 * std::log(kPi);

// Trapezoidal rule for (1/pi) int_0^inf Re f(c + it) dt, where f(conj s) = conj f(s).
template <class Integrand>
double line_integral(Integrand&& f, const ContourQuadrature& quad) {
    if (!(quad.c > -0.5) || quad.c == 0.0) throw std::invalid_argument("contour quadrature needs c in (-1/2, 0) or c > 0");
    const double h = quad.h > 0.0 ? quad.h : std::min(0.1, std::abs(quad.c) / 8.0);
    const std::complex<double> f0 = f(std::complex<double>{quad.c, 0.0});
    double peak = std::abs(f0);
    double sum = 0.5 * f0.real();
    constexpr int kMaxSteps = 2000000;
    for (int k = 1; k < kMaxSteps; ++k) {
        const double t = k * h;
        if (quad.T > 0.0 && t > quad.T) break;
        const std::complex<double> v = f(std::complex<double>{quad.c, t});
        const double mag = std::abs(v);
        peak = std::max(peak, mag);
        sum += v.real();
        if (quad.T <= 0.0 && t > 2.0 && mag < 1e-20 * peak) break;
    }
    return sum * h / kPi;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        throw std::domain_error("log_gamma: pole at " + std::to_string(s.real()));
    std::complex<double> shift{0.0, 0.0};
    while (s.real() < 10.0) {
        shift += std::log(s);
        s += 1.0;
    }
    const std::complex<double> inv = 1.0 / s;
    const std::complex<double> inv2 = inv * inv;
    std::complex<double> series{0.0, 0.0};
    std::complex<double> p = inv;
    for (double b : kStirling) {
        series += b * p;
        p *= inv2;
    }
    const std::complex<double> stirling = (s - 0.5) * std::log(s) - s + 0.5 * std::log(2.0 * kPi) + series;
    return stirling - shift;
}

double V_contour(double xi, const ContourQuadrature& quad) {
    if (!(xi > 0.0)) throw std::invalid_argument("V_contour: xi must be positive");
    const double log_y = std::log(2.0 * kPi * xi);
    // Left of 0 the line has crossed the residue 1 at s = 0.
    const double residue = quad.c < 0.0 ? 1.0 : 0.0;
    return residue + line_integral(
        [&](std::complex<double> s) { return std::exp(log_gamma(s + 0.5) - kLogGammaHalf - s * log_y) / s; }, quad);
}

double W_contour(double x, const ContourQuadrature& quad) {
    if (!(x > 0.0)) throw std::invalid_argument("W_contour: x must be positive");
    const double log_scale = std::log(8.0 / (kPi * kPi * x));
    const double residue = quad.c < 0.0 ? 1.0 : 0.0;
    return residue + line_integral(
        [&](std::complex<double> s) {
            return std::exp(2.0 * (log_gamma(s + 0.5) - kLogGammaHalf) + s * log_scale) / s;
        },
        quad);
}

double eval_V(double xi) {
    if (xi < 0.0 || std::isnan(xi)) throw std::invalid_argument("eval_V: xi must be non-negative");
    if (xi == 0.0) return 1.0;
    return std::erfc(std::sqrt(2.0 * kPi * xi));
}

double eval_W(double x, double target_abs_error) {
    if (!(x > 0.0)) throw std::invalid_argument("eval_W: x must be positive");
    ContourQuadrature quad;
    // For small x the line left of the pole at 0 keeps the integrand small.
    quad.c = x < 1.0 ? -0.25 : 1.0;
    quad.h = std::abs(quad.c) / 4.0;
    double prev = W_contour(x, quad);
    for (int refine = 0; refine < 6; ++refine) {
        quad.h *= 0.5;
        const double next = W_contour(x, quad);
        if (std::abs(next - prev) <= target_abs_error) return next;
        prev = next;
    }
    throw std::runtime_error("eval_W: error target not met at x = " + std::to_string(x));
}

// ---------------------------------------------------------------------------

const WTable& WTable::instance() {
    static const WTable table;
    return table;
}

WTable::WTable() {
    t0_ = std::log(kMinX);
    const double t1 = std::log(kMaxX);
    const int segments = static_cast<int>(std::ceil((t1 - t0_) / width_));
    const int n = degree_ + 1;
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int seg = 0; seg < segments; ++seg) {
        const double a = t0_ + seg * width_;
        const double mid = a + 0.5 * width_;
        for (int j = 0; j < n; ++j) {
            const double node = std::cos(kPi * (j + 0.5) / n);
            values[static_cast<std::size_t>(j)] = eval_W(std::exp(mid + 0.5 * width_ * node), 1e-14);
        }
        std::vector<double> c(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += values[static_cast<std::size_t>(j)] * std::cos(kPi * k * (j + 0.5) / n);
            c[static_cast<std::size_t>(k)] = 2.0 * acc / n;
        }
        c[0] *= 0.5;
        coeffs_.push_back(std::move(c));
    }
}

double WTable::operator()(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("WTable: x must be positive");
    if (x < kMinX || x > kMaxX) return eval_W(x);
    const double t = std::log(x);
    auto seg = static_cast<std::size_t>((t - t0_) / width_);
    if (seg >= coeffs_.size()) seg = coeffs_.size() - 1;
    const double mid = t0_ + (static_cast<double>(seg) + 0.5) * width_;
    const double u = (t - mid) / (0.5 * width_);
    const auto& c = coeffs_[seg];
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * u * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + c[0];
}

// ---------------------------------------------------------------------------

KernelEvaluator::KernelEvaluator(KernelKind kind, double target_abs_error, std::optional<ContourQuadrature> quadrature)
    : kind_(kind), target_(target_abs_error), quadrature_(quadrature) {
    if (!(target_abs_error > 0.0)) throw std::invalid_argument("KernelEvaluator: target error must be positive");
}

double KernelEvaluator::operator()(double x) const {
    if (kind_ == KernelKind::V) {
        if (x < 0.0) throw std::invalid_argument("V: argument must be non-negative");
        if (x == 0.0) return 1.0;
        return quadrature_ ? V_contour(x, *quadrature_) : eval_V(x);
    }
    if (!(x > 0.0)) throw std::invalid_argument("W: argument must be positive");
    return quadrature_ ? W_contour(x, *quadrature_) : eval_W(x, target_);
}

}  // namespace hecke
