#pragma once

// Smoothing kernels of the central-value formulas, both Mellin integrals over a vertical line:
//
//   V(xi) = 1/(2 pi i) int_(c) Gamma(s+1/2)/Gamma(1/2) (2 pi xi)^-s ds/s
//   W(x)  = 1/(2 pi i) int_(c) (Gamma(s+1/2)/Gamma(1/2))^2 (8/pi^2)^s x^-s ds/s
//
// V has the closed form erfc(sqrt(2 pi xi)) (the Mellin transform of the upper incomplete gamma
// function is Gamma(a+s)/s). W is evaluated by trapezoidal quadrature along the line; the
// integrands are analytic in a strip around it and decay like exp(-pi|t|/2) and exp(-pi|t|).

#include <complex>
#include <optional>
#include <vector>

namespace hecke {

/// Principal-branch log Gamma: Stirling series after upward recurrence shifts.
std::complex<double> log_gamma(std::complex<double> s);

/// Line position and discretization; c in (-1/2, 0) adds the residue 1 at s = 0. T <= 0 means "truncate where the integrand drops below
/// 1e-20 of its peak"; h <= 0 means "choose from c".
struct ContourQuadrature {
    double c = 1.0;
    double T = 0.0;
    double h = 0.0;
};

/// V by quadrature of its defining integral.
double V_contour(double xi, const ContourQuadrature& quad);
/// W by quadrature of its defining integral.
double W_contour(double x, const ContourQuadrature& quad);

/// V(xi) = erfc(sqrt(2 pi xi)); V(0) = 1.
double eval_V(double xi);

/// W(x) by quadrature with step refinement until two successive steps agree to target_abs_error.
/// Throws std::runtime_error if the target cannot be met.
double eval_W(double x, double target_abs_error = 1e-10);

/// Piecewise Chebyshev interpolant of W in log x, built once from eval_W. Falls back to eval_W
/// outside [1e-7, 3000].
class WTable {
public:
    static const WTable& instance();

    double operator()(double x) const;

    static constexpr double kMinX = 1e-7;
    static constexpr double kMaxX = 3000.0;

private:
    WTable();

    double t0_ = 0.0;
    double width_ = 0.5;
    int degree_ = 20;
    std::vector<std::vector<double>> coeffs_;
};

enum class KernelKind { V, W };

/// A kernel with an accuracy contract. With a fixed quadrature both kernels are evaluated on that
/// contour; otherwise V uses its closed form and W automatic quadrature.
class KernelEvaluator {
public:
    explicit KernelEvaluator(KernelKind kind, double target_abs_error = 1e-10,
                             std::optional<ContourQuadrature> quadrature = std::nullopt);

    KernelKind kind() const { return kind_; }
    double target_abs_error() const { return target_; }

    double operator()(double x) const;

private:
    KernelKind kind_;
    double target_;
    std::optional<ContourQuadrature> quadrature_;
};

}  // namespace hecke
