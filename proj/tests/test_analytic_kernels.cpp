#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hecke/analytic_kernels.hpp"

using namespace hecke;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference values from 30-digit adaptive quadrature of the defining integral on Re s = 1/2.
struct Ref {
    double x;
    double w;
};
constexpr Ref kWRef[] = {
    {1e-6, 0.98978155237684864578}, {0.01, 0.62770372786392378683}, {0.5, 0.10297290578040246038},
    {1.0, 0.047759993923309927841}, {3.0, 0.0076398336487172512708}, {10.0, 0.00024805865900422515969},
    {50.0, 2.9238868696931654641e-8},
};

}  // namespace

TEST_CASE("log gamma") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 30.0}) CHECK(log_gamma({x, 0.0}).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    for (double t : {0.5, 3.0, 30.0}) {
        const double lhs = 2.0 * log_gamma({0.5, t}).real();
        const double rhs = std::log(kPi / std::cosh(kPi * t));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    const auto a = log_gamma({0.5, 30.0});
    CHECK(a.real() == doctest::Approx(-46.204951270642225835).epsilon(1e-13));
    CHECK(a.imag() == doctest::Approx(72.037310428805793215).epsilon(1e-13));
    const auto b = log_gamma({3.2, -7.5});
    CHECK(b.real() == doctest::Approx(-5.3673877568946388099).epsilon(1e-13));
    CHECK(b.imag() == doctest::Approx(-11.38183172380304873).epsilon(1e-13));
}

TEST_CASE("V closed form against the contour integral") {
    const ContourQuadrature line{.c = 2.0, .T = 60.0, .h = 0.02};
    for (int k = 0; k < 50; ++k) {
        const double xi = 1e-4 * std::pow(30.0 / 1e-4, k / 49.0);
        CHECK(std::abs(eval_V(xi) - V_contour(xi, line)) < 1e-9);
    }
    CHECK(eval_V(0.0) == 1.0);
    CHECK(eval_V(1e-12) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(eval_V(1.0) == doctest::Approx(std::erfc(std::sqrt(2.0 * kPi))).epsilon(1e-15));
    for (double xi = 2.0; xi <= 50.0; xi += 0.5) CHECK(eval_V(xi) <= std::exp(-xi));
}

TEST_CASE("W against reference values") {
    for (const auto& r : kWRef) {
        CHECK(std::abs(eval_W(r.x, 1e-12) - r.w) < 1e-11);
        CHECK(std::abs(WTable::instance()(r.x) - r.w) < 1e-11);
    }
}

TEST_CASE("W is independent of the line") {
    for (int k = 0; k < 30; ++k) {
        const double x = 1e-2 * std::pow(1e4, k / 29.0);
        const double a = W_contour(x, {.c = 0.8});
        CHECK(std::abs(a - W_contour(x, {.c = 1.0})) < 1e-9);
        CHECK(std::abs(a - W_contour(x, {.c = 2.0})) < 1e-9);
        CHECK(std::abs(a - W_contour(x, {.c = -0.25})) < 1e-9);
    }
    CHECK(W_contour(100.0, {.c = 2.0}) < 1e-3);
}

TEST_CASE("W table across its range") {
    const WTable& w = WTable::instance();
    for (int k = 0; k <= 200; ++k) {
        const double x = WTable::kMinX * std::pow(WTable::kMaxX / WTable::kMinX, k / 200.0);
        CHECK(std::abs(w(x) - eval_W(x, 1e-13)) < 1e-10);
    }
    CHECK(w(1e5) == doctest::Approx(eval_W(1e5)));
}

TEST_CASE("kernel evaluator") {
    const KernelEvaluator v(KernelKind::V);
    const KernelEvaluator wk(KernelKind::W, 1e-12);
    CHECK(v(0.3) == eval_V(0.3));
    CHECK(std::abs(wk(1.0) - 0.047759993923309927841) < 1e-11);
    const KernelEvaluator vc(KernelKind::V, 1e-10, ContourQuadrature{.c = 1.0, .T = 60.0, .h = 0.02});
    CHECK(std::abs(vc(0.3) - eval_V(0.3)) < 1e-9);
}

TEST_CASE("bad arguments") {
    CHECK_THROWS(eval_W(-1.0));
    CHECK_THROWS(W_contour(1.0, {.c = -0.75}));
}
