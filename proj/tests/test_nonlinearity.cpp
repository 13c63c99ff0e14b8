#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gelfand/nonlinearity.hpp>

#include <cmath>

using namespace gelfand;

TEST_CASE("exponential family") {
    const Nonlinearity f = Nonlinearity::exponential();
    CHECK(f.f(0.0) == 1.0);
    CHECK(f.f(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(f.fprime_minus(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
    CHECK(f.antiderivative(0.0) == 0.0);
    CHECK(f.antiderivative(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
    CHECK(f.name() == "exponential");
}

TEST_CASE("power family") {
    const Nonlinearity f = Nonlinearity::power(3.0);
    CHECK(f.f(0.0) == 1.0);
    CHECK(f.f(1.0) == 8.0);
    CHECK(f.fprime_minus(1.0) == 12.0);
    CHECK(f.antiderivative(1.0) == doctest::Approx((16.0 - 1.0) / 4.0).epsilon(1e-15));
    CHECK(f.q() == 3.0);
    CHECK_THROWS(Nonlinearity::power(1.0)); // q > 1 required
}

TEST_CASE("affine family with kink") {
    const Nonlinearity f = Nonlinearity::affine(2.0, 1.0); // max(2t - 1, 0)
    CHECK(f.f(0.0) == 0.0);
    CHECK(f.f(0.5) == 0.0);
    CHECK(f.f(1.0) == 1.0);
    CHECK(f.fprime_minus(0.5) == 0.0); // lower one-sided slope at the kink
    CHECK(f.fprime_minus(0.6) == 2.0);
    CHECK(f.antiderivative(0.5) == 0.0);
    CHECK(f.antiderivative(1.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("constant family") {
    const Nonlinearity f = Nonlinearity::constant(3.0);
    CHECK(f.f(17.0) == 3.0);
    CHECK(f.fprime_minus(17.0) == 0.0);
    CHECK(f.antiderivative(2.0) == 6.0);
    CHECK_THROWS(Nonlinearity::constant(-1.0));
}

TEST_CASE("families are nonnegative and nondecreasing on a sample range") {
    const Nonlinearity fams[] = {Nonlinearity::exponential(), Nonlinearity::power(2.5),
                                 Nonlinearity::affine(1.5, 0.5), Nonlinearity::constant(2.0)};
    for (const auto& f : fams) {
        double prev = f.f(0.0);
        CHECK(prev >= 0.0);
        for (int k = 1; k <= 100; ++k) {
            const double t = 0.1 * k;
            const double v = f.f(t);
            CHECK(v >= prev);
            CHECK(f.fprime_minus(t) >= 0.0);
            prev = v;
        }
    }
}

TEST_CASE("antiderivative differentiates back to f") {
    const Nonlinearity fams[] = {Nonlinearity::exponential(), Nonlinearity::power(4.0),
                                 Nonlinearity::affine(2.0, 1.0)};
    const double h = 1e-6;
    for (const auto& f : fams)
        for (double t : {0.3, 1.1, 2.7}) {
            const double num = (f.antiderivative(t + h) - f.antiderivative(t - h)) / (2.0 * h);
            CHECK(num == doctest::Approx(f.f(t)).epsilon(1e-8));
        }
}
