#include "gelfand/nonlinearity.hpp"

#include <cmath>

namespace gelfand {

Nonlinearity Nonlinearity::exponential() {
    Nonlinearity n;
    n.family_ = Family::Exponential;
    return n;
}

Nonlinearity Nonlinearity::power(double q) {
    if (!(q > 1.0)) throw std::invalid_argument("Nonlinearity::power: need q > 1");
    Nonlinearity n;
    n.family_ = Family::Power;
    n.q_ = q;
    return n;
}

Nonlinearity Nonlinearity::affine(double A, double B) {
    if (!(A > 0.0)) throw std::invalid_argument("Nonlinearity::affine: need A > 0");
    Nonlinearity n;
    n.family_ = Family::Affine;
    n.A_ = A;
    n.B_ = B;
    return n;
}

Nonlinearity Nonlinearity::constant(double c) {
    if (c < 0.0) throw std::invalid_argument("Nonlinearity::constant: need c >= 0");
    Nonlinearity n;
    n.family_ = Family::Constant;
    n.c_ = c;
    return n;
}

std::string Nonlinearity::name() const {
    switch (family_) {
        case Family::Exponential: return "exponential";
        case Family::Power: return "power";
        case Family::Affine: return "affine";
        case Family::Constant: return "constant";
    }
    return "unknown";
}

double Nonlinearity::f(double t) const {
    switch (family_) {
        case Family::Exponential: return std::exp(t);
        case Family::Power: return std::pow(std::max(1.0 + t, 0.0), q_);
        case Family::Affine: return std::max(A_ * t - B_, 0.0);
        case Family::Constant: return c_;
    }
    return 0.0;
}

double Nonlinearity::fprime_minus(double t) const {
    switch (family_) {
        case Family::Exponential: return std::exp(t);
        case Family::Power: {
            const double s = std::max(1.0 + t, 0.0);
            return s > 0.0 ? q_ * std::pow(s, q_ - 1.0) : 0.0;
        }
        case Family::Affine: return A_ * t - B_ > 0.0 ? A_ : 0.0; // 0 at the kink
        case Family::Constant: return 0.0;
    }
    return 0.0;
}

double Nonlinearity::antiderivative(double t) const {
    switch (family_) {
        case Family::Exponential: return std::exp(t) - 1.0;
        case Family::Power: {
            const double s = std::max(1.0 + t, 0.0);
            // the clipped region below t = -1 contributes nothing
            if (1.0 + t >= 0.0) return (std::pow(s, q_ + 1.0) - 1.0) / (q_ + 1.0);
            return -1.0 / (q_ + 1.0);
        }
        case Family::Affine: {
            auto G = [&](double x) { // primitive of max(A x - B, 0)
                const double d = A_ * x - B_;
                return d > 0.0 ? d * d / (2.0 * A_) : 0.0;
            };
            return G(t) - G(0.0);
        }
        case Family::Constant: return c_ * t;
    }
    return 0.0;
}

} // namespace gelfand
