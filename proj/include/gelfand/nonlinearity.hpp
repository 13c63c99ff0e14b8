#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

// Right-hand side families for -Laplace(u) = lambda f(u). All are
// nonnegative and nondecreasing with f(0) >= 0. fprime_minus is the lower
// one-sided slope; at the kink of the affine family it is 0.
class Nonlinearity {
  public:
    enum class Family { Exponential, Power, Affine, Constant };

    static Nonlinearity exponential();
    static Nonlinearity power(double q);           // f(t) = (1+t)^q, q > 1
    static Nonlinearity affine(double A, double B); // f(t) = max(A t - B, 0)
    static Nonlinearity constant(double c);         // f(t) = c >= 0

    Family family() const { return family_; }
    std::string name() const;

    double f(double t) const;
    double fprime_minus(double t) const;
    double antiderivative(double t) const; // F with F(0) = 0

    double q() const { return q_; }
    double A() const { return A_; }
    double B() const { return B_; }
    double c() const { return c_; }

  private:
    Family family_ = Family::Exponential;
    double q_ = 0.0, A_ = 0.0, B_ = 0.0, c_ = 0.0;
};

} // namespace gelfand
