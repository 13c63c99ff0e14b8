#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace gelfand {

// Grading of the radial mesh on [0, R]. Uniform places node i at R*i/M,
// power grading at R*(i/M)^g which clusters nodes near the origin.
enum class Grading { Uniform, Power };

struct GradingSpec {
    Grading kind = Grading::Power;
    double exponent = 2.0; // used by Power only, must lie in [1, 4]

    static GradingSpec uniform() { return {Grading::Uniform, 1.0}; }
    static GradingSpec power(double g) { return {Grading::Power, g}; }
};

// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

// Nodes 0..M on [0, R] for a radial problem in dimension n >= 2.
class RadialGrid {
  public:
    RadialGrid() = default;
    RadialGrid(Eigen::ArrayXd nodes, int dim, double radius, GradingSpec grading);

    int cell_count() const { return static_cast<int>(nodes_.size()) - 1; } // M
    int node_count() const { return static_cast<int>(nodes_.size()); }     // M + 1
    int dimension() const { return dim_; }
    double radius() const { return radius_; }
    double r(int i) const { return nodes_[i]; }
    const Eigen::ArrayXd& nodes() const { return nodes_; }
    GradingSpec grading() const { return grading_; }
    double sphere_area() const; // omega_{n-1}

    // Trapezoid weights for integrals in the radial coordinate, ends halved.
    const Eigen::ArrayXd& trapezoid_weights() const { return trap_; }

    bool operator==(const RadialGrid& o) const;
    bool operator!=(const RadialGrid& o) const { return !(*this == o); }

  private:
    Eigen::ArrayXd nodes_;
    Eigen::ArrayXd trap_;
    int dim_ = 0;
    double radius_ = 0.0;
    GradingSpec grading_{};
};

// Validates M >= 8, n >= 2, R > 0, power exponent in [1, 4].
RadialGrid build_grid(int M, GradingSpec grading, int n, double R);

// Nodal values of a radial function on a grid. Functions singular at the
// origin carry a placeholder at node 0 which no evaluation reads.
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(RadialGrid grid, Eigen::ArrayXd values, bool singular_at_origin = false);

    static GridFunction zero(const RadialGrid& g);
    static GridFunction from_callable(const RadialGrid& g, const std::function<double(double)>& f,
                                      bool singular_at_origin = false);

    const RadialGrid& grid() const { return grid_; }
    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::ArrayXd& values() { return values_; }
    double operator[](int i) const { return values_[i]; }
    bool singular_at_origin() const { return singular_; }
    int first_node() const { return singular_ ? 1 : 0; }

    // Linear interpolation. Rejects r outside the resolvable range.
    double eval(double r) const;

    // Nodal derivative by three-point fits, second order on smooth meshes.
    // Node 0 reports 0 for regular functions and is skipped when singular.
    Eigen::ArrayXd derivative_values() const;

    double sup_norm() const;
    // Weighted L2 norm over the ball, trapezoid rule.
    double l2_norm() const;

  private:
    RadialGrid grid_;
    Eigen::ArrayXd values_;
    bool singular_ = false;
};

// omega_{n-1} * integral_0^rho of g(r) r^{n-1} dr with g given nodally;
// trapezoid rule, linear interpolation for the partial cell at rho. For
// integrands of singular functions pass first_node = 1 so the run starts
// at the first positive node.
double integrate_ball(const RadialGrid& g, const Eigen::ArrayXd& integrand, double rho,
                      int first_node = 0);

// Same integral with a log-linear (power law) rule on cells where both
// endpoint values are positive, trapezoid elsewhere. Exact for power-law
// integrands, which the trapezoid rule badly overshoots on the wide graded
// cells near the origin; use for norm integrals of steep or singular
// profiles. Smooth signed integrands are better served by integrate_ball.
double integrate_ball_graded(const RadialGrid& g, const Eigen::ArrayXd& integrand, double rho,
                             int first_node = 0);

} // namespace gelfand
