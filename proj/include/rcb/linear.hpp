#pragma once
// Linear-embedded hypothesis classes f_theta(x) = theta^T phi(x) over a
// finite theta grid, and the elliptical upper bound on their eluder
// coefficient.

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "rcb/hypothesis.hpp"

namespace rcb {

struct LinearGridClass {
    std::shared_ptr<const HypothesisClass> cls;
    std::vector<Eigen::VectorXd> thetas;    // one per function, row order of cls
    std::vector<Eigen::VectorXd> features;  // one per action
};

// Cartesian grid with `points_per_axis` values evenly spaced on
// [-half_width, half_width] in every coordinate.
LinearGridClass make_linear_grid_class(std::vector<Eigen::VectorXd> features,
                                       std::size_t points_per_axis, double half_width);

// ||phi(x) / sigma_bar||^2 in the inverse of
//   Sigma = lambda I + sum_i phi(x_i) phi(x_i)^T / sigma_i^2.
// For classes whose parameter differences have norm <= 1 this dominates the
// squared eluder coefficient with the same lambda.
double linear_eluder_upper(std::span<const Eigen::VectorXd> features,
                           std::span<const double> sigma_bars, const Eigen::VectorXd& x_feature,
                           double sigma_bar, double lambda);

}  // namespace rcb
