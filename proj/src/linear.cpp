#include "rcb/linear.hpp"

#include <cmath>

#include "rcb/errors.hpp"

namespace rcb {

LinearGridClass make_linear_grid_class(std::vector<Eigen::VectorXd> features,
                                       std::size_t points_per_axis, double half_width) {
    if (features.empty()) throw PreconditionError("linear grid: need at least one action");
    if (points_per_axis < 1 || !(half_width >= 0.0))
        throw PreconditionError("linear grid: bad grid specification");
    const auto d = features.front().size();
    for (const auto& phi : features)
        if (phi.size() != d) throw PreconditionError("linear grid: inconsistent feature dimension");

    std::vector<double> axis(points_per_axis);
    for (std::size_t k = 0; k < points_per_axis; ++k) {
        axis[k] = points_per_axis == 1
                      ? 0.0
                      : -half_width + 2.0 * half_width * static_cast<double>(k) /
                                          static_cast<double>(points_per_axis - 1);
    }

    std::size_t count = 1;
    for (Eigen::Index j = 0; j < d; ++j) count *= points_per_axis;

    LinearGridClass out;
    out.thetas.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        Eigen::VectorXd theta(d);
        std::size_t rest = code;
        // first coordinate varies slowest
        for (Eigen::Index j = d - 1; j >= 0; --j) {
            theta(j) = axis[rest % points_per_axis];
            rest /= points_per_axis;
        }
        out.thetas.push_back(std::move(theta));
    }

    std::vector<double> values;
    values.reserve(count * features.size());
    double largest = 0.0;
    for (const auto& theta : out.thetas) {
        for (const auto& phi : features) {
            const double v = theta.dot(phi);
            values.push_back(v);
            largest = std::max(largest, std::abs(v));
        }
    }
    const double range = largest > 0.0 ? largest : 1.0;
    out.cls = std::make_shared<const HypothesisClass>(count, features.size(), std::move(values), range);
    out.features = std::move(features);
    return out;
}

double linear_eluder_upper(std::span<const Eigen::VectorXd> features,
                           std::span<const double> sigma_bars, const Eigen::VectorXd& x_feature,
                           double sigma_bar, double lambda) {
    if (features.size() != sigma_bars.size())
        throw PreconditionError("linear_eluder_upper: history and weights differ in length");
    if (!(lambda > 0.0) || !(sigma_bar > 0.0))
        throw PreconditionError("linear_eluder_upper: lambda and sigma_bar must be positive");
    const auto d = x_feature.size();
    Eigen::MatrixXd sigma = lambda * Eigen::MatrixXd::Identity(d, d);
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != d) throw PreconditionError("linear_eluder_upper: dimension mismatch");
        sigma.noalias() += features[i] * features[i].transpose() / (sigma_bars[i] * sigma_bars[i]);
    }
    const Eigen::VectorXd phi = x_feature / sigma_bar;
    return phi.dot(sigma.ldlt().solve(phi));
}

}  // namespace rcb
