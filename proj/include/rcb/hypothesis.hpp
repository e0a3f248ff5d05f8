#pragma once
// Finite hypothesis classes over a finite action universe, incrementally
// maintained pairwise weighted distances, eluder coefficients and version
// spaces.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rcb {

using FunctionId = std::size_t;
using ActionId = std::size_t;
using Mask = std::vector<bool>;

// Value table f(x) for every function f and action x, with |f(x)| <= L_f.
class HypothesisClass {
public:
    HypothesisClass(std::size_t num_functions, std::size_t num_actions, std::vector<double> values,
                    double range_bound, std::vector<std::string> action_labels = {});

    static HypothesisClass from_rows(const std::vector<std::vector<double>>& rows,
                                     double range_bound,
                                     std::vector<std::string> action_labels = {});

    std::size_t size() const noexcept { return num_functions_; }
    std::size_t num_actions() const noexcept { return num_actions_; }
    double range_bound() const noexcept { return range_bound_; }
    const std::vector<std::string>& action_labels() const noexcept { return labels_; }

    double operator()(FunctionId f, ActionId x) const noexcept {
        return values_[f * num_actions_ + x];
    }
    std::span<const double> row(FunctionId f) const noexcept {
        return {values_.data() + f * num_actions_, num_actions_};
    }

    // Index of x among labels; throws PreconditionError if absent.
    ActionId action_index(const std::string& label) const;

private:
    std::size_t num_functions_;
    std::size_t num_actions_;
    std::vector<double> values_;
    double range_bound_;
    std::vector<std::string> labels_;
};

// Plain-text matrix format: first line "N M L_f", then N rows of M reals.
HypothesisClass read_hypothesis_class(std::istream& in);
HypothesisClass load_hypothesis_class(const std::filesystem::path& path);
void write_hypothesis_class(std::ostream& out, const HypothesisClass& cls);

// Running pairwise sums over a weighted history (x_i, w_i):
//   gram(a, b)      = sum_i f_a(x_i) f_b(x_i) / w_i^2
//   distance(a, b)  = sum_i (f_a(x_i) - f_b(x_i))^2 / w_i^2
//   quartic(a, b)   = sum_i (f_a(x_i) - f_b(x_i))^4 / w_i^4
// Distances are accumulated directly rather than read back from the Gram
// matrix, so they never lose precision to cancellation.
class PairAccumulator {
public:
    explicit PairAccumulator(std::shared_ptr<const HypothesisClass> cls);

    void update(ActionId x, double weight);

    double gram(FunctionId a, FunctionId b) const noexcept { return gram_[a * n_ + b]; }
    double pair_distance(FunctionId a, FunctionId b) const noexcept { return dist_[a * n_ + b]; }
    double pair_quartic(FunctionId a, FunctionId b) const noexcept { return quartic_[a * n_ + b]; }
    // G[a][a] - 2 G[a][b] + G[b][b], floored at zero.
    double gram_distance(FunctionId a, FunctionId b) const noexcept;

    std::size_t count() const noexcept { return count_; }
    std::size_t size() const noexcept { return n_; }
    const HypothesisClass& hypothesis_class() const noexcept { return *cls_; }
    const std::shared_ptr<const HypothesisClass>& class_ptr() const noexcept { return cls_; }

private:
    std::shared_ptr<const HypothesisClass> cls_;
    std::size_t n_;
    std::vector<double> gram_;
    std::vector<double> dist_;
    std::vector<double> quartic_;
    std::size_t count_ = 0;
};

double pair_distance(const PairAccumulator& acc, FunctionId a, FunctionId b);

// sup over active pairs of |f1(x) - f2(x)| / sigma_bar / sqrt(V(f1, f2) + lambda).
double eluder_coefficient(const PairAccumulator& acc, const Mask& active, ActionId x,
                          double sigma_bar, double lambda);

// sum_i min(1, D^2_F(x_i, sigma_i; x_[i-1], sigma_[i-1])) over the full class.
double eluder_dimension(std::shared_ptr<const HypothesisClass> cls, std::span<const ActionId> actions,
                        std::span<const double> sigma_bars, double lambda, double weight_floor = 0.0);

struct VersionSpace {
    Mask active;
    FunctionId estimator = 0;
    double radius_sq = 0.0;

    std::size_t active_count() const noexcept;
    bool contains(FunctionId f) const noexcept { return f < active.size() && active[f]; }
};

VersionSpace full_version_space(std::size_t num_functions);

// Keeps f in `active` with pair_distance(f, estimator) <= radius_sq; the
// estimator always survives.
VersionSpace refit_version_space(const PairAccumulator& acc, const Mask& active,
                                 FunctionId estimator, double radius_sq);

}  // namespace rcb
