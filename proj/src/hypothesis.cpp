#include "rcb/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rcb/errors.hpp"

namespace rcb {

HypothesisClass::HypothesisClass(std::size_t num_functions, std::size_t num_actions,
                                 std::vector<double> values, double range_bound,
                                 std::vector<std::string> action_labels)
    : num_functions_(num_functions),
      num_actions_(num_actions),
      values_(std::move(values)),
      range_bound_(range_bound),
      labels_(std::move(action_labels)) {
    if (num_functions_ == 0 || num_actions_ == 0)
        throw PreconditionError("hypothesis class needs at least one function and one action");
    if (values_.size() != num_functions_ * num_actions_)
        throw PreconditionError("hypothesis class value table has the wrong size");
    if (!(range_bound_ > 0.0) || !std::isfinite(range_bound_))
        throw PreconditionError("hypothesis class range bound must be positive");
    for (double v : values_) {
        if (!std::isfinite(v) || std::abs(v) > range_bound_) {
            std::ostringstream msg;
            msg << "hypothesis class value " << v << " exceeds range bound " << range_bound_;
            throw PreconditionError(msg.str());
        }
    }
    if (labels_.empty()) {
        labels_.reserve(num_actions_);
        for (std::size_t x = 0; x < num_actions_; ++x) labels_.push_back(std::to_string(x));
    } else if (labels_.size() != num_actions_) {
        throw PreconditionError("hypothesis class label count differs from action count");
    }
}

HypothesisClass HypothesisClass::from_rows(const std::vector<std::vector<double>>& rows,
                                           double range_bound,
                                           std::vector<std::string> action_labels) {
    if (rows.empty()) throw PreconditionError("hypothesis class needs at least one function");
    const std::size_t m = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * m);
    for (const auto& r : rows) {
        if (r.size() != m) throw PreconditionError("hypothesis class rows differ in length");
        values.insert(values.end(), r.begin(), r.end());
    }
    return HypothesisClass(rows.size(), m, std::move(values), range_bound, std::move(action_labels));
}

ActionId HypothesisClass::action_index(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw PreconditionError("unknown action label: " + label);
    return static_cast<ActionId>(it - labels_.begin());
}

HypothesisClass read_hypothesis_class(std::istream& in) {
    std::size_t n = 0;
    std::size_t m = 0;
    double range = 0.0;
    if (!(in >> n >> m >> range)) throw PreconditionError("class file: expected header 'N M L_f'");
    std::vector<double> values(n * m);
    for (std::size_t i = 0; i < n * m; ++i) {
        if (!(in >> values[i])) {
            std::ostringstream msg;
            msg << "class file: expected " << n * m << " values, read " << i;
            throw PreconditionError(msg.str());
        }
    }
    return HypothesisClass(n, m, std::move(values), range);
}

HypothesisClass load_hypothesis_class(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open class file " + path.string());
    return read_hypothesis_class(in);
}

void write_hypothesis_class(std::ostream& out, const HypothesisClass& cls) {
    const auto old_precision = out.precision(17);
    out << cls.size() << ' ' << cls.num_actions() << ' ' << cls.range_bound() << '\n';
    for (FunctionId f = 0; f < cls.size(); ++f) {
        for (ActionId x = 0; x < cls.num_actions(); ++x) {
            if (x) out << ' ';
            out << cls(f, x);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

PairAccumulator::PairAccumulator(std::shared_ptr<const HypothesisClass> cls)
    : cls_(std::move(cls)),
      n_(cls_->size()),
      gram_(n_ * n_, 0.0),
      dist_(n_ * n_, 0.0),
      quartic_(n_ * n_, 0.0) {}

void PairAccumulator::update(ActionId x, double weight) {
    if (!(weight > 0.0)) throw PreconditionError("accumulator update: weight must be positive");
    if (x >= cls_->num_actions()) throw PreconditionError("accumulator update: unknown action");
    const double inv_w2 = 1.0 / (weight * weight);
    for (FunctionId a = 0; a < n_; ++a) {
        const double fa = (*cls_)(a, x);
        for (FunctionId b = a; b < n_; ++b) {
            const double fb = (*cls_)(b, x);
            const double g = fa * fb * inv_w2;
            const double d2 = (fa - fb) * (fa - fb) * inv_w2;
            gram_[a * n_ + b] += g;
            dist_[a * n_ + b] += d2;
            quartic_[a * n_ + b] += d2 * d2;
            if (a != b) {
                gram_[b * n_ + a] = gram_[a * n_ + b];
                dist_[b * n_ + a] = dist_[a * n_ + b];
                quartic_[b * n_ + a] = quartic_[a * n_ + b];
            }
        }
    }
    ++count_;
}

double PairAccumulator::gram_distance(FunctionId a, FunctionId b) const noexcept {
    return std::max(0.0, gram(a, a) - 2.0 * gram(a, b) + gram(b, b));
}

double pair_distance(const PairAccumulator& acc, FunctionId a, FunctionId b) {
    if (a >= acc.size() || b >= acc.size()) throw PreconditionError("pair_distance: bad index");
    return std::max(0.0, acc.pair_distance(a, b));
}

double eluder_coefficient(const PairAccumulator& acc, const Mask& active, ActionId x,
                          double sigma_bar, double lambda) {
    if (!(lambda > 0.0)) throw PreconditionError("eluder_coefficient: lambda must be positive");
    if (!(sigma_bar > 0.0)) throw PreconditionError("eluder_coefficient: sigma_bar must be positive");
    const auto& cls = acc.hypothesis_class();
    if (active.size() != cls.size()) throw PreconditionError("eluder_coefficient: mask size mismatch");
    if (x >= cls.num_actions()) throw PreconditionError("eluder_coefficient: unknown action");

    double best = 0.0;
    for (FunctionId a = 0; a < cls.size(); ++a) {
        if (!active[a]) continue;
        const double fa = cls(a, x);
        for (FunctionId b = a + 1; b < cls.size(); ++b) {
            if (!active[b]) continue;
            const double gap = std::abs(fa - cls(b, x));
            if (gap == 0.0) continue;
            const double d = gap / sigma_bar / std::sqrt(std::max(0.0, acc.pair_distance(a, b)) + lambda);
            if (d > best) best = d;
        }
    }
    return best;
}

double eluder_dimension(std::shared_ptr<const HypothesisClass> cls, std::span<const ActionId> actions,
                        std::span<const double> sigma_bars, double lambda, double weight_floor) {
    if (actions.size() != sigma_bars.size())
        throw PreconditionError("eluder_dimension: action and weight sequences differ in length");
    if (!(lambda > 0.0)) throw PreconditionError("eluder_dimension: lambda must be positive");
    for (double s : sigma_bars)
        if (!(s > 0.0) || s < weight_floor)
            throw PreconditionError("eluder_dimension: weight below floor");

    PairAccumulator acc(cls);
    const Mask all(cls->size(), true);
    double total = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const double d = eluder_coefficient(acc, all, actions[i], sigma_bars[i], lambda);
        total += std::min(1.0, d * d);
        acc.update(actions[i], sigma_bars[i]);
    }
    return total;
}

std::size_t VersionSpace::active_count() const noexcept {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

VersionSpace full_version_space(std::size_t num_functions) {
    return VersionSpace{Mask(num_functions, true), 0, std::numeric_limits<double>::infinity()};
}

VersionSpace refit_version_space(const PairAccumulator& acc, const Mask& active,
                                 FunctionId estimator, double radius_sq) {
    if (active.size() != acc.size()) throw PreconditionError("refit_version_space: mask size mismatch");
    if (estimator >= acc.size() || !active[estimator])
        throw PreconditionError("refit_version_space: estimator must be active");
    VersionSpace vs{Mask(active.size(), false), estimator, radius_sq};
    for (FunctionId f = 0; f < active.size(); ++f) {
        if (!active[f]) continue;
        vs.active[f] = f == estimator || pair_distance(acc, f, estimator) <= radius_sq;
    }
    return vs;
}

}  // namespace rcb
