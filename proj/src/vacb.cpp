#include "rcb/vacb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rcb/errors.hpp"

namespace rcb {

double vacb_iota_prime(double noise_range, double range_bound, double sigma_eta, double c_eta,
                       double cover_residue, std::size_t num_functions, int num_levels,
                       std::uint64_t horizon, double delta) {
    const double log_arg = std::log(noise_range) + std::log(range_bound) +
                           std::log(sigma_eta * sigma_eta + c_eta + cover_residue + 1.0) +
                           std::log(static_cast<double>(num_functions)) +
                           std::log(static_cast<double>(std::max(1, num_levels))) +
                           std::log(static_cast<double>(horizon)) - std::log(delta);
    return std::sqrt(std::max(1.0, log_arg));
}

VacbLevel::VacbLevel(int l, std::shared_ptr<const HypothesisClass> cls)
    : level(l),
      lambda(std::ldexp(1.0, -2 * l)),
      beta_hat(std::ldexp(1.0, -l + 1)),
      accumulator(cls),
      version_space(full_version_space(cls->size())) {}

Vacb::Vacb(std::shared_ptr<const HypothesisClass> cls, AgentConfig config, ProblemInfo problem)
    : cls_(std::move(cls)), config_(config), problem_(problem) {
    config_.validate();
    const double t = static_cast<double>(std::max<std::uint64_t>(1, problem_.horizon));
    gamma_ = 1.0 / (std::max(problem_.sigma_eta, 1.0 / std::sqrt(t)) * std::pow(t, 1.5));
    top_level_ = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / gamma_))));
    iota_prime_ = vacb_iota_prime(problem_.noise_range, cls_->range_bound(), problem_.sigma_eta,
                                  problem_.c_eta, config_.cover_residue, cls_->size(), top_level_,
                                  problem_.horizon, config_.delta);
    first_level_ = std::max(
        1, static_cast<int>(std::ceil(std::log2(1076.0 * iota_prime_ * config_.constant_scale))));
    top_level_ = std::max(top_level_, first_level_);
    for (int l = first_level_; l <= top_level_; ++l) levels_.emplace_back(l, cls_);
}

const VacbLevel& Vacb::level_state(int l) const {
    if (l < first_level_ || l > top_level_)
        throw PreconditionError("vacb: level " + std::to_string(l) + " out of range");
    return levels_[static_cast<std::size_t>(l - first_level_)];
}

VacbLevel& Vacb::mutable_level(int l) { return const_cast<VacbLevel&>(level_state(l)); }

bool Vacb::covers(FunctionId f) const {
    return std::all_of(levels_.begin(), levels_.end(),
                       [f](const VacbLevel& s) { return s.version_space.contains(f); });
}

double Vacb::uncertainty(int level, ActionId x) const {
    const VacbLevel& s = level_state(level);
    return eluder_coefficient(s.accumulator, s.version_space.active, x, 1.0, s.lambda);
}

Selection Vacb::select(std::span<const ActionId> context) {
    if (context.empty()) throw PreconditionError("select: empty context");
    std::vector<ActionId> surviving(context.begin(), context.end());
    std::vector<double> d(surviving.size());
    for (int l = first_level_; l <= top_level_; ++l) {
        const VacbLevel& s = level_state(l);
        for (std::size_t k = 0; k < surviving.size(); ++k) d[k] = uncertainty(l, surviving[k]);
        const double scale = std::ldexp(1.0, -l);

        if (std::all_of(d.begin(), d.end(), [this](double v) { return v <= gamma_; })) {
            const auto choice = optimistic_argmax(*cls_, s.version_space.active, surviving);
            pending_ = Pending{{choice.action, SelectionMode::exploit, l}, 0.0, 0.0};
            return pending_->selection;
        }
        std::optional<std::size_t> pick;
        for (std::size_t k = 0; k < surviving.size(); ++k)
            if (d[k] > scale && (!pick || surviving[k] < surviving[*pick])) pick = k;
        if (pick) {
            const double dk = d[*pick];
            pending_ = Pending{{surviving[*pick], SelectionMode::explore, l}, std::ldexp(dk, l), dk};
            return pending_->selection;
        }
        if (l == top_level_) {
            const auto choice = optimistic_argmax(*cls_, s.version_space.active, surviving);
            pending_ = Pending{{choice.action, SelectionMode::exploit, l}, 0.0, 0.0};
            return pending_->selection;
        }
        // eliminate
        const FunctionId fh = s.version_space.estimator;
        double top = -std::numeric_limits<double>::infinity();
        for (ActionId x : surviving) top = std::max(top, (*cls_)(fh, x));
        const double cut = top - 2.0 * scale * s.beta_hat;
        std::vector<ActionId> next;
        for (ActionId x : surviving)
            if ((*cls_)(fh, x) >= cut) next.push_back(x);
        surviving.swap(next);
        d.resize(surviving.size());
    }
    throw PreconditionError("vacb: no level available");  // unreachable with L >= l_star
}

double Vacb::bonus(int level) const {
    const VacbLevel& s = level_state(level);
    const double se2 = problem_.sigma_eta * problem_.sigma_eta;
    return config_.constant_scale * (14.0 * iota_prime_ * (2.0 * se2 + problem_.c_eta) +
                                     43.0 * config_.cover_residue + 268.0 * s.lambda);
}

double Vacb::theta_var(int level) const {
    const VacbLevel& s = level_state(level);
    const double se2 = problem_.sigma_eta * problem_.sigma_eta;
    const double lf = cls_->range_bound();
    return 1.0 / (4.0 * (2.0 * se2 + problem_.c_eta + lf * lf +
                         std::ldexp(1.0, -2 * level + 4) * s.beta_hat * s.beta_hat));
}

double Vacb::var_estimate(int level) const {
    const VacbLevel& s = level_state(level);
    if (s.history.empty()) throw PreconditionError("vacb: variance estimate of an empty level");
    const FunctionId fh = s.version_space.estimator;
    const std::size_t n = s.history.size();
    scratch_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (s.history.rewards[i] - (*cls_)(fh, s.history.actions[i])) / s.history.weights[i];
        scratch_[i] = r * r;
    }
    const double robust = catoni_mean(scratch_, theta_var(level), {config_.catoni_tolerance, 200});
    return std::max(0.0, static_cast<double>(n) * robust + bonus(level));
}

double Vacb::theta_prime(int level, FunctionId f, FunctionId g) const {
    const VacbLevel& s = level_state(level);
    const double v = s.accumulator.pair_distance(f, g);
    const double scale2 = std::ldexp(1.0, -2 * level);
    return config_.constant_scale * iota_prime_ /
           std::sqrt(scale2 * s.beta_hat * s.beta_hat * (s.var_estimate + v) + scale2 * scale2);
}

void Vacb::update_level(VacbLevel& s, ActionId x, double reward, double sigma) {
    const double w = pending_->weight;
    s.rounds.push_back(round_);
    s.history.push_back(x, reward, w);
    s.oracle_variances.push_back(sigma * sigma);
    s.accumulator.update(x, w);

    // variance estimate with the previous estimator and radius
    s.var_estimate = var_estimate(s.level);
    s.bonus = bonus(s.level);

    const int l = s.level;
    const FunctionId estimator = saddle_point_fit(
        s.accumulator, s.history, s.version_space.active, static_cast<double>(s.history.size()),
        [this, l](FunctionId f, FunctionId g) { return theta_prime(l, f, g); },
        {config_.catoni_tolerance, 200}, scratch_);

    const double scale2 = std::ldexp(1.0, -2 * l);
    const double beta_sq =
        config_.constant_scale * (2880.0 * iota_prime_ * iota_prime_ * scale2 * s.var_estimate +
                                  60.0 * iota_prime_ * scale2 + 12.0 * config_.cover_residue_2 +
                                  2.0 * s.lambda);
    s.beta_hat = std::sqrt(beta_sq);
    s.version_space = refit_version_space(s.accumulator, s.version_space.active, estimator,
                                          std::max(0.0, beta_sq - s.lambda));

    double oracle_sum = 0.0;
    for (std::size_t i = 0; i < s.history.size(); ++i)
        oracle_sum += s.oracle_variances[i] / (s.history.weights[i] * s.history.weights[i]);
    variance_log_.push_back({round_, l, s.var_estimate, s.bonus, oracle_sum});
}

void Vacb::observe(ActionId x, double reward, double sigma) {
    if (!pending_) throw PreconditionError("vacb: observe without select");
    if (pending_->selection.action != x) throw PreconditionError("vacb: observed action was not selected");
    ++round_;
    const int l = *pending_->selection.level;
    VacbLevel& s = mutable_level(l);
    if (pending_->selection.mode == SelectionMode::explore) {
        explore_log_.push_back({round_, l, x, pending_->uncertainty, pending_->weight});
        update_level(s, x, reward, sigma);
        last_ = RoundDiagnostics{pending_->weight, l, s.version_space.active_count(), s.beta_hat, false};
    } else {
        last_ = RoundDiagnostics{std::nullopt, l, s.version_space.active_count(), s.beta_hat, false};
    }
    pending_.reset();
}

}  // namespace rcb
