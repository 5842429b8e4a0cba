#include "raqsim/allocate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "raqsim/phy.hpp"

namespace raqsim {

namespace {

void check_instance(const std::vector<double>& entropies, const std::vector<RateOption>& options,
                    int budget) {
    if (entropies.empty()) throw std::invalid_argument("need at least one view");
    if (budget < 0) throw std::invalid_argument("budget must be >= 0");
    for (double g : entropies)
        if (!(g >= 0.0)) throw std::invalid_argument("view entropies must be non-negative");
    for (const auto& o : options) {
        if (o.rb_cost < 1) throw std::invalid_argument("option rb costs must be >= 1");
        if (!(o.scale > 0.0)) throw std::invalid_argument("option scales must be positive");
    }
}

// candidate (reward, rb) strictly better than incumbent under the tie order
bool better(double reward, int rb, double best_reward, int best_rb) {
    if (reward != best_reward) return reward > best_reward;
    return rb < best_rb;
}

}  // namespace

RewardMatrix reward_matrix(const std::vector<double>& entropies,
                           const std::vector<RateOption>& options) {
    for (double g : entropies)
        if (!(g >= 0.0)) throw std::invalid_argument("view entropies must be non-negative");
    for (const auto& o : options)
        if (!(o.scale > 0.0)) throw std::invalid_argument("option scales must be positive");

    RewardMatrix rewards(entropies.size(), std::vector<double>(options.size()));
    for (size_t k = 0; k < entropies.size(); ++k)
        for (size_t i = 0; i < options.size(); ++i)
            rewards[k][i] = options[i].scale * entropies[k];
    return rewards;
}

DpTable build_dp_table(const RewardMatrix& rewards, const std::vector<RateOption>& options,
                       int budget) {
    const int num_views = static_cast<int>(rewards.size());
    const int num_options = static_cast<int>(options.size());

    DpTable table;
    table.num_views = num_views;
    table.budget = budget;
    table.cells.assign(static_cast<size_t>(num_views + 1) * (budget + 1), DpCell{});

    // Row t decides the view at position num_views - t (the first view of the
    // remaining suffix); row 0 is the empty suffix.
    for (int t = 1; t <= num_views; ++t) {
        const int k = num_views - t;
        for (int b = 0; b <= budget; ++b) {
            DpCell best;  // skip: reward/rb of the rest, unchanged
            best.reward = table.at(t - 1, b).reward;
            best.rb = table.at(t - 1, b).rb;
            best.choice = kSkip;
            for (int i = 0; i < num_options; ++i) {
                const int cost = options[i].rb_cost;
                if (cost > b) continue;
                const DpCell& rest = table.at(t - 1, b - cost);
                const double reward = rewards[k][i] + rest.reward;
                const int rb = cost + rest.rb;
                if (better(reward, rb, best.reward, best.rb)) {
                    best.reward = reward;
                    best.rb = rb;
                    best.choice = i;
                }
            }
            table.at(t, b) = best;
        }
    }
    return table;
}

AllocationPlan select_rates(const std::vector<double>& entropies,
                            const std::vector<RateOption>& options, int budget) {
    check_instance(entropies, options, budget);
    const int num_views = static_cast<int>(entropies.size());
    const RewardMatrix rewards = reward_matrix(entropies, options);
    const DpTable table = build_dp_table(rewards, options, budget);

    AllocationPlan plan;
    plan.choices.resize(num_views, kSkip);
    int b = budget;
    for (int t = num_views; t >= 1; --t) {
        const int k = num_views - t;
        const int choice = table.at(t, b).choice;
        plan.choices[k] = choice;
        if (choice != kSkip) b -= options[choice].rb_cost;
    }
    plan.total_reward = table.at(num_views, budget).reward;
    plan.total_rb = table.at(num_views, budget).rb;
    return plan;
}

AllocationPlan brute_force_select(const std::vector<double>& entropies,
                                  const std::vector<RateOption>& options, int budget) {
    check_instance(entropies, options, budget);
    const int num_views = static_cast<int>(entropies.size());
    const int num_options = static_cast<int>(options.size());

    double assignments = 1.0;
    for (int k = 0; k < num_views; ++k) assignments *= num_options + 1;
    if (assignments > 1e6)
        throw std::invalid_argument("instance too large for exhaustive enumeration");

    const RewardMatrix rewards = reward_matrix(entropies, options);

    // counter digits in {0..num_options}; 0 encodes skip, so counting order
    // is exactly lexicographic order with skip before option 0
    std::vector<int> digits(num_views, 0);
    AllocationPlan best;
    best.choices.assign(num_views, kSkip);
    bool have_best = false;

    for (;;) {
        int rb = 0;
        bool feasible = true;
        for (int k = 0; k < num_views && feasible; ++k) {
            if (digits[k] > 0) {
                rb += options[digits[k] - 1].rb_cost;
                if (rb > budget) feasible = false;
            }
        }
        if (feasible) {
            // tail-first sum: the exact addition order the DP uses
            double reward = 0.0;
            for (int k = num_views - 1; k >= 0; --k)
                if (digits[k] > 0) reward = rewards[k][digits[k] - 1] + reward;

            if (!have_best || better(reward, rb, best.total_reward, best.total_rb)) {
                have_best = true;
                best.total_reward = reward;
                best.total_rb = rb;
                for (int k = 0; k < num_views; ++k) best.choices[k] = digits[k] - 1;
            }
        }
        int pos = num_views - 1;
        while (pos >= 0 && digits[pos] == num_options) digits[pos--] = 0;
        if (pos < 0) break;
        ++digits[pos];
    }
    return best;
}

std::vector<RateOption> make_rate_options(const std::vector<std::pair<int, double>>& widths_scales,
                                          int num_subvectors, int bits_per_rb) {
    std::vector<RateOption> out;
    out.reserve(widths_scales.size());
    for (const auto& [width, scale] : widths_scales) {
        if (width < 1) throw std::invalid_argument("bits_per_index must be >= 1");
        if (!(scale > 0.0 && scale <= 1.0))
            throw std::invalid_argument("option scale must be in (0, 1]");
        RateOption o;
        o.bits_per_index = width;
        o.rb_cost = rb_cost(num_subvectors, width, bits_per_rb);
        o.scale = scale;
        out.push_back(o);
    }
    return out;
}

}  // namespace raqsim
