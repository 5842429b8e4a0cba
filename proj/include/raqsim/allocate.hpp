#pragma once

#include <utility>
#include <vector>

namespace raqsim {

// One discrete code-rate option: index width in bits, its resource-block
// cost, and the reward scaling factor applied to a view's entropy.
struct RateOption {
    int bits_per_index = 0;
    int rb_cost = 0;
    double scale = 1.0;
};

// choices[k] is an option index or kSkip; a skipped view transmits nothing.
inline constexpr int kSkip = -1;

struct AllocationPlan {
    std::vector<int> choices;
    int total_rb = 0;
    double total_reward = 0.0;
};

// rewards[k][i] = scale_i * entropy_k
using RewardMatrix = std::vector<std::vector<double>>;

RewardMatrix reward_matrix(const std::vector<double>& entropies,
                           const std::vector<RateOption>& options);

// Table over (views remaining, budget remaining). Row t covers the last t
// views; cell value is the best achievable (reward, rb) for that suffix, with
// `choice` the tie-broken option for the first view of the suffix.
struct DpCell {
    double reward = 0.0;
    int rb = 0;
    int choice = kSkip;
};

struct DpTable {
    int num_views = 0;
    int budget = 0;
    std::vector<DpCell> cells;  // (num_views+1) x (budget+1)

    const DpCell& at(int views_remaining, int b) const {
        return cells[static_cast<size_t>(views_remaining) * (budget + 1) + b];
    }
    DpCell& at(int views_remaining, int b) {
        return cells[static_cast<size_t>(views_remaining) * (budget + 1) + b];
    }
};

DpTable build_dp_table(const RewardMatrix& rewards, const std::vector<RateOption>& options,
                       int budget);

// Chooses one option (or skip) per view maximizing total reward under the
// resource-block budget. Ties break to the smaller total cost, then to the
// lexicographically smallest choice sequence with skip ordered before
// option 0. An empty option set yields the all-skip plan.
AllocationPlan select_rates(const std::vector<double>& entropies,
                            const std::vector<RateOption>& options, int budget);

// Exhaustive oracle with identical tie-breaking; rejects instances with more
// than 10^6 assignments.
AllocationPlan brute_force_select(const std::vector<double>& entropies,
                                  const std::vector<RateOption>& options, int budget);

// Builds options from (bits_per_index, scale) pairs; rb costs are derived
// from the sub-vector count and RB capacity so they always agree with the
// link-layer accounting.
std::vector<RateOption> make_rate_options(const std::vector<std::pair<int, double>>& widths_scales,
                                          int num_subvectors, int bits_per_rb);

}  // namespace raqsim
