#include <stdexcept>

#include "raqsim/entropy.hpp"
#include "raqsim/rng.hpp"
#include "raqsim/simkit.hpp"

namespace raqsim {

namespace {

constexpr std::uint64_t kChannelTag = 0x6368616e6e656cULL;
constexpr std::uint64_t kAllocTag = 0x616c6c6f63ULL;
constexpr int kMaxRejectionDraws = 10000;

// an assignment is maximal when no view can be added or upgraded to a
// costlier option within the leftover budget
bool is_maximal(const std::vector<int>& choice, const std::vector<RateOption>& options,
                int budget) {
    int used = 0;
    for (int c : choice)
        if (c != kSkip) used += options[c].rb_cost;
    if (used > budget) return false;
    const int slack = budget - used;
    for (int c : choice) {
        const int current = c == kSkip ? 0 : options[c].rb_cost;
        for (const auto& o : options)
            if (o.rb_cost > current && o.rb_cost - current <= slack) return false;
    }
    return true;
}

}  // namespace

std::vector<int> random_maximal_assignment(const std::vector<RateOption>& options, int budget,
                                           int num_views, std::mt19937_64& rng) {
    if (num_views < 1) throw std::invalid_argument("need at least 1 view");
    std::vector<int> choice(num_views, kSkip);
    if (options.empty()) return choice;

    const int num_options = static_cast<int>(options.size());
    for (int attempt = 0; attempt < kMaxRejectionDraws; ++attempt) {
        for (int k = 0; k < num_views; ++k) choice[k] = uniform_int(rng, num_options + 1) - 1;
        if (is_maximal(choice, options, budget)) return choice;
    }

    // constructive fallback: raise random views by random affordable upgrades
    // until maximal (only reachable on pathological option sets)
    std::fill(choice.begin(), choice.end(), kSkip);
    while (!is_maximal(choice, options, budget)) {
        int used = 0;
        for (int c : choice)
            if (c != kSkip) used += options[c].rb_cost;
        std::vector<std::pair<int, int>> moves;  // (view, option)
        for (int k = 0; k < num_views; ++k) {
            const int current = choice[k] == kSkip ? 0 : options[choice[k]].rb_cost;
            for (int i = 0; i < num_options; ++i)
                if (options[i].rb_cost > current && options[i].rb_cost - current <= budget - used)
                    moves.emplace_back(k, i);
        }
        if (moves.empty()) break;
        const auto [k, i] = moves[uniform_int(rng, static_cast<int>(moves.size()))];
        choice[k] = i;
    }
    return choice;
}

EpisodeResult run_episode(const ObjectSample& obj, const Scheme& scheme,
                          const EpisodeSetup& setup, int object_id) {
    if (!setup.codebooks || !setup.model) throw std::invalid_argument("incomplete episode setup");
    const int num_views =
        setup.use_views > 0 ? setup.use_views : static_cast<int>(obj.views.size());
    if (num_views > static_cast<int>(obj.views.size()))
        throw std::invalid_argument("episode requests more views than the object has");

    EpisodeResult result;
    result.object_id = object_id;
    result.scheme = scheme_name(scheme);

    // 1. entropy feedback, from the raw views only
    result.entropies.reserve(num_views);
    for (int k = 0; k < num_views; ++k)
        result.entropies.push_back(view_entropy(obj.views[k], setup.entropy_window));

    // 2. code rate allocation at the server
    std::vector<RateOption> options = setup.options;
    if (scheme_is_vq(scheme)) {
        std::vector<RateOption> fixed;
        for (const auto& o : options)
            if (o.bits_per_index == scheme.fixed_bits) fixed.push_back(o);
        if (fixed.empty())
            throw std::invalid_argument("fixed-rate option " + std::to_string(scheme.fixed_bits) +
                                        " not present in option set");
        options = std::move(fixed);
    }
    if (scheme_is_random(scheme)) {
        auto alloc_rng = make_rng({setup.master_seed, kAllocTag,
                                   static_cast<std::uint64_t>(object_id),
                                   static_cast<std::uint64_t>(scheme.kind)});
        result.plan.choices = random_maximal_assignment(options, setup.budget, num_views,
                                                        alloc_rng);
        result.plan.total_rb = 0;
        result.plan.total_reward = 0.0;
        for (int k = num_views - 1; k >= 0; --k) {
            const int c = result.plan.choices[k];
            if (c == kSkip) continue;
            result.plan.total_rb += options[c].rb_cost;
            result.plan.total_reward =
                options[c].scale * result.entropies[k] + result.plan.total_reward;
        }
    } else if (options.empty()) {
        result.plan.choices.assign(num_views, kSkip);
    } else {
        result.plan = select_rates(result.entropies, options, setup.budget);
    }
    result.rb_used = result.plan.total_rb;

    // 3. per-view transmission at the assigned rates
    result.bits_sent.assign(num_views, 0);
    result.bit_errors.assign(num_views, 0);
    std::vector<Feature> recovered;
    for (int k = 0; k < num_views; ++k) {
        const int c = result.plan.choices[k];
        if (c == kSkip) continue;
        const RateOption& opt = options[c];
        const auto it = setup.codebooks->find(opt.bits_per_index);
        if (it == setup.codebooks->end())
            throw std::invalid_argument("no codebook for bits_per_index " +
                                        std::to_string(opt.bits_per_index));
        const Codebook& codebook = it->second;

        const IndexVector sent = quantize_feature(obj.features[k], codebook);
        const BitSequence tx_bits = indices_to_bits(sent, opt.bits_per_index);
        const SymbolFrame symbols = modulate(tx_bits, setup.modulation);

        auto chan_rng = make_rng({setup.master_seed, kChannelTag,
                                  static_cast<std::uint64_t>(object_id),
                                  static_cast<std::uint64_t>(k)});
        const ReceivedFrame received = apply_channel(symbols, setup.channel, chan_rng);

        BitSequence rx_bits;
        const auto eq = equalize(received);
        if (eq) {
            rx_bits = demodulate(*eq, setup.modulation);
            rx_bits.resize(tx_bits.size());  // drop modulation padding
        } else {
            rx_bits.assign(tx_bits.size(), 0);  // undecodable frame: erasures to 0
        }

        result.bits_sent[k] = static_cast<std::int64_t>(tx_bits.size());
        for (size_t i = 0; i < tx_bits.size(); ++i)
            if (tx_bits[i] != rx_bits[i]) ++result.bit_errors[k];

        const IndexVector got =
            bits_to_indices(rx_bits, opt.bits_per_index, static_cast<int>(sent.indices.size()));
        recovered.push_back(dequantize(got, codebook));
    }

    // 4-5. fusion and inference
    const auto fused = max_pool_fuse(recovered);
    if (fused) {
        const Prediction pred = classify(*fused, *setup.model);
        result.predicted = pred.label;
        result.correct = pred.label == obj.label;
    } else {
        result.predicted = -1;
        result.correct = false;  // nothing observed
    }
    return result;
}

}  // namespace raqsim
