#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "raqsim/allocate.hpp"
#include "raqsim/config.hpp"
#include "raqsim/fuse.hpp"
#include "raqsim/phy.hpp"
#include "raqsim/quantize.hpp"
#include "raqsim/synth.hpp"

namespace raqsim {

// Everything an episode needs besides the object itself. Channel randomness
// is keyed by (master_seed, object, view) only, so schemes facing the same
// object see identical channel draws; the random-allocation stream is keyed
// by (master_seed, object, scheme).
struct EpisodeSetup {
    const std::map<int, Codebook>* codebooks = nullptr;  // by bits_per_index
    const ClassModel* model = nullptr;
    std::vector<RateOption> options;
    int budget = 0;
    ChannelConfig channel;
    Modulation modulation = Modulation::qpsk;
    int entropy_window = 3;
    int use_views = 0;  // 0 = all views of the object
    std::uint64_t master_seed = 0;
};

struct EpisodeResult {
    int object_id = 0;
    std::string scheme;
    std::vector<double> entropies;
    AllocationPlan plan;
    std::vector<std::int64_t> bits_sent;   // per view, 0 when skipped
    std::vector<std::int64_t> bit_errors;  // per view
    int rb_used = 0;
    int predicted = -1;  // -1 when no view transmitted
    bool correct = false;
};

// Uniform draw over the feasible, maximal assignments (no view can be added
// or upgraded to a costlier option within the leftover budget). Rejection
// sampling with a deterministic constructive fallback.
std::vector<int> random_maximal_assignment(const std::vector<RateOption>& options, int budget,
                                           int num_views, std::mt19937_64& rng);

// One protocol round for one object: per-view entropy, rate allocation
// (DP or random-maximal), per-view quantize/serialize/modulate/fade/equalize/
// demodulate/recover, max-pool fusion and classification.
EpisodeResult run_episode(const ObjectSample& obj, const Scheme& scheme,
                          const EpisodeSetup& setup, int object_id);

// Per-seed artifacts shared across cells: dataset, codebooks per option
// width, and centroid models per view count.
struct SeedContext {
    std::vector<ObjectSample> train;
    std::vector<ObjectSample> test;
    std::map<int, Codebook> codebooks;
    std::map<int, ClassModel> models;  // by view count
};

SeedContext build_seed_context(const ExperimentConfig& cfg, std::uint64_t seed);

struct CellStats {
    std::string scheme;
    int views = 0;
    int budget = 0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double mean_reward = 0.0;
    double mean_rb_used = 0.0;
    double mean_bit_error_rate = 0.0;
    std::vector<EpisodeResult> episodes;  // in object order
};

CellStats run_cell(const ExperimentConfig& cfg, const SeedContext& ctx, const Scheme& scheme,
                   int views, int budget, double snr_db, std::uint64_t seed);

// Full sweep: one row per (scheme, views, budget, snr, seed), rows ordered by
// the config's sweep lists. Byte-identical output for a given config at any
// thread count.
std::vector<CellStats> run_experiment(const ExperimentConfig& cfg, int threads = 1);

std::string to_csv(const std::vector<CellStats>& rows);
void write_csv(const std::vector<CellStats>& rows, const std::string& path);

}  // namespace raqsim
