#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "raqsim/dataset_io.hpp"
#include "raqsim/rng.hpp"
#include "raqsim/simkit.hpp"

namespace raqsim {

namespace {

constexpr std::uint64_t kDataTag = 0x64617461ULL;
constexpr std::uint64_t kTestTag = 0x74657374ULL;
constexpr std::uint64_t kExtractTag = 0x65787472ULL;
constexpr std::uint64_t kCodebookTag = 0x636f6465ULL;

std::vector<int> sorted_unique_widths(const ExperimentConfig& cfg) {
    std::vector<int> widths;
    for (const auto& [w, beta] : cfg.options) widths.push_back(w);
    std::sort(widths.begin(), widths.end());
    widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
    return widths;
}

// Noiseless fused feature of the first `views` views at the given rate.
Feature clean_fused(const ObjectSample& obj, int views, const Codebook& codebook) {
    std::vector<Feature> parts;
    parts.reserve(views);
    for (int k = 0; k < views; ++k)
        parts.push_back(dequantize(quantize_feature(obj.features[k], codebook), codebook));
    return *max_pool_fuse(parts);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

SeedContext build_seed_context(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedContext ctx;
    const int k_max = cfg.max_views();
    const std::uint64_t extractor_seed = mix_seed({seed, kExtractTag});

    if (!cfg.train_dir.empty()) {
        ctx.train = load_dataset_dir(cfg.train_dir, k_max, cfg.grid_h, cfg.grid_w, cfg.feat_dim,
                                     extractor_seed);
        ctx.test = load_dataset_dir(cfg.test_dir, k_max, cfg.grid_h, cfg.grid_w, cfg.feat_dim,
                                    extractor_seed);
    } else {
        const SynthParams params = cfg.synth_params(k_max);
        ctx.train = synth_dataset(params, cfg.train_count, mix_seed({seed, kDataTag}), cfg.grid_h,
                                  cfg.grid_w, cfg.feat_dim, extractor_seed);
        ctx.test = synth_dataset(params, cfg.test_count, mix_seed({seed, kDataTag, kTestTag}),
                                 cfg.grid_h, cfg.grid_w, cfg.feat_dim, extractor_seed);
    }

    // shared base codebook from all training sub-vectors, derived per rate
    std::vector<std::vector<double>> samples;
    for (const auto& obj : ctx.train)
        for (const auto& feat : obj.features)
            for (int m = 0; m < feat.num_subvectors; ++m) {
                std::vector<double> sub(feat.dim);
                for (int d = 0; d < feat.dim; ++d) sub[d] = feat.at(m, d);
                samples.push_back(std::move(sub));
            }
    if (static_cast<int>(samples.size()) > cfg.codebook_sample_cap) {
        const size_t stride = (samples.size() + cfg.codebook_sample_cap - 1) /
                              static_cast<size_t>(cfg.codebook_sample_cap);
        std::vector<std::vector<double>> kept;
        for (size_t i = 0; i < samples.size(); i += stride) kept.push_back(samples[i]);
        samples = std::move(kept);
    }

    const std::vector<int> widths = sorted_unique_widths(cfg);
    const int base_width = widths.back();
    const Codebook base =
        build_base_codebook(samples, 1 << base_width, mix_seed({seed, kCodebookTag}));
    for (int w : widths) ctx.codebooks.emplace(w, derive_codebook(base, 1 << w));

    // per view-count centroid models, trained on noiseless top-rate fusion
    const Codebook& top = ctx.codebooks.at(base_width);
    for (int k : cfg.views) {
        if (ctx.models.count(k)) continue;
        if (k > k_max) throw std::invalid_argument("view sweep exceeds dataset views");
        std::vector<Feature> fused;
        std::vector<int> labels;
        fused.reserve(ctx.train.size());
        for (const auto& obj : ctx.train) {
            fused.push_back(clean_fused(obj, k, top));
            labels.push_back(obj.label);
        }
        ctx.models.emplace(k, fit_centroids(fused, labels, cfg.classes, cfg.tau));
    }
    return ctx;
}

CellStats run_cell(const ExperimentConfig& cfg, const SeedContext& ctx, const Scheme& scheme,
                   int views, int budget, double snr_db, std::uint64_t seed) {
    EpisodeSetup setup;
    setup.codebooks = &ctx.codebooks;
    setup.model = &ctx.models.at(views);
    setup.options = make_rate_options(cfg.options, cfg.grid_h * cfg.grid_w,
                                      cfg.effective_bits_per_rb());
    setup.budget = budget;
    setup.channel = ChannelConfig::from_snr_db(snr_db, cfg.fading);
    setup.modulation = cfg.modulation;
    setup.entropy_window = cfg.entropy_window;
    setup.use_views = views;
    setup.master_seed = seed;

    CellStats stats;
    stats.scheme = scheme_name(scheme);
    stats.views = views;
    stats.budget = budget;
    stats.snr_db = snr_db;
    stats.seed = seed;

    std::int64_t correct = 0, total_bits = 0, total_errors = 0;
    double reward_sum = 0.0, rb_sum = 0.0;
    stats.episodes.reserve(ctx.test.size());
    for (size_t i = 0; i < ctx.test.size(); ++i) {
        EpisodeResult ep = run_episode(ctx.test[i], scheme, setup, static_cast<int>(i));
        correct += ep.correct ? 1 : 0;
        reward_sum += ep.plan.total_reward;
        rb_sum += ep.rb_used;
        for (int k = 0; k < static_cast<int>(ep.bits_sent.size()); ++k) {
            total_bits += ep.bits_sent[k];
            total_errors += ep.bit_errors[k];
        }
        stats.episodes.push_back(std::move(ep));
    }
    const double n = static_cast<double>(ctx.test.size());
    stats.accuracy = correct / n;
    stats.mean_reward = reward_sum / n;
    stats.mean_rb_used = rb_sum / n;
    stats.mean_bit_error_rate =
        total_bits > 0 ? static_cast<double>(total_errors) / static_cast<double>(total_bits) : 0.0;
    return stats;
}

namespace {

// index-sharded parallel for; the first worker exception is rethrown after
// all threads join
template <typename Fn>
void parallel_for(size_t count, size_t threads, Fn&& fn) {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const size_t workers = std::min(threads, count);
    for (size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            try {
                for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<CellStats> run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    if (threads < 1) threads = 1;

    // contexts per seed, built in parallel (each is a pure function of
    // (cfg, seed) so thread count cannot change any result)
    std::vector<SeedContext> contexts(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), threads,
                 [&](size_t i) { contexts[i] = build_seed_context(cfg, cfg.seeds[i]); });

    struct Cell {
        size_t scheme_i, view_i, budget_i, snr_i, seed_i;
    };
    std::vector<Cell> cells;
    for (size_t s = 0; s < cfg.schemes.size(); ++s)
        for (size_t v = 0; v < cfg.views.size(); ++v)
            for (size_t b = 0; b < cfg.budgets.size(); ++b)
                for (size_t n = 0; n < cfg.snrs_db.size(); ++n)
                    for (size_t sd = 0; sd < cfg.seeds.size(); ++sd)
                        cells.push_back({s, v, b, n, sd});

    std::vector<CellStats> rows(cells.size());
    parallel_for(cells.size(), threads, [&](size_t i) {
        const Cell& c = cells[i];
        rows[i] = run_cell(cfg, contexts[c.seed_i], cfg.schemes[c.scheme_i], cfg.views[c.view_i],
                           cfg.budgets[c.budget_i], cfg.snrs_db[c.snr_i], cfg.seeds[c.seed_i]);
    });
    return rows;
}

std::string to_csv(const std::vector<CellStats>& rows) {
    std::string out =
        "scheme,views,rb_budget,snr_db,seed,accuracy,mean_reward,mean_rb_used,"
        "mean_bit_error_rate\n";
    for (const auto& r : rows) {
        out += r.scheme;
        out += ',' + std::to_string(r.views);
        out += ',' + std::to_string(r.budget);
        out += ',' + format_double(r.snr_db);
        out += ',' + std::to_string(r.seed);
        out += ',' + format_double(r.accuracy);
        out += ',' + format_double(r.mean_reward);
        out += ',' + format_double(r.mean_rb_used);
        out += ',' + format_double(r.mean_bit_error_rate);
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<CellStats>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output path " + path);
    f << to_csv(rows);
    if (!f) throw std::runtime_error("write failed for output path " + path);
}

}  // namespace raqsim
