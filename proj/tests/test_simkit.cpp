#include <doctest.h>

#include <set>

#include "raqsim/entropy.hpp"
#include "raqsim/rng.hpp"
#include "raqsim/simkit.hpp"

using namespace raqsim;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg = default_config();
    cfg.classes = 4;
    cfg.train_count = 24;
    cfg.test_count = 12;
    cfg.codebook_sample_cap = 1024;
    cfg.schemes = {parse_scheme("raq-dp", 6), parse_scheme("raq-random", 6),
                   parse_scheme("vq-dp", 6), parse_scheme("vq-random", 6)};
    cfg.views = {3};
    cfg.budgets = {33};
    cfg.snrs_db = {5.0};
    cfg.seeds = {11};
    return cfg;
}

EpisodeSetup make_setup(const ExperimentConfig& cfg, const SeedContext& ctx, int views,
                        int budget, double snr, std::uint64_t seed) {
    EpisodeSetup setup;
    setup.codebooks = &ctx.codebooks;
    setup.model = &ctx.models.at(views);
    setup.options = make_rate_options(cfg.options, cfg.grid_h * cfg.grid_w,
                                      cfg.effective_bits_per_rb());
    setup.budget = budget;
    setup.channel = ChannelConfig::from_snr_db(snr, cfg.fading);
    setup.modulation = cfg.modulation;
    setup.entropy_window = cfg.entropy_window;
    setup.use_views = views;
    setup.master_seed = seed;
    return setup;
}

}  // namespace

TEST_CASE("synthetic dataset is deterministic and well-shaped") {
    SynthParams params;
    params.classes = 3;
    params.views = 2;
    const auto a = synth_dataset(params, 9, 42, 7, 7, 8, 99);
    const auto b = synth_dataset(params, 9, 42, 7, 7, 8, 99);
    REQUIRE(a.size() == 9);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == b[i].label);
        REQUIRE(a[i].views.size() == 2);
        REQUIRE(a[i].features.size() == 2);
        for (int v = 0; v < 2; ++v) {
            CHECK(a[i].views[v].pixels == b[i].views[v].pixels);
            CHECK(a[i].features[v].values == b[i].features[v].values);
            CHECK(a[i].views[v].height == params.height);
            CHECK(a[i].views[v].width == params.width);
            CHECK(a[i].views[v].levels == params.levels);
            for (int p : a[i].views[v].pixels) {
                CHECK(p >= 0);
                CHECK(p < params.levels);
            }
        }
    }
    const auto c = synth_dataset(params, 9, 43, 7, 7, 8, 99);
    CHECK(a[0].views[0].pixels != c[0].views[0].pixels);
}

TEST_CASE("higher texture density raises mean view entropy") {
    SynthParams params;
    params.classes = 4;
    params.views = 3;
    params.density = 0.5;
    params.density_view_step = 0.4;
    const auto data = synth_dataset(params, 120, 7, 7, 7, 8, 99);
    double mean_low = 0.0, mean_high = 0.0;
    for (const auto& obj : data) {
        mean_low += view_entropy(obj.views.front(), 3);
        mean_high += view_entropy(obj.views.back(), 3);
    }
    CHECK(mean_high / data.size() > mean_low / data.size());
}

TEST_CASE("feature extraction is linear and deterministic") {
    GrayImage img(8, 8, 256);
    for (int i = 0; i < 64; ++i) img.pixels[i] = (i * 3) % 256;

    const Feature a = extract_features(img, 4, 4, 5, 7);
    const Feature b = extract_features(img, 4, 4, 5, 7);
    CHECK(a.values == b.values);

    GrayImage zeros(8, 8, 256);
    const Feature z = extract_features(zeros, 4, 4, 5, 7);
    for (double v : z.values) CHECK(v == 0.0);

    // doubling pixel values doubles every feature element
    GrayImage doubled = img;
    for (auto& p : doubled.pixels) p *= 2;
    const Feature d = extract_features(doubled, 4, 4, 5, 7);
    for (size_t i = 0; i < a.values.size(); ++i)
        CHECK(d.values[i] == doctest::Approx(2.0 * a.values[i]).epsilon(1e-12));

    CHECK_THROWS_AS(extract_features(img, 3, 4, 5, 7), std::invalid_argument);
}

TEST_CASE("random maximal assignments are feasible and maximal") {
    const auto options = make_rate_options({{4, 0.75}, {6, 0.85}, {8, 0.9}}, 49, 21);
    auto rng = make_rng({5001});
    for (int round = 0; round < 200; ++round) {
        const int budget = uniform_int(rng, 61);
        const int views = 1 + uniform_int(rng, 4);
        const auto choice = random_maximal_assignment(options, budget, views, rng);
        REQUIRE(static_cast<int>(choice.size()) == views);

        int used = 0;
        for (int c : choice) {
            CHECK(c >= kSkip);
            CHECK(c < static_cast<int>(options.size()));
            if (c != kSkip) used += options[c].rb_cost;
        }
        CHECK(used <= budget);
        // no view can be added or upgraded within the slack
        for (int c : choice) {
            const int current = c == kSkip ? 0 : options[c].rb_cost;
            for (const auto& o : options)
                CHECK(!(o.rb_cost > current && o.rb_cost - current <= budget - used));
        }
    }
}

TEST_CASE("noiseless ample-budget episode equals the offline pipeline") {
    ExperimentConfig cfg = tiny_config();
    cfg.fading = Fading::awgn_only;
    const SeedContext ctx = build_seed_context(cfg, 11);

    EpisodeSetup setup = make_setup(cfg, ctx, 3, 3 * 19, 5.0, 11);
    setup.channel = ChannelConfig::from_noise_variance(0.0, Fading::awgn_only);

    const Scheme raq_dp = parse_scheme("raq-dp", cfg.vq_bits);
    for (int i = 0; i < 5; ++i) {
        const ObjectSample& obj = ctx.test[i];
        const EpisodeResult ep = run_episode(obj, raq_dp, setup, i);

        // every view transmits at the top rate and nothing is corrupted
        for (std::int64_t e : ep.bit_errors) CHECK(e == 0);
        CHECK(ep.rb_used == 3 * 19);

        const Codebook& top = ctx.codebooks.at(8);
        std::vector<Feature> offline;
        for (int k = 0; k < 3; ++k)
            offline.push_back(dequantize(quantize_feature(obj.features[k], top), top));
        const Prediction pred = classify(*max_pool_fuse(offline), ctx.models.at(3));
        CHECK(ep.predicted == pred.label);
        CHECK(ep.correct == (pred.label == obj.label));
    }
}

TEST_CASE("episode with an unaffordable budget skips everything and scores incorrect") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, 9, 5.0, 11);

    for (const char* name : {"raq-dp", "raq-random", "vq-dp", "vq-random"}) {
        const EpisodeResult ep = run_episode(ctx.test[0], parse_scheme(name, cfg.vq_bits), setup,
                                             0);
        CHECK(ep.rb_used == 0);
        CHECK(ep.predicted == -1);
        CHECK(!ep.correct);
        for (int c : ep.plan.choices) CHECK(c == kSkip);
    }
}

TEST_CASE("episodes are reproducible and respect the budget across schemes") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, 33, 5.0, 11);

    for (const char* name : {"raq-dp", "raq-random", "vq-dp", "vq-random"}) {
        const Scheme scheme = parse_scheme(name, cfg.vq_bits);
        for (int i = 0; i < 8; ++i) {
            const EpisodeResult a = run_episode(ctx.test[i], scheme, setup, i);
            const EpisodeResult b = run_episode(ctx.test[i], scheme, setup, i);
            CHECK(a.plan.choices == b.plan.choices);
            CHECK(a.bit_errors == b.bit_errors);
            CHECK(a.predicted == b.predicted);
            CHECK(a.rb_used <= 33);
            for (int k = 0; k < 3; ++k) CHECK(a.bit_errors[k] <= a.bits_sent[k]);
        }
    }
}

TEST_CASE("allocation is causal: it sees entropies, never features or channel") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, 33, 5.0, 11);

    ObjectSample tampered = ctx.test[0];
    for (auto& feat : tampered.features)
        for (auto& v : feat.values) v += 17.0;

    const Scheme raq_dp = parse_scheme("raq-dp", cfg.vq_bits);
    const EpisodeResult original = run_episode(ctx.test[0], raq_dp, setup, 0);
    const EpisodeResult modified = run_episode(tampered, raq_dp, setup, 0);
    CHECK(original.entropies == modified.entropies);
    CHECK(original.plan.choices == modified.plan.choices);

    EpisodeSetup cold = setup;
    cold.channel = ChannelConfig::from_snr_db(-10.0, cfg.fading);
    const EpisodeResult noisy = run_episode(ctx.test[0], raq_dp, cold, 0);
    CHECK(noisy.plan.choices == original.plan.choices);
}

TEST_CASE("DP reward dominates random allocation on every episode") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, 33, 5.0, 11);

    const Scheme dp = parse_scheme("raq-dp", cfg.vq_bits);
    const Scheme rnd = parse_scheme("raq-random", cfg.vq_bits);
    for (size_t i = 0; i < ctx.test.size(); ++i) {
        const EpisodeResult a = run_episode(ctx.test[i], dp, setup, static_cast<int>(i));
        const EpisodeResult b = run_episode(ctx.test[i], rnd, setup, static_cast<int>(i));
        CHECK(a.plan.total_reward >= b.plan.total_reward);
    }
}

TEST_CASE("schemes share channel randomness: identical plans give identical results") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    // budget exactly affords two mid-rate views for both schemes under equal
    // entropies; when plans agree, recovered bits must agree too
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, 33, 5.0, 11);

    const Scheme raq = parse_scheme("raq-dp", cfg.vq_bits);
    const Scheme vq = parse_scheme("vq-dp", cfg.vq_bits);
    int compared = 0;
    for (size_t i = 0; i < ctx.test.size(); ++i) {
        const EpisodeResult a = run_episode(ctx.test[i], raq, setup, static_cast<int>(i));
        const EpisodeResult b = run_episode(ctx.test[i], vq, setup, static_cast<int>(i));
        // map vq choices (restricted option set) back to bit widths
        std::vector<int> a_widths, b_widths;
        for (int c : a.plan.choices) a_widths.push_back(c == kSkip ? 0 : setup.options[c].bits_per_index);
        for (int c : b.plan.choices) b_widths.push_back(c == kSkip ? 0 : cfg.vq_bits);
        if (a_widths == b_widths) {
            ++compared;
            CHECK(a.bit_errors == b.bit_errors);
            CHECK(a.predicted == b.predicted);
        }
    }
    INFO("episodes with matching plans: " << compared);
}

TEST_CASE("at B = K * mid cost, raq-dp and vq-dp agree plan by plan") {
    ExperimentConfig cfg = tiny_config();
    const SeedContext ctx = build_seed_context(cfg, 11);
    const int budget = 3 * 14;
    const EpisodeSetup setup = make_setup(cfg, ctx, 3, budget, 5.0, 11);

    // with equal entropies the exhaustive oracle already prefers w=6 per view
    const AllocationPlan equal =
        brute_force_select({5.0, 5.0, 5.0}, setup.options, budget);
    CHECK(equal.choices == std::vector<int>{1, 1, 1});

    const Scheme raq = parse_scheme("raq-dp", cfg.vq_bits);
    const Scheme vq = parse_scheme("vq-dp", cfg.vq_bits);
    int raq_correct = 0, vq_correct = 0;
    for (size_t i = 0; i < ctx.test.size(); ++i) {
        const EpisodeResult a = run_episode(ctx.test[i], raq, setup, static_cast<int>(i));
        const EpisodeResult b = run_episode(ctx.test[i], vq, setup, static_cast<int>(i));
        // oracle confirms the full option set still picks the fixed rate
        const AllocationPlan want = brute_force_select(a.entropies, setup.options, budget);
        CHECK(a.plan.choices == want.choices);
        if (want.choices == std::vector<int>{1, 1, 1}) {
            CHECK(a.predicted == b.predicted);  // same plan, shared channel draws
        }
        raq_correct += a.correct;
        vq_correct += b.correct;
    }
    CHECK(raq_correct == vq_correct);
}

TEST_CASE("noiseless ample-budget accuracy is non-decreasing in the view count") {
    ExperimentConfig cfg = tiny_config();
    cfg.classes = 4;
    cfg.train_count = 40;
    cfg.test_count = 25;
    cfg.codebook_sample_cap = 2048;
    cfg.views = {1, 2, 3};

    double mean_acc[4] = {0, 0, 0, 0};
    const int num_seeds = 20;
    for (int s = 1; s <= num_seeds; ++s) {
        const SeedContext ctx = build_seed_context(cfg, 100 + s);
        for (int k = 1; k <= 3; ++k) {
            EpisodeSetup setup = make_setup(cfg, ctx, k, k * 19, 5.0, 100 + s);
            setup.channel = ChannelConfig::from_noise_variance(0.0, Fading::awgn_only);
            const Scheme raq = parse_scheme("raq-dp", cfg.vq_bits);
            int correct = 0;
            for (size_t i = 0; i < ctx.test.size(); ++i)
                correct += run_episode(ctx.test[i], raq, setup, static_cast<int>(i)).correct;
            mean_acc[k] += static_cast<double>(correct) / ctx.test.size();
        }
    }
    for (int k = 1; k <= 3; ++k) mean_acc[k] /= num_seeds;
    CHECK(mean_acc[2] >= mean_acc[1]);
    CHECK(mean_acc[3] >= mean_acc[2]);
}

TEST_CASE("run_experiment emits one ordered row per cell") {
    ExperimentConfig cfg = tiny_config();
    cfg.views = {1, 2, 3};
    cfg.seeds = {11, 12, 13, 14, 15};
    cfg.budgets = {33};
    const auto rows = run_experiment(cfg, 4);
    REQUIRE(rows.size() == 60);  // 4 schemes x 3 view counts x 5 seeds

    size_t i = 0;
    for (const auto& scheme : cfg.schemes)
        for (int v : cfg.views)
            for (std::uint64_t seed : cfg.seeds) {
                CHECK(rows[i].scheme == scheme_name(scheme));
                CHECK(rows[i].views == v);
                CHECK(rows[i].seed == seed);
                CHECK(rows[i].accuracy >= 0.0);
                CHECK(rows[i].accuracy <= 1.0);
                ++i;
            }
}

TEST_CASE("experiment output is byte-identical across runs and thread counts") {
    ExperimentConfig cfg = tiny_config();
    cfg.seeds = {11, 12, 13};
    const std::string csv1 = to_csv(run_experiment(cfg, 1));
    const std::string csv2 = to_csv(run_experiment(cfg, 1));
    const std::string csv4 = to_csv(run_experiment(cfg, 4));
    CHECK(csv1 == csv2);
    CHECK(csv1 == csv4);
}

TEST_CASE("16-QAM episodes run the full chain and stay reproducible") {
    ExperimentConfig cfg = tiny_config();
    cfg.modulation = Modulation::qam16;
    cfg.bits_per_rb = 0;  // derive 672 bits per RB from the constellation
    const SeedContext ctx = build_seed_context(cfg, 11);
    EpisodeSetup setup = make_setup(cfg, ctx, 3, 3, 5.0, 11);
    REQUIRE(setup.options[0].rb_cost == 1);  // 49*4 bits fit one 672-bit RB

    const Scheme raq = parse_scheme("raq-dp", cfg.vq_bits);
    const EpisodeResult a = run_episode(ctx.test[0], raq, setup, 0);
    const EpisodeResult b = run_episode(ctx.test[0], raq, setup, 0);
    CHECK(a.scheme == "raq-dp");
    CHECK(a.rb_used == 3);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.predicted == b.predicted);
}

TEST_CASE("write_csv reports unwritable output paths") {
    CHECK_THROWS_AS(write_csv({}, "/nonexistent_dir/results.csv"), std::runtime_error);
}

TEST_CASE("worker-thread failures surface as exceptions") {
    ExperimentConfig cfg = tiny_config();
    cfg.train_dir = "/nonexistent_dataset_dir";
    cfg.test_dir = "/nonexistent_dataset_dir";
    cfg.seeds = {1, 2, 3};
    CHECK_THROWS_AS(run_experiment(cfg, 4), std::runtime_error);
}

TEST_CASE("config round trip through the parser") {
    const ExperimentConfig cfg = parse_config_text(
        "classes = 4\n"
        "train_count = 24\n"
        "test_count = 8\n"
        "options = 4:0.75, 6:0.85, 8:0.9\n"
        "schemes = raq-dp, vq-dp\n"
        "views = 1, 3\n"
        "budgets = 28, 33\n"
        "snrs_db = 5\n"
        "seeds = 1, 2\n"
        "bits_per_rb = 21\n"
        "# trailing comment\n");
    CHECK(cfg.classes == 4);
    CHECK(cfg.schemes.size() == 2);
    CHECK(cfg.views == std::vector<int>{1, 3});
    CHECK(cfg.budgets == std::vector<int>{28, 33});
    CHECK(cfg.effective_bits_per_rb() == 21);

    CHECK_THROWS_WITH_AS(parse_config_text("bogus_key = 1\n"), "config: unknown key 'bogus_key'",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("classes = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("schemes = vq-dp\nvq_bits = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("classes = 4\nclasses = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("classes\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("entropy_window = 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("train_dir = /tmp/only-train\n"), std::invalid_argument);

    // whitespace and inline comments are tolerated
    const ExperimentConfig ws = parse_config_text("  classes =  5   # five\n\n");
    CHECK(ws.classes == 5);
}
