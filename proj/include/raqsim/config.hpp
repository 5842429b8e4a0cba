#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "raqsim/phy.hpp"
#include "raqsim/synth.hpp"

namespace raqsim {

enum class SchemeKind { raq_dp, raq_random, vq_dp, vq_random };

struct Scheme {
    SchemeKind kind = SchemeKind::raq_dp;
    int fixed_bits = 6;  // code rate the vq-* schemes are pinned to
};

std::string scheme_name(const Scheme& s);
Scheme parse_scheme(const std::string& name, int vq_bits);
bool scheme_is_random(const Scheme& s);
bool scheme_is_vq(const Scheme& s);

// Full experiment description. Sweeps are crossed: one result row per
// (scheme, views, budget, snr, seed) cell.
struct ExperimentConfig {
    // dataset
    int classes = 10;
    int train_count = 200;
    int test_count = 100;
    int height = 28;
    int width = 28;
    int levels = 256;
    double density = 0.5;
    double density_view_step = 0.4;
    double band_sigma = 0.13;
    double noise_amp = 0.08;
    std::string train_dir;  // optional PGM dataset instead of the generator
    std::string test_dir;

    // features and codebooks
    int grid_h = 7;
    int grid_w = 7;
    int feat_dim = 8;
    double tau = 1.0;
    int codebook_sample_cap = 8192;

    // rate options
    std::vector<std::pair<int, double>> options = {{4, 0.75}, {6, 0.85}, {8, 0.9}};
    int vq_bits = 6;
    int bits_per_rb = 0;  // 0 = derive from the modulation (336 QPSK / 672 16-QAM)

    // link
    Fading fading = Fading::rayleigh;
    Modulation modulation = Modulation::qpsk;
    int entropy_window = 3;

    // sweeps
    std::vector<Scheme> schemes;
    std::vector<int> views = {3};
    std::vector<int> budgets = {42};
    std::vector<double> snrs_db = {5.0};
    std::vector<std::uint64_t> seeds = {1};

    std::string out_path;

    int effective_bits_per_rb() const;
    int max_views() const;
    SynthParams synth_params(int num_views) const;
    void validate() const;
};

// Desk-scale defaults: 7x7 patch grid (M = 49), dim-8 features and a resource
// block scaled to 21 bits so the option costs form the 10/14/19 ladder.
ExperimentConfig default_config();

// key = value file, '#' comments, comma-separated lists. Unknown keys are
// rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace raqsim
