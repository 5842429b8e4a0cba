#pragma once

#include <cstdint>
#include <vector>

#include "raqsim/entropy.hpp"
#include "raqsim/quantize.hpp"

namespace raqsim {

// One multi-view observation of an object: K grayscale views plus the
// per-view latent features derived from them.
struct ObjectSample {
    int label = 0;
    std::vector<GrayImage> views;
    std::vector<Feature> features;
};

// Procedural multi-view texture generator. Each class owns an oriented
// grating family; each view sees it through a rotated band mask (so views
// carry complementary parts of the pattern) and with a view-specific texture
// density that drives its entropy.
struct SynthParams {
    int classes = 10;
    int views = 3;
    int height = 28;
    int width = 28;
    int levels = 256;
    double density = 0.5;            // base texture density
    double density_view_step = 0.4;  // per-view density growth
    double band_sigma = 0.13;        // view mask width, normalized units
    double noise_amp = 0.08;         // texture amplitude at density 1
};

GrayImage render_view(const SynthParams& params, std::uint64_t seed, int cls, int object_id,
                      int view);

// Partition the image into a grid_h x grid_w patch grid and project each
// patch (pixels scaled to [0,1]) to `dim` values with one fixed seeded random
// linear map shared by every patch and every device.
Feature extract_features(const GrayImage& img, int grid_h, int grid_w, int dim,
                         std::uint64_t extractor_seed);

// Deterministic dataset of `count` objects with labels cycling through the
// classes. Features are extracted with a seed derived from `seed` unless an
// explicit extractor seed is supplied.
std::vector<ObjectSample> synth_dataset(const SynthParams& params, int count, std::uint64_t seed,
                                        int grid_h, int grid_w, int feat_dim,
                                        std::uint64_t extractor_seed);

}  // namespace raqsim
