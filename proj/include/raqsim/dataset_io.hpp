#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raqsim/quantize.hpp"
#include "raqsim/synth.hpp"

namespace raqsim {

// FEATURES v1 text file: "FEATURES v1 <K> <M> <D>" then K*M lines of D
// floats, view-major. Lets externally computed features replace the built-in
// extractor while flowing through the same pipeline.
std::vector<Feature> read_features_file(const std::string& path);
void write_features_file(const std::vector<Feature>& views, const std::string& path);

// Imports a directory with labels.tsv ("<object>\t<label>" per line) and one
// PGM per view named <object>_<view>.pgm. If <object>.features exists its
// contents override the extractor output (shape-checked against the grid).
std::vector<ObjectSample> load_dataset_dir(const std::string& dir, int views, int grid_h,
                                           int grid_w, int feat_dim,
                                           std::uint64_t extractor_seed);

}  // namespace raqsim
