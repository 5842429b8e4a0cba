#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raqsim/quantize.hpp"

namespace raqsim {

// Nearest-centroid class model over fused features, with a softmax
// temperature for probability conversion.
struct ClassModel {
    int num_classes = 0;
    int num_subvectors = 0;
    int dim = 0;
    double temperature = 1.0;
    std::vector<Feature> centroids;
};

struct Prediction {
    std::vector<double> probabilities;
    int label = -1;
};

// Element-wise maximum across the participating views' features. An empty
// set means no view was observed and yields nullopt.
std::optional<FusedFeature> max_pool_fuse(const std::vector<Feature>& features);

// Per-class arithmetic mean of the training features. Every class in
// [0, num_classes) must appear at least once.
ClassModel fit_centroids(const std::vector<Feature>& train, const std::vector<int>& labels,
                         int num_classes, double temperature);

// softmax over -||z - centroid_c||^2 / temperature; label is the argmax with
// lowest-class-id tie-break.
Prediction classify(const Feature& z, const ClassModel& model);

// CLASSMODEL v1 text format.
std::string class_model_to_text(const ClassModel& model);
ClassModel class_model_from_text(const std::string& text);
void save_class_model(const ClassModel& model, const std::string& path);
ClassModel load_class_model(const std::string& path);

}  // namespace raqsim
