#include "raqsim/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace raqsim {

std::optional<FusedFeature> max_pool_fuse(const std::vector<Feature>& features) {
    if (features.empty()) return std::nullopt;
    for (const auto& f : features)
        if (!f.same_shape(features.front()))
            throw std::invalid_argument("features to fuse must share (M, D)");

    FusedFeature out = features.front();
    for (size_t k = 1; k < features.size(); ++k)
        for (size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = std::max(out.values[i], features[k].values[i]);
    return out;
}

ClassModel fit_centroids(const std::vector<Feature>& train, const std::vector<int>& labels,
                         int num_classes, double temperature) {
    if (train.size() != labels.size())
        throw std::invalid_argument("training features and labels differ in length");
    if (train.empty()) throw std::invalid_argument("empty training set");
    if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("temperature must be finite and positive");

    ClassModel model;
    model.num_classes = num_classes;
    model.num_subvectors = train.front().num_subvectors;
    model.dim = train.front().dim;
    model.temperature = temperature;
    model.centroids.assign(num_classes, Feature(model.num_subvectors, model.dim));

    std::vector<int> count(num_classes, 0);
    for (size_t i = 0; i < train.size(); ++i) {
        const int c = labels[i];
        if (c < 0 || c >= num_classes)
            throw std::invalid_argument("label " + std::to_string(c) + " out of range");
        if (!train[i].same_shape(train.front()))
            throw std::invalid_argument("training features must share (M, D)");
        ++count[c];
        for (size_t v = 0; v < train[i].values.size(); ++v)
            model.centroids[c].values[v] += train[i].values[v];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (count[c] == 0)
            throw std::invalid_argument("no training example for class " + std::to_string(c));
        for (double& v : model.centroids[c].values) v /= count[c];
    }
    return model;
}

Prediction classify(const Feature& z, const ClassModel& model) {
    if (model.num_classes < 1) throw std::invalid_argument("unfitted class model");
    if (z.num_subvectors != model.num_subvectors || z.dim != model.dim)
        throw std::invalid_argument("feature shape does not match class model");

    std::vector<double> score(model.num_classes);
    for (int c = 0; c < model.num_classes; ++c) {
        double d2 = 0.0;
        for (size_t i = 0; i < z.values.size(); ++i) {
            const double d = z.values[i] - model.centroids[c].values[i];
            d2 += d * d;
        }
        score[c] = -d2 / model.temperature;
    }

    const double peak = *std::max_element(score.begin(), score.end());
    double total = 0.0;
    Prediction pred;
    pred.probabilities.resize(model.num_classes);
    for (int c = 0; c < model.num_classes; ++c) {
        pred.probabilities[c] = std::exp(score[c] - peak);
        total += pred.probabilities[c];
    }
    pred.label = 0;
    for (int c = 0; c < model.num_classes; ++c) {
        pred.probabilities[c] /= total;
        if (pred.probabilities[c] > pred.probabilities[pred.label]) pred.label = c;
    }
    return pred;
}

std::string class_model_to_text(const ClassModel& model) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", model.temperature);
    std::string out = "CLASSMODEL v1 C=" + std::to_string(model.num_classes) +
                      " M=" + std::to_string(model.num_subvectors) +
                      " D=" + std::to_string(model.dim) + " tau=" + buf + "\n";
    for (const auto& centroid : model.centroids) {
        for (size_t i = 0; i < centroid.values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", centroid.values[i]);
            if (i > 0) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

ClassModel class_model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag, version, cf, mf, df, tf;
    in >> tag >> version >> cf >> mf >> df >> tf;
    if (tag != "CLASSMODEL" || version != "v1")
        throw std::runtime_error("not a CLASSMODEL v1 file");
    ClassModel model;
    double tau = 0.0;
    if (std::sscanf(cf.c_str(), "C=%d", &model.num_classes) != 1 ||
        std::sscanf(mf.c_str(), "M=%d", &model.num_subvectors) != 1 ||
        std::sscanf(df.c_str(), "D=%d", &model.dim) != 1 ||
        std::sscanf(tf.c_str(), "tau=%lf", &tau) != 1)
        throw std::runtime_error("malformed CLASSMODEL header");
    if (model.num_classes < 1 || model.num_subvectors < 1 || model.dim < 1 || !(tau > 0.0))
        throw std::runtime_error("invalid CLASSMODEL header values");
    model.temperature = tau;
    model.centroids.assign(model.num_classes, Feature(model.num_subvectors, model.dim));
    for (auto& centroid : model.centroids)
        for (auto& v : centroid.values)
            if (!(in >> v)) throw std::runtime_error("truncated CLASSMODEL file");
    return model;
}

void save_class_model(const ClassModel& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << class_model_to_text(model);
    if (!f) throw std::runtime_error("write failed for " + path);
}

ClassModel load_class_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return class_model_from_text(ss.str());
}

}  // namespace raqsim
