#include "raqsim/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "raqsim/pgm.hpp"

namespace raqsim {

std::vector<Feature> read_features_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string tag, version;
    int views = 0, m = 0, d = 0;
    f >> tag >> version >> views >> m >> d;
    if (!f || tag != "FEATURES" || version != "v1")
        throw std::runtime_error(path + ": not a FEATURES v1 file");
    if (views < 1 || m < 1 || d < 1)
        throw std::runtime_error(path + ": bad FEATURES dimensions");

    std::vector<Feature> out(views, Feature(m, d));
    for (auto& feat : out)
        for (auto& v : feat.values)
            if (!(f >> v)) throw std::runtime_error(path + ": truncated FEATURES data");
    return out;
}

void write_features_file(const std::vector<Feature>& views, const std::string& path) {
    if (views.empty()) throw std::invalid_argument("no views to write");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "FEATURES v1 " << views.size() << " " << views.front().num_subvectors << " "
      << views.front().dim << "\n";
    char buf[64];
    for (const auto& feat : views) {
        if (!feat.same_shape(views.front()))
            throw std::invalid_argument("views must share (M, D)");
        for (int m = 0; m < feat.num_subvectors; ++m) {
            for (int d = 0; d < feat.dim; ++d) {
                std::snprintf(buf, sizeof(buf), "%.17g", feat.at(m, d));
                f << (d ? " " : "") << buf;
            }
            f << "\n";
        }
    }
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<ObjectSample> load_dataset_dir(const std::string& dir, int views, int grid_h,
                                           int grid_w, int feat_dim,
                                           std::uint64_t extractor_seed) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    const fs::path labels_path = root / "labels.tsv";
    std::ifstream labels(labels_path);
    if (!labels) throw std::runtime_error("cannot open " + labels_path.string());

    std::vector<ObjectSample> out;
    std::string line;
    int line_no = 0;
    while (std::getline(labels, line)) {
        ++line_no;
        if (line.empty()) continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(labels_path.string() + ":" + std::to_string(line_no) +
                                     ": expected '<object>\\t<label>'");
        const std::string name = line.substr(0, tab);
        int label = 0;
        try {
            label = std::stoi(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw std::runtime_error(labels_path.string() + ":" + std::to_string(line_no) +
                                     ": bad label");
        }

        ObjectSample obj;
        obj.label = label;
        for (int v = 0; v < views; ++v) {
            const fs::path img = root / (name + "_" + std::to_string(v) + ".pgm");
            obj.views.push_back(read_pgm(img.string()));
        }

        const fs::path feats = root / (name + ".features");
        if (fs::exists(feats)) {
            obj.features = read_features_file(feats.string());
            if (static_cast<int>(obj.features.size()) < views)
                throw std::runtime_error(feats.string() + ": fewer views than requested");
            obj.features.resize(views);
            for (const auto& feat : obj.features)
                if (feat.num_subvectors != grid_h * grid_w || feat.dim != feat_dim)
                    throw std::runtime_error(feats.string() +
                                             ": feature shape does not match the configured grid");
        } else {
            for (int v = 0; v < views; ++v)
                obj.features.push_back(
                    extract_features(obj.views[v], grid_h, grid_w, feat_dim, extractor_seed));
        }
        out.push_back(std::move(obj));
    }
    if (out.empty()) throw std::runtime_error(labels_path.string() + ": no objects listed");
    return out;
}

}  // namespace raqsim
