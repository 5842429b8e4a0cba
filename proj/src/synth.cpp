#include "raqsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "raqsim/rng.hpp"

namespace raqsim {

namespace {

constexpr std::uint64_t kClassTag = 0x636c61737331ULL;
constexpr std::uint64_t kObjectTag = 0x6f626a656374ULL;
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;
constexpr std::uint64_t kProjTag = 0x70726f6a31ULL;

// per-pixel hash noise in [-1, 1)
double pixel_noise(std::uint64_t seed, int object_id, int view, int x, int y) {
    const std::uint64_t h = mix_seed({seed, kNoiseTag, static_cast<std::uint64_t>(object_id),
                                      static_cast<std::uint64_t>(view),
                                      static_cast<std::uint64_t>(x),
                                      static_cast<std::uint64_t>(y)});
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

struct ClassParams {
    double angle;
    double freq1;
    double freq2;
    double amp2;
};

ClassParams class_params(const SynthParams& p, std::uint64_t seed, int cls) {
    auto rng = make_rng({seed, kClassTag, static_cast<std::uint64_t>(cls)});
    ClassParams cp;
    cp.angle = M_PI * cls / std::max(1, p.classes) + uniform_range(rng, -0.06, 0.06);
    cp.freq1 = 2.0 + 0.35 * cls + uniform_range(rng, -0.08, 0.08);
    cp.freq2 = cp.freq1 * (1.45 + uniform_range(rng, 0.0, 0.25));
    cp.amp2 = 0.16 + uniform_range(rng, 0.0, 0.06);
    return cp;
}

}  // namespace

GrayImage render_view(const SynthParams& p, std::uint64_t seed, int cls, int object_id,
                      int view) {
    if (p.height < 1 || p.width < 1) throw std::invalid_argument("bad image dimensions");
    if (p.levels < 2 || p.levels > 256) throw std::invalid_argument("levels must be in [2, 256]");

    const ClassParams cp = class_params(p, seed, cls);
    auto obj_rng = make_rng({seed, kObjectTag, static_cast<std::uint64_t>(cls),
                             static_cast<std::uint64_t>(object_id)});
    // phase jitter stays small so a class forms a tight cluster under the
    // linear patch extractor; a full-range phase would average class
    // centroids toward zero
    const double dphi = uniform_range(obj_rng, -0.08, 0.08);
    const double psi = uniform_range(obj_rng, 0.0, 0.6);
    const double dfreq = uniform_range(obj_rng, -0.06, 0.06);
    const double view_jitter = uniform_range(obj_rng, -0.05, 0.05);

    const double theta = view * M_PI / std::max(1, p.views) + view_jitter;
    const double density = p.density * (1.0 + view * p.density_view_step);
    const double rot = cp.angle + dphi;
    const double cos_r = std::cos(rot), sin_r = std::sin(rot);
    const double cos_b = std::cos(theta), sin_b = std::sin(theta);
    const double two_sigma2 = 2.0 * p.band_sigma * p.band_sigma;

    GrayImage img(p.height, p.width, p.levels);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            const double u = (x - 0.5 * (p.width - 1)) / p.width;
            const double v = (y - 0.5 * (p.height - 1)) / p.height;
            const double ur = cos_r * u + sin_r * v;
            const double vr = -sin_r * u + cos_r * v;
            const double band_d = -sin_b * u + cos_b * v;
            const double mask = std::exp(-band_d * band_d / two_sigma2);

            const double pattern = 0.30 * std::sin(2.0 * M_PI * (cp.freq1 + dfreq) * ur + psi) +
                                   cp.amp2 * std::sin(2.0 * M_PI * cp.freq2 * vr + 1.7 * psi);
            const double texture =
                density * p.noise_amp * pixel_noise(seed, object_id, view, x, y);
            const double value = 0.5 + mask * pattern + texture;
            const int q = static_cast<int>(std::floor(value * (p.levels - 1) + 0.5));
            img.at(y, x) = std::clamp(q, 0, p.levels - 1);
        }
    }
    return img;
}

Feature extract_features(const GrayImage& img, int grid_h, int grid_w, int dim,
                         std::uint64_t extractor_seed) {
    if (grid_h < 1 || grid_w < 1 || dim < 1) throw std::invalid_argument("bad extractor grid");
    if (img.height % grid_h != 0 || img.width % grid_w != 0)
        throw std::invalid_argument("image " + std::to_string(img.height) + "x" +
                                    std::to_string(img.width) + " does not divide into a " +
                                    std::to_string(grid_h) + "x" + std::to_string(grid_w) +
                                    " patch grid");

    const int patch_h = img.height / grid_h;
    const int patch_w = img.width / grid_w;
    const int patch_px = patch_h * patch_w;

    // one projection matrix for all patches and devices
    auto rng = make_rng({extractor_seed, kProjTag});
    std::vector<double> projection(static_cast<size_t>(dim) * patch_px);
    const double scale = 1.0 / std::sqrt(static_cast<double>(patch_px));
    for (auto& w : projection) w = gaussian(rng) * scale;

    Feature out(grid_h * grid_w, dim);
    const double px_scale = 1.0 / (img.levels - 1);
    std::vector<double> patch(patch_px);
    for (int gy = 0; gy < grid_h; ++gy) {
        for (int gx = 0; gx < grid_w; ++gx) {
            int i = 0;
            for (int y = 0; y < patch_h; ++y)
                for (int x = 0; x < patch_w; ++x)
                    patch[i++] = img.at(gy * patch_h + y, gx * patch_w + x) * px_scale;
            const int m = gy * grid_w + gx;
            for (int d = 0; d < dim; ++d) {
                double acc = 0.0;
                const double* row = projection.data() + static_cast<size_t>(d) * patch_px;
                for (int k = 0; k < patch_px; ++k) acc += row[k] * patch[k];
                out.at(m, d) = acc;
            }
        }
    }
    return out;
}

std::vector<ObjectSample> synth_dataset(const SynthParams& params, int count, std::uint64_t seed,
                                        int grid_h, int grid_w, int feat_dim,
                                        std::uint64_t extractor_seed) {
    if (params.classes < 2) throw std::invalid_argument("need at least 2 classes");
    if (params.views < 1) throw std::invalid_argument("need at least 1 view");
    if (count < 1) throw std::invalid_argument("need at least 1 object");

    std::vector<ObjectSample> out;
    out.reserve(count);
    for (int o = 0; o < count; ++o) {
        ObjectSample obj;
        obj.label = o % params.classes;
        obj.views.reserve(params.views);
        obj.features.reserve(params.views);
        for (int v = 0; v < params.views; ++v) {
            obj.views.push_back(render_view(params, seed, obj.label, o, v));
            obj.features.push_back(
                extract_features(obj.views.back(), grid_h, grid_w, feat_dim, extractor_seed));
        }
        out.push_back(std::move(obj));
    }
    return out;
}

}  // namespace raqsim
