#include "raqsim/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace raqsim {

GrayImage to_gray(const RgbImage& rgb, int levels, ChannelRange range) {
    const size_t n = static_cast<size_t>(rgb.height) * rgb.width;
    if (rgb.height < 1 || rgb.width < 1 || rgb.r.size() != n || rgb.g.size() != n ||
        rgb.b.size() != n)
        throw std::invalid_argument("malformed rgb image: channel sizes do not match dimensions");
    if (levels < 2) throw std::invalid_argument("levels must be >= 2");

    const double scale = range == ChannelRange::byte ? 1.0 / 255.0 : 1.0;
    GrayImage out(rgb.height, rgb.width, levels);
    for (size_t i = 0; i < n; ++i) {
        const double luma = (0.299 * rgb.r[i] + 0.587 * rgb.g[i] + 0.114 * rgb.b[i]) * scale;
        const int v = static_cast<int>(std::floor(luma * (levels - 1) + 0.5));
        out.pixels[i] = std::clamp(v, 0, levels - 1);
    }
    return out;
}

PairHistogram pair_histogram(const GrayImage& img, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("window must be odd and >= 1, got " + std::to_string(window));
    if (img.height < 1 || img.width < 1) throw std::invalid_argument("empty image");

    const int half = window / 2;
    const std::int64_t area = static_cast<std::int64_t>(window) * window;
    PairHistogram hist;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            std::int64_t sum = 0;
            for (int dr = -half; dr <= half; ++dr) {
                const int rr = std::clamp(r + dr, 0, img.height - 1);
                for (int dc = -half; dc <= half; ++dc) {
                    const int cc = std::clamp(c + dc, 0, img.width - 1);
                    sum += img.at(rr, cc);
                }
            }
            // integer round-half-up of sum/area
            const int mean = static_cast<int>((2 * sum + area) / (2 * area));
            ++hist.counts[{img.at(r, c), mean}];
        }
    }
    hist.total = static_cast<std::int64_t>(img.height) * img.width;
    return hist;
}

double entropy_bits(const PairHistogram& hist) {
    double g = 0.0;
    for (const auto& [pair, count] : hist.counts) {
        if (count <= 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(hist.total);
        g -= p * std::log2(p);
    }
    return g;
}

double view_entropy(const GrayImage& img, int window) {
    return entropy_bits(pair_histogram(img, window));
}

}  // namespace raqsim
