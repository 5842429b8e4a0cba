#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace raqsim {

struct GrayImage {
    int height = 0;
    int width = 0;
    int levels = 256;
    std::vector<int> pixels;  // row-major, values in [0, levels-1]

    GrayImage() = default;
    GrayImage(int h, int w, int l)
        : height(h), width(w), levels(l), pixels(static_cast<size_t>(h) * w, 0) {}

    int at(int r, int c) const { return pixels[static_cast<size_t>(r) * width + c]; }
    int& at(int r, int c) { return pixels[static_cast<size_t>(r) * width + c]; }
};

struct RgbImage {
    int height = 0;
    int width = 0;
    std::vector<double> r, g, b;  // row-major
};

enum class ChannelRange { unit, byte };  // values in [0,1] or [0,255]

// Joint (center value, rounded window mean) occurrence counts. One window per
// pixel position; total is always height*width.
struct PairHistogram {
    std::map<std::pair<int, int>, std::int64_t> counts;
    std::int64_t total = 0;
};

// Rec. 601 luma, scaled to [0, levels-1] and rounded half-up.
GrayImage to_gray(const RgbImage& rgb, int levels, ChannelRange range);

// Slides a window x window neighborhood over every pixel (replicate padding
// at the borders) and accumulates (center value, window mean rounded half-up)
// pairs. Window must be odd.
PairHistogram pair_histogram(const GrayImage& img, int window);

double entropy_bits(const PairHistogram& hist);

// -sum p log2 p over the pair histogram.
double view_entropy(const GrayImage& img, int window);

}  // namespace raqsim
