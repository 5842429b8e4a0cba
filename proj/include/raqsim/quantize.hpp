#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace raqsim {

// M sub-vectors of dimension D, stored row-major. The same layout carries a
// feature through its whole life: extractor output, recovered codewords and
// the fused server-side feature.
struct Feature {
    int num_subvectors = 0;  // M
    int dim = 0;             // D
    std::vector<double> values;

    Feature() = default;
    Feature(int m, int d) : num_subvectors(m), dim(d), values(static_cast<size_t>(m) * d, 0.0) {}

    double at(int m, int d) const { return values[static_cast<size_t>(m) * dim + d]; }
    double& at(int m, int d) { return values[static_cast<size_t>(m) * dim + d]; }

    bool same_shape(const Feature& o) const {
        return num_subvectors == o.num_subvectors && dim == o.dim;
    }
};

using LatentFeature = Feature;
using QuantizedFeature = Feature;
using FusedFeature = Feature;

// Ordered set of J codewords of dimension D, shared by transmitter and
// receiver. Codewords are kept sorted lexicographically so index assignment
// is a stable function of the codeword set.
struct Codebook {
    int dim = 0;
    std::vector<std::vector<double>> codewords;

    int size() const { return static_cast<int>(codewords.size()); }
    int bits_per_index() const;
};

struct IndexVector {
    std::vector<int> indices;
    int codebook_size = 0;
};

// Nearest codeword per sub-vector (Euclidean distance, ties to the lowest
// index).
IndexVector quantize_feature(const Feature& z, const Codebook& codebook);

QuantizedFeature dequantize(const IndexVector& c, const Codebook& codebook);

// Seeded k-means (k-means++ init, Lloyd iterations with a fixed cap and
// tolerance). Deterministic given (samples, j, seed); codewords are sorted
// lexicographically before indices are assigned. When fewer distinct samples
// than j exist the duplicate centers are perturbed deterministically and a
// note is appended to `warnings` if provided.
Codebook build_base_codebook(const std::vector<std::vector<double>>& samples, int j,
                             std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// Resize a base codebook to a power-of-two target size: closest-pair midpoint
// merges to shrink, largest-norm codeword splits (+/- epsilon along the
// coordinate of largest spread) to grow.
Codebook derive_codebook(const Codebook& base, int target_size);

// Mean squared quantization error of `samples` under `codebook`.
double quantization_error(const std::vector<std::vector<double>>& samples, const Codebook& codebook);

// CODEBOOK v1 text format; round-trips bit-exactly at 17 significant digits.
std::string codebook_to_text(const Codebook& codebook);
Codebook codebook_from_text(const std::string& text);
void save_codebook(const Codebook& codebook, const std::string& path);
Codebook load_codebook(const std::string& path);

bool is_power_of_two(int v);

}  // namespace raqsim
