#include "raqsim/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "raqsim/rng.hpp"

namespace raqsim {

namespace {

constexpr int kMaxLloydIterations = 60;
constexpr double kCenterMoveTolerance = 1e-12;
constexpr double kSplitEpsilon = 1e-3;

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist2_subvector(const Feature& z, int m, const std::vector<double>& e) {
    double s = 0.0;
    for (int d = 0; d < z.dim; ++d) {
        const double diff = z.at(m, d) - e[d];
        s += diff * diff;
    }
    return s;
}

void check_samples(const std::vector<std::vector<double>>& samples, int j) {
    if (j < 1 || !is_power_of_two(j))
        throw std::invalid_argument("codebook size must be a positive power of two, got " +
                                    std::to_string(j));
    if (static_cast<int>(samples.size()) < j)
        throw std::invalid_argument("need at least " + std::to_string(j) + " samples, got " +
                                    std::to_string(samples.size()));
    const size_t d = samples.front().size();
    if (d == 0) throw std::invalid_argument("samples must have dimension >= 1");
    for (const auto& s : samples) {
        if (s.size() != d) throw std::invalid_argument("samples have inconsistent dimensions");
        for (double v : s)
            if (!std::isfinite(v)) throw std::invalid_argument("samples contain non-finite values");
    }
}

}  // namespace

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int Codebook::bits_per_index() const {
    const int j = size();
    if (!is_power_of_two(j)) throw std::logic_error("codebook size is not a power of two");
    int bits = 0;
    while ((1 << bits) < j) ++bits;
    return bits;
}

IndexVector quantize_feature(const Feature& z, const Codebook& codebook) {
    if (z.dim != codebook.dim)
        throw std::invalid_argument("feature dimension " + std::to_string(z.dim) +
                                    " does not match codebook dimension " +
                                    std::to_string(codebook.dim));
    if (codebook.size() == 0) throw std::invalid_argument("empty codebook");

    IndexVector out;
    out.codebook_size = codebook.size();
    out.indices.resize(z.num_subvectors);
    for (int m = 0; m < z.num_subvectors; ++m) {
        int best = 0;
        double best_d = dist2_subvector(z, m, codebook.codewords[0]);
        for (int jj = 1; jj < codebook.size(); ++jj) {
            const double d = dist2_subvector(z, m, codebook.codewords[jj]);
            if (d < best_d) {
                best_d = d;
                best = jj;
            }
        }
        out.indices[m] = best;
    }
    return out;
}

QuantizedFeature dequantize(const IndexVector& c, const Codebook& codebook) {
    if (c.codebook_size != codebook.size())
        throw std::invalid_argument("index vector was produced for codebook size " +
                                    std::to_string(c.codebook_size) + ", not " +
                                    std::to_string(codebook.size()));
    QuantizedFeature q(static_cast<int>(c.indices.size()), codebook.dim);
    for (size_t m = 0; m < c.indices.size(); ++m) {
        const int idx = c.indices[m];
        if (idx < 0 || idx >= codebook.size())
            throw std::out_of_range("codeword index " + std::to_string(idx) + " out of range");
        for (int d = 0; d < codebook.dim; ++d)
            q.at(static_cast<int>(m), d) = codebook.codewords[idx][d];
    }
    return q;
}

Codebook build_base_codebook(const std::vector<std::vector<double>>& samples, int j,
                             std::uint64_t seed, std::vector<std::string>* warnings) {
    check_samples(samples, j);
    const int n = static_cast<int>(samples.size());
    const int dim = static_cast<int>(samples.front().size());
    auto rng = make_rng({seed, 0x6b6d65616e73ULL});

    // k-means++ seeding
    std::vector<std::vector<double>> centers;
    centers.reserve(j);
    centers.push_back(samples[uniform_int(rng, n)]);
    std::vector<double> min_d2(n);
    for (int i = 0; i < n; ++i) min_d2[i] = dist2(samples[i], centers[0]);
    while (static_cast<int>(centers.size()) < j) {
        double total = 0.0;
        for (double d : min_d2) total += d;
        int pick;
        if (total <= 0.0) {
            pick = uniform_int(rng, n);
        } else {
            const double r = uniform01(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += min_d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(samples[pick]);
        for (int i = 0; i < n; ++i)
            min_d2[i] = std::min(min_d2[i], dist2(samples[i], centers.back()));
    }

    // Lloyd iterations
    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = dist2(samples[i], centers[0]);
            for (int c = 1; c < j; ++c) {
                const double d = dist2(samples[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign[i] = best;
        }
        std::vector<std::vector<double>> next(j, std::vector<double>(dim, 0.0));
        std::vector<int> count(j, 0);
        for (int i = 0; i < n; ++i) {
            ++count[assign[i]];
            for (int d = 0; d < dim; ++d) next[assign[i]][d] += samples[i][d];
        }
        for (int c = 0; c < j; ++c) {
            if (count[c] > 0) {
                for (int d = 0; d < dim; ++d) next[c][d] /= count[c];
            } else {
                // empty cluster: recenter on the sample farthest from its
                // current center (lowest index on ties)
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = dist2(samples[i], centers[assign[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                next[c] = samples[far];
            }
        }
        double move = 0.0;
        for (int c = 0; c < j; ++c) move = std::max(move, dist2(centers[c], next[c]));
        centers = std::move(next);
        if (move <= kCenterMoveTolerance) break;
    }

    std::sort(centers.begin(), centers.end());
    const std::vector<std::vector<double>> original = centers;
    int perturbed = 0;
    for (int c = 1; c < j; ++c) {
        if (original[c] == original[c - 1]) {
            ++perturbed;
            centers[c][0] += 1e-9 * perturbed;
        }
    }
    if (perturbed > 0) {
        std::sort(centers.begin(), centers.end());
        if (warnings)
            warnings->push_back("perturbed " + std::to_string(perturbed) +
                                " duplicate centers (fewer distinct samples than codewords)");
    }

    Codebook out;
    out.dim = dim;
    out.codewords = std::move(centers);
    return out;
}

Codebook derive_codebook(const Codebook& base, int target_size) {
    if (!is_power_of_two(target_size))
        throw std::invalid_argument("target codebook size must be a power of two, got " +
                                    std::to_string(target_size));
    if (base.size() == 0) throw std::invalid_argument("empty base codebook");
    if (target_size == base.size()) return base;

    std::vector<std::vector<double>> work = base.codewords;
    std::sort(work.begin(), work.end());

    while (static_cast<int>(work.size()) > target_size) {
        const int n = static_cast<int>(work.size());
        int bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            for (int jj = i + 1; jj < n; ++jj) {
                const double d = dist2(work[i], work[jj]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = jj;
                }
            }
        }
        for (size_t d = 0; d < work[bi].size(); ++d)
            work[bi][d] = 0.5 * (work[bi][d] + work[bj][d]);
        work.erase(work.begin() + bj);
        std::sort(work.begin(), work.end());
    }

    while (static_cast<int>(work.size()) < target_size) {
        const int n = static_cast<int>(work.size());
        int pick = 0;
        double best_norm = -1.0;
        for (int i = 0; i < n; ++i) {
            double nm = 0.0;
            for (double v : work[i]) nm += v * v;
            if (nm > best_norm) {
                best_norm = nm;
                pick = i;
            }
        }
        // coordinate of largest spread over the current codeword set
        int axis = 0;
        double best_spread = -1.0;
        for (int d = 0; d < base.dim; ++d) {
            double lo = work[0][d], hi = work[0][d];
            for (int i = 1; i < n; ++i) {
                lo = std::min(lo, work[i][d]);
                hi = std::max(hi, work[i][d]);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = d;
            }
        }
        std::vector<double> lo = work[pick], hi = work[pick];
        lo[axis] -= kSplitEpsilon;
        hi[axis] += kSplitEpsilon;
        work[pick] = std::move(lo);
        work.push_back(std::move(hi));
        std::sort(work.begin(), work.end());
    }

    std::sort(work.begin(), work.end());
    Codebook out;
    out.dim = base.dim;
    out.codewords = std::move(work);
    return out;
}

double quantization_error(const std::vector<std::vector<double>>& samples,
                          const Codebook& codebook) {
    if (samples.empty()) return 0.0;
    double total = 0.0;
    for (const auto& s : samples) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : codebook.codewords) best = std::min(best, dist2(s, e));
        total += best;
    }
    return total / static_cast<double>(samples.size());
}

std::string codebook_to_text(const Codebook& codebook) {
    std::string out = "CODEBOOK v1 J=" + std::to_string(codebook.size()) +
                      " D=" + std::to_string(codebook.dim) + "\n";
    char buf[64];
    for (const auto& cw : codebook.codewords) {
        for (size_t d = 0; d < cw.size(); ++d) {
            std::snprintf(buf, sizeof(buf), "%.17g", cw[d]);
            if (d > 0) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

Codebook codebook_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag, version;
    in >> tag >> version;
    if (tag != "CODEBOOK" || version != "v1")
        throw std::runtime_error("not a CODEBOOK v1 file");
    std::string jf, df;
    in >> jf >> df;
    int j = -1, dim = -1;
    if (std::sscanf(jf.c_str(), "J=%d", &j) != 1 || std::sscanf(df.c_str(), "D=%d", &dim) != 1)
        throw std::runtime_error("malformed CODEBOOK header");
    if (!is_power_of_two(j) || dim < 1) throw std::runtime_error("invalid CODEBOOK header values");
    Codebook out;
    out.dim = dim;
    out.codewords.assign(j, std::vector<double>(dim));
    for (int i = 0; i < j; ++i)
        for (int d = 0; d < dim; ++d) {
            if (!(in >> out.codewords[i][d]))
                throw std::runtime_error("truncated CODEBOOK file at codeword " +
                                         std::to_string(i));
            if (!std::isfinite(out.codewords[i][d]))
                throw std::runtime_error("non-finite codeword component in CODEBOOK file");
        }
    return out;
}

void save_codebook(const Codebook& codebook, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << codebook_to_text(codebook);
    if (!f) throw std::runtime_error("write failed for " + path);
}

Codebook load_codebook(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return codebook_from_text(ss.str());
}

}  // namespace raqsim
