#include "raqsim/phy.hpp"

#include <cmath>
#include <stdexcept>

#include "raqsim/rng.hpp"

namespace raqsim {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kQamScale = 1.0 / std::sqrt(10.0);

// Gray pair -> amplitude: 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3
double gray_to_amp(int b0, int b1) {
    const double mag = b1 ? 1.0 : 3.0;
    return b0 ? -mag : mag;
}

void amp_to_gray(double a, BitSequence& out) {
    out.push_back(a < 0.0 ? 1 : 0);
    out.push_back(std::fabs(a) < 2.0 * kQamScale ? 1 : 0);
}

}  // namespace

int bits_per_symbol(Modulation m) { return m == Modulation::qpsk ? 2 : 4; }

int default_bits_per_rb(Modulation m) { return 168 * bits_per_symbol(m); }

ChannelConfig ChannelConfig::from_snr_db(double snr_db, Fading fading, double channel_variance) {
    ChannelConfig cfg;
    cfg.fading = fading;
    cfg.channel_variance = channel_variance;
    cfg.noise_variance = channel_variance * std::pow(10.0, -snr_db / 10.0);
    return cfg;
}

ChannelConfig ChannelConfig::from_noise_variance(double noise_variance, Fading fading,
                                                 double channel_variance) {
    if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
    ChannelConfig cfg;
    cfg.fading = fading;
    cfg.channel_variance = channel_variance;
    cfg.noise_variance = noise_variance;
    return cfg;
}

BitSequence indices_to_bits(const IndexVector& c, int width) {
    if (width < 1 || width > 30) throw std::invalid_argument("bad index width");
    const int limit = 1 << width;
    BitSequence bits;
    bits.reserve(c.indices.size() * width);
    for (int idx : c.indices) {
        if (idx < 0 || idx >= limit)
            throw std::invalid_argument("index " + std::to_string(idx) + " does not fit in " +
                                        std::to_string(width) + " bits");
        for (int b = width - 1; b >= 0; --b) bits.push_back((idx >> b) & 1);
    }
    return bits;
}

IndexVector bits_to_indices(const BitSequence& bits, int width, int num_subvectors) {
    if (width < 1 || width > 30) throw std::invalid_argument("bad index width");
    if (bits.size() != static_cast<size_t>(width) * num_subvectors)
        throw std::invalid_argument("bit sequence length " + std::to_string(bits.size()) +
                                    " != " + std::to_string(num_subvectors) + " x " +
                                    std::to_string(width));
    IndexVector out;
    out.codebook_size = 1 << width;
    out.indices.resize(num_subvectors);
    size_t pos = 0;
    for (int m = 0; m < num_subvectors; ++m) {
        int idx = 0;
        for (int b = 0; b < width; ++b) idx = (idx << 1) | (bits[pos++] & 1);
        out.indices[m] = idx;
    }
    return out;
}

SymbolFrame modulate_qpsk(const BitSequence& bits) {
    SymbolFrame symbols;
    symbols.reserve((bits.size() + 1) / 2);
    for (size_t i = 0; i < bits.size(); i += 2) {
        const int b0 = bits[i] & 1;
        const int b1 = (i + 1 < bits.size()) ? (bits[i + 1] & 1) : 0;
        symbols.emplace_back(b0 ? -kInvSqrt2 : kInvSqrt2, b1 ? -kInvSqrt2 : kInvSqrt2);
    }
    return symbols;
}

BitSequence demodulate_qpsk(const SymbolFrame& symbols) {
    BitSequence bits;
    bits.reserve(symbols.size() * 2);
    for (const auto& s : symbols) {
        bits.push_back(s.real() < 0.0 ? 1 : 0);
        bits.push_back(s.imag() < 0.0 ? 1 : 0);
    }
    return bits;
}

SymbolFrame modulate_16qam(const BitSequence& bits) {
    SymbolFrame symbols;
    symbols.reserve((bits.size() + 3) / 4);
    for (size_t i = 0; i < bits.size(); i += 4) {
        auto bit = [&](size_t k) { return k < bits.size() ? (bits[k] & 1) : 0; };
        const double re = gray_to_amp(bit(i), bit(i + 1)) * kQamScale;
        const double im = gray_to_amp(bit(i + 2), bit(i + 3)) * kQamScale;
        symbols.emplace_back(re, im);
    }
    return symbols;
}

BitSequence demodulate_16qam(const SymbolFrame& symbols) {
    BitSequence bits;
    bits.reserve(symbols.size() * 4);
    for (const auto& s : symbols) {
        amp_to_gray(s.real(), bits);
        amp_to_gray(s.imag(), bits);
    }
    return bits;
}

SymbolFrame modulate(const BitSequence& bits, Modulation m) {
    return m == Modulation::qpsk ? modulate_qpsk(bits) : modulate_16qam(bits);
}

BitSequence demodulate(const SymbolFrame& symbols, Modulation m) {
    return m == Modulation::qpsk ? demodulate_qpsk(symbols) : demodulate_16qam(symbols);
}

ReceivedFrame apply_channel(const SymbolFrame& symbols, const ChannelConfig& cfg,
                            std::mt19937_64& rng) {
    ReceivedFrame out;
    out.channel_gain = cfg.fading == Fading::rayleigh ? draw_cscg(rng, cfg.channel_variance)
                                                      : std::complex<double>(1.0, 0.0);
    out.received.reserve(symbols.size());
    for (const auto& s : symbols)
        out.received.push_back(out.channel_gain * s + draw_cscg(rng, cfg.noise_variance));
    return out;
}

std::optional<SymbolFrame> equalize(const ReceivedFrame& frame) {
    if (frame.channel_gain == std::complex<double>(0.0, 0.0)) return std::nullopt;
    SymbolFrame out;
    out.reserve(frame.received.size());
    for (const auto& r : frame.received) out.push_back(r / frame.channel_gain);
    return out;
}

int rb_cost(int num_subvectors, int bits_per_index, int bits_per_rb) {
    if (num_subvectors < 1 || bits_per_index < 1 || bits_per_rb < 1)
        throw std::invalid_argument("rb_cost arguments must be positive");
    const long long bits = static_cast<long long>(num_subvectors) * bits_per_index;
    return static_cast<int>((bits + bits_per_rb - 1) / bits_per_rb);
}

}  // namespace raqsim
