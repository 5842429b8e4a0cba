#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "raqsim/quantize.hpp"

namespace raqsim {

using BitSequence = std::vector<std::uint8_t>;
using SymbolFrame = std::vector<std::complex<double>>;

enum class Fading { rayleigh, awgn_only };
enum class Modulation { qpsk, qam16 };

int bits_per_symbol(Modulation m);

// 168 resource elements per RB: 336 bits under QPSK, 672 under 16-QAM.
int default_bits_per_rb(Modulation m);

struct ChannelConfig {
    Fading fading = Fading::rayleigh;
    double channel_variance = 1.0;  // sigma_h^2
    double noise_variance = 0.1;    // sigma_n^2

    // Average received-signal-power SNR: sigma_h^2 * E|s|^2 / sigma_n^2,
    // which is 1/sigma_n^2 under unit-power symbols and sigma_h^2 = 1.
    static ChannelConfig from_snr_db(double snr_db, Fading fading = Fading::rayleigh,
                                     double channel_variance = 1.0);
    static ChannelConfig from_noise_variance(double noise_variance,
                                             Fading fading = Fading::rayleigh,
                                             double channel_variance = 1.0);
};

struct ReceivedFrame {
    SymbolFrame received;
    std::complex<double> channel_gain{1.0, 0.0};
};

// Fixed-width big-endian bits per index, concatenated in sub-vector order.
BitSequence indices_to_bits(const IndexVector& c, int width);
IndexVector bits_to_indices(const BitSequence& bits, int width, int num_subvectors);

// Gray-mapped QPSK: 00 -> (+1+j)/sqrt2, 01 -> (+1-j)/sqrt2,
// 10 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2. Odd-length input is padded with a
// trailing 0 bit; demodulation returns 2 bits per symbol, so callers that
// padded truncate back to their payload length.
SymbolFrame modulate_qpsk(const BitSequence& bits);
BitSequence demodulate_qpsk(const SymbolFrame& symbols);

// Gray-mapped 16-QAM with unit average power (amplitudes {±1, ±3}/sqrt10);
// bits (a b c d) map a,b -> I and c,d -> Q with 00->+3, 01->+1, 11->-1,
// 10->-3. Input padded to a multiple of 4 bits.
SymbolFrame modulate_16qam(const BitSequence& bits);
BitSequence demodulate_16qam(const SymbolFrame& symbols);

SymbolFrame modulate(const BitSequence& bits, Modulation m);
BitSequence demodulate(const SymbolFrame& symbols, Modulation m);

// r = h*s + n with one flat-fading gain h per frame (h = 1 when awgn_only)
// and per-symbol circularly-symmetric complex Gaussian noise.
ReceivedFrame apply_channel(const SymbolFrame& symbols, const ChannelConfig& cfg,
                            std::mt19937_64& rng);

// Division by the known channel gain. A gain of exactly zero makes the frame
// undecodable (nullopt); callers resolve its bits as erasures to 0.
std::optional<SymbolFrame> equalize(const ReceivedFrame& frame);

// ceil(num_subvectors * bits_per_index / bits_per_rb)
int rb_cost(int num_subvectors, int bits_per_index, int bits_per_rb = 336);

}  // namespace raqsim
