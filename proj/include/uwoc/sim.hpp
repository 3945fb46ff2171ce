#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "uwoc/math.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/tdhp.hpp"

namespace uwoc {

enum class SymbolFormat : std::uint8_t { Pam2, Pam4 };

// Where the PAM4 symbols sit inside the frame. BER statistics are layout
// independent under i.i.d. noise; Interleaved exists to test exactly that.
enum class FrameLayout { Pam4Block, Interleaved };

// Gray map for PAM4, indexed by (first bit << 1) | second bit. Adjacent
// amplitude levels differ in exactly one bit: -3:00, -1:01, +1:11, +3:10.
inline constexpr double kPam4GrayLevel[4] = {-3.0, -1.0, +3.0, +1.0};
inline constexpr std::uint8_t kPam4LevelBits[4][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};

// One mapped TDHP frame. Amplitudes are calibrated against unit-variance
// channel noise: PAM2 sits at +-a2 with a2 = sqrt(snr*(1-q)), PAM4 at
// {+-d, +-3d} with d = sqrt(snr*(1+q)/7), so the measured per-format BERs
// converge to the closed-form PAM2/PAM4 expressions at the same snr and q.
struct Frame {
    TdhpParams params;
    double snr = 0.0;
    std::uint64_t seed = 0;
    FrameLayout layout = FrameLayout::Pam4Block;
    double amp_pam2 = 0.0;      // a2
    double amp_step_pam4 = 0.0; // d
    std::size_t n_pam4 = 0;
    std::vector<SymbolFormat> formats;
    std::vector<double> amplitudes;
    std::vector<std::uint8_t> source_bits; // transmission order

    std::size_t n_symbols() const { return formats.size(); }
    std::size_t total_bits() const { return source_bits.size(); }
};

inline Frame build_frame(std::size_t n_symbols, TdhpParams params, double snr_linear,
                         std::uint64_t seed, FrameLayout layout = FrameLayout::Pam4Block) {
    if (n_symbols == 0)
        throw std::invalid_argument("build_frame: need at least one symbol");
    params.validate();
    if (!(snr_linear >= 0.0))
        throw std::domain_error("build_frame: snr must be >= 0");

    Frame f;
    f.params = params;
    f.snr = snr_linear;
    f.seed = seed;
    f.layout = layout;
    const double q = params.effective_q();
    f.amp_pam2 = std::sqrt(snr_linear * (1.0 - q));
    f.amp_step_pam4 = std::sqrt(snr_linear * (1.0 + q) / 7.0);
    f.n_pam4 = static_cast<std::size_t>(round_half_even(params.p * static_cast<double>(n_symbols)));

    f.formats.resize(n_symbols, SymbolFormat::Pam2);
    if (layout == FrameLayout::Pam4Block) {
        for (std::size_t k = 0; k < f.n_pam4; ++k) f.formats[k] = SymbolFormat::Pam4;
    } else {
        // Bresenham-style spread; the running count telescopes to the same
        // round_half_even(p*n) total as the block layout.
        std::int64_t prev = 0;
        for (std::size_t k = 0; k < n_symbols; ++k) {
            const std::int64_t next = round_half_even(params.p * static_cast<double>(k + 1));
            if (next > prev) f.formats[k] = SymbolFormat::Pam4;
            prev = next;
        }
    }

    f.amplitudes.resize(n_symbols);
    f.source_bits.reserve(n_symbols + f.n_pam4);
    std::mt19937_64 gen(derive_seed(seed, kBitStream));
    for (std::size_t k = 0; k < n_symbols; ++k) {
        if (f.formats[k] == SymbolFormat::Pam4) {
            const auto b0 = static_cast<std::uint8_t>(gen() & 1u);
            const auto b1 = static_cast<std::uint8_t>(gen() & 1u);
            f.source_bits.push_back(b0);
            f.source_bits.push_back(b1);
            f.amplitudes[k] = kPam4GrayLevel[(b0 << 1) | b1] * f.amp_step_pam4;
        } else {
            const auto b = static_cast<std::uint8_t>(gen() & 1u);
            f.source_bits.push_back(b);
            f.amplitudes[k] = b ? f.amp_pam2 : -f.amp_pam2;
        }
    }
    return f;
}

// Adds one zero-mean Gaussian draw of the given sigma per symbol. The noise
// stream is derived from the seed, independent of the bit stream, so the
// same seed replays bit-identically.
inline std::vector<double> add_awgn(const Frame& frame, std::uint64_t seed,
                                    double noise_sigma = 1.0) {
    if (!(noise_sigma >= 0.0))
        throw std::domain_error("add_awgn: noise sigma must be >= 0");
    std::vector<double> rx(frame.amplitudes);
    if (noise_sigma == 0.0) return rx;
    std::mt19937_64 gen(derive_seed(seed, kNoiseStream));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& r : rx) r += noise_sigma * gauss(gen);
    return rx;
}

// ML threshold detection with the frame's calibration. PAM2 decides at 0,
// PAM4 at {-2d, 0, +2d}; a sample exactly on a threshold resolves to the
// lower level. Returns bits in transmission order.
inline std::vector<std::uint8_t> demap(std::span<const double> received, const Frame& frame) {
    if (received.size() != frame.n_symbols())
        throw std::invalid_argument("demap: sample count does not match frame layout");
    std::vector<std::uint8_t> bits;
    bits.reserve(frame.total_bits());
    const double step = frame.amp_step_pam4;
    for (std::size_t k = 0; k < received.size(); ++k) {
        const double r = received[k];
        if (frame.formats[k] == SymbolFormat::Pam4) {
            const int level = (r > 2.0 * step) ? 3 : (r > 0.0) ? 2 : (r > -2.0 * step) ? 1 : 0;
            bits.push_back(kPam4LevelBits[level][0]);
            bits.push_back(kPam4LevelBits[level][1]);
        } else {
            bits.push_back(r > 0.0 ? 1 : 0);
        }
    }
    return bits;
}

struct BerCounts {
    std::uint64_t bit_errors_pam2 = 0;
    std::uint64_t bit_errors_pam4 = 0;
    std::uint64_t bits_pam2 = 0;
    std::uint64_t bits_pam4 = 0;

    BerCounts& operator+=(const BerCounts& o) {
        bit_errors_pam2 += o.bit_errors_pam2;
        bit_errors_pam4 += o.bit_errors_pam4;
        bits_pam2 += o.bits_pam2;
        bits_pam4 += o.bits_pam4;
        return *this;
    }
};

// One full map -> AWGN -> demap pass over a single frame seeded with
// `frame_seed`. measure_ber composes chunks of these; it is public so the
// chunk decomposition itself is testable.
inline BerCounts measure_ber_chunk(TdhpParams params, double snr_linear, std::size_t n_symbols,
                                   std::uint64_t frame_seed, double noise_sigma = 1.0,
                                   FrameLayout layout = FrameLayout::Pam4Block) {
    const Frame frame = build_frame(n_symbols, params, snr_linear, frame_seed, layout);
    const std::vector<double> rx = add_awgn(frame, frame_seed, noise_sigma);
    const std::vector<std::uint8_t> bits = demap(rx, frame);
    BerCounts c;
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < frame.n_symbols(); ++k) {
        if (frame.formats[k] == SymbolFormat::Pam4) {
            c.bits_pam4 += 2;
            c.bit_errors_pam4 += (bits[cursor] != frame.source_bits[cursor]);
            c.bit_errors_pam4 += (bits[cursor + 1] != frame.source_bits[cursor + 1]);
            cursor += 2;
        } else {
            c.bits_pam2 += 1;
            c.bit_errors_pam2 += (bits[cursor] != frame.source_bits[cursor]);
            cursor += 1;
        }
    }
    return c;
}

struct BerEstimate {
    TdhpParams params;
    double snr_linear = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_symbols = 0;

    std::uint64_t bit_errors_pam2 = 0;
    std::uint64_t bit_errors_pam4 = 0;
    std::uint64_t bits_pam2 = 0;
    std::uint64_t bits_pam4 = 0;

    double ber_pam2 = 0.0;
    double ber_pam4 = 0.0;
    double ber_tdhp = 0.0;            // pooled: all bit errors / all bits
    double ber_ratio_weighted = 0.0;  // p-weighted per-format mix, the
                                      // quantity the closed-form model predicts
    double ci95_halfwidth = 0.0;          // binomial normal approx, pooled BER
    double ci95_halfwidth_weighted = 0.0; // same for the weighted mix
    bool low_error_count = false; // expected errors < 10 at this operating point
};

struct McOptions {
    unsigned threads = 1;              // 0 = hardware concurrency
    std::size_t chunk_symbols = 1u << 20;
    double noise_sigma = 1.0;
    FrameLayout layout = FrameLayout::Pam4Block;
};

// Monte-Carlo BER over n_symbols, split into fixed-size chunks with
// per-chunk derived seeds. Counts depend only on (params, snr, n, seed,
// chunk size), never on the worker count.
inline BerEstimate measure_ber(TdhpParams params, double snr_linear, std::size_t n_symbols,
                               std::uint64_t seed, McOptions opt = {}) {
    params.validate();
    if (n_symbols == 0)
        throw std::invalid_argument("measure_ber: need at least one symbol");
    if (opt.chunk_symbols == 0)
        throw std::invalid_argument("measure_ber: chunk size must be >= 1");

    const std::size_t n_chunks = (n_symbols + opt.chunk_symbols - 1) / opt.chunk_symbols;
    unsigned workers = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks);

    std::vector<BerCounts> per_chunk(n_chunks);
    auto run_range = [&](std::size_t chunk) {
        const std::size_t begin = chunk * opt.chunk_symbols;
        const std::size_t count = std::min(opt.chunk_symbols, n_symbols - begin);
        per_chunk[chunk] = measure_ber_chunk(params, snr_linear, count,
                                             derive_seed(seed, kChunkStreamBase + chunk),
                                             opt.noise_sigma, opt.layout);
    };
    if (workers <= 1) {
        for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) run_range(chunk);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t chunk = next.fetch_add(1); chunk < n_chunks;
                     chunk = next.fetch_add(1))
                    run_range(chunk);
            });
        }
        for (auto& t : pool) t.join();
    }

    BerCounts total;
    for (const BerCounts& c : per_chunk) total += c;

    BerEstimate est;
    est.params = params;
    est.snr_linear = snr_linear;
    est.seed = seed;
    est.n_symbols = n_symbols;
    est.bit_errors_pam2 = total.bit_errors_pam2;
    est.bit_errors_pam4 = total.bit_errors_pam4;
    est.bits_pam2 = total.bits_pam2;
    est.bits_pam4 = total.bits_pam4;
    est.ber_pam2 = total.bits_pam2 ? double(total.bit_errors_pam2) / double(total.bits_pam2) : 0.0;
    est.ber_pam4 = total.bits_pam4 ? double(total.bit_errors_pam4) / double(total.bits_pam4) : 0.0;
    const auto bits = double(total.bits_pam2 + total.bits_pam4);
    est.ber_tdhp = double(total.bit_errors_pam2 + total.bit_errors_pam4) / bits;
    est.ber_ratio_weighted = params.p * est.ber_pam4 + (1.0 - params.p) * est.ber_pam2;
    est.ci95_halfwidth = 1.96 * std::sqrt(est.ber_tdhp * (1.0 - est.ber_tdhp) / bits);
    double var_w = 0.0;
    if (total.bits_pam4)
        var_w += params.p * params.p * est.ber_pam4 * (1.0 - est.ber_pam4) / double(total.bits_pam4);
    if (total.bits_pam2)
        var_w += (1.0 - params.p) * (1.0 - params.p) * est.ber_pam2 * (1.0 - est.ber_pam2) /
                 double(total.bits_pam2);
    est.ci95_halfwidth_weighted = 1.96 * std::sqrt(var_w);
    est.low_error_count =
        opt.noise_sigma > 0.0 &&
        ber_tdhp(snr_linear / (opt.noise_sigma * opt.noise_sigma), params) * bits < 10.0;
    return est;
}

enum class EyeFormat { Pam2, Pam4, Tdhp };

// Folded two-symbol eye traces. Levels are normalized (amplitudes computed
// at snr = 1) so the vertical scale is snr-independent; the per-sample noise
// sigma is 1/sqrt(snr), which makes the decision-instant SNR equal to the
// request. A disengaged snr means noise-free.
struct EyeTraceSet {
    EyeFormat format = EyeFormat::Tdhp;
    int samples_per_symbol = 16;
    int window_symbols = 2;
    std::vector<std::vector<double>> traces;
};

inline EyeTraceSet eye_traces(EyeFormat format, TdhpParams params,
                              std::optional<double> snr_linear, int samples_per_symbol = 16,
                              int n_traces = 1000, std::uint64_t seed = 0) {
    if (samples_per_symbol < 2)
        throw std::invalid_argument("eye_traces: need at least 2 samples per symbol");
    if (n_traces < 1)
        throw std::invalid_argument("eye_traces: need at least one trace");
    if (snr_linear && !(*snr_linear > 0.0))
        throw std::domain_error("eye_traces: snr must be > 0");
    if (format == EyeFormat::Pam2) params.p = 0.0;
    if (format == EyeFormat::Pam4) params.p = 1.0;

    const auto n_symbols = static_cast<std::size_t>(n_traces) + 1;
    const Frame frame = build_frame(n_symbols, params, 1.0, seed);
    const double sigma = snr_linear ? 1.0 / std::sqrt(*snr_linear) : 0.0;

    // NRZ waveform: each symbol held flat for samples_per_symbol samples,
    // then folded into overlapping two-symbol windows.
    std::vector<double> wave(n_symbols * static_cast<std::size_t>(samples_per_symbol));
    std::mt19937_64 gen(derive_seed(seed, kNoiseStream));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::size_t i = 0;
    for (std::size_t k = 0; k < n_symbols; ++k)
        for (int s = 0; s < samples_per_symbol; ++s, ++i)
            wave[i] = frame.amplitudes[k] + (sigma > 0.0 ? sigma * gauss(gen) : 0.0);

    EyeTraceSet set;
    set.format = format;
    set.samples_per_symbol = samples_per_symbol;
    set.window_symbols = 2;
    set.traces.resize(static_cast<std::size_t>(n_traces));
    const auto window = static_cast<std::size_t>(2 * samples_per_symbol);
    for (int t = 0; t < n_traces; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * samples_per_symbol;
        set.traces[t].assign(wave.begin() + begin, wave.begin() + begin + window);
    }
    return set;
}

} // namespace uwoc
