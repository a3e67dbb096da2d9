#pragma once

#include "fcalab/gf2.hpp"
#include "fcalab/lfsr.hpp"

#include <cstdint>
#include <random>

namespace fcalab {

/// Seeded generator shared by every stochastic operation. mt19937_64 output is
/// fixed by the standard, and the conversions below avoid the
/// implementation-defined std distributions, so a seed replays identically on
/// any platform.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bit() { return (engine_() >> 63) != 0; }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// Flip probability p' of two binary symmetric channels in series.
double cascade(double p1, double p2);

class ChannelParams
{
public:
    /// Both rates must lie in [0, 0.5].
    ChannelParams(double p1, double p2);

    double p1() const { return p1_; }
    double p2() const { return p2_; }
    double p_prime() const { return p_prime_; }

private:
    double p1_;
    double p2_;
    double p_prime_;
};

/// Flips each bit independently with probability p.
BitSequence bsc_transmit(const BitSequence& x, double p, Rng& rng);

struct PipelineTrace
{
    BitSequence a; // LFSR output
    BitSequence z; // keystream
    BitSequence m; // known plaintext
    BitSequence s; // ciphertext
    BitSequence y; // eavesdropper's noisy keystream
    std::uint64_t seed = 0;
};

/// Known-plaintext pipeline: a -> BSC(p1) -> z; s = m ^ z; the eavesdropper
/// receives s through BSC(p2) and strips m. Draw order from Rng(seed) is
/// z flips, then plaintext bits, then wiretap flips.
PipelineTrace run_pipeline(const ConnectionPolynomial& poly, const LfsrKey& key, const ChannelParams& params,
                           std::size_t n, std::uint64_t seed);

/// Uniform nonzero key of length k from a stream independent of run_pipeline's.
LfsrKey random_key(unsigned k, std::uint64_t seed);

} // namespace fcalab
