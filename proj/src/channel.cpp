#include "fcalab/channel.hpp"

#include "fcalab/errors.hpp"

#include <string>

namespace fcalab {

namespace {

void require_probability(double p, const char* name, double hi)
{
    if (!(p >= 0.0 && p <= hi)) {
        throw RangeError(std::string(name) + " = " + std::to_string(p) + " outside [0, " + std::to_string(hi) + "]");
    }
}

} // namespace

double cascade(double p1, double p2)
{
    require_probability(p1, "p1", 1.0);
    require_probability(p2, "p2", 1.0);
    return p1 + p2 - 2.0 * p1 * p2;
}

ChannelParams::ChannelParams(double p1, double p2) : p1_(p1), p2_(p2)
{
    require_probability(p1, "p1", 0.5);
    require_probability(p2, "p2", 0.5);
    p_prime_ = cascade(p1, p2);
}

BitSequence bsc_transmit(const BitSequence& x, double p, Rng& rng)
{
    require_probability(p, "p", 1.0);
    BitSequence out = x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.bernoulli(p)) {
            out.flip(i);
        }
    }
    return out;
}

PipelineTrace run_pipeline(const ConnectionPolynomial& poly, const LfsrKey& key, const ChannelParams& params,
                           std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    PipelineTrace trace;
    trace.seed = seed;
    trace.a = generate(poly, key, n);
    trace.z = bsc_transmit(trace.a, params.p1(), rng);
    trace.m = BitSequence(n);
    for (std::size_t i = 0; i < n; ++i) {
        trace.m.set(i, rng.bit());
    }
    trace.s = xor_sequences(trace.m, trace.z);
    trace.y = xor_sequences(bsc_transmit(trace.s, params.p2(), rng), trace.m);
    return trace;
}

LfsrKey random_key(unsigned k, std::uint64_t seed)
{
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    BitSequence state(k);
    do {
        for (unsigned i = 0; i < k; ++i) {
            state.set(i, rng.bit());
        }
    } while (state.none());
    return LfsrKey{std::move(state)};
}

} // namespace fcalab
