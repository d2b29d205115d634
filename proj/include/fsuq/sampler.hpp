#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fsuq {

// Deterministic random source.  Normal draws use an explicit Box-Muller
// transform rather than std::normal_distribution, whose output sequence is
// implementation-defined; with a fixed seed the stream is stable across
// toolchains.  substream(k) derives an independent generator from the root
// seed (not the consumed state), so parallel workers can be handed
// reproducible streams in any order.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed);

    double normal();
    double uniform();  // in [0, 1)
    std::uint64_t uniform_index(std::uint64_t bound);  // in [0, bound)

    Sampler substream(std::uint64_t index) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::vector<double> standard_normal(Sampler& sampler, std::size_t count);

}  // namespace fsuq
