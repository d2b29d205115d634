#include <fsuq/sampler.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsuq {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

Sampler::Sampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double Sampler::uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Sampler::uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index needs bound > 0");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

double Sampler::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Sampler Sampler::substream(std::uint64_t index) const {
    return Sampler(mix64(seed_ + 0x9E3779B97F4A7C15ull * (index + 1)));
}

std::vector<double> standard_normal(Sampler& sampler, std::size_t count) {
    std::vector<double> out(count);
    for (auto& v : out) v = sampler.normal();
    return out;
}

}  // namespace fsuq
