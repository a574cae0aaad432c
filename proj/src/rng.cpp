#include "affect/rng.hpp"

#include <cmath>

namespace affect {

double RngState::normal(double mean, double stddev) {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngState RngState::derive(std::uint64_t stream_id) const {
    return RngState(splitmix64(seed_ ^ splitmix64(stream_id)));
}

}  // namespace affect
