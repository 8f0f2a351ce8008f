#include "cw/rng.hpp"

#include "cw/special.hpp"

namespace cw {

double RandomStream::normal(double mu, double sigma) {
    return mu + sigma * normal_quantile(uniform());
}

double RandomStream::beta_symmetric(double b) {
    return reg_inc_beta_inv(b, b, uniform());
}

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

} // namespace cw
