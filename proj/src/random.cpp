#include "bagcoins/random.hpp"

#include <cmath>

namespace bagcoins {

std::uint64_t Stream::below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    // Reject the lowest (2^64 mod bound) outputs so the modulo is unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = (*this)();
        if (r >= threshold) return r % bound;
    }
}

double Stream::normal() noexcept {
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

}  // namespace bagcoins
