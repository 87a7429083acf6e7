#include "loewner/sampling.hpp"

#include <numeric>
#include <random>

namespace loewner {

double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

std::vector<std::uint32_t> halton_bases(std::size_t count) {
    std::vector<std::uint32_t> primes;
    std::uint32_t candidate = 2;
    while (primes.size() < count) {
        bool is_prime = true;
        for (std::uint32_t p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                is_prime = false;
                break;
            }
        }
        if (is_prime) primes.push_back(candidate);
        ++candidate;
    }
    return primes;
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace loewner
