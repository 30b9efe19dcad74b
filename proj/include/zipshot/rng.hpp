#pragma once

#include <cstdint>
#include <vector>

namespace zipshot {

// Deterministic 64-bit generator (splitmix64). std::mt19937_64 would also be
// portable, but the std distributions are not pinned by the standard, so all
// bounded draws go through the methods here and results are identical on
// every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-high mapping; bias is < 2^-64 per draw.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

    uint8_t next_byte() { return static_cast<uint8_t>(next_u64() >> 56); }

    // Fisher-Yates; order depends only on seed and input order.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices drawn from [0, n) without replacement, in draw order.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k) {
        std::vector<size_t> pool(n);
        for (size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<size_t> out;
        out.reserve(k);
        for (size_t i = 0; i < k && i < n; ++i) {
            size_t j = i + static_cast<size_t>(next_below(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    uint64_t state_;
};

// Independent stream for a (seed, index) pair; used wherever parallel workers
// or per-item samplers need schedule-independent randomness.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    Rng mix(seed ^ (index * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
    return mix.next_u64();
}

inline std::vector<uint8_t> random_bytes(uint64_t seed, size_t n) {
    Rng rng(seed);
    std::vector<uint8_t> out(n);
    for (auto& b : out) b = rng.next_byte();
    return out;
}

}  // namespace zipshot
