#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <memory>
#include <stdexcept>

#include "cdbg/kmer.hpp"

namespace cdbg {

// Concurrent Bloom filter over precomputed digests. The bit count must be a
// power of two so digests map to bit indices by masking. Bits are set with
// single-word atomic OR, so concurrent inserts never lose updates and an
// inserted key always queries true afterwards.
class BloomFilter {
public:
    static constexpr bool kUsesDigests = true;

    BloomFilter(std::uint64_t bit_count, unsigned hash_count)
        : bits_(bit_count), mask_(bit_count - 1), h_(hash_count) {
        if (bit_count < 64 || !std::has_single_bit(bit_count))
            throw std::invalid_argument("Bloom filter size must be a power of two >= 64");
        if (hash_count == 0) throw std::invalid_argument("Bloom filter needs at least one hash function");
        words_ = bit_count / 64;
        data_ = std::make_unique<std::atomic<std::uint64_t>[]>(words_);
        for (std::uint64_t i = 0; i < words_; ++i) data_[i].store(0, std::memory_order_relaxed);
    }

    // Returns true when at least one bit was newly set, i.e. the key was
    // definitely absent before this call.
    bool insert(const Mer&, const std::uint64_t* digests) {
        bool fresh = false;
        for (unsigned f = 0; f < h_; ++f) {
            const std::uint64_t idx = digests[f] & mask_;
            const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
            const std::uint64_t prev = data_[idx >> 6].fetch_or(bit, std::memory_order_relaxed);
            fresh |= (prev & bit) == 0;
        }
        return fresh;
    }

    bool contains(const Mer&, const std::uint64_t* digests) const {
        for (unsigned f = 0; f < h_; ++f) {
            const std::uint64_t idx = digests[f] & mask_;
            if ((data_[idx >> 6].load(std::memory_order_relaxed) & (std::uint64_t{1} << (idx & 63))) == 0)
                return false;
        }
        return true;
    }

    double fill_ratio() const {
        std::uint64_t set = 0;
        for (std::uint64_t w = 0; w < words_; ++w)
            set += static_cast<std::uint64_t>(std::popcount(data_[w].load(std::memory_order_relaxed)));
        return static_cast<double>(set) / static_cast<double>(bits_);
    }

    std::uint64_t bit_count() const { return bits_; }
    unsigned hash_count() const { return h_; }

    // Diagnostic counters; kernels flush per-chunk tallies in bulk to keep the
    // hot path free of shared-cacheline traffic.
    void add_insert_count(std::uint64_t n) { inserts_.fetch_add(n, std::memory_order_relaxed); }
    void add_query_count(std::uint64_t n) { queries_.fetch_add(n, std::memory_order_relaxed); }
    std::uint64_t insert_count() const { return inserts_.load(std::memory_order_relaxed); }
    std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

private:
    std::uint64_t bits_;
    std::uint64_t words_ = 0;
    std::uint64_t mask_;
    unsigned h_;
    std::unique_ptr<std::atomic<std::uint64_t>[]> data_;
    std::atomic<std::uint64_t> inserts_{0};
    std::atomic<std::uint64_t> queries_{0};
};

}  // namespace cdbg
