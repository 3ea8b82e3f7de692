#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "cdbg/errors.hpp"
#include "cdbg/kmer.hpp"

namespace cdbg {

// Exact concurrent set of packed edge windows: 256 shards of open-addressed
// tables with per-shard locks. Inserts are linearizable; queries run without
// locks and are only valid once the fill phase has been barrier-separated
// from the query phase, which the filter passes guarantee.
class ExactEdgeTable {
public:
    static constexpr bool kUsesDigests = false;

    explicit ExactEdgeTable(std::uint64_t max_keys = 0) : max_keys_(max_keys) {
        shards_ = std::make_unique<Shard[]>(kShards);
    }

    bool insert(const Mer& key, const std::uint64_t* = nullptr) {
        const std::uint64_t h = key.hash();
        Shard& sh = shards_[h >> kShardShift];
        std::lock_guard<std::mutex> lock(sh.m);
        if (sh.slots.empty()) sh.rehash(kInitialSlots);
        if ((sh.count + 1) * 10 > sh.slots.size() * 7) sh.rehash(sh.slots.size() * 2);
        const bool fresh = sh.insert_nolock(key, h);
        if (fresh) {
            const std::uint64_t n = size_.fetch_add(1, std::memory_order_relaxed) + 1;
            if (max_keys_ && n > max_keys_) throw TableOverflow(n, max_keys_);
        }
        return fresh;
    }

    bool contains(const Mer& key, const std::uint64_t* = nullptr) const {
        const std::uint64_t h = key.hash();
        const Shard& sh = shards_[h >> kShardShift];
        if (sh.slots.empty()) return false;
        const std::uint64_t mask = sh.slots.size() - 1;
        for (std::uint64_t i = h & mask;; i = (i + 1) & mask) {
            if (!sh.used[i]) return false;
            if (sh.slots[i] == key) return true;
        }
    }

    std::uint64_t size() const { return size_.load(std::memory_order_relaxed); }

private:
    static constexpr unsigned kShards = 256;
    static constexpr unsigned kShardShift = 64 - 8;
    static constexpr std::uint64_t kInitialSlots = 64;

    struct Shard {
        std::mutex m;
        std::vector<Mer> slots;
        std::vector<std::uint8_t> used;
        std::uint64_t count = 0;

        bool insert_nolock(const Mer& key, std::uint64_t h) {
            const std::uint64_t mask = slots.size() - 1;
            for (std::uint64_t i = h & mask;; i = (i + 1) & mask) {
                if (!used[i]) {
                    used[i] = 1;
                    slots[i] = key;
                    ++count;
                    return true;
                }
                if (slots[i] == key) return false;
            }
        }

        void rehash(std::uint64_t new_size) {
            std::vector<Mer> old_slots = std::move(slots);
            std::vector<std::uint8_t> old_used = std::move(used);
            slots.assign(new_size, Mer());
            used.assign(new_size, 0);
            count = 0;
            for (std::uint64_t i = 0; i < old_slots.size(); ++i)
                if (old_used[i]) insert_nolock(old_slots[i], old_slots[i].hash());
        }
    };

    std::unique_ptr<Shard[]> shards_;
    std::atomic<std::uint64_t> size_{0};
    std::uint64_t max_keys_;
};

}  // namespace cdbg
