#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <vector>

#include "cdbg/sequence.hpp"

namespace cdbg {

inline constexpr std::uint64_t kDefaultChunkBases = std::uint64_t{1} << 20;

// One work unit: a base range of one segment. Consecutive chunks of a segment
// overlap by exactly k bases, so every (k+1)-mer start offset is owned by
// exactly one chunk and the ownership is a pure function of (segment, chunk
// size).
struct Chunk {
    std::uint32_t seg = 0;
    std::uint64_t begin = 0;
    std::uint64_t end = 0;  // exclusive
    bool last = false;

    // (k+1)-mer start offsets owned by this chunk: [edge_begin, edge_end).
    std::uint64_t edge_begin() const { return begin; }
    std::uint64_t edge_end(std::uint64_t seg_len, unsigned k) const {
        return seg_len < k + 1 ? begin : std::min(end, seg_len) - k;
    }

    // k-mer start offsets owned by this chunk: [pos_begin, pos_end).
    std::uint64_t pos_begin() const { return begin; }
    std::uint64_t pos_end(std::uint64_t seg_len, unsigned k) const {
        if (last) return seg_len - k + 1;
        return end - k;
    }
};

// Deterministic chunk plan. Effective chunk size is clamped to at least 2k so
// the k-overlap scheme stays well formed.
inline std::vector<Chunk> make_chunks(const std::vector<SegmentRef>& segments, unsigned k,
                                      std::uint64_t chunk_bases) {
    chunk_bases = std::max<std::uint64_t>(chunk_bases, 2ull * k);
    std::vector<Chunk> chunks;
    for (std::uint32_t si = 0; si < segments.size(); ++si) {
        const std::uint64_t len = segments[si].seg->length();
        if (len < k) continue;
        const std::uint64_t stride = chunk_bases - k;
        std::uint64_t b = 0;
        while (b + chunk_bases < len) {
            chunks.push_back(Chunk{si, b, b + chunk_bases, false});
            b += stride;
        }
        chunks.push_back(Chunk{si, b, len, true});
    }
    return chunks;
}

// Tracks how much chunk window data is in flight at once; tests assert the
// workers x chunk-size bound on the peak.
struct ChunkAccounting {
    std::atomic<std::uint64_t> active_bases{0};
    std::atomic<std::uint64_t> peak_bases{0};

    void begin(std::uint64_t n) {
        std::uint64_t cur = active_bases.fetch_add(n, std::memory_order_relaxed) + n;
        std::uint64_t peak = peak_bases.load(std::memory_order_relaxed);
        while (cur > peak && !peak_bases.compare_exchange_weak(peak, cur, std::memory_order_relaxed)) {
        }
    }

    void end(std::uint64_t n) { active_bases.fetch_sub(n, std::memory_order_relaxed); }
};

}  // namespace cdbg
