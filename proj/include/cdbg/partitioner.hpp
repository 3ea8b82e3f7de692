#pragma once

#include <cstdint>
#include <vector>

#include "cdbg/junction_filter.hpp"
#include "cdbg/mark_array.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

inline constexpr std::uint32_t kDefaultBucketCount = 8192;

// Approximate distinct-(k+1)-mer load per k-mer hash bucket, used to balance
// the exact-table footprint across rounds.
struct BucketCounters {
    std::uint32_t bucket_count = 0;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

// One pass over all (k+1)-mers: the first sighting of each canonical
// (k+1)-mer (tracked by a scratch Bloom filter of `scratch_bits`) credits the
// buckets of both its endpoint k-mers, since an edge is loaded into every
// round owning either endpoint. Counts are deflated by scratch false
// positives, never inflated.
BucketCounters count_buckets(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                             std::uint64_t seed, std::uint32_t bucket_count, std::uint64_t scratch_bits,
                             unsigned hash_count, const FilterExec& exec);

struct PartitionPlan {
    struct Class {
        std::uint32_t begin = 0;  // bucket range [begin, end)
        std::uint32_t end = 0;
        std::uint64_t load = 0;
    };
    std::vector<Class> classes;
};

// Greedy linear scan: each class takes the longest bucket prefix whose load
// stays within ceil(total/classes); a single oversized bucket forms a
// singleton class; the final class absorbs the remainder. Every class is
// nonempty.
PartitionPlan greedy_partition(const BucketCounters& counters, std::uint32_t classes);

struct RoundStats {
    std::uint32_t bucket_begin = 0;
    std::uint32_t bucket_end = 0;
    std::uint64_t load_estimate = 0;
    TwoPassStats pass;
};

struct RoundsOutcome {
    MarkArray final_marks;
    std::vector<RoundStats> rounds;
    std::vector<MarkArray> pass1_marks;  // populated when capture_pass1 is set
};

struct RoundKnobs {
    unsigned k = 25;
    bool double_strand = true;
    std::uint64_t seed = 0;
    std::uint32_t rounds = 1;
    std::uint64_t bloom_bits = std::uint64_t{1} << 28;
    unsigned hash_count = 4;
    std::uint32_t bucket_count = kDefaultBucketCount;
    std::uint64_t max_table_keys = 0;
    bool partial = false;
    bool capture_pass1 = false;
};

// Round i marks exactly the positions whose canonical k-mer hashes into class
// i's bucket range, runs the two-pass filter on them, and unions the
// survivors. The final mark set is independent of the round count.
RoundsOutcome run_rounds(const std::vector<SegmentRef>& segments, const RoundKnobs& knobs,
                         const SentinelSet& sentinels, const FilterExec& exec);

}  // namespace cdbg
