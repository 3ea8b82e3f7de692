#include "cdbg/partitioner.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "cdbg/bloom_filter.hpp"
#include "cdbg/chunking.hpp"
#include "cdbg/errors.hpp"
#include "cdbg/rolling_hash.hpp"

namespace cdbg {

namespace {

constexpr std::uint64_t kBucketSeedTag = 0x9d5c0ff1a2b3c4d5ull;
constexpr unsigned kGateStripes = 1024;

std::uint32_t bucket_of(std::uint64_t digest, std::uint32_t q) {
    return static_cast<std::uint32_t>(digest % q);
}

}  // namespace

BucketCounters count_buckets(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                             std::uint64_t seed, std::uint32_t bucket_count, std::uint64_t scratch_bits,
                             unsigned hash_count, const FilterExec& exec) {
    RollingHashFamily edge_fam(k + 1, hash_count, seed);
    RollingHashFamily bucket_fam(k, 1, seed ^ kBucketSeedTag);
    BloomFilter scratch(scratch_bits, hash_count);
    auto counters = std::make_unique<std::atomic<std::uint64_t>[]>(bucket_count);
    for (std::uint32_t i = 0; i < bucket_count; ++i) counters[i].store(0, std::memory_order_relaxed);
    // First-sighting detection is linearized per key so concurrent scans never
    // double count; different keys rarely share a stripe.
    auto gate = std::make_unique<std::mutex[]>(kGateStripes);

    const std::vector<Chunk> chunks = make_chunks(segments, k, exec.chunk_bases);
    const int n = static_cast<int>(chunks.size());
    const int threads = static_cast<int>(std::max(1u, exec.workers));

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int ci = 0; ci < n; ++ci) {
        const Chunk& ch = chunks[static_cast<std::size_t>(ci)];
        const PackedSequence& seq = segments[ch.seg].seg->bases;
        const std::uint64_t len = segments[ch.seg].seg->length();
        if (len < k + 1) continue;
        const std::uint64_t jb = ch.edge_begin();
        const std::uint64_t je = ch.edge_end(len, k);
        if (jb >= je) continue;
        if (exec.accounting) exec.accounting->begin(ch.end - ch.begin);

        StrandedMer edge;
        edge.init(seq, jb, k + 1, double_strand);
        RollingWindowHash ef(edge_fam), er(edge_fam);
        ef.init(edge.fwd);
        if (double_strand) er.init(edge.rc);

        StrandedMer kmer;
        kmer.init(seq, jb, k, double_strand);
        RollingWindowHash kf(bucket_fam), kr(bucket_fam);
        kf.init(kmer.fwd);
        if (double_strand) kr.init(kmer.rc);

        std::array<std::uint64_t, kMaxHashFunctions> dig;
        for (std::uint64_t j = jb; j < je; ++j) {
            const std::uint64_t prefix_digest =
                kmer.fwd_is_canonical() ? kf.digest(0) : kr.digest(0);
            {
                // advance k-mer window to j+1, the suffix endpoint
                const std::uint8_t out = kmer.fwd.base(0);
                const std::uint8_t in = seq.at(j + k);
                kmer.advance(in);
                kf.roll_append(out, in);
                if (double_strand) kr.roll_prepend(complement_code(out), complement_code(in));
            }
            const std::uint64_t suffix_digest =
                kmer.fwd_is_canonical() ? kf.digest(0) : kr.digest(0);

            if (edge.fwd_is_canonical())
                ef.copy_digests(dig.data());
            else
                er.copy_digests(dig.data());

            bool fresh;
            {
                std::lock_guard<std::mutex> lock(gate[dig[0] % kGateStripes]);
                fresh = !scratch.contains(edge.fwd, dig.data());
                if (fresh) scratch.insert(edge.fwd, dig.data());
            }
            if (fresh) {
                counters[bucket_of(prefix_digest, bucket_count)].fetch_add(1, std::memory_order_relaxed);
                counters[bucket_of(suffix_digest, bucket_count)].fetch_add(1, std::memory_order_relaxed);
            }

            if (j + 1 < je) {
                const std::uint8_t out = edge.fwd.base(0);
                const std::uint8_t in = seq.at(j + k + 1);
                edge.advance(in);
                ef.roll_append(out, in);
                if (double_strand) er.roll_prepend(complement_code(out), complement_code(in));
            }
        }
        if (exec.accounting) exec.accounting->end(ch.end - ch.begin);
    }

    BucketCounters out;
    out.bucket_count = bucket_count;
    out.counts.resize(bucket_count);
    for (std::uint32_t i = 0; i < bucket_count; ++i)
        out.counts[i] = counters[i].load(std::memory_order_relaxed);
    return out;
}

PartitionPlan greedy_partition(const BucketCounters& counters, std::uint32_t classes) {
    const std::uint32_t q = counters.bucket_count;
    if (classes < 1) throw UsageError("round count must be at least 1");
    if (classes > q) throw UsageError("round count exceeds the bucket count");

    const std::uint64_t total = counters.total();
    const std::uint64_t target = (total + classes - 1) / classes;

    PartitionPlan plan;
    plan.classes.reserve(classes);
    std::uint32_t i = 0;
    for (std::uint32_t c = 0; c < classes; ++c) {
        const std::uint32_t remaining_classes = classes - c - 1;
        PartitionPlan::Class cl;
        cl.begin = i;
        cl.load = counters.counts[i];
        ++i;
        if (c + 1 == classes) {
            while (i < q) cl.load += counters.counts[i++];
        } else {
            while (i < q && q - i > remaining_classes && cl.load + counters.counts[i] <= target)
                cl.load += counters.counts[i++];
        }
        cl.end = i;
        plan.classes.push_back(cl);
    }
    return plan;
}

namespace {

// Set marks at every position whose canonical k-mer falls into the round's
// bucket range.
void mark_round_positions(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                          const RollingHashFamily& bucket_fam, std::uint32_t bucket_count,
                          std::uint32_t lo, std::uint32_t hi, MarkArray& C, const FilterExec& exec) {
    const std::vector<Chunk> chunks = make_chunks(segments, k, exec.chunk_bases);
    const int n = static_cast<int>(chunks.size());
    const int threads = static_cast<int>(std::max(1u, exec.workers));

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int ci = 0; ci < n; ++ci) {
        const Chunk& ch = chunks[static_cast<std::size_t>(ci)];
        const PackedSequence& seq = segments[ch.seg].seg->bases;
        const std::uint64_t len = segments[ch.seg].seg->length();
        if (len < k) continue;
        const std::uint64_t pb = ch.pos_begin();
        const std::uint64_t pe = ch.pos_end(len, k);
        if (pb >= pe) continue;

        StrandedMer kmer;
        kmer.init(seq, pb, k, double_strand);
        RollingWindowHash kf(bucket_fam), kr(bucket_fam);
        kf.init(kmer.fwd);
        if (double_strand) kr.init(kmer.rc);

        for (std::uint64_t i = pb; i < pe; ++i) {
            const std::uint64_t digest = kmer.fwd_is_canonical() ? kf.digest(0) : kr.digest(0);
            const std::uint32_t b = bucket_of(digest, bucket_count);
            if (b >= lo && b < hi) C.set(ch.seg, i);
            if (i + 1 < pe) {
                const std::uint8_t out = kmer.fwd.base(0);
                const std::uint8_t in = seq.at(i + k);
                kmer.advance(in);
                kf.roll_append(out, in);
                if (double_strand) kr.roll_prepend(complement_code(out), complement_code(in));
            }
        }
    }
}

}  // namespace

RoundsOutcome run_rounds(const std::vector<SegmentRef>& segments, const RoundKnobs& knobs,
                         const SentinelSet& sentinels, const FilterExec& exec) {
    if (knobs.rounds < 1) throw UsageError("round count must be at least 1");
    RoundsOutcome out;

    auto run_pass = [&](MarkArray& C, MarkArray* pass1) {
        if (knobs.partial)
            return partial_compaction_marks(segments, knobs.k, knobs.double_strand, knobs.seed, C,
                                            knobs.bloom_bits, knobs.hash_count, sentinels, exec);
        return filter_junctions_two_pass(segments, knobs.k, knobs.double_strand, knobs.seed, C,
                                         knobs.bloom_bits, knobs.hash_count, sentinels, exec,
                                         knobs.max_table_keys, pass1);
    };

    if (knobs.rounds == 1) {
        MarkArray C(segments, knobs.k);
        C.set_all();
        MarkArray pass1;
        RoundStats rs;
        rs.bucket_begin = 0;
        rs.bucket_end = knobs.bucket_count;
        rs.pass = run_pass(C, knobs.capture_pass1 ? &pass1 : nullptr);
        rs.load_estimate = rs.pass.exact_keys;
        out.rounds.push_back(rs);
        if (knobs.capture_pass1)
            out.pass1_marks.push_back(knobs.partial ? C.clone() : std::move(pass1));
        out.final_marks = std::move(C);
        return out;
    }

    BucketCounters counters = count_buckets(segments, knobs.k, knobs.double_strand, knobs.seed,
                                            knobs.bucket_count, knobs.bloom_bits, knobs.hash_count, exec);
    PartitionPlan plan = greedy_partition(counters, knobs.rounds);
    RollingHashFamily bucket_fam(knobs.k, 1, knobs.seed ^ kBucketSeedTag);

    out.final_marks = MarkArray(segments, knobs.k);
    for (const auto& cl : plan.classes) {
        MarkArray C(segments, knobs.k);
        mark_round_positions(segments, knobs.k, knobs.double_strand, bucket_fam, knobs.bucket_count,
                             cl.begin, cl.end, C, exec);
        MarkArray pass1;
        RoundStats rs;
        rs.bucket_begin = cl.begin;
        rs.bucket_end = cl.end;
        rs.load_estimate = cl.load;
        rs.pass = run_pass(C, knobs.capture_pass1 ? &pass1 : nullptr);
        out.rounds.push_back(rs);
        if (knobs.capture_pass1)
            out.pass1_marks.push_back(knobs.partial ? C.clone() : std::move(pass1));
        out.final_marks.union_with(C);
    }
    return out;
}

}  // namespace cdbg
