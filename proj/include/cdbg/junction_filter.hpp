#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "cdbg/bloom_filter.hpp"
#include "cdbg/chunking.hpp"
#include "cdbg/exact_table.hpp"
#include "cdbg/kmer.hpp"
#include "cdbg/mark_array.hpp"
#include "cdbg/rolling_hash.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

// Terminal k-mers of every segment (canonical forms in double-strand mode).
// A marked position whose k-mer is in this set is never unmarked: sentinel
// vertices are junctions wherever they occur, not only at segment ends.
class SentinelSet {
public:
    void insert(const Mer& m) { set_.insert(m); }
    bool contains(const Mer& m) const { return set_.find(m) != set_.end(); }
    std::size_t size() const { return set_.size(); }

private:
    std::unordered_set<Mer, MerHash> set_;
};

SentinelSet build_sentinel_set(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand);

struct FilterExec {
    unsigned workers = 1;
    std::uint64_t chunk_bases = kDefaultChunkBases;
    ChunkAccounting* accounting = nullptr;
};

struct FilterPassCounts {
    std::uint64_t inserts = 0;   // membership insert calls (edge occurrences)
    std::uint64_t queries = 0;   // membership queries (8 per evaluated position)
    std::uint64_t unmarked = 0;
};

// All-or-none marking per (canonical) k-mer; O(n) with a hash map, meant for
// debug builds and tests.
bool satisfies_closure(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                       const MarkArray& marks);

namespace detail {

// Rolling scan state for one length-L text window on both strands, with
// optional fingerprints. Re-initializes after long unmarked gaps instead of
// rolling through them.
struct EdgeScanWindow {
    StrandedMer mer;
    RollingWindowHash fwd_hash;
    RollingWindowHash rc_hash;
    bool hashed = false;

    void init(const PackedSequence& seq, std::uint64_t pos, unsigned len, bool ds,
              const RollingHashFamily* fam) {
        mer.init(seq, pos, len, ds);
        if (fam) {
            hashed = true;
            fwd_hash = RollingWindowHash(*fam);
            fwd_hash.init(mer.fwd);
            if (ds) {
                rc_hash = RollingWindowHash(*fam);
                rc_hash.init(mer.rc);
            }
        }
    }

    void advance(std::uint8_t in) {
        const std::uint8_t out = mer.fwd.base(0);
        mer.advance(in);
        if (hashed) {
            fwd_hash.roll_append(out, in);
            if (mer.ds) rc_hash.roll_prepend(complement_code(out), complement_code(in));
        }
    }
};

template <class Membership>
void insert_canonical_edge(Membership& E, const EdgeScanWindow& w) {
    if constexpr (Membership::kUsesDigests) {
        std::array<std::uint64_t, kMaxHashFunctions> dig;
        if (w.mer.fwd_is_canonical())
            w.fwd_hash.copy_digests(dig.data());
        else
            w.rc_hash.copy_digests(dig.data());
        E.insert(w.mer.canonical(), dig.data());
    } else {
        E.insert(w.mer.canonical(), nullptr);
    }
}

// Phase 1 over one chunk: insert the canonical (k+1)-mer at offset j whenever
// the k-mer at j or at j+1 is marked.
template <class Membership>
void phase1_chunk(const SegmentRef& ref, std::size_t seg, unsigned k, bool ds,
                  const RollingHashFamily* fam, Membership& E, const MarkArray& C, const Chunk& chunk,
                  std::uint64_t& inserts) {
    const PackedSequence& seq = ref.seg->bases;
    const std::uint64_t len = ref.seg->length();
    if (len < k + 1) return;
    const std::uint64_t je = chunk.edge_end(len, k);  // exclusive
    std::uint64_t next_e = chunk.edge_begin();
    std::uint64_t scan = next_e;
    EdgeScanWindow win;
    bool valid = false;
    std::uint64_t wpos = 0;

    while (next_e < je) {
        const std::uint64_t nm = C.next_marked(seg, scan);
        if (nm == MarkArray::npos) break;
        std::uint64_t lo = nm > 0 ? nm - 1 : 0;
        if (lo < next_e) lo = next_e;
        if (lo >= je) break;
        const std::uint64_t hi = std::min<std::uint64_t>(nm, je - 1);
        for (std::uint64_t e = lo; e <= hi; ++e) {
            if (valid && e > wpos && e - wpos <= k + 1) {
                while (wpos < e) {
                    win.advance(seq.at(wpos + k + 1));
                    ++wpos;
                }
            } else if (!valid || e != wpos) {
                win.init(seq, e, k + 1, ds, fam);
                wpos = e;
                valid = true;
            }
            insert_canonical_edge(E, win);
            ++inserts;
        }
        next_e = hi + 1;
        scan = nm + 1;
    }
}

// Phase 2 over one chunk: for every marked position whose k-mer is not a
// sentinel, count in/out degree through the eight flanking (k+1)-mers and
// unmark exactly the through-vertices (in = 1 and out = 1).
template <class Membership>
void phase2_chunk(const SegmentRef& ref, std::size_t seg, unsigned k, bool ds,
                  const RollingHashFamily* fam, const Membership& E, MarkArray& C,
                  const SentinelSet& sentinels, const Chunk& chunk,
                  std::uint64_t& queries, std::uint64_t& unmarked) {
    const PackedSequence& seq = ref.seg->bases;
    const std::uint64_t len = ref.seg->length();
    if (len < k + 1) return;  // a length-k segment has only sentinel positions
    const std::uint64_t begin = std::max<std::uint64_t>(chunk.pos_begin(), 1);
    const std::uint64_t end = std::min<std::uint64_t>(chunk.pos_end(len, k), len - k);  // exclusive
    if (begin >= end) return;

    // Left edge window sits at i-1, right edge window at i.
    EdgeScanWindow eL, eR;
    bool valid = false;
    std::uint64_t wpos = 0;
    std::array<std::uint64_t, kMaxHashFunctions> dig;

    std::uint64_t i = begin;
    while (i < end) {
        const std::uint64_t nm = C.next_marked(seg, i);
        if (nm == MarkArray::npos || nm >= end) break;
        if (valid && nm > wpos && nm - wpos <= k + 1) {
            while (wpos < nm) {
                eL.advance(seq.at(wpos + k));
                eR.advance(seq.at(wpos + k + 1));
                ++wpos;
            }
        } else if (!valid || nm != wpos) {
            eL.init(seq, nm - 1, k + 1, ds, fam);
            eR.init(seq, nm, k + 1, ds, fam);
            wpos = nm;
            valid = true;
        }

        // Sentinel vertices stay marked.
        Mer v = eR.mer.fwd.prefix(k);
        bool is_sentinel;
        if (ds) {
            Mer vrc = eR.mer.rc.suffix(k);
            is_sentinel = sentinels.contains(v.compare(vrc) <= 0 ? v : vrc);
        } else {
            is_sentinel = sentinels.contains(v);
        }
        if (!is_sentinel) {
            int out_deg = 0, in_deg = 0;
            const std::uint8_t out_old = eR.mer.fwd.base(k);
            for (std::uint8_t c = 0; c < 4; ++c) {
                Mer cf = eR.mer.fwd;
                cf.set_base(k, c);
                if (ds) {
                    Mer cr = eR.mer.rc;
                    cr.set_base(0, complement_code(c));
                    const bool use_fwd = cf.compare(cr) <= 0;
                    if constexpr (Membership::kUsesDigests) {
                        if (use_fwd)
                            eR.fwd_hash.digests_replace_last(out_old, c, dig.data());
                        else
                            eR.rc_hash.digests_replace_first(complement_code(out_old), complement_code(c), dig.data());
                    }
                    out_deg += E.contains(use_fwd ? cf : cr, dig.data()) ? 1 : 0;
                } else {
                    if constexpr (Membership::kUsesDigests)
                        eR.fwd_hash.digests_replace_last(out_old, c, dig.data());
                    out_deg += E.contains(cf, dig.data()) ? 1 : 0;
                }
            }
            const std::uint8_t in_old = eL.mer.fwd.base(0);
            for (std::uint8_t c = 0; c < 4; ++c) {
                Mer cf = eL.mer.fwd;
                cf.set_base(0, c);
                if (ds) {
                    Mer cr = eL.mer.rc;
                    cr.set_base(k, complement_code(c));
                    const bool use_fwd = cf.compare(cr) <= 0;
                    if constexpr (Membership::kUsesDigests) {
                        if (use_fwd)
                            eL.fwd_hash.digests_replace_first(in_old, c, dig.data());
                        else
                            eL.rc_hash.digests_replace_last(complement_code(in_old), complement_code(c), dig.data());
                    }
                    in_deg += E.contains(use_fwd ? cf : cr, dig.data()) ? 1 : 0;
                } else {
                    if constexpr (Membership::kUsesDigests)
                        eL.fwd_hash.digests_replace_first(in_old, c, dig.data());
                    in_deg += E.contains(cf, dig.data()) ? 1 : 0;
                }
            }
            queries += 8;
            if (in_deg == 1 && out_deg == 1) {
                C.clear(seg, nm);
                ++unmarked;
            }
        }
        i = nm + 1;
    }
}

}  // namespace detail

// One filtering round over the whole input, parameterized by the membership
// structure (Bloom filter for the probabilistic pass, exact table for the
// final pass). Phase 1 fills E from marked positions, phase 2 unmarks
// through-vertices; the two phases run in separate parallel regions, which
// provides the barrier between them. Workers own disjoint chunk ranges, so
// phase-2 mark writes never race.
template <class Membership>
FilterPassCounts filter_junctions(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                                  const RollingHashFamily* edge_hashes, Membership& E, MarkArray& C,
                                  const SentinelSet& sentinels, const FilterExec& exec) {
    assert(!Membership::kUsesDigests || edge_hashes != nullptr);
#ifndef NDEBUG
    assert(satisfies_closure(segments, k, double_strand, C) && "candidate set must satisfy closure");
#endif
    const std::vector<Chunk> chunks = make_chunks(segments, k, exec.chunk_bases);
    std::atomic<std::uint64_t> inserts{0}, queries{0}, unmarked{0};
    const int n = static_cast<int>(chunks.size());
    const int threads = static_cast<int>(std::max(1u, exec.workers));

    // Exceptions (e.g. a table key-budget overflow) must not cross the
    // parallel region; the first one wins and is rethrown after the join.
    std::exception_ptr error;
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int ci = 0; ci < n; ++ci) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const Chunk& ch = chunks[static_cast<std::size_t>(ci)];
        if (exec.accounting) exec.accounting->begin(ch.end - ch.begin);
        try {
            std::uint64_t local = 0;
            detail::phase1_chunk(segments[ch.seg], ch.seg, k, double_strand, edge_hashes, E, C, ch,
                                 local);
            if (local) {
                inserts.fetch_add(local, std::memory_order_relaxed);
                if constexpr (requires { E.add_insert_count(std::uint64_t{}); })
                    E.add_insert_count(local);
            }
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
        if (exec.accounting) exec.accounting->end(ch.end - ch.begin);
    }
    if (failed.load()) std::rethrow_exception(error);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int ci = 0; ci < n; ++ci) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const Chunk& ch = chunks[static_cast<std::size_t>(ci)];
        if (exec.accounting) exec.accounting->begin(ch.end - ch.begin);
        try {
            std::uint64_t lq = 0, lu = 0;
            detail::phase2_chunk(segments[ch.seg], ch.seg, k, double_strand, edge_hashes, E, C,
                                 sentinels, ch, lq, lu);
            if (lq) {
                queries.fetch_add(lq, std::memory_order_relaxed);
                if constexpr (requires { E.add_query_count(std::uint64_t{}); }) E.add_query_count(lq);
            }
            if (lu) unmarked.fetch_add(lu, std::memory_order_relaxed);
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
        if (exec.accounting) exec.accounting->end(ch.end - ch.begin);
    }
    if (failed.load()) std::rethrow_exception(error);

    return FilterPassCounts{inserts.load(), queries.load(), unmarked.load()};
}

struct TwoPassStats {
    std::uint64_t marks_initial = 0;
    std::uint64_t marks_pass1 = 0;
    std::uint64_t marks_pass2 = 0;
    std::uint64_t exact_keys = 0;
    double bloom_fill = 0.0;
};

// Probabilistic pass with a fresh b-bit Bloom filter followed by an exact
// pass with a fresh table, in place on C. Deterministic given (input, b, h,
// seed). If pass1_out is non-null it receives a snapshot of the marks after
// the probabilistic pass.
TwoPassStats filter_junctions_two_pass(const std::vector<SegmentRef>& segments, unsigned k,
                                       bool double_strand, std::uint64_t seed, MarkArray& C,
                                       std::uint64_t bloom_bits, unsigned hash_count,
                                       const SentinelSet& sentinels, const FilterExec& exec,
                                       std::uint64_t max_table_keys = 0, MarkArray* pass1_out = nullptr);

// First pass only: the surviving marks describe a partially compacted graph.
TwoPassStats partial_compaction_marks(const std::vector<SegmentRef>& segments, unsigned k,
                                      bool double_strand, std::uint64_t seed, MarkArray& C,
                                      std::uint64_t bloom_bits, unsigned hash_count,
                                      const SentinelSet& sentinels, const FilterExec& exec);

}  // namespace cdbg
