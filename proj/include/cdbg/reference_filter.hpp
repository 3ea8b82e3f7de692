#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cdbg/bloom_filter.hpp"
#include "cdbg/exact_table.hpp"
#include "cdbg/junction_filter.hpp"
#include "cdbg/kmer.hpp"
#include "cdbg/mark_array.hpp"
#include "cdbg/rolling_hash.hpp"

namespace cdbg::reference {

// Straight-line single-threaded implementation of the junction filter used to
// cross-check the OpenMP kernels: per-position window extraction,
// from-scratch hashing, no chunking, no rolling state.

template <class Membership>
void filter_junctions_serial(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                             const RollingHashFamily* fam, Membership& E, MarkArray& C,
                             const SentinelSet& sentinels) {
    std::array<std::uint64_t, kMaxHashFunctions> dig;

    // Phase 1: store every (k+1)-mer adjacent to a marked position.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const PackedSequence& seq = segments[s].seg->bases;
        const std::uint64_t len = segments[s].seg->length();
        if (len < k + 1) continue;
        for (std::uint64_t j = 0; j + k < len; ++j) {
            if (!(C.get(s, j) || C.get(s, j + 1))) continue;
            Mer e = Mer::extract(seq, j, k + 1);
            if (double_strand) e = normalize(e);
            if constexpr (Membership::kUsesDigests) {
                for (unsigned f = 0; f < fam->hash_count(); ++f) dig[f] = fam->fresh(e, f);
                E.insert(e, dig.data());
            } else {
                E.insert(e, nullptr);
            }
        }
    }

    // Phase 2: unmark marked non-sentinel positions with in = out = 1.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const PackedSequence& seq = segments[s].seg->bases;
        const std::uint64_t len = segments[s].seg->length();
        if (len < k + 1) continue;
        for (std::uint64_t i = 1; i + k < len; ++i) {
            if (!C.get(s, i)) continue;
            Mer v = Mer::extract(seq, i, k);
            if (sentinels.contains(double_strand ? normalize(v) : v)) continue;
            int in_deg = 0, out_deg = 0;
            for (std::uint8_t c = 0; c < 4; ++c) {
                Mer out(k + 1);
                for (unsigned t = 0; t < k; ++t) out.set_base(t, v.base(t));
                out.set_base(k, c);
                if (double_strand) out = normalize(out);
                if constexpr (Membership::kUsesDigests) {
                    for (unsigned f = 0; f < fam->hash_count(); ++f) dig[f] = fam->fresh(out, f);
                }
                out_deg += E.contains(out, dig.data()) ? 1 : 0;

                Mer in(k + 1);
                in.set_base(0, c);
                for (unsigned t = 0; t < k; ++t) in.set_base(t + 1, v.base(t));
                if (double_strand) in = normalize(in);
                if constexpr (Membership::kUsesDigests) {
                    for (unsigned f = 0; f < fam->hash_count(); ++f) dig[f] = fam->fresh(in, f);
                }
                in_deg += E.contains(in, dig.data()) ? 1 : 0;
            }
            if (in_deg == 1 && out_deg == 1) C.clear(s, i);
        }
    }
}

inline TwoPassStats two_pass_serial(const std::vector<SegmentRef>& segments, unsigned k,
                                    bool double_strand, std::uint64_t seed, MarkArray& C,
                                    std::uint64_t bloom_bits, unsigned hash_count,
                                    const SentinelSet& sentinels) {
    TwoPassStats st;
    st.marks_initial = C.count_marked();
    RollingHashFamily fam(k + 1, hash_count, seed);
    {
        BloomFilter bloom(bloom_bits, hash_count);
        filter_junctions_serial(segments, k, double_strand, &fam, bloom, C, sentinels);
        st.bloom_fill = bloom.fill_ratio();
    }
    st.marks_pass1 = C.count_marked();
    {
        ExactEdgeTable table;
        filter_junctions_serial(segments, k, double_strand, nullptr, table, C, sentinels);
        st.exact_keys = table.size();
    }
    st.marks_pass2 = C.count_marked();
    return st;
}

}  // namespace cdbg::reference
