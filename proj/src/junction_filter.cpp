#include "cdbg/junction_filter.hpp"

#include <unordered_map>

namespace cdbg {

SentinelSet build_sentinel_set(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand) {
    SentinelSet set;
    for (const auto& ref : segments) {
        const std::uint64_t len = ref.seg->length();
        if (len < k) continue;
        Mer first = Mer::extract(ref.seg->bases, 0, k);
        Mer last = Mer::extract(ref.seg->bases, len - k, k);
        set.insert(double_strand ? normalize(first) : first);
        set.insert(double_strand ? normalize(last) : last);
    }
    return set;
}

bool satisfies_closure(const std::vector<SegmentRef>& segments, unsigned k, bool double_strand,
                       const MarkArray& marks) {
    std::unordered_map<Mer, bool, MerHash> state;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const std::uint64_t len = segments[s].seg->length();
        if (len < k) continue;
        for (std::uint64_t i = 0; i + k <= len; ++i) {
            Mer m = Mer::extract(segments[s].seg->bases, i, k);
            if (double_strand) m = normalize(m);
            const bool bit = marks.get(s, i);
            auto [it, fresh] = state.emplace(m, bit);
            if (!fresh && it->second != bit) return false;
        }
    }
    return true;
}

TwoPassStats filter_junctions_two_pass(const std::vector<SegmentRef>& segments, unsigned k,
                                       bool double_strand, std::uint64_t seed, MarkArray& C,
                                       std::uint64_t bloom_bits, unsigned hash_count,
                                       const SentinelSet& sentinels, const FilterExec& exec,
                                       std::uint64_t max_table_keys, MarkArray* pass1_out) {
    TwoPassStats st;
    st.marks_initial = C.count_marked();
    RollingHashFamily fam(k + 1, hash_count, seed);
    {
        BloomFilter bloom(bloom_bits, hash_count);
        filter_junctions(segments, k, double_strand, &fam, bloom, C, sentinels, exec);
        st.bloom_fill = bloom.fill_ratio();
    }
    st.marks_pass1 = C.count_marked();
    if (pass1_out) *pass1_out = C.clone();
    {
        ExactEdgeTable table(max_table_keys);
        filter_junctions(segments, k, double_strand, nullptr, table, C, sentinels, exec);
        st.exact_keys = table.size();
    }
    st.marks_pass2 = C.count_marked();
    return st;
}

TwoPassStats partial_compaction_marks(const std::vector<SegmentRef>& segments, unsigned k,
                                      bool double_strand, std::uint64_t seed, MarkArray& C,
                                      std::uint64_t bloom_bits, unsigned hash_count,
                                      const SentinelSet& sentinels, const FilterExec& exec) {
    TwoPassStats st;
    st.marks_initial = C.count_marked();
    RollingHashFamily fam(k + 1, hash_count, seed);
    {
        BloomFilter bloom(bloom_bits, hash_count);
        filter_junctions(segments, k, double_strand, &fam, bloom, C, sentinels, exec);
        st.bloom_fill = bloom.fill_ratio();
    }
    st.marks_pass1 = C.count_marked();
    st.marks_pass2 = st.marks_pass1;
    return st;
}

}  // namespace cdbg
