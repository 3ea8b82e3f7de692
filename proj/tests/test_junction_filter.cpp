#include <doctest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "cdbg/junction_filter.hpp"
#include "cdbg/oracle.hpp"
#include "cdbg/reference_filter.hpp"
#include "testutil.hpp"

using namespace cdbg;

namespace {

std::set<std::pair<std::size_t, std::uint64_t>> marked_set(const MarkArray& m) {
    std::set<std::pair<std::size_t, std::uint64_t>> out;
    for (std::size_t s = 0; s < m.segment_count(); ++s)
        for (std::uint64_t p = m.next_marked(s, 0); p != MarkArray::npos; p = m.next_marked(s, p + 1))
            out.insert({s, p});
    return out;
}

// Exact membership that also answers true for a fixed set of injected edges,
// mimicking Bloom false positives on chosen keys.
struct InjectedMembership {
    static constexpr bool kUsesDigests = false;
    ExactEdgeTable table;
    std::unordered_set<std::string> injected;

    bool insert(const Mer& m, const std::uint64_t*) { return table.insert(m); }
    bool contains(const Mer& m, const std::uint64_t*) const {
        return table.contains(m) || injected.count(m.str()) != 0;
    }
};

// Oracle-side junction positions: occurrences of oracle junction vertices.
std::set<std::pair<std::size_t, std::uint64_t>> oracle_junction_positions(
    const std::vector<SegmentRef>& segments, unsigned k, bool ds, const OracleGraph& g) {
    std::unordered_set<std::string> verts(g.vertices.begin(), g.vertices.end());
    std::set<std::pair<std::size_t, std::uint64_t>> out;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const std::uint64_t len = segments[s].seg->length();
        if (len < k) continue;
        for (std::uint64_t i = 0; i + k <= len; ++i) {
            std::string km = segments[s].seg->bases.decode(i, k);
            if (ds) km = testutil::canon(km);
            if (verts.count(km)) out.insert({s, i});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("filter with an exact table finds the example junctions") {
    auto records = testutil::make_records({"TGGCACGTC", "TGGCACTTC"});
    auto segments = flatten_segments(records);
    const unsigned k = 2;
    auto sentinels = build_sentinel_set(segments, k, false);
    MarkArray C(segments, k);
    C.set_all();
    ExactEdgeTable table;
    filter_junctions(segments, k, false, nullptr, table, C, sentinels, FilterExec{});
    CHECK(marked_set(C) == std::set<std::pair<std::size_t, std::uint64_t>>{
                               {0, 0}, {0, 4}, {0, 7}, {1, 0}, {1, 4}, {1, 7}});
}

TEST_CASE("a terminal k-mer keeps all its occurrences marked") {
    auto records = testutil::make_records({"GACGTT", "ACG"});
    auto segments = flatten_segments(records);
    const unsigned k = 3;
    auto sentinels = build_sentinel_set(segments, k, false);
    CHECK(sentinels.size() == 3);  // GAC, GTT, ACG (first == last of s2)
    MarkArray C(segments, k);
    C.set_all();
    ExactEdgeTable table;
    filter_junctions(segments, k, false, nullptr, table, C, sentinels, FilterExec{});
    // ACG recurs mid-string at s1 position 1 and must stay marked there
    CHECK(marked_set(C) ==
          std::set<std::pair<std::size_t, std::uint64_t>>{{0, 0}, {0, 1}, {0, 3}, {1, 0}});
    CHECK(satisfies_closure(segments, k, false, C));
}

TEST_CASE("homopolymer: every occurrence of the sentinel k-mer stays marked") {
    auto records = testutil::make_records({"AAAA"});
    auto segments = flatten_segments(records);
    const unsigned k = 2;
    auto sentinels = build_sentinel_set(segments, k, false);
    MarkArray C(segments, k);
    C.set_all();
    ExactEdgeTable table;
    filter_junctions(segments, k, false, nullptr, table, C, sentinels, FilterExec{});
    CHECK(marked_set(C) == std::set<std::pair<std::size_t, std::uint64_t>>{{0, 0}, {0, 1}, {0, 2}});
}

TEST_CASE("an injected false edge keeps a through-vertex marked") {
    auto records = testutil::make_records({"TGGCACGTC", "TGGCACTTC"});
    auto segments = flatten_segments(records);
    const unsigned k = 2;
    auto sentinels = build_sentinel_set(segments, k, false);
    MarkArray C(segments, k);
    C.set_all();
    InjectedMembership fake;
    fake.injected.insert("TGC");  // false in-edge of GC; TG also branches but is a sentinel anyway
    filter_junctions(segments, k, false, nullptr, fake, C, sentinels, FilterExec{});
    CHECK(marked_set(C) == std::set<std::pair<std::size_t, std::uint64_t>>{
                               {0, 0}, {0, 2}, {0, 4}, {0, 7}, {1, 0}, {1, 2}, {1, 4}, {1, 7}});
}

TEST_CASE("two-pass: output is exact for any filter size, including saturated") {
    std::mt19937_64 rng(41);
    auto strs = testutil::mutated_family(rng, 600, 3, 0.03);
    auto records = testutil::make_records(strs);
    auto segments = flatten_segments(records);
    for (unsigned k : {3u, 11u}) {
        for (bool ds : {false, true}) {
            auto sentinels = build_sentinel_set(segments, k, ds);
            auto oracle = naive_compacted_graph(records, k, ds);
            auto expected = oracle_junction_positions(segments, k, ds, oracle);
            for (std::uint64_t bits : {64ull, 1ull << 14}) {
                MarkArray C(segments, k);
                C.set_all();
                auto st = filter_junctions_two_pass(segments, k, ds, 99, C, bits, 4, sentinels,
                                                    FilterExec{});
                CHECK(st.marks_initial >= st.marks_pass1);
                CHECK(st.marks_pass1 >= st.marks_pass2);
                CHECK(marked_set(C) == expected);
                CHECK(satisfies_closure(segments, k, ds, C));
                if (bits == 64) {
                    // saturated filter: every query answers true, pass 1 unmarks nothing
                    CHECK(st.bloom_fill == 1.0);
                    CHECK(st.marks_pass1 == st.marks_initial);
                }
            }
        }
    }
}

TEST_CASE("first pass is sound: junction positions always survive") {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 10; ++it) {
        auto strs = testutil::mutated_family(rng, 300 + rng() % 500, 2 + rng() % 3, 0.05);
        auto records = testutil::make_records(strs);
        auto segments = flatten_segments(records);
        const unsigned k = 2 + it % 4;
        const bool ds = it % 2 == 0;
        auto sentinels = build_sentinel_set(segments, k, ds);
        auto oracle = naive_compacted_graph(records, k, ds);
        auto expected = oracle_junction_positions(segments, k, ds, oracle);
        for (std::uint64_t bits : {64ull, 4096ull}) {
            MarkArray C(segments, k);
            C.set_all();
            partial_compaction_marks(segments, k, ds, 1000 + it, C, bits, 4, sentinels, FilterExec{});
            auto after = marked_set(C);
            for (const auto& pos : expected) REQUIRE(after.count(pos) == 1);
            CHECK(satisfies_closure(segments, k, ds, C));
        }
    }
}

TEST_CASE("parallel kernels agree with the serial reference") {
    std::mt19937_64 rng(47);
    for (int it = 0; it < 12; ++it) {
        auto strs = testutil::mutated_family(rng, 200 + rng() % 800, 1 + rng() % 4, 0.04);
        auto records = testutil::make_records(strs);
        auto segments = flatten_segments(records);
        const unsigned k = 2 + it % 5;
        const bool ds = it % 2 == 1;
        const std::uint64_t bits = 1ull << (6 + it % 8);
        auto sentinels = build_sentinel_set(segments, k, ds);

        MarkArray serial(segments, k);
        serial.set_all();
        auto st_serial =
            reference::two_pass_serial(segments, k, ds, 7 * it + 1, serial, bits, 4, sentinels);

        for (unsigned workers : {1u, 4u}) {
            for (std::uint64_t chunk : {std::uint64_t{64}, kDefaultChunkBases}) {
                FilterExec exec;
                exec.workers = workers;
                exec.chunk_bases = chunk;
                MarkArray C(segments, k);
                C.set_all();
                auto st = filter_junctions_two_pass(segments, k, ds, 7 * it + 1, C, bits, 4,
                                                    sentinels, exec);
                REQUIRE(C.equals(serial));
                CHECK(st.marks_pass1 == st_serial.marks_pass1);
                CHECK(st.marks_pass2 == st_serial.marks_pass2);
                CHECK(st.exact_keys == st_serial.exact_keys);
            }
        }
    }
}

TEST_CASE("determinism: repeated runs give identical marks and stats") {
    std::mt19937_64 rng(53);
    auto strs = testutil::mutated_family(rng, 2000, 3, 0.02);
    auto records = testutil::make_records(strs);
    auto segments = flatten_segments(records);
    const unsigned k = 11;
    auto sentinels = build_sentinel_set(segments, k, true);

    MarkArray first(segments, k);
    first.set_all();
    auto st0 = filter_junctions_two_pass(segments, k, true, 5, first, 1 << 10, 4, sentinels,
                                         FilterExec{2, 1 << 9, nullptr});
    for (int rep = 0; rep < 3; ++rep) {
        FilterExec exec{rep % 2 ? 1u : 8u, rep % 2 ? 256ull : kDefaultChunkBases, nullptr};
        MarkArray C(segments, k);
        C.set_all();
        auto st = filter_junctions_two_pass(segments, k, true, 5, C, 1 << 10, 4, sentinels, exec);
        CHECK(C.equals(first));
        CHECK(st.marks_pass1 == st0.marks_pass1);
        CHECK(st.exact_keys == st0.exact_keys);
    }
}

TEST_CASE("pass-1 snapshot capture matches the intermediate state") {
    std::mt19937_64 rng(59);
    auto records = testutil::make_records({testutil::random_genome(rng, 400)});
    auto segments = flatten_segments(records);
    const unsigned k = 5;
    auto sentinels = build_sentinel_set(segments, k, true);

    MarkArray partial_marks(segments, k);
    partial_marks.set_all();
    partial_compaction_marks(segments, k, true, 3, partial_marks, 256, 4, sentinels, FilterExec{});

    MarkArray C(segments, k);
    C.set_all();
    MarkArray snapshot;
    filter_junctions_two_pass(segments, k, true, 3, C, 256, 4, sentinels, FilterExec{}, 0, &snapshot);
    CHECK(snapshot.equals(partial_marks));
    // partial marks are a superset of the exact output
    auto exact = marked_set(C);
    auto partial = marked_set(partial_marks);
    for (const auto& pos : exact) CHECK(partial.count(pos) == 1);
}
