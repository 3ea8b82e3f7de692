#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdbg/chunking.hpp"
#include "cdbg/fasta.hpp"
#include "cdbg/graph_builder.hpp"
#include "cdbg/partitioner.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

inline constexpr std::uint64_t kDefaultSeed = 0x2c5a1b7e9d3f8641ull;

enum class OutputFormat { kGfa1, kJunctions };

struct RunConfig {
    unsigned k = 25;
    unsigned filter_log2_bits = 28;
    unsigned hash_count = 4;
    std::uint32_t rounds = 1;
    unsigned workers = 0;  // 0 = machine parallelism
    bool double_strand = true;
    bool partial = false;
    OutputFormat format = OutputFormat::kGfa1;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> inputs;
    std::string manifest;  // optional file listing one FASTA path per line
    std::string output = "-";
    std::uint64_t chunk_bases = kDefaultChunkBases;
    std::uint64_t max_table_keys = 0;
    std::uint32_t bucket_count = kDefaultBucketCount;
};

struct ConstructOptions {
    unsigned k = 25;
    bool double_strand = true;
    std::uint64_t bloom_bits = std::uint64_t{1} << 28;
    unsigned hash_count = 4;
    std::uint32_t rounds = 1;
    unsigned workers = 1;
    std::uint64_t seed = kDefaultSeed;
    bool partial = false;
    bool capture_pass1 = false;
    std::uint64_t chunk_bases = kDefaultChunkBases;
    std::uint64_t max_table_keys = 0;
    std::uint32_t bucket_count = kDefaultBucketCount;
    ChunkAccounting* accounting = nullptr;
};

struct ConstructResult {
    RoundsOutcome rounds;
    JunctionEnumeration enumeration;
    CompactedGraph graph;

    std::uint64_t marks_initial() const {
        std::uint64_t n = 0;
        for (const auto& r : rounds.rounds) n += r.pass.marks_initial;
        return n;
    }
    std::uint64_t marks_pass1() const {
        std::uint64_t n = 0;
        for (const auto& r : rounds.rounds) n += r.pass.marks_pass1;
        return n;
    }
    std::uint64_t marks_pass2() const {
        std::uint64_t n = 0;
        for (const auto& r : rounds.rounds) n += r.pass.marks_pass2;
        return n;
    }
    std::uint64_t exact_keys_total() const {
        std::uint64_t n = 0;
        for (const auto& r : rounds.rounds) n += r.pass.exact_keys;
        return n;
    }
};

// In-process end-to-end construction over already parsed records.
ConstructResult construct_graph(const std::vector<SegmentRef>& segments, const ConstructOptions& opt);

unsigned default_workers();

// Full CLI-facing run: parse inputs, construct, emit to config.output, and
// write a stable TSV run report. Throws typed errors; returns 0 on success.
int run(const RunConfig& config, std::ostream& report);

}  // namespace cdbg
