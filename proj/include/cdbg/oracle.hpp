#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "cdbg/graph_builder.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

// Ground-truth graph built the slow way: explicit ordinary de Bruijn graph
// over k-mer strings, junction classification straight from the definitions,
// and compaction by walking maximal non-branching paths. Test-only; refuses
// inputs above ~10^7 bases.
struct OracleGraph {
    struct Edge {
        std::string from;
        char from_strand;
        std::string to;
        char to_strand;
        std::string label;
        std::uint64_t multiplicity;
    };

    std::vector<std::string> vertices;  // sorted junction k-mers (canonical in double-strand mode)
    std::vector<Edge> edges;            // sorted
};

OracleGraph naive_compacted_graph(const std::vector<SequenceRecord>& records, unsigned k,
                                  bool double_strand);

// Canonicalized structural form shared by the oracle and the pipeline so
// equality is a strict check.
struct GraphSignature {
    std::vector<std::string> vertices;
    std::vector<std::tuple<std::string, char, std::string, char, std::string, std::uint64_t>> edges;

    bool operator==(const GraphSignature&) const = default;
};

GraphSignature signature(const OracleGraph& g);
GraphSignature signature(const CompactedGraph& g, const std::vector<SegmentRef>& segments);

}  // namespace cdbg
