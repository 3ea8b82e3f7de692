#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cdbg/kmer.hpp"
#include "cdbg/mark_array.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

struct JunctionRecord {
    std::uint32_t record = 0;    // index into the parsed record list
    std::uint32_t segment = 0;   // segment index within the record
    std::uint64_t offset = 0;    // 0-based k-mer start within the segment
    std::uint64_t junction_id = 0;
    char strand = '+';           // '+' when the forward k-mer equals the canonical form
};

struct JunctionEnumeration {
    std::vector<JunctionRecord> records;                       // input scan order
    std::vector<Mer> id_to_kmer;                               // junction_id -> canonical k-mer
    std::vector<std::pair<std::size_t, std::size_t>> seg_spans;  // per flattened segment: [begin, end)
};

// Scan the final marks in input order, assigning dense junction ids by first
// occurrence of each (canonical) k-mer.
JunctionEnumeration enumerate_junctions(const std::vector<SegmentRef>& segments, unsigned k,
                                        bool double_strand, const MarkArray& marks);

// Compacted multigraph. Edge labels are references into the packed input;
// in double-strand mode each edge class is stored once in canonical label
// orientation and `flipped` records whether the exemplar occurrence reads in
// the opposite direction.
struct CompactedGraph {
    struct LabelRef {
        std::uint32_t seg = 0;      // flattened segment index of the exemplar
        std::uint64_t offset = 0;   // segment-local start of the exemplar occurrence
        std::uint64_t length = 0;
        bool flipped = false;       // stored orientation is the reverse complement of the occurrence
    };

    struct Edge {
        std::uint64_t from_id = 0;
        char from_strand = '+';
        std::uint64_t to_id = 0;
        char to_strand = '+';
        LabelRef label;
        std::uint64_t multiplicity = 0;
    };

    struct Step {
        std::uint64_t edge = 0;
        bool flipped = false;  // edge stored opposite to this occurrence's scan direction
    };

    std::vector<Mer> vertices;            // junction_id -> k-mer
    std::vector<Edge> edges;              // discovery order
    std::vector<std::vector<Step>> walk;  // per flattened segment: consecutive edge classes

    std::uint64_t edge_occurrences() const {
        std::uint64_t n = 0;
        for (const auto& e : edges) n += e.multiplicity;
        return n;
    }
};

CompactedGraph build_edges(const JunctionEnumeration& enumeration,
                           const std::vector<SegmentRef>& segments, unsigned k, bool double_strand);

// Label in stored (canonical) orientation.
std::string edge_label(const CompactedGraph::Edge& e, const std::vector<SegmentRef>& segments);

// Label as it reads along the segment scan for one walk step.
std::string step_label(const CompactedGraph& g, const CompactedGraph::Step& s,
                       const std::vector<SegmentRef>& segments);

// GFA1: one S line per edge class (name = stable label hash, FC multiplicity
// tag, SO source-coordinate example), one L line per distinct consecutive
// adjacency with a kM overlap.
void emit_gfa(const CompactedGraph& g, const std::vector<SegmentRef>& segments,
              const std::vector<SequenceRecord>& records, unsigned k, bool double_strand,
              std::ostream& out);

void emit_junctions_tsv(const JunctionEnumeration& enumeration,
                        const std::vector<SequenceRecord>& records, std::ostream& out);

}  // namespace cdbg
