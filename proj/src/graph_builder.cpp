#include "cdbg/graph_builder.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <set>
#include <unordered_map>

namespace cdbg {

namespace {

struct LabelDigest {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

// Stable content hash of a label given as a code source; two FNV-1a streams
// with distinct offsets.
template <class CodeAt>
LabelDigest hash_label(std::uint64_t len, CodeAt at) {
    std::uint64_t a = 0xcbf29ce484222325ull;
    std::uint64_t b = 0x9ae16a3b2f90404full;
    for (std::uint64_t i = 0; i < len; ++i) {
        const std::uint64_t c = at(i) + 1;
        a = (a ^ c) * 0x100000001b3ull;
        b = (b ^ (c * 0x9e3779b97f4a7c15ull)) * 0xc2b2ae3d27d4eb4full;
    }
    return LabelDigest{a, b};
}

// -1 / 0 / +1: occurrence label vs its reverse complement.
int compare_label_with_rc(const PackedSequence& seq, std::uint64_t off, std::uint64_t len) {
    for (std::uint64_t i = 0; i < len; ++i) {
        const std::uint8_t a = seq.at(off + i);
        const std::uint8_t b = complement_code(seq.at(off + len - 1 - i));
        if (a != b) return a < b ? -1 : 1;
    }
    return 0;
}

struct EdgeKey {
    std::uint64_t from_id;
    std::uint64_t to_id;
    std::uint64_t len;
    std::uint64_t hash_lo;
    std::uint64_t hash_hi;
    char from_strand;
    char to_strand;

    bool operator==(const EdgeKey& o) const {
        return from_id == o.from_id && to_id == o.to_id && len == o.len && hash_lo == o.hash_lo &&
               hash_hi == o.hash_hi && from_strand == o.from_strand && to_strand == o.to_strand;
    }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const {
        std::uint64_t h = k.hash_lo ^ (k.hash_hi * 0x9e3779b97f4a7c15ull);
        h ^= k.from_id * 0xff51afd7ed558ccdull + k.to_id * 0xc4ceb9fe1a85ec53ull + k.len;
        h ^= static_cast<std::uint64_t>(k.from_strand == '-') << 1;
        h ^= static_cast<std::uint64_t>(k.to_strand == '-');
        h ^= h >> 33;
        return h;
    }
};

char flip(char strand) { return strand == '+' ? '-' : '+'; }

}  // namespace

JunctionEnumeration enumerate_junctions(const std::vector<SegmentRef>& segments, unsigned k,
                                        bool double_strand, const MarkArray& marks) {
    JunctionEnumeration out;
    out.seg_spans.resize(segments.size());
    std::unordered_map<Mer, std::uint64_t, MerHash> ids;

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const std::size_t span_begin = out.records.size();
        const PackedSequence& seq = segments[s].seg->bases;
        for (std::uint64_t pos = marks.next_marked(s, 0); pos != MarkArray::npos;
             pos = marks.next_marked(s, pos + 1)) {
            Mer fwd = Mer::extract(seq, pos, k);
            Mer canon = fwd;
            char strand = '+';
            if (double_strand) {
                Mer rc = fwd.reverse_complement();
                if (rc.compare(fwd) < 0) {
                    canon = rc;
                    strand = '-';
                }
            }
            auto [it, fresh] = ids.emplace(canon, out.id_to_kmer.size());
            if (fresh) out.id_to_kmer.push_back(canon);
            out.records.push_back(JunctionRecord{segments[s].record, segments[s].segment, pos,
                                                 it->second, strand});
        }
        out.seg_spans[s] = {span_begin, out.records.size()};
    }
    return out;
}

CompactedGraph build_edges(const JunctionEnumeration& enumeration,
                           const std::vector<SegmentRef>& segments, unsigned k, bool double_strand) {
    CompactedGraph g;
    g.vertices = enumeration.id_to_kmer;
    g.walk.resize(segments.size());

    // A palindromic vertex reads the same on both strands, so reversing an
    // edge must not turn its '+' flag into '-'.
    std::vector<std::uint8_t> palindromic(enumeration.id_to_kmer.size(), 0);
    if (double_strand)
        for (std::size_t i = 0; i < enumeration.id_to_kmer.size(); ++i)
            palindromic[i] =
                enumeration.id_to_kmer[i] == enumeration.id_to_kmer[i].reverse_complement();
    auto flipped_strand = [&](const JunctionRecord& r) {
        return palindromic[r.junction_id] ? '+' : flip(r.strand);
    };

    // Per-pair orientation and label digest; the scans are independent per
    // segment and dominate the cost, so they run in parallel.
    struct PairInfo {
        LabelDigest digest;
        bool flipped;
    };
    std::vector<std::vector<PairInfo>> pair_info(segments.size());

    const int n = static_cast<int>(segments.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int si = 0; si < n; ++si) {
        const auto [begin, end] = enumeration.seg_spans[static_cast<std::size_t>(si)];
        if (end <= begin + 1) continue;
        const PackedSequence& seq = segments[static_cast<std::size_t>(si)].seg->bases;
        auto& infos = pair_info[static_cast<std::size_t>(si)];
        infos.reserve(end - begin - 1);
        for (std::size_t r = begin; r + 1 < end; ++r) {
            const std::uint64_t off = enumeration.records[r].offset;
            const std::uint64_t len = enumeration.records[r + 1].offset - off + k;
            bool flipped = false;
            if (double_strand) flipped = compare_label_with_rc(seq, off, len) > 0;
            LabelDigest d =
                flipped ? hash_label(len, [&](std::uint64_t i) {
                      return complement_code(seq.at(off + len - 1 - i));
                  })
                        : hash_label(len, [&](std::uint64_t i) { return seq.at(off + i); });
            infos.push_back(PairInfo{d, flipped});
        }
    }

    std::unordered_map<EdgeKey, std::uint64_t, EdgeKeyHash> classes;
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const auto [begin, end] = enumeration.seg_spans[si];
        if (end <= begin + 1) continue;
        for (std::size_t r = begin; r + 1 < end; ++r) {
            const JunctionRecord& a = enumeration.records[r];
            const JunctionRecord& b = enumeration.records[r + 1];
            const PairInfo& info = pair_info[si][r - begin];
            const std::uint64_t len = b.offset - a.offset + k;

            EdgeKey key;
            key.len = len;
            key.hash_lo = info.digest.lo;
            key.hash_hi = info.digest.hi;
            if (info.flipped) {
                key.from_id = b.junction_id;
                key.from_strand = flipped_strand(b);
                key.to_id = a.junction_id;
                key.to_strand = flipped_strand(a);
            } else {
                key.from_id = a.junction_id;
                key.from_strand = a.strand;
                key.to_id = b.junction_id;
                key.to_strand = b.strand;
            }

            auto [it, fresh] = classes.emplace(key, g.edges.size());
            if (fresh) {
                CompactedGraph::Edge e;
                e.from_id = key.from_id;
                e.from_strand = key.from_strand;
                e.to_id = key.to_id;
                e.to_strand = key.to_strand;
                e.label = CompactedGraph::LabelRef{static_cast<std::uint32_t>(si), a.offset, len,
                                                   info.flipped};
                e.multiplicity = 0;
                g.edges.push_back(e);
            }
            g.edges[it->second].multiplicity++;
            g.walk[si].push_back(CompactedGraph::Step{it->second, info.flipped});
        }
    }
    return g;
}

std::string edge_label(const CompactedGraph::Edge& e, const std::vector<SegmentRef>& segments) {
    const PackedSequence& seq = segments[e.label.seg].seg->bases;
    return e.label.flipped ? seq.decode_reverse_complement(e.label.offset, e.label.length)
                           : seq.decode(e.label.offset, e.label.length);
}

std::string step_label(const CompactedGraph& g, const CompactedGraph::Step& s,
                       const std::vector<SegmentRef>& segments) {
    const CompactedGraph::Edge& e = g.edges[s.edge];
    std::string stored = edge_label(e, segments);
    if (!s.flipped) return stored;
    std::string out;
    out.reserve(stored.size());
    for (std::size_t i = stored.size(); i-- > 0;) out.push_back(complement_base(stored[i]));
    return out;
}

void emit_gfa(const CompactedGraph& g, const std::vector<SegmentRef>& segments,
              const std::vector<SequenceRecord>& records, unsigned k, bool double_strand,
              std::ostream& out) {
    out << "H\tVN:Z:1.0\tKL:i:" << k << "\tSM:Z:" << (double_strand ? "double" : "single") << "\n";

    std::vector<std::string> names(g.edges.size());
    std::set<std::string> used;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const CompactedGraph::Edge& e = g.edges[i];
        std::string label = edge_label(e, segments);
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : label) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
        names[i] = buf;
        // distinct labels hashing to the same name get a deterministic suffix
        for (unsigned suffix = 2; !used.insert(names[i]).second; ++suffix)
            names[i] = std::string(buf) + "." + std::to_string(suffix);
        const SegmentRef& ref = segments[e.label.seg];
        out << "S\t" << names[i] << '\t' << label << "\tFC:i:" << e.multiplicity << "\tSO:Z:"
            << records[ref.record].id << ':' << (ref.seg->origin_offset + e.label.offset) << "\n";
    }

    std::set<std::tuple<std::uint64_t, bool, std::uint64_t, bool>> seen;
    for (const auto& walk : g.walk) {
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            const auto key = std::make_tuple(walk[i].edge, walk[i].flipped, walk[i + 1].edge,
                                             walk[i + 1].flipped);
            if (!seen.insert(key).second) continue;
            out << "L\t" << names[walk[i].edge] << '\t' << (walk[i].flipped ? '-' : '+') << '\t'
                << names[walk[i + 1].edge] << '\t' << (walk[i + 1].flipped ? '-' : '+') << '\t' << k
                << "M\n";
        }
    }
}

void emit_junctions_tsv(const JunctionEnumeration& enumeration,
                        const std::vector<SequenceRecord>& records, std::ostream& out) {
    out << "seq_id\tsegment_index\toffset\tjunction_id\tstrand\n";
    for (const auto& r : enumeration.records) {
        out << records[r.record].id << '\t' << r.segment << '\t' << r.offset << '\t' << r.junction_id
            << '\t' << r.strand << "\n";
    }
}

}  // namespace cdbg
