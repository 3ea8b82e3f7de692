#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "cdbg/dna.hpp"
#include "cdbg/kmer.hpp"
#include "cdbg/mark_array.hpp"
#include "cdbg/sequence.hpp"

namespace testutil {

inline std::string random_genome(std::mt19937_64& rng, std::size_t len) {
    std::uniform_int_distribution<int> base(0, 3);
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(cdbg::kCodeToBase[base(rng)]);
    return s;
}

inline std::string mutate(std::mt19937_64& rng, const std::string& s, double rate) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> shift(1, 3);
    std::string out = s;
    for (char& c : out) {
        if (coin(rng) < rate) {
            const int code = cdbg::kBaseToCode[static_cast<unsigned char>(c)];
            c = cdbg::kCodeToBase[(code + shift(rng)) & 3];
        }
    }
    return out;
}

inline std::vector<std::string> mutated_family(std::mt19937_64& rng, std::size_t len, unsigned genomes,
                                               double rate) {
    std::vector<std::string> out;
    out.push_back(random_genome(rng, len));
    for (unsigned g = 1; g < genomes; ++g) out.push_back(mutate(rng, out.front(), rate));
    return out;
}

// Build records directly from strings (one single-segment record per string).
inline std::vector<cdbg::SequenceRecord> make_records(const std::vector<std::string>& strs) {
    std::vector<cdbg::SequenceRecord> records;
    for (std::size_t i = 0; i < strs.size(); ++i) {
        cdbg::SequenceRecord rec;
        rec.id = "s" + std::to_string(i);
        cdbg::Segment seg;
        seg.bases = cdbg::PackedSequence::from_string(strs[i]);
        rec.segments.push_back(std::move(seg));
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string revcomp(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = s.size(); i-- > 0;) out.push_back(cdbg::complement_base(s[i]));
    return out;
}

inline std::string canon(const std::string& s) {
    std::string rc = revcomp(s);
    return s <= rc ? s : rc;
}

// Distinct (canonical) k-mers at marked positions.
inline std::unordered_set<std::string> marked_vertices(const std::vector<cdbg::SegmentRef>& segments,
                                                       unsigned k, bool ds,
                                                       const cdbg::MarkArray& marks) {
    std::unordered_set<std::string> out;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (std::uint64_t pos = marks.next_marked(s, 0); pos != cdbg::MarkArray::npos;
             pos = marks.next_marked(s, pos + 1)) {
            std::string km = segments[s].seg->bases.decode(pos, k);
            out.insert(ds ? canon(km) : km);
        }
    }
    return out;
}

// Mark positions of the given vertex set (canonical comparison in ds mode).
inline std::uint64_t count_positions_of(const std::vector<cdbg::SegmentRef>& segments, unsigned k,
                                        bool ds, const std::unordered_set<std::string>& vertices) {
    std::uint64_t n = 0;
    for (const auto& ref : segments) {
        const std::uint64_t len = ref.seg->length();
        if (len < k) continue;
        for (std::uint64_t i = 0; i + k <= len; ++i) {
            std::string km = ref.seg->bases.decode(i, k);
            if (vertices.count(ds ? canon(km) : km)) ++n;
        }
    }
    return n;
}

}  // namespace testutil
