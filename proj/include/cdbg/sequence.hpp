#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cdbg/dna.hpp"

namespace cdbg {

// 2-bit packed nucleotide string, 32 bases per word, base i at bits [2i, 2i+2)
// of word i/32 so that lower bit positions hold earlier bases.
class PackedSequence {
public:
    PackedSequence() = default;

    void reserve(std::size_t bases) { words_.reserve(bases / 32 + 2); }

    void push_back(std::uint8_t code) {
        const std::size_t w = size_ >> 5;
        if (w >= words_.size()) words_.push_back(0);
        words_[w] |= static_cast<std::uint64_t>(code & 3u) << (2 * (size_ & 31));
        ++size_;
    }

    std::uint8_t at(std::size_t i) const {
        return static_cast<std::uint8_t>((words_[i >> 5] >> (2 * (i & 31))) & 3u);
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    // Word access with an implicit zero tail, so multi-word window extraction
    // never reads past the buffer.
    std::uint64_t word_or_zero(std::size_t w) const {
        return w < words_.size() ? words_[w] : 0;
    }

    std::string decode(std::size_t pos, std::size_t len) const {
        std::string out;
        out.reserve(len);
        for (std::size_t i = 0; i < len; ++i) out.push_back(kCodeToBase[at(pos + i)]);
        return out;
    }

    std::string decode_reverse_complement(std::size_t pos, std::size_t len) const {
        std::string out;
        out.reserve(len);
        for (std::size_t i = len; i-- > 0;)
            out.push_back(kCodeToBase[complement_code(at(pos + i))]);
        return out;
    }

    static PackedSequence from_string(std::string_view s) {
        PackedSequence p;
        p.reserve(s.size());
        for (char c : s) p.push_back(static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(c)]));
        return p;
    }

    bool operator==(const PackedSequence& o) const {
        if (size_ != o.size_) return false;
        for (std::size_t i = 0; i < size_; ++i)
            if (at(i) != o.at(i)) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

// Maximal ACGT run of one input record. origin_offset is the 0-based offset
// of the run in the source record, before undetermined bases were split out.
struct Segment {
    PackedSequence bases;
    std::uint64_t origin_offset = 0;

    std::size_t length() const { return bases.size(); }
};

struct SequenceRecord {
    std::string id;
    std::vector<Segment> segments;
};

inline Segment reverse_complement(const Segment& s) {
    Segment out;
    out.origin_offset = s.origin_offset;
    out.bases.reserve(s.length());
    for (std::size_t i = s.length(); i-- > 0;)
        out.bases.push_back(complement_code(s.bases.at(i)));
    return out;
}

// Flattened view over all segments of all records; kernels operate on this.
// The records must outlive the refs.
struct SegmentRef {
    std::uint32_t record = 0;
    std::uint32_t segment = 0;
    const Segment* seg = nullptr;
};

inline std::vector<SegmentRef> flatten_segments(const std::vector<SequenceRecord>& records) {
    std::vector<SegmentRef> refs;
    for (std::uint32_t r = 0; r < records.size(); ++r)
        for (std::uint32_t s = 0; s < records[r].segments.size(); ++s)
            refs.push_back(SegmentRef{r, s, &records[r].segments[s]});
    return refs;
}

inline std::uint64_t total_bases(const std::vector<SegmentRef>& refs) {
    std::uint64_t n = 0;
    for (const auto& r : refs) n += r.seg->length();
    return n;
}

}  // namespace cdbg
