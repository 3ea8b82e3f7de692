#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "cdbg/sequence.hpp"

namespace cdbg {

// Per-segment candidate flags, one bit per k-mer start offset. Bits are
// updated with single-word atomic ops so adjacent chunks sharing a word never
// lose updates.
class MarkArray {
public:
    static constexpr std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();

    MarkArray() = default;

    MarkArray(const std::vector<SegmentRef>& segments, unsigned k) {
        segs_.reserve(segments.size());
        for (const auto& ref : segments) {
            const std::uint64_t len = ref.seg->length();
            segs_.push_back(SegMarks(len >= k ? len - k + 1 : 0));
        }
    }

    std::uint64_t positions(std::size_t seg) const { return segs_[seg].positions; }
    std::size_t segment_count() const { return segs_.size(); }

    std::uint64_t total_positions() const {
        std::uint64_t n = 0;
        for (const auto& s : segs_) n += s.positions;
        return n;
    }

    bool get(std::size_t seg, std::uint64_t pos) const {
        const SegMarks& s = segs_[seg];
        return (s.words[pos >> 6].load(std::memory_order_relaxed) >> (pos & 63)) & 1u;
    }

    void set(std::size_t seg, std::uint64_t pos) {
        segs_[seg].words[pos >> 6].fetch_or(std::uint64_t{1} << (pos & 63), std::memory_order_relaxed);
    }

    void clear(std::size_t seg, std::uint64_t pos) {
        segs_[seg].words[pos >> 6].fetch_and(~(std::uint64_t{1} << (pos & 63)), std::memory_order_relaxed);
    }

    void set_all() {
        for (auto& s : segs_) {
            for (std::uint64_t w = 0; w < s.word_count; ++w)
                s.words[w].store(~std::uint64_t{0}, std::memory_order_relaxed);
            s.mask_tail();
        }
    }

    void clear_all() {
        for (auto& s : segs_)
            for (std::uint64_t w = 0; w < s.word_count; ++w)
                s.words[w].store(0, std::memory_order_relaxed);
    }

    // First marked position >= from, or npos.
    std::uint64_t next_marked(std::size_t seg, std::uint64_t from) const {
        const SegMarks& s = segs_[seg];
        if (from >= s.positions) return npos;
        std::uint64_t w = from >> 6;
        std::uint64_t cur = s.words[w].load(std::memory_order_relaxed) & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (cur) {
                const std::uint64_t pos = w * 64 + static_cast<std::uint64_t>(std::countr_zero(cur));
                return pos < s.positions ? pos : npos;
            }
            if (++w >= s.word_count) return npos;
            cur = s.words[w].load(std::memory_order_relaxed);
        }
    }

    std::uint64_t count_marked() const {
        std::uint64_t n = 0;
        for (const auto& s : segs_)
            for (std::uint64_t w = 0; w < s.word_count; ++w)
                n += static_cast<std::uint64_t>(std::popcount(s.words[w].load(std::memory_order_relaxed)));
        return n;
    }

    MarkArray clone() const {
        MarkArray out;
        out.segs_.reserve(segs_.size());
        for (const auto& s : segs_) {
            SegMarks c(s.positions);
            for (std::uint64_t w = 0; w < s.word_count; ++w)
                c.words[w].store(s.words[w].load(std::memory_order_relaxed), std::memory_order_relaxed);
            out.segs_.push_back(std::move(c));
        }
        return out;
    }

    void union_with(const MarkArray& other) {
        for (std::size_t i = 0; i < segs_.size(); ++i)
            for (std::uint64_t w = 0; w < segs_[i].word_count; ++w)
                segs_[i].words[w].fetch_or(other.segs_[i].words[w].load(std::memory_order_relaxed),
                                           std::memory_order_relaxed);
    }

    bool equals(const MarkArray& other) const {
        if (segs_.size() != other.segs_.size()) return false;
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            if (segs_[i].positions != other.segs_[i].positions) return false;
            for (std::uint64_t w = 0; w < segs_[i].word_count; ++w)
                if (segs_[i].words[w].load(std::memory_order_relaxed) !=
                    other.segs_[i].words[w].load(std::memory_order_relaxed))
                    return false;
        }
        return true;
    }

private:
    struct SegMarks {
        explicit SegMarks(std::uint64_t n)
            : positions(n), word_count(n ? (n + 63) / 64 : 0) {
            if (word_count) {
                words = std::make_unique<std::atomic<std::uint64_t>[]>(word_count);
                for (std::uint64_t w = 0; w < word_count; ++w) words[w].store(0, std::memory_order_relaxed);
            }
        }

        void mask_tail() {
            const std::uint64_t r = positions & 63;
            if (word_count && r)
                words[word_count - 1].store(words[word_count - 1].load(std::memory_order_relaxed) &
                                                ((std::uint64_t{1} << r) - 1),
                                            std::memory_order_relaxed);
        }

        std::uint64_t positions;
        std::uint64_t word_count;
        std::unique_ptr<std::atomic<std::uint64_t>[]> words;
    };

    std::vector<SegMarks> segs_;
};

}  // namespace cdbg
