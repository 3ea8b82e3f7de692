#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <string_view>

#include "cdbg/dna.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

// Hard bound on the window length. Keys are multi-word packings of up to
// kMaxK + 1 bases so edge windows for the largest k still fit.
inline constexpr unsigned kMaxK = 128;

// Fixed-capacity 2-bit packed window of up to kMaxK + 1 bases. Base 0 sits in
// the lowest bit pair of word 0; unused high bits are kept zero so equality
// and hashing can work word-wise.
class Mer {
public:
    static constexpr unsigned kMaxBases = kMaxK + 1;
    static constexpr unsigned kWords = (kMaxBases * 2 + 63) / 64;

    Mer() = default;
    explicit Mer(unsigned len) : len_(static_cast<std::uint16_t>(len)) { assert(len <= kMaxBases); }

    unsigned length() const { return len_; }
    unsigned words() const { return (len_ * 2u + 63u) / 64u; }

    std::uint8_t base(unsigned i) const {
        return static_cast<std::uint8_t>((w_[i >> 5] >> (2 * (i & 31))) & 3u);
    }

    void set_base(unsigned i, std::uint8_t code) {
        const unsigned w = i >> 5, s = 2 * (i & 31);
        w_[w] = (w_[w] & ~(std::uint64_t{3} << s)) | (static_cast<std::uint64_t>(code & 3u) << s);
    }

    // Drop base 0, shift everything down, append `code` as the new last base.
    void roll_append(std::uint8_t code) {
        const unsigned nw = words();
        for (unsigned w = 0; w + 1 < nw; ++w)
            w_[w] = (w_[w] >> 2) | (w_[w + 1] << 62);
        w_[nw - 1] >>= 2;
        set_base(len_ - 1, code);
    }

    // Drop the last base, shift everything up, prepend `code` as base 0.
    void roll_prepend(std::uint8_t code) {
        const unsigned nw = words();
        for (unsigned w = nw; w-- > 1;)
            w_[w] = (w_[w] << 2) | (w_[w - 1] >> 62);
        w_[0] = (w_[0] << 2) | (code & 3u);
        mask_tail();
    }

    // Lexicographic comparison over A<C<G<T; lengths must match.
    int compare(const Mer& o) const {
        assert(len_ == o.len_);
        const unsigned nw = words();
        for (unsigned w = 0; w < nw; ++w) {
            const std::uint64_t x = w_[w], y = o.w_[w];
            if (x != y) {
                const unsigned t = static_cast<unsigned>(std::countr_zero(x ^ y)) & ~1u;
                return static_cast<int>((x >> t) & 3u) - static_cast<int>((y >> t) & 3u);
            }
        }
        return 0;
    }

    bool operator==(const Mer& o) const {
        if (len_ != o.len_) return false;
        const unsigned nw = words();
        for (unsigned w = 0; w < nw; ++w)
            if (w_[w] != o.w_[w]) return false;
        return true;
    }

    bool operator<(const Mer& o) const { return compare(o) < 0; }

    Mer reverse_complement() const {
        Mer out(len_);
        for (unsigned i = 0; i < len_; ++i)
            out.set_base(len_ - 1 - i, complement_code(base(i)));
        return out;
    }

    // First `n` bases.
    Mer prefix(unsigned n) const {
        Mer out = *this;
        out.len_ = static_cast<std::uint16_t>(n);
        for (unsigned w = out.words(); w < kWords; ++w) out.w_[w] = 0;
        out.mask_tail();
        return out;
    }

    // Last `n` bases.
    Mer suffix(unsigned n) const {
        const unsigned drop = len_ - n;
        Mer out(n);
        const unsigned ws = (drop * 2) >> 6, bs = (drop * 2) & 63;
        for (unsigned w = 0; w < out.words(); ++w) {
            std::uint64_t lo = (ws + w < kWords) ? (w_[ws + w] >> bs) : 0;
            std::uint64_t hi = (bs && ws + w + 1 < kWords) ? (w_[ws + w + 1] << (64 - bs)) : 0;
            out.w_[w] = lo | hi;
        }
        out.mask_tail();
        return out;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(len_) << 32);
        const unsigned nw = words();
        for (unsigned w = 0; w < nw; ++w) {
            std::uint64_t x = w_[w] + 0x9e3779b97f4a7c15ull + h;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            h = x ^ (x >> 31);
        }
        return h;
    }

    std::string str() const {
        std::string s;
        s.reserve(len_);
        for (unsigned i = 0; i < len_; ++i) s.push_back(kCodeToBase[base(i)]);
        return s;
    }

    static Mer from_string(std::string_view s) {
        Mer m(static_cast<unsigned>(s.size()));
        for (unsigned i = 0; i < s.size(); ++i)
            m.set_base(i, static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(s[i])]));
        return m;
    }

    // Word-wise extraction of bases [pos, pos+len) from a packed sequence.
    static Mer extract(const PackedSequence& seq, std::size_t pos, unsigned len) {
        Mer m(len);
        const std::size_t off = 2 * pos;
        const std::size_t word = off >> 6;
        const unsigned shift = static_cast<unsigned>(off & 63);
        for (unsigned w = 0; w < m.words(); ++w) {
            std::uint64_t lo = seq.word_or_zero(word + w) >> shift;
            std::uint64_t hi = shift ? (seq.word_or_zero(word + w + 1) << (64 - shift)) : 0;
            m.w_[w] = lo | hi;
        }
        m.mask_tail();
        return m;
    }

private:
    void mask_tail() {
        const unsigned r = (len_ * 2u) & 63u;
        if (r) w_[words() - 1] &= (std::uint64_t{1} << r) - 1;
        for (unsigned w = words(); w < kWords; ++w) w_[w] = 0;
    }

    std::uint64_t w_[kWords] = {};
    std::uint16_t len_ = 0;
};

struct MerHash {
    std::size_t operator()(const Mer& m) const { return m.hash(); }
};

// Strand-normalized form: the lexicographically smaller of a window and its
// reverse complement. Idempotent by construction.
inline Mer normalize(const Mer& m) {
    Mer rc = m.reverse_complement();
    return m.compare(rc) <= 0 ? m : rc;
}

// A text window tracked on both strands at once. In single-strand mode the
// reverse complement is not maintained.
struct StrandedMer {
    Mer fwd;
    Mer rc;
    bool ds = false;

    void init(const PackedSequence& seq, std::size_t pos, unsigned len, bool double_strand) {
        ds = double_strand;
        fwd = Mer::extract(seq, pos, len);
        if (ds) rc = fwd.reverse_complement();
    }

    // Shift the window one position right; `in` is the incoming base.
    void advance(std::uint8_t in) {
        fwd.roll_append(in);
        if (ds) rc.roll_prepend(complement_code(in));
    }

    bool fwd_is_canonical() const { return !ds || fwd.compare(rc) <= 0; }
    const Mer& canonical() const { return fwd_is_canonical() ? fwd : rc; }
};

}  // namespace cdbg
