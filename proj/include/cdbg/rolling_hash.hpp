#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdbg/kmer.hpp"

namespace cdbg {

// Polynomial fingerprints modulo the Mersenne prime 2^61 - 1 with a random
// per-function base. Every update below is O(1) per function, independent of
// the window length:
//   H(w) = sum_i code(w[i]) * B^(L-1-i)
inline constexpr std::uint64_t kHashPrime = (std::uint64_t{1} << 61) - 1;

namespace hashdetail {

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(z & kHashPrime) + static_cast<std::uint64_t>(z >> 61);
    if (r >= kHashPrime) r -= kHashPrime;
    if (r >= kHashPrime) r -= kHashPrime;
    return r;
}

inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r >= kHashPrime) r -= kHashPrime;
    return r;
}

inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) {
    return a >= b ? a - b : a + kHashPrime - b;
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    while (exp) {
        if (exp & 1) r = mod_mul(r, base);
        base = mod_mul(base, base);
        exp >>= 1;
    }
    return r;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace hashdetail

inline constexpr unsigned kMaxHashFunctions = 16;

// A family of h independently seeded sliding-window fingerprint functions
// over windows of a fixed length.
class RollingHashFamily {
public:
    RollingHashFamily(unsigned window_len, unsigned hash_count, std::uint64_t seed)
        : window_len_(window_len), hash_count_(hash_count) {
        if (hash_count == 0 || hash_count > kMaxHashFunctions)
            throw std::invalid_argument("hash count must be in [1, 16]");
        fns_.resize(hash_count);
        for (unsigned f = 0; f < hash_count; ++f) {
            std::uint64_t s = hashdetail::splitmix64(seed ^ (0xa24baed4963ee407ull * (f + 1)) ^
                                                     (static_cast<std::uint64_t>(window_len) << 17));
            Fn& fn = fns_[f];
            fn.base = 2 + s % (kHashPrime - 3);
            fn.pow_top = hashdetail::mod_pow(fn.base, window_len - 1);
            fn.inv_base = hashdetail::mod_pow(fn.base, kHashPrime - 2);
        }
    }

    unsigned window_len() const { return window_len_; }
    unsigned hash_count() const { return hash_count_; }

    std::uint64_t fresh(const Mer& w, unsigned f) const {
        check(f);
        assert(w.length() == window_len_);
        std::uint64_t fp = 0;
        for (unsigned i = 0; i < window_len_; ++i)
            fp = hashdetail::mod_add(hashdetail::mod_mul(fp, fns_[f].base), w.base(i));
        return fp;
    }

    // Drop the first base (out), append a new last base (in).
    std::uint64_t roll_append(std::uint64_t fp, unsigned f, std::uint8_t out, std::uint8_t in) const {
        const Fn& fn = fns_[f];
        fp = hashdetail::mod_sub(fp, hashdetail::mod_mul(out, fn.pow_top));
        return hashdetail::mod_add(hashdetail::mod_mul(fp, fn.base), in);
    }

    // Drop the last base (out), prepend a new first base (in).
    std::uint64_t roll_prepend(std::uint64_t fp, unsigned f, std::uint8_t out, std::uint8_t in) const {
        const Fn& fn = fns_[f];
        fp = hashdetail::mod_mul(hashdetail::mod_sub(fp, out), fn.inv_base);
        return hashdetail::mod_add(fp, hashdetail::mod_mul(in, fn.pow_top));
    }

    std::uint64_t replace_last(std::uint64_t fp, unsigned f, std::uint8_t old_code, std::uint8_t new_code) const {
        (void)f;
        return hashdetail::mod_add(hashdetail::mod_sub(fp, old_code), new_code);
    }

    std::uint64_t replace_first(std::uint64_t fp, unsigned f, std::uint8_t old_code, std::uint8_t new_code) const {
        const Fn& fn = fns_[f];
        const std::uint64_t delta = hashdetail::mod_mul(hashdetail::mod_sub(new_code, old_code), fn.pow_top);
        return hashdetail::mod_add(fp, delta);
    }

private:
    void check(unsigned f) const {
        if (f >= hash_count_) throw std::out_of_range("hash function index out of range");
    }

    struct Fn {
        std::uint64_t base;
        std::uint64_t pow_top;
        std::uint64_t inv_base;
    };

    unsigned window_len_;
    unsigned hash_count_;
    std::vector<Fn> fns_;
};

// Per-worker rolling state: one fingerprint per family function for the
// current window. Never shared between threads.
class RollingWindowHash {
public:
    RollingWindowHash() = default;
    explicit RollingWindowHash(const RollingHashFamily& fam) : fam_(&fam) {}

    void init(const Mer& window) {
        for (unsigned f = 0; f < fam_->hash_count(); ++f) fp_[f] = fam_->fresh(window, f);
    }

    void roll_append(std::uint8_t out, std::uint8_t in) {
        for (unsigned f = 0; f < fam_->hash_count(); ++f) fp_[f] = fam_->roll_append(fp_[f], f, out, in);
    }

    void roll_prepend(std::uint8_t out, std::uint8_t in) {
        for (unsigned f = 0; f < fam_->hash_count(); ++f) fp_[f] = fam_->roll_prepend(fp_[f], f, out, in);
    }

    std::uint64_t digest(unsigned f) const {
        if (f >= fam_->hash_count()) throw std::out_of_range("hash function index out of range");
        return fp_[f];
    }

    void digests_replace_last(std::uint8_t old_code, std::uint8_t new_code, std::uint64_t* out) const {
        for (unsigned f = 0; f < fam_->hash_count(); ++f)
            out[f] = fam_->replace_last(fp_[f], f, old_code, new_code);
    }

    void digests_replace_first(std::uint8_t old_code, std::uint8_t new_code, std::uint64_t* out) const {
        for (unsigned f = 0; f < fam_->hash_count(); ++f)
            out[f] = fam_->replace_first(fp_[f], f, old_code, new_code);
    }

    void copy_digests(std::uint64_t* out) const {
        for (unsigned f = 0; f < fam_->hash_count(); ++f) out[f] = fp_[f];
    }

private:
    const RollingHashFamily* fam_ = nullptr;
    std::array<std::uint64_t, kMaxHashFunctions> fp_{};
};

}  // namespace cdbg
