#include <doctest.h>

#include <random>

#include "cdbg/kmer.hpp"
#include "cdbg/rolling_hash.hpp"
#include "testutil.hpp"

using namespace cdbg;

TEST_CASE("normalize examples") {
    CHECK(normalize(Mer::from_string("AC")).str() == "AC");
    CHECK(normalize(Mer::from_string("TT")).str() == "AA");
    CHECK(normalize(Mer::from_string("ACGT")).str() == "ACGT");  // self-reverse-complementary
}

TEST_CASE("normalize properties") {
    std::mt19937_64 rng(3);
    for (unsigned k : {2u, 3u, 25u, 31u, 32u, 63u, 100u, 128u}) {
        for (int it = 0; it < 50; ++it) {
            const std::string s = testutil::random_genome(rng, k);
            Mer m = Mer::from_string(s);
            Mer n = normalize(m);
            CHECK(normalize(n) == n);                                 // idempotent
            CHECK(normalize(m.reverse_complement()) == n);            // strand merge
            CHECK(n.str() == testutil::canon(s));                     // string-level agreement
        }
    }
}

TEST_CASE("Mer packing, extraction, comparison, rolling") {
    std::mt19937_64 rng(5);
    for (unsigned len : {1u, 2u, 17u, 31u, 32u, 33u, 64u, 65u, 128u, 129u}) {
        const std::string text = testutil::random_genome(rng, len + 300);
        PackedSequence seq = PackedSequence::from_string(text);
        Mer rolled = Mer::extract(seq, 0, len);
        for (std::size_t pos = 0; pos + len <= text.size(); ++pos) {
            Mer fresh = Mer::extract(seq, pos, len);
            CHECK(fresh == Mer::from_string(text.substr(pos, len)));
            CHECK(rolled == fresh);
            CHECK(fresh.str() == text.substr(pos, len));
            if (pos + len < text.size())
                rolled.roll_append(static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(text[pos + len])]));
        }
        // prepend-rolling mirrors the reverse complement scan
        Mer rcr = Mer::extract(seq, 0, len).reverse_complement();
        for (std::size_t pos = 0; pos + len < text.size(); ++pos) {
            rcr.roll_prepend(complement_code(
                static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(text[pos + len])])));
            CHECK(rcr == Mer::extract(seq, pos + 1, len).reverse_complement());
        }
        // comparison matches string order
        for (int it = 0; it < 30; ++it) {
            const std::string a = testutil::random_genome(rng, len);
            const std::string b = testutil::random_genome(rng, len);
            const int want = a < b ? -1 : (a == b ? 0 : 1);
            const int got = Mer::from_string(a).compare(Mer::from_string(b));
            CHECK((got < 0 ? -1 : (got == 0 ? 0 : 1)) == want);
        }
    }
}

TEST_CASE("Mer prefix and suffix") {
    Mer m = Mer::from_string("TGGCACGTC");
    CHECK(m.prefix(3).str() == "TGG");
    CHECK(m.suffix(4).str() == "CGTC");
    std::mt19937_64 rng(9);
    const std::string s = testutil::random_genome(rng, 129);
    Mer big = Mer::from_string(s);
    for (unsigned n : {1u, 31u, 32u, 33u, 64u, 128u}) {
        CHECK(big.prefix(n).str() == s.substr(0, n));
        CHECK(big.suffix(n).str() == s.substr(s.size() - n));
    }
}

TEST_CASE("rolling hash: init equals from-scratch digest") {
    std::mt19937_64 rng(13);
    RollingHashFamily fam(26, 4, 0xfeedULL);
    for (int it = 0; it < 10000; ++it) {
        Mer w = Mer::from_string(testutil::random_genome(rng, 26));
        RollingWindowHash h(fam);
        h.init(w);
        for (unsigned f = 0; f < 4; ++f) CHECK(h.digest(f) == fam.fresh(w, f));
    }
}

TEST_CASE("rolling hash: rolled digests equal fresh digests along chains") {
    std::mt19937_64 rng(17);
    for (unsigned L : {3u, 26u, 101u}) {
        RollingHashFamily fam(L, 4, 0xabcdULL + L);
        for (int chain = 0; chain < 4; ++chain) {
            const std::string text = testutil::random_genome(rng, L + 1000);
            PackedSequence seq = PackedSequence::from_string(text);
            RollingWindowHash h(fam);
            h.init(Mer::extract(seq, 0, L));
            RollingWindowHash hr(fam);
            hr.init(Mer::extract(seq, 0, L).reverse_complement());
            for (std::size_t pos = 0; pos + L < text.size(); ++pos) {
                const std::uint8_t out = seq.at(pos);
                const std::uint8_t in = seq.at(pos + L);
                h.roll_append(out, in);
                hr.roll_prepend(complement_code(out), complement_code(in));
                Mer fwd = Mer::extract(seq, pos + 1, L);
                Mer rc = fwd.reverse_complement();
                for (unsigned f = 0; f < 4; ++f) {
                    REQUIRE(h.digest(f) == fam.fresh(fwd, f));
                    REQUIRE(hr.digest(f) == fam.fresh(rc, f));
                }
            }
        }
    }
}

TEST_CASE("rolling hash: single-base replacement digests") {
    std::mt19937_64 rng(19);
    const unsigned L = 26;
    RollingHashFamily fam(L, 4, 0x77ULL);
    std::array<std::uint64_t, kMaxHashFunctions> dig;
    for (int it = 0; it < 200; ++it) {
        Mer w = Mer::from_string(testutil::random_genome(rng, L));
        RollingWindowHash h(fam);
        h.init(w);
        for (std::uint8_t c = 0; c < 4; ++c) {
            Mer last = w;
            last.set_base(L - 1, c);
            h.digests_replace_last(w.base(L - 1), c, dig.data());
            for (unsigned f = 0; f < 4; ++f) REQUIRE(dig[f] == fam.fresh(last, f));
            Mer first = w;
            first.set_base(0, c);
            h.digests_replace_first(w.base(0), c, dig.data());
            for (unsigned f = 0; f < 4; ++f) REQUIRE(dig[f] == fam.fresh(first, f));
        }
    }
}

TEST_CASE("rolling hash: distinct seeds give distinct functions, bad index throws") {
    RollingHashFamily fam(26, 4, 1);
    std::mt19937_64 rng(23);
    Mer w = Mer::from_string(testutil::random_genome(rng, 26));
    CHECK(fam.fresh(w, 0) != fam.fresh(w, 1));
    RollingWindowHash h(fam);
    h.init(w);
    CHECK_THROWS_AS(h.digest(4), std::out_of_range);
    CHECK_THROWS_AS((RollingHashFamily{26, 0, 1}), std::invalid_argument);
}

TEST_CASE("StrandedMer tracks both strands") {
    std::mt19937_64 rng(29);
    for (unsigned L : {2u, 26u, 64u}) {
        const std::string text = testutil::random_genome(rng, L + 200);
        PackedSequence seq = PackedSequence::from_string(text);
        StrandedMer sm;
        sm.init(seq, 0, L, true);
        for (std::size_t pos = 0; pos + L <= text.size(); ++pos) {
            const std::string w = text.substr(pos, L);
            CHECK(sm.fwd.str() == w);
            CHECK(sm.rc.str() == testutil::revcomp(w));
            CHECK(sm.canonical().str() == testutil::canon(w));
            if (pos + L < text.size())
                sm.advance(static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(text[pos + L])]));
        }
    }
}
