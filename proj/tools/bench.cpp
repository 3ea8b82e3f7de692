// Benchmark comparing the serial reference filter against the OpenMP kernels
// on a synthetic mutated genome family.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "cdbg/junction_filter.hpp"
#include "cdbg/partitioner.hpp"
#include "cdbg/pipeline.hpp"
#include "cdbg/reference_filter.hpp"

namespace {

std::vector<cdbg::SequenceRecord> make_family(std::uint64_t genome_bases, unsigned genomes,
                                              double mutation_rate, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> base(0, 3);
    std::vector<std::uint8_t> root(genome_bases);
    for (auto& b : root) b = static_cast<std::uint8_t>(base(rng));

    std::vector<cdbg::SequenceRecord> records;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (unsigned g = 0; g < genomes; ++g) {
        cdbg::SequenceRecord rec;
        rec.id = "g" + std::to_string(g);
        cdbg::Segment seg;
        seg.bases.reserve(genome_bases);
        for (std::uint64_t i = 0; i < genome_bases; ++i) {
            std::uint8_t b = root[i];
            if (g > 0 && coin(rng) < mutation_rate)
                b = static_cast<std::uint8_t>((b + 1 + base(rng) % 3) & 3);
            seg.bases.push_back(b);
        }
        rec.segments.push_back(std::move(seg));
        records.push_back(std::move(rec));
    }
    return records;
}

double now_between(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cdbg_bench: serial reference vs OpenMP kernels"};
    std::uint64_t bases = 4'000'000;
    unsigned genomes = 3;
    unsigned k = 25;
    unsigned log2_bits = 24;
    unsigned threads = 0;
    app.add_option("-n,--bases", bases, "bases per genome")->capture_default_str();
    app.add_option("-g,--genomes", genomes, "genomes in the family")->capture_default_str();
    app.add_option("-k", k, "k-mer length")->capture_default_str();
    app.add_option("-f,--filter-log2-size", log2_bits, "log2 Bloom bits")->capture_default_str();
    app.add_option("-t,--threads", threads, "max worker threads (0 = all cores)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    if (threads == 0) threads = cdbg::default_workers();

    std::cout << "generating " << genomes << " x " << bases << " bases...\n";
    auto records = make_family(bases, genomes, 1e-4, 42);
    auto segments = cdbg::flatten_segments(records);
    auto sentinels = cdbg::build_sentinel_set(segments, k, true);
    const std::uint64_t bloom_bits = std::uint64_t{1} << log2_bits;

    struct Row {
        std::string name;
        double seconds;
        std::uint64_t marks;
    };
    std::vector<Row> rows;

    {
        cdbg::MarkArray C(segments, k);
        C.set_all();
        auto t0 = std::chrono::steady_clock::now();
        auto st = cdbg::reference::two_pass_serial(segments, k, true, cdbg::kDefaultSeed, C, bloom_bits, 4,
                                                   sentinels);
        auto t1 = std::chrono::steady_clock::now();
        rows.push_back(Row{"serial reference", now_between(t0, t1), st.marks_pass2});
    }

    for (unsigned w : {1u, threads}) {
        cdbg::MarkArray C(segments, k);
        C.set_all();
        cdbg::FilterExec exec;
        exec.workers = w;
        auto t0 = std::chrono::steady_clock::now();
        auto st = cdbg::filter_junctions_two_pass(segments, k, true, cdbg::kDefaultSeed, C, bloom_bits, 4,
                                                  sentinels, exec);
        auto t1 = std::chrono::steady_clock::now();
        rows.push_back(Row{"kernels, " + std::to_string(w) + " worker(s)", now_between(t0, t1),
                           st.marks_pass2});
        if (w == threads && w == 1) break;
    }

    std::cout << "\ntwo-pass junction filter, k=" << k << ", b=2^" << log2_bits << "\n";
    const double base_time = rows.front().seconds;
    bool marks_agree = true;
    for (const auto& r : rows) {
        std::cout << "  " << r.name << ": " << r.seconds << " s (x" << base_time / r.seconds
                  << " vs reference), final marks " << r.marks << "\n";
        marks_agree &= r.marks == rows.front().marks;
    }
    std::cout << (marks_agree ? "all variants agree on the final marks\n"
                              : "MARK MISMATCH BETWEEN VARIANTS\n");

    {
        cdbg::FilterExec exec;
        exec.workers = threads;
        auto t0 = std::chrono::steady_clock::now();
        auto counters = cdbg::count_buckets(segments, k, true, cdbg::kDefaultSeed, 8192, bloom_bits, 4, exec);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << "\nbucket counting (" << threads << " workers): " << now_between(t0, t1) << " s, "
                  << counters.total() << " increments\n";
    }
    return marks_agree ? 0 : 1;
}
