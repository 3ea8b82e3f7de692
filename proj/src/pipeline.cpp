#include "cdbg/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

#include "cdbg/analysis.hpp"
#include "cdbg/errors.hpp"
#include "cdbg/junction_filter.hpp"

namespace cdbg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void validate(const RunConfig& c) {
    if (c.k < 1 || c.k > kMaxK) throw UsageError("k must be in [1, 128]");
    if (c.filter_log2_bits < 6 || c.filter_log2_bits > 48)
        throw UsageError("filter log2 size must be in [6, 48]");
    if (c.hash_count < 1 || c.hash_count > kMaxHashFunctions)
        throw UsageError("hash count must be in [1, 16]");
    if (c.rounds < 1) throw UsageError("round count must be at least 1");
    if (c.rounds > c.bucket_count) throw UsageError("round count exceeds the bucket count");
    if (c.inputs.empty() && c.manifest.empty()) throw UsageError("no input sequences given");
}

}  // namespace

unsigned default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

ConstructResult construct_graph(const std::vector<SegmentRef>& segments, const ConstructOptions& opt) {
    SentinelSet sentinels = build_sentinel_set(segments, opt.k, opt.double_strand);

    FilterExec exec;
    exec.workers = opt.workers ? opt.workers : default_workers();
    exec.chunk_bases = opt.chunk_bases;
    exec.accounting = opt.accounting;

    RoundKnobs knobs;
    knobs.k = opt.k;
    knobs.double_strand = opt.double_strand;
    knobs.seed = opt.seed;
    knobs.rounds = opt.rounds;
    knobs.bloom_bits = opt.bloom_bits;
    knobs.hash_count = opt.hash_count;
    knobs.bucket_count = opt.bucket_count;
    knobs.max_table_keys = opt.max_table_keys;
    knobs.partial = opt.partial;
    knobs.capture_pass1 = opt.capture_pass1;

    ConstructResult result;
    result.rounds = run_rounds(segments, knobs, sentinels, exec);
    result.enumeration = enumerate_junctions(segments, opt.k, opt.double_strand, result.rounds.final_marks);
    result.graph = build_edges(result.enumeration, segments, opt.k, opt.double_strand);
    return result;
}

int run(const RunConfig& config, std::ostream& report) {
    validate(config);
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<std::string> paths = config.inputs;
    if (!config.manifest.empty()) {
        std::ifstream mf(config.manifest);
        if (!mf) throw InputError("cannot open manifest: " + config.manifest);
        std::string line;
        while (std::getline(mf, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) paths.push_back(line);
        }
    }
    if (paths.empty()) throw UsageError("no input sequences given");

    auto t0 = std::chrono::steady_clock::now();
    std::vector<SequenceRecord> records;
    ParseStats parse_stats;
    for (const auto& p : paths) {
        auto recs = parse_fasta_file(p, config.k, &parse_stats);
        for (auto& r : recs) records.push_back(std::move(r));
    }
    const double t_parse = seconds_since(t0);

    const std::vector<SegmentRef> segments = flatten_segments(records);

    ConstructOptions opt;
    opt.k = config.k;
    opt.double_strand = config.double_strand;
    opt.bloom_bits = std::uint64_t{1} << config.filter_log2_bits;
    opt.hash_count = config.hash_count;
    opt.rounds = config.rounds;
    opt.workers = config.workers ? config.workers : default_workers();
    opt.seed = config.seed;
    opt.partial = config.partial;
    opt.chunk_bases = config.chunk_bases;
    opt.max_table_keys = config.max_table_keys;
    opt.bucket_count = config.bucket_count;

    t0 = std::chrono::steady_clock::now();
    ConstructResult result = construct_graph(segments, opt);
    const double t_filter = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    {
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (config.output != "-") {
            file.open(config.output, std::ios::binary);
            if (!file) throw InputError("cannot open output file: " + config.output);
            out = &file;
        }
        if (config.format == OutputFormat::kGfa1)
            emit_gfa(result.graph, segments, records, config.k, config.double_strand, *out);
        else
            emit_junctions_tsv(result.enumeration, records, *out);
        out->flush();
        if (out->fail()) throw InputError("failed writing output: " + config.output);
    }
    const double t_emit = seconds_since(t0);

    // Peak-memory estimate from the measured table load; the filter term
    // dominates unless the graph is junction-dense.
    std::uint64_t max_round_keys = 0;
    for (const auto& r : result.rounds.rounds)
        max_round_keys = std::max(max_round_keys, r.pass.exact_keys);
    const double est_bits =
        std::max<double>(static_cast<double>(opt.bloom_bits),
                         static_cast<double>(max_round_keys) * 2.0 * (config.k + 1));

    report << "config\tk\t" << config.k << "\n";
    report << "config\tmode\t" << (config.double_strand ? "double" : "single") << "\n";
    report << "config\tfilter_bits\t" << opt.bloom_bits << "\n";
    report << "config\thash_count\t" << config.hash_count << "\n";
    report << "config\trounds\t" << config.rounds << "\n";
    report << "config\tworkers\t" << opt.workers << "\n";
    report << "config\tseed\t" << config.seed << "\n";
    report << "config\tpartial\t" << (config.partial ? 1 : 0) << "\n";
    report << "input\trecords\t" << records.size() << "\n";
    report << "input\tsegments\t" << segments.size() << "\n";
    report << "input\tbases\t" << total_bases(segments) << "\n";
    report << "input\tdropped_segments\t" << parse_stats.dropped_segments << "\n";
    report << "input\tdropped_bases\t" << parse_stats.dropped_bases << "\n";
    for (std::size_t i = 0; i < result.rounds.rounds.size(); ++i) {
        const RoundStats& r = result.rounds.rounds[i];
        report << "round\t" << i << "\tbuckets\t" << r.bucket_begin << ".." << r.bucket_end << "\n";
        report << "round\t" << i << "\tload_estimate\t" << r.load_estimate << "\n";
        report << "round\t" << i << "\tmarks_initial\t" << r.pass.marks_initial << "\n";
        report << "round\t" << i << "\tmarks_pass1\t" << r.pass.marks_pass1 << "\n";
        if (!config.partial) {
            report << "round\t" << i << "\tmarks_pass2\t" << r.pass.marks_pass2 << "\n";
            report << "round\t" << i << "\texact_keys\t" << r.pass.exact_keys << "\n";
        }
        report << "round\t" << i << "\tbloom_fill\t" << r.pass.bloom_fill << "\n";
    }
    report << "marks\tinitial\t" << result.marks_initial() << "\n";
    report << "marks\tpass1\t" << result.marks_pass1() << "\n";
    if (!config.partial) report << "marks\tpass2\t" << result.marks_pass2() << "\n";
    report << "graph\tjunction_positions\t" << result.enumeration.records.size() << "\n";
    report << "graph\tvertices\t" << result.graph.vertices.size() << "\n";
    report << "graph\tedges\t" << result.graph.edges.size() << "\n";
    report << "graph\tedge_occurrences\t" << result.graph.edge_occurrences() << "\n";
    report << "memory\testimate_bits\t" << static_cast<std::uint64_t>(est_bits) << "\n";
    report << "time\tparse_s\t" << t_parse << "\n";
    report << "time\tfilter_s\t" << t_filter << "\n";
    report << "time\temit_s\t" << t_emit << "\n";
    report << "time\ttotal_s\t" << seconds_since(t_start) << "\n";
    return 0;
}

}  // namespace cdbg
