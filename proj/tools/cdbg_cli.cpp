#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdbg/analysis.hpp"
#include "cdbg/errors.hpp"
#include "cdbg/oracle.hpp"
#include "cdbg/pipeline.hpp"

namespace {

int run_construct(const cdbg::RunConfig& config) {
    // keep the report off stdout when the graph itself goes there
    return cdbg::run(config, config.output == "-" ? std::cerr : std::cout);
}

int run_estimate(unsigned h, double edges, double bits, std::optional<double> links,
                 double occurrences, std::optional<double> gc_edges, std::optional<double> junctions,
                 std::optional<unsigned> k, std::optional<std::uint64_t> budget) {
    const double q = cdbg::analysis::bloom_fp_prob(h, edges, bits);
    const double p = cdbg::analysis::junction_fp_prob(q);
    std::cout.precision(10);
    std::cout << "q\t" << q << "\n";
    std::cout << "p\t" << p << "\n";
    if (links) std::cout << "expected_false_junctions\t"
                         << cdbg::analysis::expected_false_junctions(*links, p) << "\n";
    if (links && gc_edges)
        std::cout << "expected_marks\t" << cdbg::analysis::expected_marks(*gc_edges, *links, p, occurrences)
                  << "\n";
    if (links && junctions && k)
        std::cout << "memory_estimate_bits\t"
                  << cdbg::analysis::memory_estimate_bits(bits, *junctions, *links, p, *k) << "\n";
    if (budget)
        std::cout << "suggested_filter_bits\t" << cdbg::analysis::suggest_filter_size(*budget) << "\n";
    return 0;
}

int run_oracle(const std::vector<std::string>& inputs, unsigned k, bool single_strand,
               const std::string& output) {
    std::vector<cdbg::SequenceRecord> records;
    for (const auto& p : inputs) {
        auto recs = cdbg::parse_fasta_file(p, k);
        for (auto& r : recs) records.push_back(std::move(r));
    }
    cdbg::OracleGraph g = cdbg::naive_compacted_graph(records, k, !single_strand);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (output != "-") {
        file.open(output, std::ios::binary);
        if (!file) throw cdbg::InputError("cannot open output file: " + output);
        out = &file;
    }
    for (const auto& v : g.vertices) *out << "V\t" << v << "\n";
    for (const auto& e : g.edges)
        *out << "E\t" << e.from << '\t' << e.from_strand << '\t' << e.to << '\t' << e.to_strand << '\t'
             << e.label << '\t' << e.multiplicity << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cdbg: compacted de Bruijn graph construction from assembled genomes"};
    app.require_subcommand(1);

    // construct
    auto* construct = app.add_subcommand("construct", "Build the compacted graph from FASTA inputs");
    cdbg::RunConfig config;
    std::string format = "gfa1";
    bool single_strand = false;
    construct->add_option("inputs", config.inputs, "FASTA files");
    construct->add_option("-s,--sequences", config.manifest, "manifest listing one FASTA path per line");
    construct->add_option("-k", config.k, "k-mer length (<= 128)")->capture_default_str();
    construct->add_option("-f,--filter-log2-size", config.filter_log2_bits,
                          "log2 of the Bloom filter size in bits")->capture_default_str();
    construct->add_option("-q,--hash-count", config.hash_count, "Bloom hash functions")
        ->capture_default_str();
    construct->add_option("-r,--rounds", config.rounds, "number of filtering rounds")
        ->capture_default_str();
    construct->add_option("-t,--workers", config.workers, "worker threads (0 = all cores)")
        ->capture_default_str();
    construct->add_flag("--single-strand", single_strand, "ignore reverse complements");
    construct->add_flag("--partial", config.partial,
                        "skip the exact pass and emit a partially compacted graph");
    construct->add_option("--format", format, "output format: gfa1 or junctions")
        ->check(CLI::IsMember({"gfa1", "junctions"}))->capture_default_str();
    construct->add_option("--seed", config.seed, "hash seed")->capture_default_str();
    construct->add_option("-o,--output", config.output, "output path (- for stdout)")
        ->capture_default_str();
    construct->add_option("--max-table-keys", config.max_table_keys,
                          "abort if the exact table exceeds this many keys (0 = unlimited)");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Print error/resource estimates for parameters");
    estimate->set_help_flag("--help", "print help");
    unsigned est_h = 4;
    double est_edges = 0, est_bits = 0, est_r = 1;
    std::optional<double> est_links, est_gc, est_junctions;
    std::optional<unsigned> est_k;
    std::optional<std::uint64_t> est_budget;
    estimate->add_option("-h,--hash-count", est_h, "Bloom hash functions")->capture_default_str();
    estimate->add_option("-E,--edges", est_edges, "distinct (k+1)-mer count")->required();
    estimate->add_option("-b,--bits", est_bits, "Bloom filter bits")->required();
    estimate->add_option("-L,--links", est_links, "non-junction vertex count");
    estimate->add_option("-r,--occurrences", est_r, "mean occurrences of a false junction");
    estimate->add_option("-G,--gc-edges", est_gc, "compacted multigraph edge count");
    estimate->add_option("-J,--junctions", est_junctions, "junction vertex count");
    estimate->add_option("-k", est_k, "k-mer length");
    estimate->add_option("--budget", est_budget, "memory budget in bits; prints the suggested filter size");

    // oracle (debugging aid)
    auto* oracle = app.add_subcommand("oracle", "Naive reference construction (small inputs only)");
    oracle->group("");
    std::vector<std::string> oracle_inputs;
    unsigned oracle_k = 25;
    bool oracle_single = false;
    std::string oracle_out = "-";
    oracle->add_option("inputs", oracle_inputs, "FASTA files")->required();
    oracle->add_option("-k", oracle_k, "k-mer length")->capture_default_str();
    oracle->add_flag("--single-strand", oracle_single, "ignore reverse complements");
    oracle->add_option("-o,--output", oracle_out, "output path (- for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (construct->parsed()) {
            config.double_strand = !single_strand;
            config.format = format == "gfa1" ? cdbg::OutputFormat::kGfa1 : cdbg::OutputFormat::kJunctions;
            return run_construct(config);
        }
        if (estimate->parsed())
            return run_estimate(est_h, est_edges, est_bits, est_links, est_r, est_gc, est_junctions,
                                est_k, est_budget);
        if (oracle->parsed()) return run_oracle(oracle_inputs, oracle_k, oracle_single, oracle_out);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const cdbg::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cdbg::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cdbg::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
