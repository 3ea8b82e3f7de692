#include "cdbg/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cdbg/errors.hpp"

namespace cdbg::analysis {

double bloom_fp_prob(unsigned hash_count, double distinct_edges, double filter_bits) {
    if (filter_bits <= 0) throw UsageError("filter size must be positive");
    if (distinct_edges <= 0) return 0.0;
    const double per_bit = -std::expm1(-(static_cast<double>(hash_count) * distinct_edges) / filter_bits);
    return std::pow(per_bit, static_cast<double>(hash_count));
}

double junction_fp_prob(double q) {
    return 1.0 - std::pow(1.0 - q, 6.0);
}

double expected_false_junctions(double links, double p) {
    return links * p;
}

double expected_marks(double gc_edges, double links, double p, double mean_occurrences) {
    return gc_edges + links * p * mean_occurrences;
}

double memory_estimate_bits(double filter_bits, double junctions, double links, double p, unsigned k) {
    const double table_bits = 8.0 * (junctions + links * p) * 2.0 * (k + 1);
    return std::max(filter_bits, table_bits);
}

std::uint64_t suggest_filter_size(std::uint64_t budget_bits) {
    if (budget_bits < 64) throw UsageError("filter budget below 64 bits");
    return std::bit_floor(budget_bits);
}

}  // namespace cdbg::analysis
