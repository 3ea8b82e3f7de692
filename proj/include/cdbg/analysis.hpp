#pragma once

#include <cstdint>

namespace cdbg::analysis {

// Closed-form estimators of the filter's error and resource behavior. These
// assume independent queries and are exposed as estimates, not guarantees.

// Probability that a single Bloom query over E distinct keys in b bits with h
// hash functions returns a false positive: (1 - e^(-hE/b))^h.
double bloom_fp_prob(unsigned hash_count, double distinct_edges, double filter_bits);

// Probability that a through-vertex survives the probabilistic pass: at most
// six of its eight flanking queries can be false, so p = 1 - (1 - q)^6.
double junction_fp_prob(double q);

// Expected number of through-vertices misclassified after the first pass.
double expected_false_junctions(double links, double p);

// Expected marks after the first pass: |G_c| + L*p*r, where r is the mean
// occurrence count of a false junction.
double expected_marks(double gc_edges, double links, double p, double mean_occurrences);

// max(b, 8*(J + L*p) * 2*(k+1)) in bits; the second term is the exact-table
// key estimate at two bits per base of each (k+1)-mer key.
double memory_estimate_bits(double filter_bits, double junctions, double links, double p, unsigned k);

// Largest power-of-two bit count within the budget. Budgets below 64 bits are
// rejected.
std::uint64_t suggest_filter_size(std::uint64_t budget_bits);

}  // namespace cdbg::analysis
