#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdbg/errors.hpp"
#include "cdbg/sequence.hpp"

namespace cdbg {

struct ParseStats {
    std::uint64_t dropped_segments = 0;  // ACGT runs shorter than the minimum
    std::uint64_t dropped_bases = 0;
};

// FASTA reader. Sequence is uppercased; maximal ACGT runs become segments;
// N and every other IUPAC or gap character splits. Segments shorter than
// min_segment_len are dropped and counted. CRLF and multi-line records are
// accepted; FASTQ is not.
std::vector<SequenceRecord> parse_fasta(std::istream& in, std::size_t min_segment_len,
                                        ParseStats* stats = nullptr);

std::vector<SequenceRecord> parse_fasta_file(const std::string& path, std::size_t min_segment_len,
                                             ParseStats* stats = nullptr);

}  // namespace cdbg
