#include "cdbg/fasta.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "cdbg/dna.hpp"

namespace cdbg {

std::vector<SequenceRecord> parse_fasta(std::istream& in, std::size_t min_segment_len,
                                        ParseStats* stats) {
    std::vector<SequenceRecord> records;
    ParseStats local;
    if (!stats) stats = &local;

    bool have_record = false;
    std::uint64_t record_offset = 0;  // record-level coordinate including separators
    Segment cur;
    bool in_segment = false;

    auto end_segment = [&]() {
        if (!in_segment) return;
        if (cur.length() >= min_segment_len) {
            records.back().segments.push_back(std::move(cur));
        } else {
            ++stats->dropped_segments;
            stats->dropped_bases += cur.length();
        }
        cur = Segment{};
        in_segment = false;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (line[0] == '>') {
            end_segment();
            std::size_t id_end = 1;
            while (id_end < line.size() && !std::isspace(static_cast<unsigned char>(line[id_end])))
                ++id_end;
            if (id_end == 1) throw ParseError("empty record id", line_no);
            records.push_back(SequenceRecord{line.substr(1, id_end - 1), {}});
            have_record = true;
            record_offset = 0;
            continue;
        }

        if (!have_record) throw ParseError("sequence data before the first header", line_no);

        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            const std::int8_t code = kBaseToCode[static_cast<unsigned char>(c)];
            if (code >= 0) {
                if (!in_segment) {
                    cur.origin_offset = record_offset;
                    in_segment = true;
                }
                cur.bases.push_back(static_cast<std::uint8_t>(code));
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
                end_segment();
            } else {
                throw ParseError(std::string("invalid sequence character '") + c + "'", line_no);
            }
            ++record_offset;
        }
    }
    end_segment();
    return records;
}

std::vector<SequenceRecord> parse_fasta_file(const std::string& path, std::size_t min_segment_len,
                                             ParseStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path);
    return parse_fasta(in, min_segment_len, stats);
}

}  // namespace cdbg
