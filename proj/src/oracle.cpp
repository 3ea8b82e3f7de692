#include "cdbg/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cdbg/dna.hpp"
#include "cdbg/errors.hpp"

namespace cdbg {

namespace {

constexpr std::uint64_t kOracleBaseCap = 10'000'000;

std::string rc_str(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = s.size(); i-- > 0;) out.push_back(complement_base(s[i]));
    return out;
}

std::string canon_str(const std::string& s) {
    std::string rc = rc_str(s);
    return s <= rc ? s : rc;
}

}  // namespace

OracleGraph naive_compacted_graph(const std::vector<SequenceRecord>& records, unsigned k,
                                  bool double_strand) {
    std::vector<std::string> strs;
    std::uint64_t total = 0;
    for (const auto& rec : records)
        for (const auto& seg : rec.segments) {
            total += seg.length();
            if (total > kOracleBaseCap)
                throw InputError("oracle input exceeds the base cap; it is a test-scale reference only");
            if (seg.length() >= k) strs.push_back(seg.bases.decode(0, seg.length()));
        }

    std::unordered_map<std::string, std::uint64_t> edge_count;
    std::unordered_set<std::string> vertices;
    std::unordered_set<std::string> sentinels;

    auto add_strand = [&](const std::string& s) {
        for (std::size_t i = 0; i + k <= s.size(); ++i) {
            vertices.insert(s.substr(i, k));
            if (i + k < s.size()) edge_count[s.substr(i, k + 1)]++;
        }
        sentinels.insert(s.substr(0, k));
        sentinels.insert(s.substr(s.size() - k, k));
    };

    for (const auto& s : strs) {
        add_strand(s);
        if (double_strand) add_strand(rc_str(s));
    }

    auto out_chars = [&](const std::string& v) {
        std::string cs;
        for (char c : kCodeToBase)
            if (edge_count.count(v + c)) cs.push_back(c);
        return cs;
    };
    auto in_chars = [&](const std::string& v) {
        std::string cs;
        for (char c : kCodeToBase)
            if (edge_count.count(c + v)) cs.push_back(c);
        return cs;
    };

    std::unordered_set<std::string> junctions;
    for (const auto& v : vertices) {
        if (sentinels.count(v) || out_chars(v).size() > 1 || in_chars(v).size() > 1)
            junctions.insert(v);
    }

    // Walk maximal non-branching paths from every junction.
    struct Chain {
        std::string from, to, label;
        std::uint64_t mult;
    };
    std::vector<Chain> chains;
    std::vector<std::string> junction_list(junctions.begin(), junctions.end());
    std::sort(junction_list.begin(), junction_list.end());
    const std::uint64_t step_guard = 4 * (total + 16) * (double_strand ? 2 : 1) + 16;

    for (const auto& u : junction_list) {
        for (char c : kCodeToBase) {
            auto it = edge_count.find(u + c);
            if (it == edge_count.end()) continue;
            std::string label = u + c;
            std::string v = label.substr(1);
            std::uint64_t steps = 0;
            while (!junctions.count(v)) {
                const std::string oc = out_chars(v);
                if (oc.size() != 1 || ++steps > step_guard)
                    throw std::logic_error("oracle walk failed to terminate at a junction");
                label.push_back(oc[0]);
                v = label.substr(label.size() - k);
            }
            chains.push_back(Chain{u, v, label, it->second});
        }
    }

    OracleGraph g;
    if (!double_strand) {
        for (const auto& c : chains)
            g.edges.push_back(OracleGraph::Edge{c.from, '+', c.to, '+', c.label, c.mult});
        g.vertices.assign(junction_list.begin(), junction_list.end());
    } else {
        // Each merged edge class is seen once per orientation with equal
        // multiplicities; self-reverse-complement labels are seen once with a
        // doubled count.
        std::unordered_map<std::string, Chain> merged;
        for (const auto& c : chains) {
            const std::string key = canon_str(c.label);
            auto it = merged.find(key);
            if (it == merged.end()) {
                merged.emplace(key, c);
            } else if (it->second.mult != c.mult) {
                throw std::logic_error("oracle orientation multiplicities disagree");
            }
        }
        for (auto& [key, c] : merged) {
            std::uint64_t mult = c.mult;
            if (key == rc_str(key)) {
                if (mult % 2 != 0) throw std::logic_error("self-complementary chain with odd count");
                mult /= 2;
            }
            const std::string from_k = key.substr(0, k);
            const std::string to_k = key.substr(key.size() - k);
            g.edges.push_back(OracleGraph::Edge{canon_str(from_k),
                                                from_k == canon_str(from_k) ? '+' : '-',
                                                canon_str(to_k), to_k == canon_str(to_k) ? '+' : '-',
                                                key, mult});
        }
        std::unordered_set<std::string> canon_vertices;
        for (const auto& v : junction_list) canon_vertices.insert(canon_str(v));
        g.vertices.assign(canon_vertices.begin(), canon_vertices.end());
        std::sort(g.vertices.begin(), g.vertices.end());
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const OracleGraph::Edge& a, const OracleGraph::Edge& b) {
        return std::tie(a.from, a.from_strand, a.to, a.to_strand, a.label) <
               std::tie(b.from, b.from_strand, b.to, b.to_strand, b.label);
    });
    return g;
}

GraphSignature signature(const OracleGraph& g) {
    GraphSignature s;
    s.vertices = g.vertices;
    std::sort(s.vertices.begin(), s.vertices.end());
    for (const auto& e : g.edges)
        s.edges.emplace_back(e.from, e.from_strand, e.to, e.to_strand, e.label, e.multiplicity);
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

GraphSignature signature(const CompactedGraph& g, const std::vector<SegmentRef>& segments) {
    GraphSignature s;
    s.vertices.reserve(g.vertices.size());
    for (const auto& v : g.vertices) s.vertices.push_back(v.str());
    std::sort(s.vertices.begin(), s.vertices.end());
    for (const auto& e : g.edges)
        s.edges.emplace_back(g.vertices[e.from_id].str(), e.from_strand, g.vertices[e.to_id].str(),
                             e.to_strand, edge_label(e, segments), e.multiplicity);
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

}  // namespace cdbg
