#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/trace.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Roadmaps: per-method-cluster evolution DAGs
// ---------------------------------------------------------------------------

struct RoadmapNode {
    int year = 0;
    int out_degree = 0;  // post-reduction
};

struct Roadmap {
    int cluster_id = -1;
    std::map<std::string, RoadmapNode> nodes;
    // (from, to) -> comparison datasets. No self-loops.
    std::map<std::pair<std::string, std::string>, std::set<std::string>> edges;
    // Edges inside a cycle are kept and flagged rather than reduced.
    std::set<std::pair<std::string, std::string>> cyclic_edges;
};

struct MethodInfo {
    std::string method;
    std::string original_paper;       // in-corpus paper id
    int year = 0;
    std::set<std::string> datasets;   // experiment chapter of the original
};

struct MethodInfoResult {
    std::map<std::string, MethodInfo> infos;
    std::vector<std::string> skipped;  // methods with no papers at all
};

// Per-method roadmap inputs: the traced original when it resolves in-corpus,
// otherwise the earliest citing paper. Proposal year is that paper's year;
// datasets come from its experiment chapter.
inline MethodInfoResult gather_method_info(const std::vector<std::string>& cluster,
                                           const std::vector<TraceResult>& traces,
                                           const MarkerIndex& index) {
    std::map<std::string, const TraceResult*> trace_of;
    for (const auto& t : traces)
        if (t.kind == MarkerKind::Method) trace_of[t.canonical] = &t;

    MethodInfoResult result;
    for (const auto& method : cluster) {
        MethodInfo info;
        info.method = method;

        auto it = trace_of.find(method);
        if (it != trace_of.end() && it->second->original.paper_id &&
            index.year_of(*it->second->original.paper_id)) {
            info.original_paper = *it->second->original.paper_id;
        } else {
            // Earliest citing paper, ties by paper id.
            const std::set<std::string>* papers =
                index.citing_papers(MarkerKind::Method, method);
            std::optional<std::pair<int, std::string>> best;
            if (papers)
                for (const auto& paper : *papers)
                    if (auto year = index.year_of(paper)) {
                        std::pair<int, std::string> cand{*year, paper};
                        if (!best || cand < *best) best = cand;
                    }
            if (!best) {
                result.skipped.push_back(method);
                continue;
            }
            info.original_paper = best->second;
        }

        info.year = *index.year_of(info.original_paper);
        if (const MarkerIndex::PaperSets* sets = index.sets_of(info.original_paper)) {
            const auto& ds =
                sets->experiment[static_cast<std::size_t>(MarkerKind::Dataset)];
            info.datasets.insert(ds.begin(), ds.end());
        }
        result.infos[method] = std::move(info);
    }
    return result;
}

// Edge Mi -> Mj whenever Mj is mentioned in the experiment chapter of Mi's
// original paper, labeled with that paper's experiment-chapter dataset set.
inline Roadmap build_edges(const std::vector<std::string>& cluster,
                           const MethodInfoResult& gathered, const MarkerIndex& index,
                           int cluster_id = -1) {
    Roadmap map;
    map.cluster_id = cluster_id;
    std::set<std::string> members(cluster.begin(), cluster.end());
    for (const auto& [method, info] : gathered.infos)
        map.nodes[method] = {info.year, 0};

    for (const auto& [method, info] : gathered.infos) {
        const MarkerIndex::PaperSets* sets = index.sets_of(info.original_paper);
        if (!sets) continue;
        const auto& mentioned =
            sets->experiment[static_cast<std::size_t>(MarkerKind::Method)];
        for (const auto& other : mentioned) {
            if (other == method) continue;  // no self-loops
            if (!members.count(other) || !gathered.infos.count(other)) continue;
            map.edges[{method, other}] = info.datasets;
        }
    }
    for (auto& [edge, datasets] : map.edges) ++map.nodes[edge.first].out_degree;
    return map;
}

namespace roadmap_detail {

// Tarjan strongly connected components over the roadmap nodes.
class SccFinder {
public:
    explicit SccFinder(const std::map<std::string, std::vector<std::string>>& adj)
        : adj_(adj) {
        for (const auto& [node, next] : adj_)
            if (!index_.count(node)) strongconnect(node);
    }

    int component_of(const std::string& node) const { return component_.at(node); }
    int component_size(int component) const { return sizes_.at(component); }

private:
    void strongconnect(const std::string& v) {
        // Iterative Tarjan; recursion depth is unbounded on long chains.
        struct Frame {
            std::string node;
            std::size_t child = 0;
        };
        std::vector<Frame> stack{{v, 0}};
        while (!stack.empty()) {
            Frame& frame = stack.back();
            const std::string& node = frame.node;
            if (frame.child == 0) {
                index_[node] = lowlink_[node] = counter_++;
                scc_stack_.push_back(node);
                on_stack_.insert(node);
            }
            const auto& next = adj_.at(node);
            if (frame.child < next.size()) {
                const std::string& w = next[frame.child++];
                if (!index_.count(w)) {
                    stack.push_back({w, 0});
                } else if (on_stack_.count(w)) {
                    lowlink_[node] = std::min(lowlink_[node], index_[w]);
                }
            } else {
                if (lowlink_[node] == index_[node]) {
                    int comp = static_cast<int>(sizes_.size());
                    int size = 0;
                    for (;;) {
                        std::string w = scc_stack_.back();
                        scc_stack_.pop_back();
                        on_stack_.erase(w);
                        component_[w] = comp;
                        ++size;
                        if (w == node) break;
                    }
                    sizes_.push_back(size);
                }
                std::string done = node;
                stack.pop_back();
                if (!stack.empty())
                    lowlink_[stack.back().node] =
                        std::min(lowlink_[stack.back().node], lowlink_[done]);
            }
        }
    }

    const std::map<std::string, std::vector<std::string>>& adj_;
    std::map<std::string, int> index_, lowlink_, component_;
    std::set<std::string> on_stack_;
    std::vector<std::string> scc_stack_;
    std::vector<int> sizes_;
    int counter_ = 0;
};

}  // namespace roadmap_detail

// Standard transitive reduction on the acyclic part: an edge disappears when
// another directed path of length >= 2 joins its endpoints. Edges inside a
// strongly connected component are kept and flagged instead.
inline Roadmap transitive_reduce(const Roadmap& input) {
    Roadmap out;
    out.cluster_id = input.cluster_id;
    out.nodes = input.nodes;
    for (auto& [name, node] : out.nodes) node.out_degree = 0;

    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [name, node] : input.nodes) adj[name];
    for (const auto& [edge, datasets] : input.edges) {
        adj[edge.first].push_back(edge.second);
        adj.emplace(edge.second, std::vector<std::string>{});
    }
    roadmap_detail::SccFinder scc(adj);

    // Condensation adjacency (distinct component pairs).
    std::map<int, std::set<int>> cond;
    for (const auto& [edge, datasets] : input.edges) {
        int a = scc.component_of(edge.first);
        int b = scc.component_of(edge.second);
        if (a != b) cond[a].insert(b);
    }

    // Reachability over the condensation DAG.
    std::map<int, std::set<int>> reach;
    auto reachable_from = [&cond](int start) {
        std::set<int> seen;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            auto it = cond.find(c);
            if (it == cond.end()) continue;
            for (int next : it->second)
                if (seen.insert(next).second) stack.push_back(next);
        }
        return seen;
    };
    for (const auto& [c, next] : cond) reach[c] = reachable_from(c);

    for (const auto& [edge, datasets] : input.edges) {
        int a = scc.component_of(edge.first);
        int b = scc.component_of(edge.second);
        if (a == b) {
            out.edges[edge] = datasets;
            out.cyclic_edges.insert(edge);
            continue;
        }
        // Redundant when some other successor component already reaches b.
        bool redundant = false;
        for (int mid : cond[a]) {
            if (mid == b) continue;
            auto it = reach.find(mid);
            if (it != reach.end() && it->second.count(b)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) out.edges[edge] = datasets;
    }
    for (const auto& [edge, datasets] : out.edges) ++out.nodes[edge.first].out_degree;
    return out;
}

// ---------------------------------------------------------------------------
// Graph text output
// ---------------------------------------------------------------------------

namespace roadmap_detail {

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string dataset_label(const std::set<std::string>& datasets) {
    if (datasets.empty()) return "null";
    std::string out;
    for (const auto& d : datasets) {
        if (!out.empty()) out += ", ";
        out += d;
    }
    return out;
}

}  // namespace roadmap_detail

// Numbered legend lines, one per edge in sorted edge order ("1: D1, D2";
// an empty dataset set prints as "null").
inline std::string emit_legend(const Roadmap& map) {
    std::string out;
    int number = 1;
    for (const auto& [edge, datasets] : map.edges)
        out += std::to_string(number++) + ": " +
               roadmap_detail::dataset_label(datasets) + "\n";
    return out;
}

// DOT graph with node year/out-degree attributes and numbered edge labels;
// the legend rides along as trailing comments. Ordering is deterministic.
inline std::string emit_dot(const Roadmap& map) {
    std::string out = "digraph roadmap";
    if (map.cluster_id >= 0) out += "_" + std::to_string(map.cluster_id);
    out += " {\n";
    for (const auto& [name, node] : map.nodes)
        out += "  " + roadmap_detail::quote(name) + " [year=" +
               std::to_string(node.year) +
               ", out_degree=" + std::to_string(node.out_degree) + "];\n";
    int number = 1;
    for (const auto& [edge, datasets] : map.edges) {
        out += "  " + roadmap_detail::quote(edge.first) + " -> " +
               roadmap_detail::quote(edge.second) + " [label=\"" +
               std::to_string(number) + "\"";
        if (map.cyclic_edges.count(edge)) out += ", style=dashed";
        out += "];\n";
        ++number;
    }
    out += "}\n";
    number = 1;
    for (const auto& [edge, datasets] : map.edges)
        out += "// " + std::to_string(number++) + ": " +
               roadmap_detail::dataset_label(datasets) + "\n";
    return out;
}

}  // namespace litmine
