#include "tdledger/archgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tdledger/errors.hpp"

namespace tdledger {

DepGraph DepGraph::from_spec(const DepGraphSpec& spec) {
    DepGraph g;
    std::map<std::string, std::size_t> index;
    for (const DepGraphSpec::Atom& atom : spec.atoms) {
        if (atom.component.empty()) {
            throw ValidationError("atom '" + atom.id + "' has an empty component");
        }
        if (!index.emplace(atom.id, g.ids_.size()).second) {
            throw ValidationError("duplicate atom id '" + atom.id + "'");
        }
        g.ids_.push_back(atom.id);
        g.components_.push_back(atom.component);
    }
    g.adjacency_.resize(g.ids_.size());
    for (const DepGraphSpec::Edge& edge : spec.edges) {
        auto from = index.find(edge.from);
        auto to = index.find(edge.to);
        if (from == index.end() || to == index.end()) {
            throw ValidationError("edge references undeclared atom '" +
                                  (from == index.end() ? edge.from : edge.to) + "'");
        }
        if (edge.weight == 0) {
            throw ValidationError("edge weight must be positive");
        }
        g.edges_.push_back({from->second, to->second, edge.weight});
        g.adjacency_[from->second].push_back(to->second);
    }
    return g;
}

std::optional<std::size_t> DepGraph::find_atom(std::string_view id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i] == id) return i;
    }
    return std::nullopt;
}

SccResult strongly_connected_components(const DepGraph& graph) {
    const std::size_t n = graph.atom_count();
    const auto& adj = graph.adjacency();

    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited);
    std::vector<std::size_t> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    std::vector<std::vector<std::size_t>> sccs;

    // Tarjan with an explicit frame stack; input graphs are user data, so
    // recursion depth must not depend on them.
    struct Frame {
        std::size_t vertex;
        std::size_t next_child;
    };
    std::vector<Frame> frames;

    for (std::size_t start = 0; start < n; ++start) {
        if (index[start] != kUnvisited) continue;
        frames.push_back({start, 0});
        index[start] = lowlink[start] = next_index++;
        stack.push_back(start);
        on_stack[start] = true;

        while (!frames.empty()) {
            Frame& frame = frames.back();
            std::size_t v = frame.vertex;
            if (frame.next_child < adj[v].size()) {
                std::size_t w = adj[v][frame.next_child++];
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    std::vector<std::size_t> scc;
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.push_back(w);
                        if (w == v) break;
                    }
                    sccs.push_back(std::move(scc));
                }
                frames.pop_back();
                if (!frames.empty()) {
                    std::size_t parent = frames.back().vertex;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }

    for (auto& scc : sccs) std::sort(scc.begin(), scc.end());
    std::sort(sccs.begin(), sccs.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    SccResult result;
    result.components = std::move(sccs);
    result.component_of.resize(n);
    result.cyclic.resize(result.components.size(), false);

    std::vector<std::set<std::size_t>> self_loops(n);
    for (const DepGraph::Edge& e : graph.edges()) {
        if (e.from == e.to) self_loops[e.from].insert(e.to);
    }
    for (std::size_t c = 0; c < result.components.size(); ++c) {
        for (std::size_t atom : result.components[c]) result.component_of[atom] = c;
        if (result.components[c].size() >= 2) {
            result.cyclic[c] = true;
        } else {
            std::size_t atom = result.components[c].front();
            result.cyclic[c] = !self_loops[atom].empty();
        }
    }
    return result;
}

Rational intercomponent_cyclicality(const DepGraph& graph) {
    const std::size_t n = graph.atom_count();
    if (n == 0) throw ValidationError("cyclicality of an empty graph is undefined");

    SccResult sccs = strongly_connected_components(graph);
    std::uint64_t cyclic_atoms = 0;
    for (const auto& scc : sccs.components) {
        if (scc.size() < 2) continue;  // self-loop singletons are intra-component by definition
        std::set<std::string_view> spanned;
        for (std::size_t atom : scc) spanned.insert(graph.component(atom));
        if (spanned.size() >= 2) cyclic_atoms += scc.size();
    }
    return Rational(100) * Rational(static_cast<std::int64_t>(cyclic_atoms)) /
           Rational(static_cast<std::int64_t>(n));
}

Rational stability(const DepGraph& graph, std::optional<std::string_view> component_filter) {
    std::vector<std::size_t> scope;
    for (std::size_t i = 0; i < graph.atom_count(); ++i) {
        if (!component_filter || graph.component(i) == *component_filter) scope.push_back(i);
    }
    if (scope.empty()) throw ValidationError("stability scope is empty");
    const std::size_t n = scope.size();
    if (n == 1) return 100;

    std::vector<std::size_t> scope_index(graph.atom_count(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < n; ++i) scope_index[scope[i]] = i;

    // Forward reachability inside the scoped subgraph; a reaching b means a
    // transitively depends on b, so every pair found adds one to some
    // impacted set.
    std::uint64_t reachable_pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> queue = {i};
        seen[i] = true;
        while (!queue.empty()) {
            std::size_t cur = queue.back();
            queue.pop_back();
            ++reachable_pairs;
            for (std::size_t next : graph.adjacency()[scope[cur]]) {
                std::size_t local = scope_index[next];
                if (local == static_cast<std::size_t>(-1) || seen[local]) continue;
                seen[local] = true;
                queue.push_back(local);
            }
        }
    }

    Rational count(static_cast<std::int64_t>(n));
    Rational excess = Rational(static_cast<std::int64_t>(reachable_pairs)) - count;
    Rational pairs = count * (count - Rational(1));
    return Rational(100) * (Rational(1) - excess / pairs);
}

std::vector<RuleViolation> check_rules(const DepGraph& graph, const std::vector<ArchRule>& rules,
                                       std::vector<std::string>* warnings) {
    std::set<std::string_view> present;
    for (std::size_t i = 0; i < graph.atom_count(); ++i) present.insert(graph.component(i));

    auto warn_unknown = [&](const std::string& component) {
        if (warnings != nullptr && !present.contains(component)) {
            warnings->push_back("rule references unknown component '" + component + "'");
        }
    };

    auto spec_edge = [&](const DepGraph::Edge& e) {
        return DepGraphSpec::Edge{graph.atom_id(e.from), graph.atom_id(e.to), e.weight};
    };

    std::vector<RuleViolation> out;
    std::map<std::string, std::set<std::string>> whitelist;
    for (const ArchRule& rule : rules) {
        warn_unknown(rule.from_component);
        warn_unknown(rule.to_component);
        if (rule.kind == RuleKind::CanUse) {
            whitelist[rule.from_component].insert(rule.to_component);
            continue;
        }
        RuleViolation violation;
        violation.rule = rule;
        for (const DepGraph::Edge& e : graph.edges()) {
            if (graph.component(e.from) == rule.from_component &&
                graph.component(e.to) == rule.to_component) {
                violation.offending_edges.push_back(spec_edge(e));
            }
        }
        if (!violation.offending_edges.empty()) out.push_back(std::move(violation));
    }

    // Whitelist breaches, grouped per (source, offending target) pair.
    std::map<std::pair<std::string, std::string>, std::vector<DepGraphSpec::Edge>> breaches;
    for (const DepGraph::Edge& e : graph.edges()) {
        const std::string& from = graph.component(e.from);
        const std::string& to = graph.component(e.to);
        auto allowed = whitelist.find(from);
        if (allowed == whitelist.end() || from == to) continue;
        if (allowed->second.contains(to)) continue;
        breaches[{from, to}].push_back(spec_edge(e));
    }
    for (auto& [pair, edges] : breaches) {
        RuleViolation violation;
        violation.rule = ArchRule{RuleKind::CannotUse, pair.first, pair.second};
        violation.offending_edges = std::move(edges);
        out.push_back(std::move(violation));
    }
    return out;
}

std::vector<ArchRule> parse_arch_rules(std::string_view bytes) {
    std::vector<ArchRule> rules;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= bytes.size()) {
        std::size_t end = bytes.find('\n', pos);
        if (end == std::string_view::npos) end = bytes.size();
        std::string_view line = bytes.substr(pos, end - pos);
        bool last = end == bytes.size();
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::vector<std::string> tokens;
        std::istringstream stream{std::string(line)};
        std::string token;
        while (stream >> token) tokens.push_back(token);
        if (!tokens.empty() && !tokens.front().starts_with('#')) {
            std::string where = "line " + std::to_string(line_no);
            if (tokens.size() != 3) {
                throw ParseError("rule line needs: cannot-use|can-use <from> <to>", where);
            }
            ArchRule rule;
            if (tokens[0] == "cannot-use") {
                rule.kind = RuleKind::CannotUse;
            } else if (tokens[0] == "can-use") {
                rule.kind = RuleKind::CanUse;
            } else {
                throw ParseError("unknown rule kind '" + tokens[0] + "'", where);
            }
            rule.from_component = tokens[1];
            rule.to_component = tokens[2];
            if (rule.kind == RuleKind::CannotUse && rule.from_component == rule.to_component) {
                throw ParseError("cannot-use of a component on itself is always legal", where);
            }
            rules.push_back(std::move(rule));
        }
        if (last) break;
    }
    return rules;
}

}  // namespace tdledger
