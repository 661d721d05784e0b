#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdledger/ingest.hpp"
#include "tdledger/rational.hpp"

namespace tdledger {

// Immutable class-level dependency graph. An edge (from, to) means `from`
// depends on `to`. Atoms are indexed densely; ids stay available for
// reporting.
class DepGraph {
public:
    struct Edge {
        std::size_t from;
        std::size_t to;
        std::uint64_t weight;
    };

    static DepGraph from_spec(const DepGraphSpec& spec);

    std::size_t atom_count() const { return ids_.size(); }
    const std::string& atom_id(std::size_t index) const { return ids_[index]; }
    const std::string& component(std::size_t index) const { return components_[index]; }
    std::optional<std::size_t> find_atom(std::string_view id) const;
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }

private:
    std::vector<std::string> ids_;
    std::vector<std::string> components_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

struct SccResult {
    // Partition of atom indices; each SCC sorted ascending, SCCs ordered by
    // their smallest atom.
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::size_t> component_of;  // atom index -> SCC index
    std::vector<bool> cyclic;               // size >= 2, or a self-loop singleton
};

SccResult strongly_connected_components(const DepGraph& graph);

// Percentage of atoms sitting in a multi-atom SCC whose atoms span at least
// two components. Exact rational in [0, 100]. Throws ValidationError on an
// empty graph.
Rational intercomponent_cyclicality(const DepGraph& graph);

// How insensitive the (scoped) subgraph is to change: with impacted(a) = the
// atoms in scope that transitively depend on a (including a itself),
// stability = 100 * (1 - (sum_a |impacted(a)| - N) / (N*(N-1))). A single
// atom scores 100. Throws ValidationError on an empty scope.
Rational stability(const DepGraph& graph,
                   std::optional<std::string_view> component_filter = std::nullopt);

enum class RuleKind { CannotUse, CanUse };

struct ArchRule {
    RuleKind kind = RuleKind::CannotUse;
    std::string from_component;
    std::string to_component;

    bool operator==(const ArchRule&) const = default;
};

struct RuleViolation {
    ArchRule rule;  // for a whitelist breach, the implied cannot-use rule
    std::vector<DepGraphSpec::Edge> offending_edges;

    bool operator==(const RuleViolation&) const = default;
};

// CannotUse(X, Y): every edge from X to Y offends. CanUse rules whitelist:
// once a component has any CanUse rule, its edges to non-whitelisted foreign
// components violate an implied cannot-use rule. Rules naming components
// absent from the graph produce warnings, not errors.
std::vector<RuleViolation> check_rules(const DepGraph& graph, const std::vector<ArchRule>& rules,
                                       std::vector<std::string>* warnings = nullptr);

// Line-oriented rule text: `cannot-use <from> <to>` / `can-use <from> <to>`,
// '#' comments. Throws ParseError with a line number.
std::vector<ArchRule> parse_arch_rules(std::string_view bytes);

}  // namespace tdledger
