#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdledger/archgraph.hpp"
#include "tdledger/costmodel.hpp"
#include "tdledger/model.hpp"

namespace tdledger {

struct GraphMetrics {
    Rational intercomponent_cyclicality;
    Rational stability;
    std::vector<RuleViolation> violations;

    bool operator==(const GraphMetrics&) const = default;
};

// One persisted analysis run: the unit that gets re-run, diffed and gated.
struct RunSnapshot {
    ProjectMeta project;
    std::string created_at;  // ISO-8601 UTC timestamp
    std::vector<TDInstance> instances;
    ItemCounts counts;
    Estimate estimate;
    std::optional<GraphMetrics> graph_metrics;
    std::map<std::string, std::string> tool_versions;

    bool operator==(const RunSnapshot&) const = default;
};

// Stable 64-bit hash (16 hex digits) of (td_type_name, item_kind, location
// with the line dropped, source_tool). Dropping the line keeps churn from
// reading as new debt.
std::string fingerprint(const TDInstance& instance);

struct RunDiff {
    std::string project_slug;
    std::vector<TDInstance> introduced;
    std::vector<TDInstance> resolved;
    std::vector<std::string> persisting;  // fingerprints, sorted
    Rational principal_delta;

    bool operator==(const RunDiff&) const = default;
};

// Multiset difference by fingerprint. Throws ValidationError when the runs
// belong to different projects.
RunDiff diff_runs(const RunSnapshot& old_run, const RunSnapshot& new_run);

struct GateDecision {
    bool pass = true;
    std::vector<std::string> reasons;  // human-readable, lists offending ids
};

// Pass iff principal_delta <= budget and, under fail_on_new, nothing was
// introduced.
GateDecision evaluate_gate(const RunDiff& diff, const Rational& budget, bool fail_on_new);

// Canonical JSON. Serialization is deterministic byte-for-byte; parsing
// re-validates the snapshot invariants (counts match the instances, the
// estimate echoes counts and project).
std::string serialize_snapshot(const RunSnapshot& snapshot);
RunSnapshot parse_snapshot(std::string_view bytes);

std::string serialize_diff(const RunDiff& diff);

}  // namespace tdledger
