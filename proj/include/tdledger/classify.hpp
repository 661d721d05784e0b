#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tdledger/ingest.hpp"
#include "tdledger/model.hpp"

namespace tdledger {

// Maps analyzer rule identifiers onto the debt taxonomy. Patterns are
// case-insensitive globs over the source tool and the rule id; the item kind
// fixes the dimension.
struct ClassificationRule {
    std::string source_tool_pattern;
    std::string rule_id_pattern;
    std::string td_type_name;
    ItemKind item_kind = ItemKind::CodeSmell;
};

enum class UnmatchedPolicy { Collect, Reject };

// First matching rule wins.
struct Ruleset {
    std::vector<ClassificationRule> rules;
    UnmatchedPolicy unmatched_policy = UnmatchedPolicy::Collect;
};

// Case-insensitive glob with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view text);

struct Unclassified {
    RawFinding finding;
};

using ClassifyResult = std::variant<TDInstance, Unclassified>;

// Applies the first matching rule; the instance id is minted from the project
// slug, the kind's dimension and next_ordinal. Under policy Reject an
// unmatched finding throws ValidationError naming the rule id.
ClassifyResult classify_finding(const RawFinding& finding, const Ruleset& rules,
                                const ProjectMeta& project, std::uint64_t next_ordinal,
                                std::string_view recorded_on = {});

// Emits (a) one project-scope inadequate-test-coverage instance iff the
// project coverage is below the threshold and (b) one lack-of-tests instance
// per class with zero coverage. Ordinals are provisional (1..k); callers
// renumber with assign_instance_ids.
std::vector<TDInstance> derive_coverage_findings(const CoverageSummary& coverage,
                                                 const Rational& threshold,
                                                 const ProjectMeta& project,
                                                 std::string_view recorded_on = {});

// The built-in ruleset covering every known TD type, policy Collect.
Ruleset default_ruleset();

// Loads a ruleset from its JSON configuration form:
//   {"unmatched_policy": "collect"|"reject",
//    "rules": [{"tool": "*", "rule": "long*method*",
//               "td_type": "Long method", "item": "code_smell"}, ...]}
Ruleset parse_ruleset(std::string_view bytes);

struct ClassifiedRun {
    std::vector<TDInstance> instances;
    std::vector<RawFinding> unclassified;
};

// Classifies a batch in input order with per-dimension ordinal counters.
ClassifiedRun classify_findings(const std::vector<RawFinding>& findings, const Ruleset& rules,
                                const ProjectMeta& project, std::string_view recorded_on);

// Deterministic post-pass: re-mints every id with per-dimension ordinals in
// list order. Keeps ids unique when instance lists from several sources are
// concatenated.
void assign_instance_ids(std::vector<TDInstance>& instances, const ProjectMeta& project);

}  // namespace tdledger
