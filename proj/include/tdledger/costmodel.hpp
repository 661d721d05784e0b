#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "tdledger/model.hpp"
#include "tdledger/rational.hpp"

namespace tdledger {

// Remediation-cost model. Per-item costs are person-hours; inadequate test
// coverage is priced by the project-level gap term instead of a per-item cost.
struct CostModel {
    std::map<ItemKind, Rational> cost_per_item;
    Rational coverage_threshold = 90;
    std::set<ItemKind> included_items;
    bool clamp_coverage_term = true;

    bool operator==(const CostModel&) const = default;
};

// Built-in defaults: code smell 5, coding guideline violation 1, improper
// test design 4, lack of tests 2, design smell 15, architecture smell 25;
// kinds without a stated cost price at 0. All kinds included.
CostModel default_cost_model();

// Default costs restricted to {code smells, lack of tests, improper test
// design} — the scope of the vendor baseline estimate.
CostModel sonar_subset_model();

// (threshold - coverage) * loc / 1000 person-hours. With clamp set the term
// floors at 0 once coverage meets the threshold.
Rational coverage_gap_cost(const Rational& coverage, const Rational& threshold,
                           std::uint64_t loc, bool clamp);

struct Estimate {
    Rational total_person_hours;
    // Term name -> person-hours; every nonzero per-item term plus the
    // coverage term when the model includes it. Total equals the sum exactly.
    std::map<std::string, Rational> breakdown;
    ItemCounts counts_echo;
    ProjectMeta project_echo;
    Rational threshold_echo;

    bool operator==(const Estimate&) const = default;
};

// Breakdown term name for an item kind: "code_smells",
// "coding_guideline_violations", ... The coverage term is "coverage_gap".
std::string_view breakdown_term_name(ItemKind kind);

// Sums cost*count over the included item kinds and adds the coverage gap term
// when inadequate test coverage is included. Throws ValidationError when an
// included kind is counted but has no configured cost.
Estimate estimate_principal(const ItemCounts& counts, const ProjectMeta& project,
                            const CostModel& model);

}  // namespace tdledger
