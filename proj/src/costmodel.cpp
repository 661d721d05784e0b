#include "tdledger/costmodel.hpp"

#include "tdledger/errors.hpp"

namespace tdledger {

CostModel default_cost_model() {
    CostModel model;
    model.cost_per_item = {
        {ItemKind::CodeSmell, 5},
        {ItemKind::CodingGuidelineViolation, 1},
        {ItemKind::InconsistentStyle, 0},
        {ItemKind::DesignSmell, 15},
        {ItemKind::DesignRuleViolation, 0},
        {ItemKind::DesignConstraintViolation, 0},
        {ItemKind::LackOfTests, 2},
        {ItemKind::ImproperTestDesign, 4},
        {ItemKind::ArchitectureSmell, 25},
        {ItemKind::ArchitectureRuleViolation, 0},
        {ItemKind::ModularityViolation, 0},
    };
    model.coverage_threshold = 90;
    model.included_items.insert(kAllItemKinds.begin(), kAllItemKinds.end());
    model.clamp_coverage_term = true;
    return model;
}

CostModel sonar_subset_model() {
    CostModel model = default_cost_model();
    model.included_items = {ItemKind::CodeSmell, ItemKind::LackOfTests,
                            ItemKind::ImproperTestDesign};
    return model;
}

Rational coverage_gap_cost(const Rational& coverage, const Rational& threshold,
                           std::uint64_t loc, bool clamp) {
    if (clamp && coverage >= threshold) return 0;
    return (threshold - coverage) * Rational(static_cast<std::int64_t>(loc)) / Rational(1000);
}

std::string_view breakdown_term_name(ItemKind kind) {
    switch (kind) {
        case ItemKind::CodeSmell: return "code_smells";
        case ItemKind::CodingGuidelineViolation: return "coding_guideline_violations";
        case ItemKind::InconsistentStyle: return "inconsistent_styles";
        case ItemKind::DesignSmell: return "design_smells";
        case ItemKind::DesignRuleViolation: return "design_rule_violations";
        case ItemKind::DesignConstraintViolation: return "design_constraint_violations";
        case ItemKind::LackOfTests: return "lack_of_tests";
        case ItemKind::InadequateTestCoverage: return "coverage_gap";
        case ItemKind::ImproperTestDesign: return "improper_test_designs";
        case ItemKind::ArchitectureSmell: return "architecture_smells";
        case ItemKind::ArchitectureRuleViolation: return "architecture_rule_violations";
        case ItemKind::ModularityViolation: return "modularity_violations";
    }
    throw Error("unknown item kind");
}

Estimate estimate_principal(const ItemCounts& counts, const ProjectMeta& project,
                            const CostModel& model) {
    Estimate est;
    est.counts_echo = counts;
    est.project_echo = project;
    est.threshold_echo = model.coverage_threshold;
    est.total_person_hours = 0;

    for (const auto& [kind, count] : counts.by_kind) {
        if (count == 0) continue;
        if (kind == ItemKind::InadequateTestCoverage) continue;  // priced by the gap term
        if (!model.included_items.contains(kind)) continue;
        auto cost = model.cost_per_item.find(kind);
        if (cost == model.cost_per_item.end()) {
            throw ValidationError("no cost configured for counted item kind '" +
                                  std::string(item_kind_name(kind)) + "'");
        }
        Rational term = cost->second * Rational(static_cast<std::int64_t>(count));
        if (!term.is_zero()) {
            est.breakdown[std::string(breakdown_term_name(kind))] = term;
            est.total_person_hours += term;
        }
    }

    if (model.included_items.contains(ItemKind::InadequateTestCoverage)) {
        Rational gap = coverage_gap_cost(project.coverage_percent, model.coverage_threshold,
                                         project.loc, model.clamp_coverage_term);
        est.breakdown["coverage_gap"] = gap;
        est.total_person_hours += gap;
    }
    return est;
}

}  // namespace tdledger
