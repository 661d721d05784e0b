#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdledger/archgraph.hpp"
#include "tdledger/errors.hpp"
#include "tdledger/pipeline.hpp"
#include "tdledger/quality_rank.hpp"
#include "tdledger/report.hpp"
#include "tdledger/snapshot.hpp"

namespace {

// Exit codes: 0 pass, 1 gate-fail, 2 input/parse error, 3 usage error.
constexpr int kExitPass = 0;
constexpr int kExitGateFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUsageError = 3;

using tdledger::Rational;

int cmd_analyze(const std::string& config_path, const std::string& store_dir) {
    tdledger::RunConfig config = tdledger::load_run_config(config_path);
    tdledger::AnalyzeResult result =
        tdledger::run_analyze(config, store_dir, tdledger::now_timestamp());
    for (const std::string& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    std::cout << "snapshot written: " << result.snapshot_path << "\n";
    std::cout << "instances: " << result.snapshot.instances.size() << "\n";
    std::cout << "td principal estimate: "
              << result.snapshot.estimate.total_person_hours.to_decimal(2) << " person-hours\n";
    return kExitPass;
}

int cmd_diff(const std::string& old_path, const std::string& new_path) {
    tdledger::RunSnapshot old_run = tdledger::load_snapshot_file(old_path);
    tdledger::RunSnapshot new_run = tdledger::load_snapshot_file(new_path);
    std::cout << tdledger::serialize_diff(tdledger::diff_runs(old_run, new_run));
    return kExitPass;
}

int cmd_gate(const std::string& old_path, const std::string& new_path,
             const std::string& budget_text, bool fail_on_new) {
    auto budget = Rational::try_parse(budget_text);
    if (!budget) throw tdledger::UsageError("--budget must be a number, got '" + budget_text + "'");

    tdledger::RunSnapshot old_run = tdledger::load_snapshot_file(old_path);
    tdledger::RunSnapshot new_run = tdledger::load_snapshot_file(new_path);
    tdledger::RunDiff diff = tdledger::diff_runs(old_run, new_run);
    tdledger::GateDecision decision = tdledger::evaluate_gate(diff, *budget, fail_on_new);
    if (decision.pass) {
        std::cout << "gate: pass (principal delta " << diff.principal_delta.to_decimal(2)
                  << " person-hours within budget " << budget->to_decimal(2) << ")\n";
        return kExitPass;
    }
    std::cout << "gate: fail\n";
    for (const std::string& reason : decision.reasons) {
        std::cout << "  - " << reason << "\n";
    }
    return kExitGateFail;
}

int cmd_report(const std::string& snapshot_path, const std::string& format) {
    tdledger::RunSnapshot snapshot = tdledger::load_snapshot_file(snapshot_path);
    tdledger::ReportFormat fmt;
    if (format == "json") {
        fmt = tdledger::ReportFormat::Json;
    } else if (format == "md") {
        fmt = tdledger::ReportFormat::Markdown;
    } else {
        throw tdledger::UsageError("--format must be 'json' or 'md', got '" + format + "'");
    }
    std::cout << tdledger::render_report(snapshot, fmt);
    return kExitPass;
}

int cmd_rank(const std::string& ratings_path, const std::string& ties_text) {
    tdledger::TieRule ties;
    if (ties_text == "competition") {
        ties = tdledger::TieRule::Competition;
    } else if (ties_text == "dense") {
        ties = tdledger::TieRule::Dense;
    } else {
        throw tdledger::UsageError("--ties must be 'competition' or 'dense'");
    }

    std::vector<tdledger::AttributeRating> ratings =
        tdledger::parse_ratings_csv(tdledger::read_file(ratings_path));
    std::map<tdledger::QualityAttribute, std::vector<tdledger::AttributeRating>> grouped;
    for (tdledger::AttributeRating& rating : ratings) {
        grouped[rating.attribute].push_back(std::move(rating));
    }
    if (grouped.empty()) throw tdledger::ValidationError("ratings file holds no data rows");

    std::map<tdledger::QualityAttribute, std::map<std::string, int>> per_attribute;
    for (const auto& [attribute, group] : grouped) {
        per_attribute[attribute] = tdledger::rank_attribute(group, ties);
    }
    auto tables = tdledger::aggregate_overall(per_attribute, ties);

    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [project, table] : tables) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        nlohmann::ordered_json ranks = nlohmann::ordered_json::object();
        for (const auto& [attribute, rank] : table.ranks) {
            ranks[std::string(tdledger::quality_attribute_name(attribute))] = rank;
        }
        entry["ranks"] = std::move(ranks);
        entry["sum"] = table.sum;
        entry["overall_rank"] = table.overall_rank;
        out[project] = std::move(entry);
    }
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int cmd_graph(const std::string& depgraph_path, const std::string& rules_path) {
    tdledger::DepGraphSpec spec = tdledger::parse_depgraph(tdledger::read_file(depgraph_path));
    tdledger::DepGraph graph = tdledger::DepGraph::from_spec(spec);
    if (graph.atom_count() == 0) {
        throw tdledger::ValidationError("dependency graph declares no atoms");
    }

    std::vector<tdledger::ArchRule> rules;
    if (!rules_path.empty()) {
        rules = tdledger::parse_arch_rules(tdledger::read_file(rules_path));
    }
    std::vector<std::string> warnings;
    std::vector<tdledger::RuleViolation> violations =
        tdledger::check_rules(graph, rules, &warnings);
    for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";

    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    out["atoms"] = graph.atom_count();
    out["intercomponent_cyclicality"] = tdledger::intercomponent_cyclicality(graph).to_string();
    out["stability"] = tdledger::stability(graph).to_string();
    nlohmann::ordered_json violations_json = nlohmann::ordered_json::array();
    for (const tdledger::RuleViolation& violation : violations) {
        nlohmann::ordered_json v = nlohmann::ordered_json::object();
        v["kind"] = violation.rule.kind == tdledger::RuleKind::CannotUse ? "cannot_use" : "can_use";
        v["from_component"] = violation.rule.from_component;
        v["to_component"] = violation.rule.to_component;
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        for (const auto& edge : violation.offending_edges) {
            nlohmann::ordered_json e = nlohmann::ordered_json::object();
            e["from"] = edge.from;
            e["to"] = edge.to;
            e["weight"] = edge.weight;
            edges.push_back(std::move(e));
        }
        v["edges"] = std::move(edges);
        violations_json.push_back(std::move(v));
    }
    out["violations"] = std::move(violations_json);
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tdledger — a multi-analyzer technical-debt ledger"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "Ingest reports and persist a run snapshot");
    std::string config_path;
    std::string store_dir = "tdledger-store";
    analyze->add_option("--config", config_path, "Run configuration (JSON)")->required();
    analyze->add_option("--store", store_dir, "Snapshot store directory");

    auto* diff = app.add_subcommand("diff", "Diff two run snapshots");
    std::string old_path;
    std::string new_path;
    diff->add_option("old", old_path, "Baseline snapshot")->required();
    diff->add_option("new", new_path, "Newer snapshot")->required();

    auto* gate = app.add_subcommand("gate", "Fail when new debt exceeds the budget");
    std::string gate_old;
    std::string gate_new;
    std::string budget;
    bool fail_on_new = false;
    gate->add_option("old", gate_old, "Baseline snapshot")->required();
    gate->add_option("new", gate_new, "Newer snapshot")->required();
    gate->add_option("--budget", budget, "Allowed principal growth in person-hours")->required();
    gate->add_flag("--fail-on-new", fail_on_new, "Fail on any newly introduced instance");

    auto* report = app.add_subcommand("report", "Render a snapshot");
    std::string snapshot_path;
    std::string format = "md";
    report->add_option("snapshot", snapshot_path, "Snapshot file")->required();
    report->add_option("--format", format, "json or md");

    auto* rank = app.add_subcommand("rank", "Aggregate quality ratings into overall ranks");
    std::string ratings_path;
    std::string ties = "competition";
    rank->add_option("--ratings", ratings_path, "Ratings CSV")->required();
    rank->add_option("--ties", ties, "competition or dense");

    auto* graph = app.add_subcommand("graph", "Analyze a dependency graph");
    std::string depgraph_path;
    std::string rules_path;
    graph->add_option("depgraph", depgraph_path, "Dependency graph file")->required();
    graph->add_option("--rules", rules_path, "Architecture rules file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsageError;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(config_path, store_dir);
        if (diff->parsed()) return cmd_diff(old_path, new_path);
        if (gate->parsed()) return cmd_gate(gate_old, gate_new, budget, fail_on_new);
        if (report->parsed()) return cmd_report(snapshot_path, format);
        if (rank->parsed()) return cmd_rank(ratings_path, ties);
        if (graph->parsed()) return cmd_graph(depgraph_path, rules_path);
    } catch (const tdledger::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const tdledger::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitUsageError;
}
