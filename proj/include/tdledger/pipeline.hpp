#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdledger/archgraph.hpp"
#include "tdledger/classify.hpp"
#include "tdledger/costmodel.hpp"
#include "tdledger/snapshot.hpp"

namespace tdledger {

enum class InputFormat { Checkstyle, Jacoco, Designite, Native, Depgraph };

std::optional<InputFormat> input_format_from(std::string_view text);

// Everything one analysis run needs: project metadata, tagged report paths,
// the coverage threshold, cost-model overrides and optional rule files.
struct RunConfig {
    ProjectMeta project;
    struct Input {
        InputFormat format = InputFormat::Native;
        std::string path;
    };
    std::vector<Input> inputs;
    Rational coverage_threshold = 90;
    CostModel cost_model = default_cost_model();
    Ruleset ruleset = default_ruleset();
    std::vector<ArchRule> arch_rules;
    std::map<std::string, std::string> tool_versions;
    // Manual coverage when no coverage report is among the inputs.
    std::optional<Rational> coverage_percent_override;
};

// Reads the JSON run configuration; relative input paths resolve against the
// config file's directory. Surfaces bad values as UsageError.
RunConfig load_run_config(const std::string& path);

struct AnalyzeResult {
    RunSnapshot snapshot;
    std::string snapshot_path;
    std::vector<std::string> warnings;  // record errors, unclassified findings
};

// Runs ingest -> classify -> count -> estimate -> graph, then persists the
// snapshot to <store>/runs/<created_at>.json under the store lock.
AnalyzeResult run_analyze(const RunConfig& config, const std::string& store_dir,
                          const std::string& now_iso);

// Current UTC timestamp (seconds, "2019-04-15T12:30:00Z"), overridable via
// the TDLEDGER_NOW environment variable for reproducible runs.
std::string now_timestamp();

std::string read_file(const std::string& path);
RunSnapshot load_snapshot_file(const std::string& path);

}  // namespace tdledger
