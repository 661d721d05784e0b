#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdledger/rational.hpp"

namespace tdledger {

enum class QualityAttribute { Reliability, Maintainability, Security, Stability };

std::string_view quality_attribute_name(QualityAttribute a);
std::optional<QualityAttribute> quality_attribute_from(std::string_view text);

// One tool-given rating. Exactly one of grade and score is set: grade is an
// ordered letter scale ('A' best through 'E'), score a number where higher is
// better. remediation_effort breaks grade ties: lower effort ranks better.
struct AttributeRating {
    std::string project;
    QualityAttribute attribute = QualityAttribute::Reliability;
    std::optional<char> grade;
    std::optional<Rational> score;
    Rational remediation_effort = 0;

    bool operator==(const AttributeRating&) const = default;
};

// Competition: tied entries share the best rank and the following rank skips
// the tied cardinality (1,2,2,4). Dense: no skipping (1,2,2,3).
enum class TieRule { Competition, Dense };

// Ranks projects under a single attribute, best first. All ratings must share
// one attribute and one scale kind; projects must be distinct. Throws
// ValidationError otherwise.
std::map<std::string, int> rank_attribute(const std::vector<AttributeRating>& ratings,
                                          TieRule ties = TieRule::Competition);

struct RankTable {
    std::map<QualityAttribute, int> ranks;
    int sum = 0;
    int overall_rank = 0;

    bool operator==(const RankTable&) const = default;
};

// Sums each project's per-attribute ranks, then ranks the sums ascending.
// Every project must be ranked under every attribute; a missing cell throws
// ValidationError naming it.
std::map<std::string, RankTable> aggregate_overall(
    const std::map<QualityAttribute, std::map<std::string, int>>& per_attribute_ranks,
    TieRule ties = TieRule::Competition);

// CSV with header columns project, attribute, rating, effort. The rating cell
// is a letter A-E or a number; effort is a non-negative number.
std::vector<AttributeRating> parse_ratings_csv(std::string_view bytes);

}  // namespace tdledger
