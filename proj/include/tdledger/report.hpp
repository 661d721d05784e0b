#pragma once

#include <string>

#include "tdledger/snapshot.hpp"

namespace tdledger {

enum class ReportFormat { Json, Markdown };

// Deterministic rendering. Markdown emits one table per instance with the ten
// tabular row labels plus Source tool; JSON is the canonical snapshot
// serialization.
std::string render_report(const RunSnapshot& snapshot, ReportFormat format);

// Paper-style prose for a location ("Line 193 in class AbstractWebSocket in
// package org.java_websocket", "All source files", ...).
std::string render_location(const Location& location);

}  // namespace tdledger
