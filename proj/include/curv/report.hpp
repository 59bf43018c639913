#pragma once

#include <string>

#include "curv/classify.hpp"

namespace curv {

// Which sections the human-readable renderer leads with; the JSON schema is
// the same for every command.
enum class ReportView { Classify, Invariants, Identities, Holonomy };

// Deterministic JSON: sorted keys, 17-significant-digit numbers, so equal
// inputs produce byte-identical output.
std::string report_json(const ClassificationReport& report, const std::string& command);

std::string report_text(const ClassificationReport& report, ReportView view);

// True when every consistency finding passes and every identity-suite run
// passed; drives the process exit code.
bool report_clean(const ClassificationReport& report);

}  // namespace curv
