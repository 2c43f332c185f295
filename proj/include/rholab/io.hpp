#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rholab/core.hpp"
#include "rholab/seqsim.hpp"
#include "rholab/stats.hpp"

namespace rholab::io {

using ordered_json = nlohmann::ordered_json;

std::string tool_version();

ordered_json params_json(const Params& params);

// Statistics block for a summary artifact.
ordered_json summary_json(const stats::StatSummary& summary);

// One trial record per line, keys {trial, mu, tau, period} plus
// {h_total, H_final} when hazard instrumentation was on.
void write_jsonl(std::ostream& out, const std::vector<seqsim::TrialRecord>& records,
                 bool hazard);
void write_csv(std::ostream& out, const std::vector<seqsim::TrialRecord>& records,
               bool hazard);

// Whole-file text helpers; both throw std::runtime_error with the path on
// failure. Writes create parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rholab::io
