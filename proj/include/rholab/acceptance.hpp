#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rholab::acceptance {

// Documented fixed default master seed for the acceptance suite; never
// derived from wall-clock time.
inline constexpr std::uint64_t kDefaultMasterSeed = 1729;

struct SuiteOptions {
    std::uint64_t master_seed = kDefaultMasterSeed;
    unsigned workers = 0;                     // 0 = available parallelism
    std::filesystem::path out_dir = "out";
    std::vector<int> only;                    // criterion ids; empty = all
    std::map<std::string, double> overrides;  // threshold overrides, e.g. "c10.tol"
    bool reuse = false;                       // evaluate existing artifacts, no recompute
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;          // observed values vs thresholds
    double runtime_seconds = 0;  // compute time (recorded, not in data artifacts)
};

struct SuiteResult {
    std::vector<CriterionResult> results;
    bool all_pass = true;
};

// Raised in reuse mode when a needed artifact is absent or unreadable; the
// message contains the file path.
struct MissingArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs (or, with options.reuse, re-evaluates) the selected criteria, writing
// data artifacts under options.out_dir and printing one PASS/FAIL line per
// criterion to `out`. Data artifacts contain no timing and no worker counts,
// so reruns at any worker count produce byte-identical files.
SuiteResult run_suite(const SuiteOptions& options, std::ostream& out);

}  // namespace rholab::acceptance
