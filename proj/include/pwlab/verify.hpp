#pragma once

#include <map>
#include <string>

#include "pwlab/commutator.hpp"
#include "pwlab/factorize.hpp"
#include "pwlab/nehari.hpp"

namespace pwlab {

struct RunConfig {
    double a = 1.0;
    double p = 2.0;
    int oversample = 8;
    double window = 64.0;
    std::uint64_t seed = 42;
    /// keyed by "<check>.<item>"
    std::map<std::string, double> tolerances;

    void validate() const;
    Grid grid() const { return default_grid(a, window, oversample); }
};

/// One measured quantity against its bound; upper bounds unless lower is set.
struct CheckItem {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool lower = false;
    bool pass = false;
};

struct CheckResult {
    std::string id;
    std::string paper_ref;
    std::vector<CheckItem> items;
    bool pass = true;
    std::string error;
    double seconds = 0.0;
};

std::vector<std::string> check_ids();
CheckResult run_check(const std::string& id, const RunConfig& cfg);
std::vector<CheckResult> run_verify(const RunConfig& cfg, const std::vector<std::string>& only = {});

nlohmann::json report_json(const std::vector<CheckResult>& rs, const RunConfig& cfg);
/// check_id, paper_ref, measured, bound, pass; one row per item.
std::string report_csv(const std::vector<CheckResult>& rs);

}  // namespace pwlab
