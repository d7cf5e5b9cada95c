// report.hpp - machine-readable verification tables (CSV rows + JSON summary)
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fsk {

// One verified inequality instance. rhs is the constant-free theoretical
// envelope; ratio = lhs / rhs; fitted constants live in the summary.
struct VerificationRow {
    std::string experiment;
    std::string params; // semicolon-separated key=value tuple, fixed order
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::string status; // "pass" | "fail" | "skip:<reason>"

    bool passed() const { return status == "pass"; }
    bool skipped() const { return status.rfind("skip", 0) == 0; }
};

// Ordered scalar diagnostics (fitted constants, slopes, spreads).
using FittedValues = std::vector<std::pair<std::string, double>>;

struct ExperimentResult {
    std::string id;
    std::vector<VerificationRow> rows;
    FittedValues fitted;
    bool pass = false; // every non-skipped row passed

    void finalize(); // recomputes pass from rows
};

// Fixed header "experiment,params,lhs,rhs,ratio,status"; numbers carry 12
// significant digits after the leading one; byte-stable for identical inputs.
void write_rows_csv(std::ostream& os, const std::vector<VerificationRow>& rows);

// Ordered-key JSON: id, seed, counts, fitted values, environment fingerprint.
void write_summary_json(std::ostream& os, const ExperimentResult& result, std::uint64_t seed);

// Writes <outdir>/<id>.csv and <outdir>/<id>_summary.json, creating outdir.
void emit_report(const ExperimentResult& result, const std::string& outdir, std::uint64_t seed);

// Compiler/BLAS identity; stable for one build on one machine.
std::string environment_fingerprint();

} // namespace fsk
