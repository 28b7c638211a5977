#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgenfit/fitters.hpp"
#include "kgenfit/gof.hpp"
#include "kgenfit/returns.hpp"

namespace kgenfit::report {

struct AnalysisOptions {
    std::set<Family> families = {Family::kappa, Family::stable, Family::normal};
    std::set<TailSide> tails = {TailSide::neg, TailSide::pos};
    bool run_gof = false;
    int n_boot = 100;
    double level = 0.1;
    std::uint64_t seed = 0;
    unsigned n_threads = 0;
};

// One per-instrument row of the comparison: all requested fits, per-tail
// GOF results when requested, and full-sample KS per family (the
// kappa-generalised family enters through the composite two-tail model).
struct InstrumentReport {
    std::string ticker;
    std::size_t n_returns = 0;
    double q = 0.0;
    std::size_t zero_count = 0;
    std::map<std::string, FitResult> fits;           // "normal", "stable", "kappa_neg", "kappa_pos"
    std::map<std::string, gof::GofResult> gof;       // "neg", "pos"
    std::map<std::string, double> ks_comparison;     // "kappa", "stable", "normal"
    std::vector<std::string> errors;                 // per-family failures (fit kept partial)
    bool any_convergence_failure = false;
};

// Full-sample KS of the composite two-tail kappa model: lower-tail
// probabilities at negative returns, upper-tail at positive ones, both
// step limits, zeros counted in the denominators only.
double composite_ks(std::span<const double> returns, double q,
                    const kappa::KappaParams& neg, const kappa::KappaParams& pos);

InstrumentReport analyze_instrument(const PriceSeries& ps, const AnalysisOptions& opts);

nlohmann::ordered_json to_json(const InstrumentReport& rep, const AnalysisOptions& opts);
nlohmann::ordered_json to_json(const gof::GofResult& g);

// Table-1-style significance bookkeeping over a directory of instruments.
struct BatchSummary {
    std::size_t attempted = 0;  // instruments entering the denominators
    std::vector<std::string> skipped;  // ticker: reason
    std::vector<std::string> significant_neg;
    std::vector<std::string> significant_pos;
    std::vector<std::string> significant_both;
    std::vector<std::string> significant_either;
};

struct BatchResult {
    BatchSummary summary;
    std::vector<InstrumentReport> instruments;  // sorted by ticker
};

// Analyzes every *.csv in dir (ticker = file stem). Per-instrument GOF
// seeds are derived from the ticker so results are independent of
// directory order and parallel scheduling. Instruments that fail to parse
// or have a degenerate tail are reported as skipped.
BatchResult run_batch(const std::filesystem::path& dir, const AnalysisOptions& opts);

nlohmann::ordered_json to_json(const BatchResult& batch, const AnalysisOptions& opts);

// Serialise with a trailing newline; atomic temp-file + rename when
// writing to disk.
std::string dump_json(const nlohmann::ordered_json& j);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace kgenfit::report
