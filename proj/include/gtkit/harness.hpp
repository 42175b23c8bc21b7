#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gtkit/bounds.hpp"
#include "gtkit/model.hpp"
#include "gtkit/noise.hpp"

namespace gtkit {

// One Monte Carlo experiment. `d` empty means "drawn uniformly in {1..D}
// per trial"; `T` empty means "ceil of the matching theoretical bound".
struct ExperimentConfig {
    std::size_t n = 0;
    std::size_t D = 1;
    std::optional<std::size_t> d;
    double delta = 1.0;
    NoiseModel noise;
    std::string algo;  // coco|coma|nocoma|lipo|nolipo|nolipo+|nolipo-|nounlipo
    std::optional<std::size_t> T;
    std::size_t trials = 2000;
    std::uint64_t seed = 0;
    std::optional<double> tau;  // defaults to tau* from the bounds module

    void validate() const;
    std::size_t resolved_T() const;   // T override or ceil(theory)
    double theory_T() const;          // real-valued bound for the algo
    double resolved_tau() const;      // tau override or tau*

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t T = 0;
    std::string algo;
    bool exact = false;
    std::size_t false_def = 0;
    std::size_t false_nondef = 0;
    bool fail = false;
    std::optional<bool> integral;  // LP decoders only
    double ms = 0.0;
};

struct SweepSummary {
    std::size_t n = 0, D = 0;
    std::string d;  // number or "random"
    double delta = 0.0;
    std::string algo;
    std::string noise;
    std::size_t T = 0;
    double T_theory = 0.0;
    std::size_t trials = 0;
    std::size_t errors = 0;
    double err_rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double eps_target = 0.0;
};

// 95% Wilson score interval for e errors in n trials.
std::pair<double, double> wilson_interval(std::size_t errors, std::size_t trials);

// Runs one trial. The trial seed is derive_seed(config.seed, index); draws
// come from per-purpose substreams (defective count, defective set, matrix,
// noise) so records are replayable in isolation.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t index);

struct ExperimentResult {
    std::vector<TrialRecord> records;
    SweepSummary summary;
};

// Runs all trials on a small worker pool (aggregation is an index-ordered
// fold, so the aggregate is schedule independent). When `out` is non-null,
// trial CSV rows stream to it as the completed prefix grows.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* out = nullptr,
                                unsigned threads = 0);

extern const char* kTrialCsvHeader;    // trial,seed,T,algo,...
extern const char* kSummaryCsvHeader;  // n,D,d,delta,algo,...

std::string trial_csv_row(const TrialRecord& r);
std::string summary_csv_row(const SweepSummary& s);
TrialRecord parse_trial_csv_row(const std::string& line);

}  // namespace gtkit
