// Experiment orchestration: declarative configs, repeated runs,
// aggregation into per-operator tables, CSV/text report emission.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbell/bellpoly.hpp"
#include "qbell/mitigate.hpp"
#include "qbell/prep.hpp"

namespace qbell {

enum class StateChoice { BELL, DICKE_GATE, DICKE_DIRECT };
enum class Inequality { CHSH, DICKE4 };
enum class RunMode { EXACT, SAMPLED };
enum class TermSet { FILTERED, FULL };
enum class Mitigation { NONE, M3 };

struct ExperimentConfig {
    StateChoice state = StateChoice::BELL;
    Inequality inequality = Inequality::CHSH;
    // setting names: A, Ap, B, Bp (+ C, Cp, D, Dp for DICKE4)
    std::map<std::string, MeasurementSetting> angles;
    RunMode mode = RunMode::EXACT;
    long long shots = 10000;
    int repetitions = 3;
    TermSet term_set = TermSet::FILTERED;
    NoiseSpec noise;
    double readout_flip_prob = 0.0; // shorthand, builds a symmetric model
    Mitigation mitigation = Mitigation::NONE;
    long long calibration_shots = 100000;
    std::uint64_t seed = 0;

    static ExperimentConfig chsh_defaults();
    static ExperimentConfig dicke_defaults(StateChoice prep = StateChoice::DICKE_DIRECT);

    void validate() const; // throws listing every violated field

    // flat key = value document; also the canonical form hashed into
    // report provenance
    std::string to_text() const;
    static ExperimentConfig from_text(const std::string& text);
};

struct CorrelatorResult {
    std::string label; // e.g. "AB'" or "A'BC'D"
    double ideal = 0.0;
    std::vector<double> per_run;
    double mean = 0.0;
    double stddev = 0.0; // sample stddev across runs
};

struct Report {
    std::vector<CorrelatorResult> correlators;
    double bell_ideal = 0.0;
    std::vector<double> bell_per_run;
    double bell_mean = 0.0;
    double bell_stddev = 0.0;
    // statistical (binomial) error of the bell mean, 0 in exact mode
    double bell_stat_stderr = 0.0;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
};

enum class ReportFormat { CSV, TEXT };

Report run_experiment(const ExperimentConfig& cfg);

std::string emit_report(const Report& r, ReportFormat format);
// Recovers labels and all numeric fields from a CSV document.
Report parse_report_csv(const std::string& csv);

// Fixed bundle: exact runs for every state and both term-set sizes,
// sampled noiseless runs, and sampled readout-noise runs with and
// without mitigation.
std::vector<std::pair<std::string, Report>> reproduce_paper_suite(
    std::uint64_t seed = 0);

} // namespace qbell
