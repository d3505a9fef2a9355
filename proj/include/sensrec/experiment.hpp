#pragma once

#include "sensrec/dataset_io.hpp"
#include "sensrec/radmac.hpp"
#include "sensrec/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sensrec {

enum class Algorithm { adrm, admac, halrtc, radmac, knn };
enum class InputFormat { intel, csv, synth };
enum class PatternKind { random, consecutive };
enum class ReportFormat { csv, jsonl };

Algorithm parse_algorithm(std::string_view name);
InputFormat parse_input_format(std::string_view name);
PatternKind parse_pattern_kind(std::string_view name);
ReportFormat parse_report_format(std::string_view name);
std::string_view to_string(Algorithm a);
std::string_view to_string(InputFormat f);
std::string_view to_string(PatternKind p);
std::string_view to_string(ReportFormat f);

/// True for the algorithms that work on a nodes x slots matrix only.
bool is_matrix_algorithm(Algorithm a);

/// Synthetic generator spec, written as
///   lowrank:<n>x<t>:<r>[:<noise>]
///   tucker:<i>x<j>x<k>:<r1>x<r2>x<r3>[:<noise>]
///   mixture:<i>x<j>x<k>:<mode>:<r>
/// with a 0-based mode.
struct SyntheticSpec {
    enum class Kind { lowrank, tucker, mixture } kind = Kind::lowrank;
    Shape shape;
    std::vector<std::size_t> ranks;
    std::size_t deficient_mode = 0;
    double noise = 0.0;

    static SyntheticSpec parse(std::string_view text);
    DenseTensor generate(std::uint64_t seed) const;
    std::string to_string() const;
};

/// Unset fields keep the solver defaults.
struct SolverOverrides {
    std::optional<double> rho;
    std::optional<double> lambda0;
    std::optional<double> c_lambda;
    std::optional<double> lambda_min;
    std::optional<std::size_t> max_iters;
    std::optional<double> tol;
    std::optional<std::size_t> k;
};

struct ExperimentSpec {
    std::string input;  // file path, or a SyntheticSpec string for InputFormat::synth
    InputFormat format = InputFormat::synth;
    std::vector<std::string> attributes;  // empty: format default
    Algorithm algorithm = Algorithm::adrm;
    PatternKind pattern = PatternKind::random;
    double node_fraction = 0.1;  // consecutive pattern
    std::vector<double> sweep;   // sampling ratios (random) or tail fractions (consecutive)
    std::size_t trials = 30;
    std::uint64_t seed = 0;
    SolverOverrides solver;
    std::optional<bool> standardize;  // unset: on for tensor layouts read from files, off otherwise
    ZUpdateRule z_update = ZUpdateRule::exact;
    bool dense_block = true;  // file inputs: restrict to the densest block
    double completeness = 0.95;
    std::size_t max_slots = 0;  // 0: unbounded
    std::size_t threads = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    Layout layout() const;
    bool resolved_standardize() const;
};

/// Loads the spec's input as a labeled block. For file inputs the block is
/// the densest one above the completeness threshold; its remaining gaps are
/// the native mask. Synthetic data are generated with the base seed.
LabeledData load_dataset(const ExperimentSpec& spec);

SolverConfig make_solver_config(const SolverOverrides& o);

/// One solve of `data` seeing only `visible`. With `standardize` the data are
/// z-scored on the visible entries first and the estimate is mapped back.
struct SolveOutcome {
    DenseTensor estimate;
    std::size_t iterations = 0;
    bool converged = true;
    std::optional<double> rho;
};

SolveOutcome solve(const ExperimentSpec& spec, const LabeledData& data, const ObservationMask& visible);

/// The artificial observation mask of one trial.
ObservationMask trial_mask(const ExperimentSpec& spec, const LabeledData& data, double sweep_value,
                           std::uint64_t seed);

struct TrialRow {
    std::size_t sweep_index = 0;
    double sweep_value = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double sampling_ratio = 0.0;  // visible entries over all entries
    double error_ratio = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<double> rho;
    double wall_time_s = 0.0;
};

struct AggregateRow {
    std::size_t sweep_index = 0;
    double sweep_value = 0.0;
    std::size_t trials = 0;
    double sampling_ratio = 0.0;  // mean
    double error_ratio = 0.0;     // mean
    double error_ratio_std = 0.0;  // sample standard deviation, 0 for one trial
    double iterations = 0.0;       // mean
    double converged = 0.0;        // fraction
    double wall_time_s = 0.0;      // sum
};

struct ExperimentReport {
    ExperimentSpec spec;
    bool standardized = false;
    Shape shape;
    std::size_t native_missing = 0;
    std::vector<TrialRow> rows;  // ordered by (sweep index, trial)
    std::vector<AggregateRow> aggregates;
};

/// Means and standard deviations per sweep point, in sweep order.
std::vector<AggregateRow> aggregate_rows(const std::vector<TrialRow>& rows);

/// Raised when a trial fails; carries every row finished before it.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(const std::string& what, ExperimentReport partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const ExperimentReport& partial() const noexcept { return partial_; }

private:
    ExperimentReport partial_;
};

/// For each sweep point and trial: seed = base seed + trial, mask, solve, and
/// score on the entries removed by the mask (never on native gaps).
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Column order shared by both formats.
const std::vector<std::string>& report_columns();

/// csv: header plus one line per trial, then one per sweep point with
/// aggregate=1. jsonl: one object per line with the same keys; empty csv
/// cells are null.
void emit_report(std::ostream& out, const ExperimentReport& report, ReportFormat format);

/// The spec, resolved settings and per-trial seeds and rho as a JSON document.
std::string config_echo(const ExperimentReport& report);

}  // namespace sensrec
