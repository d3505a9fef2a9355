#include "sensrec/experiment.hpp"
#include "sensrec/masks.hpp"
#include "sensrec/metrics.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace sensrec;

namespace {

struct Options {
    std::string algorithm = "adrm";
    std::string input;
    std::string format = "synth";
    std::vector<std::string> attributes;
    std::string pattern = "random";
    std::vector<double> ratios;
    double node_fraction = 0.1;
    std::vector<double> tails;
    std::size_t trials = 30;
    std::uint64_t seed = 0;
    std::optional<double> rho, lambda0, c_lambda, lambda_min, tol;
    std::optional<std::size_t> max_iters, k;
    std::string standardize;
    std::string z_update;
    std::string out;
    std::string out_format = "csv";
    std::string config_out;
    double completeness = 0.95;
    std::size_t max_slots = 0;
    bool whole_input = false;
    std::size_t threads = 1;
};

void add_input_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Data file, or generator spec for --format synth")->required();
    cmd->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"intel", "csv", "synth"}));
    cmd->add_option("--attribute", o.attributes, "Attribute to read (repeatable)");
    cmd->add_option("--seed", o.seed, "Base seed");
    cmd->add_option("--completeness", o.completeness, "Densest-block completeness threshold");
    cmd->add_option("--max-slots", o.max_slots, "Upper bound on the block's slot count (0: none)");
    cmd->add_flag("--whole-input", o.whole_input, "Skip densest-block selection");
}

void add_solve_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--algorithm", o.algorithm, "Reconstruction algorithm")
        ->check(CLI::IsMember({"adrm", "admac", "halrtc", "radmac", "knn"}));
    cmd->add_option("--pattern", o.pattern, "Missing pattern")->check(CLI::IsMember({"random", "consecutive"}));
    cmd->add_option("--ratio", o.ratios, "Sampling ratio (repeatable)");
    cmd->add_option("--node-fraction", o.node_fraction, "Fraction of nodes cut off (consecutive)");
    cmd->add_option("--tail", o.tails, "Tail fraction of slots removed (repeatable, consecutive)");
    cmd->add_option("--rho", o.rho, "Penalty parameter");
    cmd->add_option("--lambda0", o.lambda0, "Initial lambda");
    cmd->add_option("--c-lambda", o.c_lambda, "Lambda decay factor");
    cmd->add_option("--lambda-min", o.lambda_min, "Lambda floor");
    cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
    cmd->add_option("--tol", o.tol, "Stopping tolerance");
    cmd->add_option("--k", o.k, "Neighbors (knn)");
    cmd->add_option("--standardize", o.standardize, "Z-score attributes before solving")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--z-update", o.z_update, "Mixture solver shared-variable update (radmac)")
        ->check(CLI::IsMember({"paper", "exact"}));
}

std::vector<double> default_sweep() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

ExperimentSpec to_spec(const Options& o) {
    ExperimentSpec s;
    s.input = o.input;
    s.format = parse_input_format(o.format);
    s.attributes = o.attributes;
    s.algorithm = parse_algorithm(o.algorithm);
    s.pattern = parse_pattern_kind(o.pattern);
    s.node_fraction = o.node_fraction;
    if (s.pattern == PatternKind::random) {
        if (!o.tails.empty()) throw std::invalid_argument("--tail needs --pattern consecutive");
        s.sweep = o.ratios;
    } else {
        if (!o.ratios.empty()) throw std::invalid_argument("--ratio needs --pattern random");
        s.sweep = o.tails;
    }
    s.trials = o.trials;
    s.seed = o.seed;
    s.solver = {o.rho, o.lambda0, o.c_lambda, o.lambda_min, o.max_iters, o.tol, o.k};
    if (!o.standardize.empty()) s.standardize = o.standardize == "on";
    if (!o.z_update.empty()) {
        if (s.algorithm != Algorithm::radmac) throw std::invalid_argument("--z-update only applies to radmac");
        s.z_update = parse_z_update_rule(o.z_update);
    }
    s.dense_block = !o.whole_input;
    s.completeness = o.completeness;
    s.max_slots = o.max_slots;
    s.threads = o.threads;
    return s;
}

// Opens --out, or stdout when it is empty or "-".
std::ostream& open_sink(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
    if (path.empty() || path == "-") return std::cout;
    holder = std::make_unique<std::ofstream>(path);
    if (!*holder) throw std::runtime_error("cannot open '" + path + "' for writing");
    return *holder;
}

int run_sweep(const Options& o) {
    ExperimentSpec spec = to_spec(o);
    if (spec.sweep.empty()) spec.sweep = default_sweep();
    const auto format = parse_report_format(o.out_format);
    std::unique_ptr<std::ofstream> file;
    std::ostream& sink = open_sink(o.out, file);

    auto write_config = [&](const ExperimentReport& report) {
        std::string path = o.config_out;
        if (path.empty() && !o.out.empty() && o.out != "-") path = o.out + ".config.json";
        if (path.empty()) return;
        std::ofstream cfg(path);
        cfg << config_echo(report);
        if (!cfg) throw std::runtime_error("cannot write '" + path + "'");
    };

    try {
        const ExperimentReport report = run_experiment(spec);
        emit_report(sink, report, format);
        write_config(report);
    } catch (const ExperimentError& e) {
        emit_report(sink, e.partial(), format);
        write_config(e.partial());
        throw;
    }
    return 0;
}

int run_reconstruct(const Options& o) {
    ExperimentSpec spec = to_spec(o);
    if (spec.sweep.size() > 1) throw std::invalid_argument("reconstruct takes at most one --ratio or --tail");
    const LabeledData data = load_dataset(spec);
    ObservationMask visible = data.mask;
    std::optional<ObservationMask> artificial;
    if (!spec.sweep.empty()) {
        artificial = trial_mask(spec, data, spec.sweep.front(), spec.seed);
        visible = visible & *artificial;
    }
    const SolveOutcome outcome = solve(spec, data, visible);

    std::unique_ptr<std::ofstream> file;
    write_long_csv(open_sink(o.out, file), data, outcome.estimate, false);

    std::fprintf(stderr, "algorithm=%s shape=%s sampling_ratio=%.6g iterations=%zu converged=%d",
                 std::string(to_string(spec.algorithm)).c_str(), to_string(data.values.shape()).c_str(),
                 sampling_ratio(visible), outcome.iterations, outcome.converged ? 1 : 0);
    if (outcome.rho) std::fprintf(stderr, " rho=%.6g", *outcome.rho);
    if (artificial) {
        const ObservationMask evaluate = data.mask & artificial->complement();
        std::fprintf(stderr, " error_ratio=%.6g", error_ratio(data.values, outcome.estimate, evaluate));
    }
    std::fprintf(stderr, "\n");
    return 0;
}

int run_synth(const Options& o) {
    const LabeledData data = label_synthetic(SyntheticSpec::parse(o.input).generate(o.seed));
    std::unique_ptr<std::ofstream> file;
    write_long_csv(open_sink(o.out, file), data, data.values, false);
    return 0;
}

int run_info(const Options& o) {
    const auto format = parse_input_format(o.format);
    if (format == InputFormat::synth) {
        const auto s = SyntheticSpec::parse(o.input);
        const DenseTensor t = s.generate(o.seed);
        std::cout << "generator: " << s.to_string() << "\nshape: " << to_string(t.shape()) << "\nentries: " << t.size()
                  << "\nnative_gap_ratio: 0\n";
        return 0;
    }
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open input '" + o.input + "'");
    const SensorTable table = format == InputFormat::intel ? parse_intel_berkeley(in) : parse_long_csv(in);
    const auto range = table.slot_range();
    std::cout << "records: " << table.record_count() << "\nduplicates: " << table.duplicate_count()
              << "\nmalformed_lines: " << table.malformed_lines() << "\nnodes: " << table.nodes().size()
              << "\nattributes:";
    for (const auto& a : table.attributes()) std::cout << ' ' << a;
    std::cout << '\n';
    if (!range) return 0;
    const auto slots = static_cast<std::size_t>(range->second - range->first + 1);
    std::cout << "slots: " << slots << " [" << range->first << ", " << range->second << "]\n";
    const auto grid = static_cast<double>(slots * table.nodes().size());

    const std::vector<std::string> selected = o.attributes.empty() ? table.attributes() : o.attributes;
    for (const auto& a : selected) {
        const LabeledData m = pivot_matrix(table, a);
        const double gap = 1.0 - static_cast<double>(m.mask.observed_count()) / grid;
        const DenseBlock b = select_dense_block(m.mask, o.completeness, 256, o.max_slots);
        std::cout << "native_gap_ratio[" << a << "]: " << gap << "\ndense_block[" << a << "]: ";
        if (b.nodes.empty()) {
            std::cout << "none\n";
        } else {
            std::cout << b.nodes.size() << " nodes x " << b.slot_count << " slots from slot "
                      << range->first + static_cast<std::int64_t>(b.first_slot) << ", completeness " << b.completeness
                      << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank reconstruction of missing sensor data"};
    app.require_subcommand(1);
    Options o;

    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct one dataset and write it as long CSV");
    add_input_options(reconstruct, o);
    add_solve_options(reconstruct, o);
    reconstruct->add_option("--out", o.out, "Output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Error ratios over a sweep of missing rates, repeated over trials");
    add_input_options(sweep, o);
    add_solve_options(sweep, o);
    sweep->add_option("--trials", o.trials, "Trials per sweep point");
    sweep->add_option("--out", o.out, "Report file (default stdout)");
    sweep->add_option("--out-format", o.out_format, "Report format")->check(CLI::IsMember({"csv", "jsonl"}));
    sweep->add_option("--config-out", o.config_out, "Config echo path (default <out>.config.json)");
    sweep->add_option("--threads", o.threads, "Concurrent trials");

    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as long CSV");
    synth->add_option("--input", o.input, "Generator spec, e.g. lowrank:50x60:3")->required();
    synth->add_option("--seed", o.seed, "Seed");
    synth->add_option("--out", o.out, "Output file (default stdout)");

    auto* info = app.add_subcommand("info", "Dataset statistics");
    add_input_options(info, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*reconstruct) return run_reconstruct(o);
        if (*sweep) return run_sweep(o);
        if (*synth) return run_synth(o);
        return run_info(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "sensrec: invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sensrec: error: " << e.what() << '\n';
        return 1;
    }
}
