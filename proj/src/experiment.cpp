#include "sensrec/experiment.hpp"

#include "sensrec/admac.hpp"
#include "sensrec/adrm.hpp"
#include "sensrec/halrtc.hpp"
#include "sensrec/knn.hpp"
#include "sensrec/masks.hpp"
#include "sensrec/metrics.hpp"
#include "sensrec/synth.hpp"

#include "json.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>
#include <variant>

namespace sensrec {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::size_t parse_size(std::string_view s, std::string_view what) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

double parse_real(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
        throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

std::vector<std::size_t> parse_dims(std::string_view s, std::string_view what) {
    std::vector<std::size_t> dims;
    for (auto part : split(s, 'x')) dims.push_back(parse_size(part, what));
    return dims;
}

std::string join_dims(const std::vector<std::size_t>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(dims[i]);
    }
    return out;
}

std::string format_real(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// nodes x slots: 1 where every selected attribute has a reading.
ObservationMask availability(const SensorTable& table, const std::vector<std::string>& attributes) {
    const auto range = table.slot_range();
    if (!range) throw std::invalid_argument("input holds no readings");
    std::vector<int> wanted(table.attributes().size(), 0);
    for (const auto& a : attributes) {
        const auto idx = table.attribute_index(a);
        if (!idx) throw std::invalid_argument("unknown attribute '" + a + "'");
        wanted[*idx] = 1;
    }
    const std::size_t nodes = table.nodes().size();
    const auto slots = static_cast<std::size_t>(range->second - range->first + 1);
    std::vector<std::uint8_t> counts(nodes * slots, 0);
    for (const auto& e : table.entries()) {
        if (wanted[e.attribute]) ++counts[e.node + static_cast<std::size_t>(e.slot - range->first) * nodes];
    }
    ObservationMask mask({nodes, slots}, false);
    for (std::size_t i = 0; i < counts.size(); ++i) mask.set(i, counts[i] == attributes.size());
    return mask;
}

std::vector<std::string> default_attributes(const ExperimentSpec& spec, const SensorTable& table) {
    if (!spec.attributes.empty()) return spec.attributes;
    if (table.attributes().empty()) throw std::invalid_argument("input has no attribute columns");
    if (spec.layout() == Layout::matrix) {
        if (spec.format == InputFormat::intel) return {"temperature"};
        return {table.attributes().front()};
    }
    return table.attributes();
}

using Cell = std::variant<std::monostate, std::string, double, std::uint64_t>;

std::vector<Cell> cells(const ExperimentReport& r, const TrialRow& row) {
    return {std::uint64_t{0},
            std::string(to_string(r.spec.algorithm)),
            std::uint64_t{row.sweep_index},
            row.sweep_value,
            std::uint64_t{row.trial},
            row.seed,
            std::monostate{},
            row.sampling_ratio,
            row.error_ratio,
            std::monostate{},
            static_cast<double>(row.iterations),
            row.converged ? 1.0 : 0.0,
            row.rho ? Cell{*row.rho} : Cell{std::monostate{}},
            row.wall_time_s};
}

std::vector<Cell> cells(const ExperimentReport& r, const AggregateRow& row) {
    return {std::uint64_t{1},
            std::string(to_string(r.spec.algorithm)),
            std::uint64_t{row.sweep_index},
            row.sweep_value,
            std::monostate{},
            std::monostate{},
            std::uint64_t{row.trials},
            row.sampling_ratio,
            row.error_ratio,
            row.error_ratio_std,
            row.iterations,
            row.converged,
            std::monostate{},
            row.wall_time_s};
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else if constexpr (std::is_same_v<T, double>) return format_real(v);
            else return std::to_string(v);
        },
        c);
}

ordered json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> ordered {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else return v;
        },
        c);
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    if (name == "adrm") return Algorithm::adrm;
    if (name == "admac") return Algorithm::admac;
    if (name == "halrtc") return Algorithm::halrtc;
    if (name == "radmac") return Algorithm::radmac;
    if (name == "knn") return Algorithm::knn;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected adrm|admac|halrtc|radmac|knn)");
}

InputFormat parse_input_format(std::string_view name) {
    if (name == "intel") return InputFormat::intel;
    if (name == "csv") return InputFormat::csv;
    if (name == "synth") return InputFormat::synth;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected intel|csv|synth)");
}

PatternKind parse_pattern_kind(std::string_view name) {
    if (name == "random") return PatternKind::random;
    if (name == "consecutive") return PatternKind::consecutive;
    throw std::invalid_argument("unknown pattern '" + std::string(name) + "' (expected random|consecutive)");
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "jsonl") return ReportFormat::jsonl;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "' (expected csv|jsonl)");
}

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::adrm: return "adrm";
        case Algorithm::admac: return "admac";
        case Algorithm::halrtc: return "halrtc";
        case Algorithm::radmac: return "radmac";
        case Algorithm::knn: return "knn";
    }
    return "?";
}

std::string_view to_string(InputFormat f) {
    switch (f) {
        case InputFormat::intel: return "intel";
        case InputFormat::csv: return "csv";
        case InputFormat::synth: return "synth";
    }
    return "?";
}

std::string_view to_string(PatternKind p) { return p == PatternKind::random ? "random" : "consecutive"; }
std::string_view to_string(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "jsonl"; }

bool is_matrix_algorithm(Algorithm a) { return a == Algorithm::adrm || a == Algorithm::knn; }

SyntheticSpec SyntheticSpec::parse(std::string_view text) {
    const auto parts = split(text, ':');
    SyntheticSpec s;
    if (parts[0] == "lowrank") {
        if (parts.size() < 3 || parts.size() > 4) throw std::invalid_argument("expected lowrank:<n>x<t>:<r>[:<noise>]");
        s.kind = Kind::lowrank;
        s.shape = parse_dims(parts[1], "shape");
        if (s.shape.size() != 2) throw std::invalid_argument("lowrank shape must be <n>x<t>");
        s.ranks = {parse_size(parts[2], "rank")};
        if (parts.size() == 4) s.noise = parse_real(parts[3], "noise");
    } else if (parts[0] == "tucker") {
        if (parts.size() < 3 || parts.size() > 4)
            throw std::invalid_argument("expected tucker:<i>x<j>x<k>:<r1>x<r2>x<r3>[:<noise>]");
        s.kind = Kind::tucker;
        s.shape = parse_dims(parts[1], "shape");
        s.ranks = parse_dims(parts[2], "ranks");
        if (s.shape.size() != 3 || s.ranks.size() != 3) throw std::invalid_argument("tucker needs 3 extents and 3 ranks");
        if (parts.size() == 4) s.noise = parse_real(parts[3], "noise");
    } else if (parts[0] == "mixture") {
        if (parts.size() != 4) throw std::invalid_argument("expected mixture:<i>x<j>x<k>:<mode>:<r>");
        s.kind = Kind::mixture;
        s.shape = parse_dims(parts[1], "shape");
        if (s.shape.size() != 3) throw std::invalid_argument("mixture shape must have 3 extents");
        s.deficient_mode = parse_size(parts[2], "mode");
        s.ranks = {parse_size(parts[3], "rank")};
        if (s.deficient_mode >= 3) throw std::invalid_argument("mixture mode must be 0, 1 or 2");
    } else {
        throw std::invalid_argument("unknown generator '" + std::string(parts[0]) + "' (expected lowrank|tucker|mixture)");
    }
    if (s.noise < 0.0) throw std::invalid_argument("noise must be nonnegative");
    return s;
}

DenseTensor SyntheticSpec::generate(std::uint64_t seed) const {
    switch (kind) {
        case Kind::lowrank: return synth_lowrank_matrix(shape[0], shape[1], ranks[0], seed, noise);
        case Kind::tucker: return synth_tucker_tensor(shape, ranks, seed, noise);
        case Kind::mixture: return synth_mixture_tensor(shape, deficient_mode, ranks[0], seed);
    }
    throw std::logic_error("unreachable");
}

std::string SyntheticSpec::to_string() const {
    switch (kind) {
        case Kind::lowrank:
            return "lowrank:" + join_dims(shape) + ':' + std::to_string(ranks[0]) + ':' + format_real(noise);
        case Kind::tucker: return "tucker:" + join_dims(shape) + ':' + join_dims(ranks) + ':' + format_real(noise);
        case Kind::mixture:
            return "mixture:" + join_dims(shape) + ':' + std::to_string(deficient_mode) + ':' +
                   std::to_string(ranks[0]);
    }
    return {};
}

Layout ExperimentSpec::layout() const {
    if (format == InputFormat::synth) return SyntheticSpec::parse(input).shape.size() == 2 ? Layout::matrix : Layout::tensor;
    return is_matrix_algorithm(algorithm) ? Layout::matrix : Layout::tensor;
}

bool ExperimentSpec::resolved_standardize() const {
    if (standardize) return *standardize;
    return format != InputFormat::synth && layout() == Layout::tensor;
}

void ExperimentSpec::validate() const {
    if (input.empty()) throw std::invalid_argument("input: missing");
    if (sweep.empty()) throw std::invalid_argument("sweep: needs at least one value");
    if (trials < 1) throw std::invalid_argument("trials: must be at least 1");
    if (threads < 1) throw std::invalid_argument("threads: must be at least 1");
    for (double v : sweep) {
        if (pattern == PatternKind::random && !(v > 0.0 && v <= 1.0))
            throw std::invalid_argument("ratio: " + format_real(v) + " is outside (0, 1]");
        if (pattern == PatternKind::consecutive && !(v >= 0.0 && v < 1.0))
            throw std::invalid_argument("tail: " + format_real(v) + " is outside [0, 1)");
    }
    if (pattern == PatternKind::consecutive && !(node_fraction > 0.0 && node_fraction <= 1.0))
        throw std::invalid_argument("node-fraction: must lie in (0, 1]");
    if (!(completeness > 0.0 && completeness <= 1.0)) throw std::invalid_argument("completeness: must lie in (0, 1]");

    const bool lambda_set = solver.lambda0 || solver.c_lambda || solver.lambda_min;
    if (algorithm == Algorithm::halrtc && lambda_set)
        throw std::invalid_argument("halrtc has no lambda schedule; drop --lambda0/--c-lambda/--lambda-min");
    if (algorithm == Algorithm::knn && (lambda_set || solver.rho || solver.max_iters || solver.tol))
        throw std::invalid_argument("knn takes no solver parameters besides --k");
    if (algorithm != Algorithm::knn && solver.k) throw std::invalid_argument("k: only meaningful for knn");
    if (solver.k && *solver.k < 1) throw std::invalid_argument("k: must be at least 1");
    if (algorithm != Algorithm::knn && algorithm != Algorithm::halrtc) make_solver_config(solver).validate();
    if (algorithm == Algorithm::halrtc) {
        HalrtcConfig h;
        h.rho = solver.rho;
        if (solver.max_iters) h.max_iters = *solver.max_iters;
        if (solver.tol) h.tol = *solver.tol;
        h.validate();
    }

    if (format == InputFormat::synth) {
        const auto s = SyntheticSpec::parse(input);
        if (is_matrix_algorithm(algorithm) && s.shape.size() != 2)
            throw std::invalid_argument(std::string(to_string(algorithm)) + " needs a matrix; use a lowrank generator");
        if (!attributes.empty()) throw std::invalid_argument("attribute: not applicable to synthetic input");
    } else if (is_matrix_algorithm(algorithm) && attributes.size() > 1) {
        throw std::invalid_argument(std::string(to_string(algorithm)) + " works on one attribute at a time");
    }
}

SolverConfig make_solver_config(const SolverOverrides& o) {
    SolverConfig c;
    if (o.lambda0) c.lambda0 = *o.lambda0;
    if (o.c_lambda) c.c_lambda = *o.c_lambda;
    if (o.lambda_min) c.lambda_min = *o.lambda_min;
    c.rho = o.rho;
    if (o.max_iters) c.max_iters = *o.max_iters;
    if (o.tol) c.tol = *o.tol;
    return c;
}

LabeledData load_dataset(const ExperimentSpec& spec) {
    if (spec.format == InputFormat::synth) return label_synthetic(SyntheticSpec::parse(spec.input).generate(spec.seed));

    std::ifstream in(spec.input);
    if (!in) throw std::runtime_error("cannot open input '" + spec.input + "'");
    const SensorTable table = spec.format == InputFormat::intel ? parse_intel_berkeley(in) : parse_long_csv(in);
    const auto attributes = default_attributes(spec, table);

    std::optional<std::vector<std::string>> nodes;
    std::optional<SlotRange> slots;
    if (spec.dense_block) {
        const DenseBlock block = select_dense_block(availability(table, attributes), spec.completeness, 256, spec.max_slots);
        if (block.nodes.empty())
            throw std::runtime_error("no block of at least 2 nodes x 2 slots reaches completeness " +
                                     format_real(spec.completeness));
        nodes.emplace();
        for (auto n : block.nodes) nodes->push_back(table.nodes()[n]);
        const auto first = table.slot_range()->first + static_cast<std::int64_t>(block.first_slot);
        slots = SlotRange{first, first + static_cast<std::int64_t>(block.slot_count) - 1};
    }
    if (spec.layout() == Layout::matrix) return pivot_matrix(table, attributes.front(), nodes, slots);
    return pivot_tensor(table, attributes, false, nodes, slots);
}

SolveOutcome solve(const ExperimentSpec& spec, const LabeledData& data, const ObservationMask& visible) {
    DenseTensor input = data.values;
    StandardizationParams params;
    if (spec.resolved_standardize()) {
        params = fit_standardization(data.values, visible, data.layout, data.attributes);
        input = apply_standardization(input, params, data.layout);
    }

    SolveOutcome out;
    auto take = [&](ReconstructionResult r) {
        out.estimate = std::move(r.estimate);
        out.iterations = r.iterations;
        out.converged = r.converged;
        out.rho = r.rho;
    };
    switch (spec.algorithm) {
        case Algorithm::adrm: take(adrm_reconstruct(input, visible, make_solver_config(spec.solver))); break;
        case Algorithm::admac: take(admac_reconstruct(input, visible, make_solver_config(spec.solver))); break;
        case Algorithm::radmac:
            take(radmac_reconstruct(input, visible, make_solver_config(spec.solver), spec.z_update));
            break;
        case Algorithm::halrtc: {
            HalrtcConfig h;
            h.rho = spec.solver.rho;
            if (spec.solver.max_iters) h.max_iters = *spec.solver.max_iters;
            if (spec.solver.tol) h.tol = *spec.solver.tol;
            take(halrtc_reconstruct(input, visible, h));
            break;
        }
        case Algorithm::knn: {
            KnnConfig k;
            if (spec.solver.k) k.k = *spec.solver.k;
            out.estimate = knn_impute(input, visible, k);
            break;
        }
    }
    if (!params.empty()) out.estimate = invert_standardization(out.estimate, params, data.layout);
    return out;
}

ObservationMask trial_mask(const ExperimentSpec& spec, const LabeledData& data, double sweep_value,
                           std::uint64_t seed) {
    MissingPatternSpec p;
    if (spec.pattern == PatternKind::random) {
        p.kind = RandomMissing{sweep_value};
    } else {
        p.kind = ConsecutiveMissing{spec.node_fraction, sweep_value};
    }
    p.seed = seed;
    p.node_axis = data.node_axis();
    p.time_axis = data.time_axis();
    return generate_mask(data.values.shape(), p);
}

std::vector<AggregateRow> aggregate_rows(const std::vector<TrialRow>& rows) {
    std::vector<AggregateRow> out;
    std::size_t begin = 0;
    while (begin < rows.size()) {
        std::size_t end = begin;
        while (end < rows.size() && rows[end].sweep_index == rows[begin].sweep_index) ++end;
        const double n = static_cast<double>(end - begin);
        AggregateRow a;
        a.sweep_index = rows[begin].sweep_index;
        a.sweep_value = rows[begin].sweep_value;
        a.trials = end - begin;
        for (std::size_t i = begin; i < end; ++i) {
            a.sampling_ratio += rows[i].sampling_ratio;
            a.error_ratio += rows[i].error_ratio;
            a.iterations += static_cast<double>(rows[i].iterations);
            a.converged += rows[i].converged ? 1.0 : 0.0;
            a.wall_time_s += rows[i].wall_time_s;
        }
        a.sampling_ratio /= n;
        a.error_ratio /= n;
        a.iterations /= n;
        a.converged /= n;
        if (end - begin > 1) {
            double ss = 0.0;
            for (std::size_t i = begin; i < end; ++i) ss += (rows[i].error_ratio - a.error_ratio) * (rows[i].error_ratio - a.error_ratio);
            a.error_ratio_std = std::sqrt(ss / (n - 1.0));
        }
        out.push_back(a);
        begin = end;
    }
    return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const LabeledData data = load_dataset(spec);

    ExperimentReport report;
    report.spec = spec;
    report.spec.attributes = spec.format == InputFormat::synth ? std::vector<std::string>{} : data.attributes;
    report.standardized = spec.resolved_standardize();
    report.shape = data.values.shape();
    report.native_missing = data.mask.size() - data.mask.observed_count();

    const std::size_t total = spec.sweep.size() * spec.trials;
    std::vector<TrialRow> rows(total);
    std::vector<std::string> failures(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto run_one = [&](std::size_t idx) {
        TrialRow& row = rows[idx];
        row.sweep_index = idx / spec.trials;
        row.sweep_value = spec.sweep[row.sweep_index];
        row.trial = idx % spec.trials;
        row.seed = spec.seed + row.trial;
        const auto start = std::chrono::steady_clock::now();
        const ObservationMask artificial = trial_mask(spec, data, row.sweep_value, row.seed);
        const ObservationMask visible = data.mask & artificial;
        const ObservationMask evaluate = data.mask & artificial.complement();
        SolveOutcome outcome = solve(spec, data, visible);
        row.sampling_ratio = sampling_ratio(visible);
        row.error_ratio = error_ratio(data.values, outcome.estimate, evaluate);
        row.iterations = outcome.iterations;
        row.converged = outcome.converged;
        row.rho = outcome.rho;
        row.wall_time_s = seconds_since(start);
    };
    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            try {
                run_one(idx);
            } catch (const std::exception& e) {
                failures[idx] = e.what();
                stop.store(true);
            }
        }
    };

    const std::size_t n_threads = std::min(spec.threads, total);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t idx = 0; idx < total; ++idx) {
        if (failures[idx].empty()) continue;
        rows.resize(idx);
        report.rows = std::move(rows);
        report.aggregates = aggregate_rows(report.rows);
        const std::size_t sweep_index = idx / spec.trials, trial = idx % spec.trials;
        throw ExperimentError("sweep point " + format_real(spec.sweep[sweep_index]) + " (index " +
                                  std::to_string(sweep_index) + "), trial " + std::to_string(trial) + " (seed " +
                                  std::to_string(spec.seed + trial) + "): " + failures[idx],
                              std::move(report));
    }
    report.rows = std::move(rows);
    report.aggregates = aggregate_rows(report.rows);
    return report;
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols{"aggregate",      "algorithm",      "sweep_index", "sweep_value",
                                               "trial",          "seed",           "trials",      "sampling_ratio",
                                               "error_ratio",    "error_ratio_std", "iterations", "converged",
                                               "rho",            "wall_time_s"};
    return cols;
}

void emit_report(std::ostream& out, const ExperimentReport& report, ReportFormat format) {
    const auto& cols = report_columns();
    std::vector<std::vector<Cell>> lines;
    for (const auto& r : report.rows) lines.push_back(cells(report, r));
    for (const auto& a : report.aggregates) lines.push_back(cells(report, a));

    if (format == ReportFormat::csv) {
        for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
        out << '\n';
        for (const auto& line : lines) {
            for (std::size_t c = 0; c < line.size(); ++c) out << (c ? "," : "") << csv_cell(line[c]);
            out << '\n';
        }
    } else {
        for (const auto& line : lines) {
            ordered obj = ordered::object();
            for (std::size_t c = 0; c < line.size(); ++c) obj[cols[c]] = json_cell(line[c]);
            out << obj.dump() << '\n';
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("report sink write failed");
}

std::string config_echo(const ExperimentReport& report) {
    const ExperimentSpec& s = report.spec;
    json j;
    j["input"] = s.input;
    j["format"] = to_string(s.format);
    j["attributes"] = s.attributes;
    j["algorithm"] = to_string(s.algorithm);
    j["pattern"] = to_string(s.pattern);
    if (s.pattern == PatternKind::consecutive) j["node_fraction"] = s.node_fraction;
    j["sweep"] = s.sweep;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["standardize"] = report.standardized;
    j["shape"] = report.shape;
    j["native_missing"] = report.native_missing;
    if (s.format != InputFormat::synth) {
        j["dense_block"] = s.dense_block;
        j["completeness"] = s.completeness;
        j["max_slots"] = s.max_slots;
    }

    json solver;
    switch (s.algorithm) {
        case Algorithm::adrm:
        case Algorithm::admac:
        case Algorithm::radmac: {
            const SolverConfig c = make_solver_config(s.solver);
            solver["lambda0"] = c.lambda0;
            solver["c_lambda"] = c.c_lambda;
            solver["lambda_min"] = c.lambda_min;
            solver["max_iters"] = c.max_iters;
            solver["tol"] = c.tol;
            solver["rho"] = c.rho ? json(*c.rho) : json("0.1/std(observed), per trial");
            if (s.algorithm == Algorithm::radmac) solver["z_update"] = to_string(s.z_update);
            break;
        }
        case Algorithm::halrtc: {
            const HalrtcConfig c;
            solver["max_iters"] = s.solver.max_iters.value_or(c.max_iters);
            solver["tol"] = s.solver.tol.value_or(c.tol);
            solver["rho"] = s.solver.rho ? json(*s.solver.rho) : json("0.1/std(observed), per trial");
            break;
        }
        case Algorithm::knn: {
            const KnnConfig c;
            solver["k"] = s.solver.k.value_or(c.k);
            solver["min_overlap"] = c.min_overlap;
            solver["scale_to_target"] = c.scale_to_target;
            break;
        }
    }
    j["solver"] = solver;

    json trials = json::array();
    for (const auto& r : report.rows) {
        trials.push_back({{"sweep_index", r.sweep_index},
                          {"trial", r.trial},
                          {"seed", r.seed},
                          {"rho", r.rho ? json(*r.rho) : json(nullptr)}});
    }
    j["trials_resolved"] = trials;
    return j.dump(2) + "\n";
}

}  // namespace sensrec
