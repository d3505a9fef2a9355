#include "sensrec/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace sensrec {

namespace {

bool parse_int(std::string_view s, std::int64_t& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_real(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

// Numeric ids compare numerically; everything else lexicographically after them.
bool natural_less(const std::string& a, const std::string& b) {
    std::int64_t ia = 0, ib = 0;
    const bool na = parse_int(a, ia), nb = parse_int(b, ib);
    if (na && nb) return ia != ib ? ia < ib : a < b;
    if (na != nb) return na;
    return a < b;
}

std::vector<std::size_t> select_nodes(const SensorTable& table, const std::optional<std::vector<std::string>>& nodes) {
    std::vector<std::size_t> out;
    if (!nodes) {
        out.resize(table.nodes().size());
        std::iota(out.begin(), out.end(), std::size_t{0});
        return out;
    }
    for (const auto& name : *nodes) {
        const auto idx = table.node_index(name);
        if (!idx) throw std::invalid_argument("unknown node '" + name + "'");
        out.push_back(*idx);
    }
    return out;
}

SlotRange select_slots(const SensorTable& table, const std::optional<SlotRange>& slots) {
    if (slots) {
        if (slots->last < slots->first) throw std::invalid_argument("empty slot range");
        return *slots;
    }
    const auto range = table.slot_range();
    if (!range) throw std::invalid_argument("cannot pivot an empty table");
    return {range->first, range->second};
}

std::size_t attribute_extent(const DenseTensor& values, Layout layout) {
    return layout == Layout::matrix ? 1 : values.extent(2);
}

// Attribute slice of linear index i (tensor layout: mode 2 is the attribute).
std::size_t attribute_of(std::size_t i, std::size_t slice_size, Layout layout) {
    return layout == Layout::matrix ? 0 : i / slice_size;
}

std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// SensorTable

std::optional<std::pair<std::int64_t, std::int64_t>> SensorTable::slot_range() const {
    if (entries_.empty()) return std::nullopt;
    auto lo = std::numeric_limits<std::int64_t>::max();
    auto hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& e : entries_) {
        lo = std::min(lo, e.slot);
        hi = std::max(hi, e.slot);
    }
    return std::make_pair(lo, hi);
}

std::optional<std::size_t> SensorTable::node_index(std::string_view node) const {
    const auto it = std::find(nodes_.begin(), nodes_.end(), node);
    if (it == nodes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<std::size_t> SensorTable::attribute_index(std::string_view attribute) const {
    const auto it = std::find(attributes_.begin(), attributes_.end(), attribute);
    if (it == attributes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - attributes_.begin());
}

std::optional<double> SensorTable::find(std::string_view node, std::int64_t slot, std::string_view attribute) const {
    const auto n = node_index(node);
    const auto a = attribute_index(attribute);
    if (!n || !a) return std::nullopt;
    const auto key = std::make_tuple(static_cast<std::uint32_t>(*n), static_cast<std::uint32_t>(*a), slot);
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), key, [](const Entry& e, const auto& k) {
        return std::tie(e.node, e.attribute, e.slot) < k;
    });
    if (it == entries_.end() || std::tie(it->node, it->attribute, it->slot) != key) return std::nullopt;
    return it->value;
}

std::vector<SensorRecord> SensorTable::records() const {
    std::vector<SensorRecord> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({nodes_[e.node], e.slot, attributes_[e.attribute], e.value});
    return out;
}

std::uint32_t SensorTable::Builder::intern(std::vector<std::string>& names, std::string_view name) {
    // Registries are small (tens of nodes); a linear scan from the back hits
    // the common repeated-name case immediately.
    for (std::size_t i = names.size(); i-- > 0;) {
        if (names[i] == name) return static_cast<std::uint32_t>(i);
    }
    names.emplace_back(name);
    return static_cast<std::uint32_t>(names.size() - 1);
}

void SensorTable::Builder::add(std::string_view node, std::int64_t slot, std::string_view attribute, double value) {
    if (node.empty()) throw std::invalid_argument("sensor record needs a node id");
    if (attribute.empty()) throw std::invalid_argument("sensor record needs an attribute");
    if (slot < 0) throw std::invalid_argument("sensor slots must be nonnegative");
    if (!std::isfinite(value)) throw std::invalid_argument("sensor values must be finite");
    entries_.push_back({intern(nodes_, node), intern(attributes_, attribute), slot, value});
}

SensorTable SensorTable::Builder::build() && {
    SensorTable table;
    table.malformed_ = malformed_;

    // Natural node order; remap ids.
    std::vector<std::uint32_t> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return natural_less(nodes_[a], nodes_[b]); });
    std::vector<std::uint32_t> rank(nodes_.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        table.nodes_.push_back(std::move(nodes_[order[r]]));
    }
    table.attributes_ = std::move(attributes_);

    for (auto& e : entries_) e.node = rank[e.node];
    // Stable sort keeps insertion order within a key, so the last one wins.
    std::stable_sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.node, a.attribute, a.slot) < std::tie(b.node, b.attribute, b.slot);
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const bool last_of_key = i + 1 == entries_.size() ||
                                 std::tie(entries_[i].node, entries_[i].attribute, entries_[i].slot) !=
                                     std::tie(entries_[i + 1].node, entries_[i + 1].attribute, entries_[i + 1].slot);
        if (last_of_key) {
            table.entries_.push_back(entries_[i]);
        } else {
            ++table.duplicates_;
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Parsers

SensorTable parse_intel_berkeley(std::istream& in) {
    if (!in) throw ParseError("intel log: stream is not readable");
    const auto& names = intel_attributes();
    SensorTable::Builder builder;
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto fields = split_whitespace(line);
        if (fields.empty()) continue;
        ++lines;
        std::int64_t epoch = 0, mote = 0;
        if (fields.size() < 4 || fields.size() > 8 || !parse_int(fields[2], epoch) || epoch < 0 ||
            !parse_int(fields[3], mote) || mote < 0) {
            builder.count_malformed();
            continue;
        }
        std::vector<double> readings;
        bool ok = true;
        for (std::size_t f = 4; f < fields.size(); ++f) {
            double v = 0.0;
            if (!parse_real(fields[f], v)) {
                ok = false;
                break;
            }
            readings.push_back(v);
        }
        if (!ok) {
            builder.count_malformed();
            continue;
        }
        const std::string node = std::to_string(mote);
        for (std::size_t a = 0; a < readings.size(); ++a) builder.add(node, epoch, names[a], readings[a]);
    }
    if (in.bad()) throw ParseError("intel log: read error");
    if (lines > 0 && 2 * builder.malformed() > lines) {
        throw ParseError("intel log: " + std::to_string(builder.malformed()) + " of " + std::to_string(lines) +
                         " lines are malformed; wrong format?");
    }
    return std::move(builder).build();
}

SensorTable parse_long_csv(std::istream& in, const CsvSchema& schema) {
    if (!in) throw ParseError("csv: stream is not readable");
    std::string line;
    SensorTable::Builder builder;
    if (!std::getline(in, line)) throw ParseError("csv: missing header row");

    const auto header = split(line, ',');
    std::optional<std::size_t> node_col, slot_col;
    std::vector<std::pair<std::size_t, std::string>> attr_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name(header[c]);
        if (name == schema.node_column) {
            node_col = c;
        } else if (name == schema.slot_column) {
            slot_col = c;
        } else if (schema.attributes.empty() ||
                   std::find(schema.attributes.begin(), schema.attributes.end(), name) != schema.attributes.end()) {
            attr_cols.emplace_back(c, name);
        }
    }
    if (!node_col) throw ParseError("csv: header lacks node column '" + schema.node_column + "'");
    if (!slot_col) throw ParseError("csv: header lacks slot column '" + schema.slot_column + "'");
    for (const auto& wanted : schema.attributes) {
        if (std::none_of(attr_cols.begin(), attr_cols.end(), [&](const auto& p) { return p.second == wanted; })) {
            throw ParseError("csv: header lacks attribute column '" + wanted + "'");
        }
    }
    if (attr_cols.empty()) throw ParseError("csv: header names no attribute column");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        const std::string where = "csv line " + std::to_string(line_no);
        if (cells.size() != header.size()) throw ParseError(where + ": expected " + std::to_string(header.size()) + " cells");
        std::int64_t slot = 0;
        if (!parse_int(cells[*slot_col], slot) || slot < 0) throw ParseError(where + ": bad slot");
        if (cells[*node_col].empty()) throw ParseError(where + ": empty node id");
        for (const auto& [c, name] : attr_cols) {
            if (cells[c].empty()) continue;
            double v = 0.0;
            if (!parse_real(cells[c], v)) throw ParseError(where + ": bad value for '" + name + "'");
            builder.add(cells[*node_col], slot, name, v);
        }
    }
    if (in.bad()) throw ParseError("csv: read error");
    return std::move(builder).build();
}

// ---------------------------------------------------------------------------
// Pivots

std::size_t LabeledData::slot_count() const { return values.extent(time_axis()); }

LabeledData pivot_matrix(const SensorTable& table, std::string_view attribute,
                         const std::optional<std::vector<std::string>>& nodes,
                         const std::optional<SlotRange>& slots) {
    const auto attr = table.attribute_index(attribute);
    if (!attr) throw std::invalid_argument("unknown attribute '" + std::string(attribute) + "'");
    const auto node_ids = select_nodes(table, nodes);
    if (node_ids.empty()) throw std::invalid_argument("empty node selection");
    const SlotRange range = select_slots(table, slots);
    const auto n_slots = static_cast<std::size_t>(range.last - range.first + 1);

    std::vector<std::int64_t> row_of(table.nodes().size(), -1);
    for (std::size_t r = 0; r < node_ids.size(); ++r) row_of[node_ids[r]] = static_cast<std::int64_t>(r);

    LabeledData out;
    out.values = DenseTensor({node_ids.size(), n_slots});
    out.mask = ObservationMask({node_ids.size(), n_slots}, false);
    out.layout = Layout::matrix;
    for (auto id : node_ids) out.nodes.push_back(table.nodes()[id]);
    out.attributes = {std::string(attribute)};
    out.first_slot = range.first;

    const std::size_t rows = node_ids.size();
    for (const auto& e : table.entries()) {
        if (e.attribute != *attr || row_of[e.node] < 0 || e.slot < range.first || e.slot > range.last) continue;
        const std::size_t i = static_cast<std::size_t>(row_of[e.node]) +
                              static_cast<std::size_t>(e.slot - range.first) * rows;
        out.values[i] = e.value;
        out.mask.set(i, true);
    }
    return out;
}

LabeledData pivot_tensor(const SensorTable& table, const std::vector<std::string>& attributes, bool standardize,
                         const std::optional<std::vector<std::string>>& nodes,
                         const std::optional<SlotRange>& slots) {
    if (attributes.empty()) throw std::invalid_argument("pivot_tensor needs at least one attribute");
    std::vector<std::int64_t> slice_of(table.attributes().size(), -1);
    for (std::size_t k = 0; k < attributes.size(); ++k) {
        const auto a = table.attribute_index(attributes[k]);
        if (!a) throw std::invalid_argument("unknown attribute '" + attributes[k] + "'");
        slice_of[*a] = static_cast<std::int64_t>(k);
    }
    const auto node_ids = select_nodes(table, nodes);
    if (node_ids.empty()) throw std::invalid_argument("empty node selection");
    const SlotRange range = select_slots(table, slots);
    const auto n_slots = static_cast<std::size_t>(range.last - range.first + 1);
    const std::size_t n_nodes = node_ids.size();

    std::vector<std::int64_t> col_of(table.nodes().size(), -1);
    for (std::size_t r = 0; r < n_nodes; ++r) col_of[node_ids[r]] = static_cast<std::int64_t>(r);

    const Shape shape{n_slots, n_nodes, attributes.size()};
    LabeledData out;
    out.values = DenseTensor(shape);
    out.mask = ObservationMask(shape, false);
    out.layout = Layout::tensor;
    for (auto id : node_ids) out.nodes.push_back(table.nodes()[id]);
    out.attributes = attributes;
    out.first_slot = range.first;

    for (const auto& e : table.entries()) {
        if (slice_of[e.attribute] < 0 || col_of[e.node] < 0 || e.slot < range.first || e.slot > range.last) continue;
        const std::size_t i = static_cast<std::size_t>(e.slot - range.first) +
                              static_cast<std::size_t>(col_of[e.node]) * n_slots +
                              static_cast<std::size_t>(slice_of[e.attribute]) * n_slots * n_nodes;
        out.values[i] = e.value;
        out.mask.set(i, true);
    }

    if (standardize) {
        out.standardization = fit_standardization(out.values, out.mask, Layout::tensor, attributes);
        out.values = masked(apply_standardization(out.values, out.standardization, Layout::tensor), out.mask);
    }
    return out;
}

StandardizationParams fit_standardization(const DenseTensor& values, const ObservationMask& mask, Layout layout,
                                          const std::vector<std::string>& attribute_names) {
    const std::size_t slices = attribute_extent(values, layout);
    if (attribute_names.size() != slices) throw std::invalid_argument("standardization: attribute name count mismatch");
    const std::size_t slice_size = values.size() / slices;

    std::vector<double> sum(slices, 0.0), ss(slices, 0.0);
    std::vector<std::size_t> count(slices, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!mask[i]) continue;
        const auto a = attribute_of(i, slice_size, layout);
        sum[a] += values[i];
        ++count[a];
    }
    StandardizationParams params;
    for (std::size_t a = 0; a < slices; ++a) {
        params.scales.push_back({attribute_names[a], count[a] ? sum[a] / static_cast<double>(count[a]) : 0.0, 0.0});
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!mask[i]) continue;
        const auto a = attribute_of(i, slice_size, layout);
        const double d = values[i] - params.scales[a].mean;
        ss[a] += d * d;
    }
    for (std::size_t a = 0; a < slices; ++a) {
        if (count[a] < 2 || !(ss[a] > 0.0)) {
            throw std::invalid_argument("cannot standardize attribute '" + attribute_names[a] +
                                        "': observed values have zero variance");
        }
        params.scales[a].std = std::sqrt(ss[a] / static_cast<double>(count[a]));
    }
    return params;
}

DenseTensor apply_standardization(const DenseTensor& values, const StandardizationParams& params, Layout layout) {
    if (params.empty()) return values;
    const std::size_t slice_size = values.size() / attribute_extent(values, layout);
    DenseTensor out = values;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& s = params.scales.at(attribute_of(i, slice_size, layout));
        out[i] = (out[i] - s.mean) / s.std;
    }
    return out;
}

DenseTensor invert_standardization(const DenseTensor& values, const StandardizationParams& params, Layout layout) {
    if (params.empty()) return values;
    const std::size_t slice_size = values.size() / attribute_extent(values, layout);
    DenseTensor out = values;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& s = params.scales.at(attribute_of(i, slice_size, layout));
        out[i] = out[i] * s.std + s.mean;
    }
    return out;
}

void write_long_csv(std::ostream& out, const LabeledData& data, const DenseTensor& values, bool only_observed) {
    if (values.shape() != data.values.shape()) throw ShapeError("write_long_csv: values do not match the labels");
    out << "node,slot";
    for (const auto& a : data.attributes) out << ',' << a;
    out << '\n';

    const std::size_t n_nodes = data.node_count();
    const std::size_t n_slots = data.slot_count();
    const std::size_t n_attr = data.attributes.size();
    for (std::size_t node = 0; node < n_nodes; ++node) {
        for (std::size_t t = 0; t < n_slots; ++t) {
            std::string row = data.nodes[node] + ',' + std::to_string(data.first_slot + static_cast<std::int64_t>(t));
            bool any = false;
            for (std::size_t a = 0; a < n_attr; ++a) {
                const std::size_t i = data.layout == Layout::matrix ? node + t * n_nodes
                                                                    : t + node * n_slots + a * n_slots * n_nodes;
                row += ',';
                if (!only_observed || data.mask[i]) {
                    row += format_real(values[i]);
                    any = true;
                }
            }
            if (any) out << row << '\n';
        }
    }
    if (!out) throw std::runtime_error("write_long_csv: write failed");
}

LabeledData label_synthetic(DenseTensor values, const std::string& attribute_prefix) {
    LabeledData out;
    if (values.order() == 2) {
        out.layout = Layout::matrix;
        out.attributes = {"value"};
        for (std::size_t i = 0; i < values.rows(); ++i) out.nodes.push_back(std::to_string(i));
    } else if (values.order() == 3) {
        out.layout = Layout::tensor;
        for (std::size_t i = 0; i < values.extent(1); ++i) out.nodes.push_back(std::to_string(i));
        for (std::size_t k = 0; k < values.extent(2); ++k) out.attributes.push_back(attribute_prefix + std::to_string(k + 1));
    } else {
        throw ShapeError("synthetic data must be a matrix or a 3-order tensor");
    }
    out.mask = ObservationMask::all_observed(values.shape());
    out.values = std::move(values);
    return out;
}

DenseBlock select_dense_block(const ObservationMask& node_by_slot, double threshold, std::size_t grid,
                              std::size_t max_slots) {
    if (node_by_slot.shape().size() != 2) throw ShapeError("select_dense_block expects a nodes x slots mask");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("completeness threshold must lie in (0, 1]");
    const std::size_t nodes = node_by_slot.shape()[0];
    const std::size_t slots = node_by_slot.shape()[1];

    // prefix[node][t] = observed count in slots [0, t)
    std::vector<std::vector<std::uint32_t>> prefix(nodes, std::vector<std::uint32_t>(slots + 1, 0));
    for (std::size_t n = 0; n < nodes; ++n)
        for (std::size_t t = 0; t < slots; ++t) prefix[n][t + 1] = prefix[n][t] + (node_by_slot[n + t * nodes] ? 1 : 0);

    std::size_t g = std::max<std::size_t>(grid, 1);
    if (max_slots > 0 && max_slots < slots) g = std::max(g, 4 * ((slots + max_slots - 1) / max_slots));
    g = std::min(g, slots);
    std::vector<std::size_t> bounds(g + 1);
    for (std::size_t i = 0; i <= g; ++i) bounds[i] = i * slots / g;

    DenseBlock best;
    std::size_t best_score = 0;
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t c = a + 1; c <= g; ++c) {
            const std::size_t first = bounds[a], len = bounds[c] - first;
            if (len < 2 || (max_slots > 0 && len > max_slots)) continue;
            members.clear();
            std::size_t observed = 0;
            for (std::size_t n = 0; n < nodes; ++n) {
                const std::size_t cnt = prefix[n][first + len] - prefix[n][first];
                if (static_cast<double>(cnt) >= threshold * static_cast<double>(len)) {
                    members.push_back(n);
                    observed += cnt;
                }
            }
            if (members.size() < 2) continue;
            const std::size_t score = members.size() * len;
            if (score > best_score) {
                best_score = score;
                best = {members, first, len, static_cast<double>(observed) / static_cast<double>(score)};
            }
        }
    }
    if (best_score == 0) throw std::invalid_argument("no block of at least 2 nodes x 2 slots reaches the completeness threshold");
    return best;
}

}  // namespace sensrec
