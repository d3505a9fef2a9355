#pragma once

#include "sensrec/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sensrec {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SensorRecord {
    std::string node;
    std::int64_t slot = 0;
    std::string attribute;
    double value = 0.0;

    friend bool operator==(const SensorRecord&, const SensorRecord&) = default;
};

/// Long-format readings with at most one value per (node, slot, attribute).
///
/// Nodes are kept in natural order (numeric ids compare numerically),
/// attributes in first-seen order.
class SensorTable {
public:
    class Builder;

    std::size_t record_count() const noexcept { return entries_.size(); }
    std::size_t duplicate_count() const noexcept { return duplicates_; }
    std::size_t malformed_lines() const noexcept { return malformed_; }

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<std::string>& attributes() const noexcept { return attributes_; }

    /// Inclusive [first, last] slot range; nullopt for an empty table.
    std::optional<std::pair<std::int64_t, std::int64_t>> slot_range() const;

    std::optional<double> find(std::string_view node, std::int64_t slot, std::string_view attribute) const;

    /// All records ordered by (node, attribute, slot).
    std::vector<SensorRecord> records() const;

    std::optional<std::size_t> node_index(std::string_view node) const;
    std::optional<std::size_t> attribute_index(std::string_view attribute) const;

    /// A reading keyed by registry indices.
    struct Entry {
        std::uint32_t node;
        std::uint32_t attribute;
        std::int64_t slot;
        double value;
    };

    /// Sorted by (node, attribute, slot); keys are unique.
    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    std::vector<std::string> nodes_;
    std::vector<std::string> attributes_;
    std::vector<Entry> entries_;  // sorted by (node, attribute, slot), unique keys
    std::size_t duplicates_ = 0;
    std::size_t malformed_ = 0;

    friend class Builder;
};

/// Accumulates readings; duplicate keys resolve to the last value added.
class SensorTable::Builder {
public:
    void add(std::string_view node, std::int64_t slot, std::string_view attribute, double value);
    void count_malformed() noexcept { ++malformed_; }
    std::size_t malformed() const noexcept { return malformed_; }
    std::size_t lines_added() const noexcept { return entries_.size(); }

    SensorTable build() &&;

private:
    std::uint32_t intern(std::vector<std::string>& names, std::string_view name);

    std::vector<std::string> nodes_;
    std::vector<std::string> attributes_;
    std::vector<SensorTable::Entry> entries_;
    std::size_t malformed_ = 0;
};

/// Intel Berkeley lab log: `date time epoch moteid temperature humidity light voltage`.
/// Trailing readings may be absent; the epoch is the slot. Malformed lines are
/// skipped and counted; more than half malformed raises ParseError.
SensorTable parse_intel_berkeley(std::istream& in);

inline const std::vector<std::string>& intel_attributes() {
    static const std::vector<std::string> names{"temperature", "humidity", "light", "voltage"};
    return names;
}

struct CsvSchema {
    std::string node_column = "node";
    std::string slot_column = "slot";
    /// Attribute columns to read; empty means every other column.
    std::vector<std::string> attributes;
};

/// Comma-separated long format with a header row; empty cells are missing.
SensorTable parse_long_csv(std::istream& in, const CsvSchema& schema = {});

/// Matrix layout is nodes x slots for a single attribute; tensor layout is
/// slots x nodes x attributes.
enum class Layout { matrix, tensor };

struct AttributeScale {
    std::string attribute;
    double mean = 0.0;
    double std = 1.0;
};

/// Per-attribute z-scoring parameters, one entry per attribute slice.
struct StandardizationParams {
    std::vector<AttributeScale> scales;
    bool empty() const noexcept { return scales.empty(); }
};

/// A pivoted block of sensor data with the labels needed to write it back out.
struct LabeledData {
    DenseTensor values;
    ObservationMask mask;
    Layout layout = Layout::matrix;
    std::vector<std::string> nodes;
    std::vector<std::string> attributes;
    std::int64_t first_slot = 0;
    StandardizationParams standardization;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t slot_count() const;
    std::size_t node_axis() const { return layout == Layout::matrix ? 0 : 1; }
    std::size_t time_axis() const { return layout == Layout::matrix ? 1 : 0; }
};

struct SlotRange {
    std::int64_t first;
    std::int64_t last;  // inclusive
};

/// nodes x slots matrix of one attribute. Absent readings are unobserved
/// (mask 0, value 0). Defaults: every node, the table's full slot range.
LabeledData pivot_matrix(const SensorTable& table, std::string_view attribute,
                         const std::optional<std::vector<std::string>>& nodes = std::nullopt,
                         const std::optional<SlotRange>& slots = std::nullopt);

/// slots x nodes x attributes tensor. With `standardize`, each attribute
/// slice is z-scored over its observed entries.
LabeledData pivot_tensor(const SensorTable& table, const std::vector<std::string>& attributes, bool standardize,
                         const std::optional<std::vector<std::string>>& nodes = std::nullopt,
                         const std::optional<SlotRange>& slots = std::nullopt);

/// Fits per-attribute mean/std over observed entries. For the matrix layout
/// the whole matrix is one attribute. Throws if an attribute has zero variance.
StandardizationParams fit_standardization(const DenseTensor& values, const ObservationMask& mask, Layout layout,
                                          const std::vector<std::string>& attribute_names);
DenseTensor apply_standardization(const DenseTensor& values, const StandardizationParams& params, Layout layout);
DenseTensor invert_standardization(const DenseTensor& values, const StandardizationParams& params, Layout layout);

/// Writes `node,slot,<attr...>` rows. With `only_observed`, unobserved cells
/// are left empty and rows with no observed cell are dropped.
void write_long_csv(std::ostream& out, const LabeledData& data, const DenseTensor& values, bool only_observed);

/// Wraps an unlabeled matrix (nodes x slots) or 3-order tensor
/// (slots x nodes x attributes) with index labels.
LabeledData label_synthetic(DenseTensor values, const std::string& attribute_prefix = "a");

/// Densest contiguous block of a nodes x slots mask: the slot window (on a
/// grid of at most `grid` boundaries) and the nodes whose completeness in it
/// reaches `threshold`, maximizing nodes * slots.
struct DenseBlock {
    std::vector<std::size_t> nodes;
    std::size_t first_slot = 0;
    std::size_t slot_count = 0;
    double completeness = 0.0;
};

DenseBlock select_dense_block(const ObservationMask& node_by_slot, double threshold = 0.95,
                              std::size_t grid = 256, std::size_t max_slots = 0);

}  // namespace sensrec
