#pragma once

// On-disk representation of a direction set.
//
// JSON:
//   {
//     "n": 3, "s": 5,
//     "columns": [[...n reals...], ... s entries ...],
//     "partition": {"blocks": [{"m": 1, "column_indices": [0, 1],
//                               "critical_vector": [0, 0, 0]}, ...]},   // optional
//     "meta": ["free-form provenance", ...]                               // optional
//   }
// Column indices are 0-based. Reals are written with 17 significant digits,
// so a write/read cycle reproduces every entry bit for bit.
//
// CSV: n lines of s comma-separated reals, line i holding coordinate i of
// every column. No header and no partition.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "posbasis/matkernel.hpp"
#include "posbasis/partition.hpp"

namespace posbasis::io {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

struct BasisFile {
    Mat columns;
    std::optional<Partition> partition;
    std::vector<std::string> meta;

    std::size_t n() const { return columns.rows(); }
    std::size_t s() const { return columns.cols(); }
};

/// "%.17g" formatting used for every real in files and reports.
std::string format_real(double x);

/// Serializes j with reals in 17-significant-digit form. Arrays of scalars
/// stay on one line.
std::string dump_json(const Json& j);

std::string to_json_text(const BasisFile& file);
std::string to_csv_text(const Mat& columns);
std::string to_text(const BasisFile& file, Format format);

/// Parses JSON or CSV, chosen by the first non-blank character ('{' = JSON).
/// Throws Error(Parse) on malformed input and Error(InvalidPartition) when
/// the partition metadata is inconsistent with the columns.
BasisFile parse_basis_file(const std::string& text);
BasisFile read_basis_file(const std::string& path);

void write_text(const std::string& path, const std::string& text);

Json to_json(const Vec& v);
Json to_json(const Partition& part);
Partition partition_from_json(const Json& j, std::size_t n, std::size_t s);

}  // namespace posbasis::io
