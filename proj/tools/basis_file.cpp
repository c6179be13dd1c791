#include "basis_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "posbasis/error.hpp"

namespace posbasis::io {
namespace {

[[noreturn]] void parse_error(const std::string& why) { throw Error(ErrorCode::Parse, why); }

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_into(const Json& j, std::string& out, int level) {
    const std::string pad(static_cast<std::size_t>(2 * (level + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * level), ' ');
    switch (j.type()) {
        case Json::value_t::number_float:
            out += format_real(j.get<double>());
            return;
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += flat ? ", " : ",";
                if (!flat) out += "\n" + pad;
                dump_into(item, out, level + 1);
                first = false;
            }
            if (!flat) out += "\n" + close_pad;
            out += ']';
            return;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                out += "\n" + pad + Json(it.key()).dump() + ": ";
                dump_into(it.value(), out, level + 1);
                first = false;
            }
            out += "\n" + close_pad + '}';
            return;
        }
        default:
            out += j.dump();
    }
}

double parse_real(std::string_view token) {
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        parse_error("not a real number: '" + std::string(token) + "'");
    }
    return value;
}

BasisFile parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.push_back(parse_real(std::string_view(line).substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) parse_error("ragged CSV rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) parse_error("empty CSV");
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    BasisFile file;
    try {
        file.columns = Mat(rows.size(), rows.front().size(), std::move(flat));
    } catch (const Error& e) {
        parse_error(e.what());
    }
    return file;
}

std::size_t get_count(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
        parse_error(std::string("missing or non-integer field '") + key + "'");
    }
    return j.at(key).get<std::size_t>();
}

Vec get_reals(const Json& j, std::size_t expected, const std::string& what) {
    if (!j.is_array() || j.size() != expected) {
        parse_error(what + " must be an array of " + std::to_string(expected) + " reals");
    }
    Vec out;
    out.reserve(expected);
    for (const auto& x : j) {
        if (!x.is_number()) parse_error(what + " holds a non-numeric entry");
        out.push_back(x.get<double>());
    }
    return out;
}

BasisFile parse_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        parse_error(e.what());
    }
    if (!j.is_object()) parse_error("top level must be an object");
    const std::size_t n = get_count(j, "n");
    const std::size_t s = get_count(j, "s");
    if (n == 0 || s == 0) parse_error("n and s must be positive");
    if (!j.contains("columns") || !j.at("columns").is_array() || j.at("columns").size() != s) {
        parse_error("'columns' must hold s entries");
    }
    std::vector<Vec> cols;
    for (std::size_t k = 0; k < s; ++k) {
        cols.push_back(get_reals(j.at("columns")[k], n, "column " + std::to_string(k)));
    }
    BasisFile file;
    try {
        file.columns = Mat::from_columns(cols);
    } catch (const Error& e) {
        parse_error(e.what());
    }
    if (j.contains("partition") && !j.at("partition").is_null()) {
        file.partition = partition_from_json(j.at("partition"), n, s);
    }
    if (j.contains("meta")) {
        if (!j.at("meta").is_array()) parse_error("'meta' must be an array of strings");
        for (const auto& m : j.at("meta")) {
            if (!m.is_string()) parse_error("'meta' must be an array of strings");
            file.meta.push_back(m.get<std::string>());
        }
    }
    return file;
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_json(const Json& j) {
    std::string out;
    dump_into(j, out, 0);
    out += '\n';
    return out;
}

Json to_json(const Vec& v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

Json to_json(const Partition& part) {
    Json blocks = Json::array();
    for (const PartitionBlock& b : part.blocks) {
        Vec c = b.critical_vector.empty() ? Vec(part.n, 0.0) : b.critical_vector;
        blocks.push_back({{"m", b.m}, {"column_indices", b.column_indices}, {"critical_vector", to_json(c)}});
    }
    return {{"blocks", blocks}};
}

Partition partition_from_json(const Json& j, std::size_t n, std::size_t s) {
    if (!j.is_object() || !j.contains("blocks") || !j.at("blocks").is_array()) {
        parse_error("'partition' must be an object with a 'blocks' array");
    }
    Partition part{n, s, {}};
    for (const auto& b : j.at("blocks")) {
        if (!b.is_object()) parse_error("partition block must be an object");
        PartitionBlock block;
        block.m = get_count(b, "m");
        if (!b.contains("column_indices") || !b.at("column_indices").is_array()) {
            parse_error("partition block needs 'column_indices'");
        }
        for (const auto& idx : b.at("column_indices")) {
            if (!idx.is_number_unsigned()) parse_error("column indices must be non-negative integers");
            block.column_indices.push_back(idx.get<std::size_t>());
        }
        block.critical_vector = b.contains("critical_vector")
                                    ? get_reals(b.at("critical_vector"), n, "critical_vector")
                                    : Vec(n, 0.0);
        part.blocks.push_back(std::move(block));
    }
    check_partition_shape(part);
    return part;
}

std::string to_json_text(const BasisFile& file) {
    Json j;
    j["n"] = file.n();
    j["s"] = file.s();
    Json cols = Json::array();
    for (std::size_t k = 0; k < file.s(); ++k) cols.push_back(to_json(file.columns.col(k)));
    j["columns"] = cols;
    if (file.partition) j["partition"] = to_json(*file.partition);
    if (!file.meta.empty()) j["meta"] = file.meta;
    return dump_json(j);
}

std::string to_csv_text(const Mat& columns) {
    std::string out;
    for (std::size_t i = 0; i < columns.rows(); ++i) {
        for (std::size_t k = 0; k < columns.cols(); ++k) {
            if (k > 0) out += ',';
            out += format_real(columns(i, k));
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const BasisFile& file, Format format) {
    return format == Format::Json ? to_json_text(file) : to_csv_text(file.columns);
}

BasisFile parse_basis_file(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) parse_error("empty input");
    return text[first] == '{' ? parse_json(text) : parse_csv(text);
}

BasisFile read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_basis_file(buf.str());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) parse_error("cannot write '" + path + "'");
    out << text;
}

}  // namespace posbasis::io
