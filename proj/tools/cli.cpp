#include "cli.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "basis_file.hpp"
#include "posbasis/construct.hpp"
#include "posbasis/cosine.hpp"
#include "posbasis/error.hpp"
#include "posbasis/spanning.hpp"

namespace posbasis::cli {
namespace {

using io::Json;

struct Options {
    std::size_t n = 0;
    std::size_t s = 0;
    std::size_t max_n = 8;
    std::string input;
    std::string output;
    std::string format = "json";
    std::string method = "full";
    std::uint64_t samples = 1000000;
    std::optional<std::uint64_t> seed;
    std::vector<double> align;
    std::vector<std::string> blocks;
    std::vector<std::string> criticals;
    bool no_normalize = false;
    bool force = false;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SizeOutOfRange: return kExitSize;
        case ErrorCode::NotPositiveBasis:
        case ErrorCode::NotUnit: return kExitNotPositiveBasis;
        case ErrorCode::InvalidPartition: return kExitInvalidPartition;
        case ErrorCode::InvalidBlock:
        case ErrorCode::CriticalVectorRejected:
        case ErrorCode::CompositionNotPositiveBasis:
        case ErrorCode::NotMinimalPositiveBasis: return kExitComposition;
        default: return kExitParse;
    }
}

io::Format parse_format(const std::string& f) { return f == "csv" ? io::Format::Csv : io::Format::Json; }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        io::write_text(path, text);
    }
}

Vec parse_vector(const std::string& text) {
    Vec out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (token.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "bad vector component '" + token + "'");
        }
    }
    return out;
}

Json index_lists(const std::vector<IndexList>& lists) {
    Json arr = Json::array();
    for (const IndexList& l : lists) arr.push_back(l);
    return arr;
}

Json certificate_json(const SpanCertificate& cert, const Mat& s) {
    Json j;
    if (cert.kind == CertificateKind::PositiveCoefficients) {
        j["kind"] = "PositiveCoefficients";
        j["alpha"] = io::to_json(cert.alpha);
    } else {
        j["kind"] = "SeparatingVector";
        j["witness"] = io::to_json(cert.witness);
    }
    j["verified"] = cert.verify(s);
    return j;
}

std::string size_class(std::size_t n, std::size_t s) {
    if (s == n + 1) return "minimal";
    if (s == 2 * n) return "maximal";
    if (s > n + 1 && s < 2 * n) return "intermediate";
    return "invalid";
}

int cmd_generate(const Options& opt, std::ostream& out) {
    PositiveBasis pb = optimal_intermediate(opt.n, opt.s);
    io::BasisFile file{pb.columns, pb.partition, {}};
    if (!opt.align.empty()) {
        if (opt.align.size() != opt.n) throw Error(ErrorCode::Parse, "--align needs n components");
        try {
            file.columns = realign(file.columns, opt.align);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, std::string("--align: ") + e.what());
        }
        file.meta.push_back("realigned so that column 0 equals the --align vector");
    }
    std::string dims;
    for (std::size_t m : pb.partition.dims()) dims += (dims.empty() ? "" : ",") + std::to_string(m);
    file.meta.push_back("optimal block-diagonal positive basis, block dims " + dims);
    emit(io::to_text(file, parse_format(opt.format)), opt.output, out);
    return kExitOk;
}

Json sampled_report(const Mat& d, const Options& opt) {
    if (!opt.seed) throw Error(ErrorCode::Parse, "sampling requires an explicit --seed");
    Json j;
    j["method"] = "sampled";
    j["n"] = d.rows();
    j["s"] = d.cols();
    j["value"] = cosine_measure_sampled(d, opt.samples, *opt.seed);
    j["samples"] = opt.samples;
    j["seed"] = *opt.seed;
    return j;
}

int cmd_cm(const Options& opt, std::ostream& out) {
    const io::BasisFile file = io::read_basis_file(opt.input);
    const Mat& d = file.columns;
    Json report;
    if (opt.method == "sampled") {
        report = sampled_report(d, opt);
    } else {
        CmResult res;
        try {
            if (opt.method == "structured") {
                if (!file.partition) throw Error(ErrorCode::InvalidPartition, "input has no partition metadata");
                res = cosine_measure_structured(d, *file.partition);
            } else {
                res = cosine_measure_full(d);
            }
        } catch (const Error& e) {
            const bool not_basis = e.code() == ErrorCode::NotPositiveBasis || e.code() == ErrorCode::NotUnit;
            if (!opt.force || !not_basis) throw;
            report = sampled_report(d, opt);
            report["forced"] = true;
            report["reason"] = e.what();
            out << io::dump_json(report);
            return kExitOk;
        }
        report["method"] = opt.method;
        report["n"] = d.rows();
        report["s"] = d.cols();
        report["value"] = res.value;
        Json vectors = Json::array();
        for (const Vec& u : res.cosine_vectors) vectors.push_back(io::to_json(u));
        report["cosine_vectors"] = vectors;
        report["active_sets"] = index_lists(res.active_sets);
        report["argmin_bases"] = index_lists(res.argmin_bases);
        report["bases_evaluated"] = res.bases_evaluated;
    }
    out << io::dump_json(report);
    return kExitOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
    const io::BasisFile file = io::read_basis_file(opt.input);
    const std::size_t n = file.n();
    const std::size_t s = file.s();
    const bool unit = has_unit_columns(file.columns);
    const Mat work = unit ? file.columns : normalize_columns(file.columns);

    const SpanResult span = is_positive_spanning(work);
    const bool independent = is_positively_independent(work);
    const bool basis = span.positive_spanning && independent;

    std::string omega = "absent";
    Json detected_dims;
    if (file.partition && is_omega_plus_partition(work, *file.partition)) {
        omega = "present";
    } else if (basis) {
        try {
            detected_dims = detect_partition_orthogonal(work).dims();
            omega = "detected";
        } catch (const Error&) {
        }
    }

    Json report;
    report["n"] = n;
    report["s"] = s;
    report["unit_columns"] = unit;
    report["rank"] = rank(work);
    report["positive_spanning"] = span.positive_spanning;
    report["positively_independent"] = independent;
    report["positive_basis"] = basis;
    report["size_class"] = size_class(n, s);
    report["omega_plus_partition"] = omega;
    if (!detected_dims.is_null()) report["detected_dims"] = detected_dims;
    report["certificate"] = certificate_json(span.certificate, work);
    out << io::dump_json(report);
    return kExitOk;
}

int cmd_table(const Options& opt, std::ostream& out) {
    if (opt.max_n < 2) throw Error(ErrorCode::SizeOutOfRange, "--max-n must be at least 2");
    if (opt.format == "csv") {
        out << table_csv(opt.max_n);
        return kExitOk;
    }
    Json cells = Json::array();
    for (std::size_t n = 2; n <= opt.max_n; ++n)
        for (std::size_t s = n + 1; s <= 2 * n; ++s) {
            const auto dims = dims_for(n, s);
            Json cell;
            cell["n"] = n;
            cell["s"] = s;
            cell["blocks"] = block_label(dims);
            cell["dims"] = dims;
            cell["cm"] = cm_formula(n, s);
            cells.push_back(cell);
        }
    Json report;
    report["max_n"] = opt.max_n;
    report["cells"] = cells;
    out << io::dump_json(report);
    return kExitOk;
}

int cmd_compose(const Options& opt, std::ostream& out) {
    if (opt.criticals.size() + 1 > std::max<std::size_t>(opt.blocks.size(), 1)) {
        throw Error(ErrorCode::Parse, "at most one --critical per block after the first");
    }
    std::vector<ComposeBlock> blocks;
    for (std::size_t k = 0; k < opt.blocks.size(); ++k) {
        ComposeBlock b{io::read_basis_file(opt.blocks[k]).columns, {}};
        if (k >= 1 && k - 1 < opt.criticals.size()) b.critical_vector = parse_vector(opt.criticals[k - 1]);
        blocks.push_back(std::move(b));
    }
    PositiveBasis pb = compose_partition(blocks, ComposeOptions{!opt.no_normalize});
    io::BasisFile file{pb.columns, pb.partition, {"composed from " + std::to_string(blocks.size()) + " blocks"}};
    if (opt.no_normalize) {
        file.meta.push_back("non-conformant: shifted columns are not normalized to unit length");
    }
    emit(io::to_text(file, parse_format(opt.format)), opt.output, out);
    return kExitOk;
}

int cmd_normalize(const Options& opt, std::ostream& out) {
    io::BasisFile file = io::read_basis_file(opt.input);
    try {
        file.columns = normalize_columns(file.columns);
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    file.meta.push_back("columns normalized to unit length");
    emit(io::to_text(file, parse_format(opt.format)), opt.output, out);
    return kExitOk;
}

}  // namespace

std::string block_label(const std::vector<std::size_t>& dims) {
    std::map<std::size_t, std::size_t, std::greater<>> counts;
    for (std::size_t m : dims) ++counts[m];
    std::string out;
    for (const auto& [m, k] : counts) {
        if (!out.empty()) out += ',';
        const std::string name = "D" + std::to_string(m);
        out += k == 1 ? name : "(" + name + ")^" + std::to_string(k);
    }
    return out;
}

std::vector<std::vector<std::string>> table_grid(std::size_t max_n) {
    std::vector<std::vector<std::string>> grid;
    for (std::size_t s = 3; s <= 2 * max_n; ++s) {
        std::vector<std::string> row;
        for (std::size_t n = 2; n <= max_n; ++n) {
            row.push_back(s >= n + 1 && s <= 2 * n ? block_label(dims_for(n, s)) : "-");
        }
        grid.push_back(std::move(row));
    }
    return grid;
}

std::string table_csv(std::size_t max_n) {
    auto quote = [](const std::string& cell) {
        return cell.find(',') == std::string::npos ? cell : "\"" + cell + "\"";
    };
    std::string out = "s\\n";
    for (std::size_t n = 2; n <= max_n; ++n) out += "," + std::to_string(n);
    out += '\n';
    const auto grid = table_grid(max_n);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        out += std::to_string(r + 3);
        for (const std::string& cell : grid[r]) out += "," + quote(cell);
        out += '\n';
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positive bases: generation, verification and cosine measure", "posbasis"};
    app.require_subcommand(1);
    Options opt;

    auto* generate = app.add_subcommand("generate", "Write an optimal block-diagonal positive basis");
    generate->add_option("--n", opt.n, "Dimension")->required();
    generate->add_option("--s", opt.s, "Number of vectors, n+1 <= s <= 2n")->required();
    generate->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    generate->add_option("--output", opt.output, "Output path (default stdout)");
    generate->add_option("--align", opt.align, "Unit vector that becomes column 0, e.g. --align=1,0,0")
        ->delimiter(',');

    auto* cm = app.add_subcommand("cm", "Cosine measure of a positive basis");
    cm->add_option("--input", opt.input)->required();
    cm->add_option("--method", opt.method)->check(CLI::IsMember({"full", "structured", "sampled"}));
    cm->add_option("--samples", opt.samples)->check(CLI::PositiveNumber);
    cm->add_option("--seed", opt.seed);
    cm->add_flag("--force", opt.force, "Fall back to sampling when the input is not a positive basis");

    auto* verify = app.add_subcommand("verify", "Check positive spanning, independence and structure");
    verify->add_option("--input", opt.input)->required();

    auto* table = app.add_subcommand("table", "Optimal block structure for every (n, s)");
    table->add_option("--max-n", opt.max_n);
    table->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));

    auto* compose = app.add_subcommand("compose", "Compose minimal blocks with critical-vector shifts");
    compose->add_option("--block", opt.blocks, "Block file (repeat in partition order)")->required();
    compose->add_option("--critical", opt.criticals, "Shift for the next block after the first, e.g. --critical=-1,0,0");
    compose->add_flag("--no-normalize", opt.no_normalize, "Keep shifted columns at their raw length");
    compose->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    compose->add_option("--output", opt.output);

    auto* normalize = app.add_subcommand("normalize", "Rescale every column to unit length");
    normalize->add_option("--input", opt.input)->required();
    normalize->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    normalize->add_option("--output", opt.output);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitParse;
    }

    try {
        if (generate->parsed()) return cmd_generate(opt, out);
        if (cm->parsed()) return cmd_cm(opt, out);
        if (verify->parsed()) return cmd_verify(opt, out);
        if (table->parsed()) return cmd_table(opt, out);
        if (compose->parsed()) return cmd_compose(opt, out);
        if (normalize->parsed()) return cmd_normalize(opt, out);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitParse;
    }
    return kExitParse;
}

}  // namespace posbasis::cli
