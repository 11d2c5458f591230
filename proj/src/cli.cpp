#include "hpez/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "hpez/codec.hpp"
#include "hpez/error.hpp"
#include "hpez/metrics.hpp"

namespace hpez::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, ElementKind> kKinds{
    {"f32", ElementKind::Float32}, {"f64", ElementKind::Float64}, {"i32", ElementKind::Int32}, {"i64", ElementKind::Int64}};
const std::map<std::string, BoundMode> kModes{{"REL", BoundMode::ValueRangeRelative}, {"ABS", BoundMode::Absolute}};
const std::map<std::string, TargetKind> kTargets{{"ratio", TargetKind::Ratio}, {"psnr", TargetKind::Psnr}};
const std::map<std::string, KernelSet> kKernelSets{
    {"all", KernelSet::All}, {"linear", KernelSet::Linear}, {"cubic", KernelSet::Cubic}};
const std::map<std::string, LosslessBackend> kBackends{{"store", LosslessBackend::Store}, {"zlib", LosslessBackend::Deflate}};
const std::map<std::string, PredictorPreference> kPredictors{
    {"auto", PredictorPreference::Auto}, {"interp", PredictorPreference::Interp}, {"lorenzo", PredictorPreference::Lorenzo}};

// Keys accepted in a --config file: scalar knobs and feature toggles.
const std::vector<std::string> kConfigKeys{
    "type", "mode", "target", "lambda", "sample-rate", "block-size", "anchor-stride", "radius", "lorenzo-coef",
    "lossless-backend", "kernel-set", "predictor", "no-fvfi", "no-natural-spline", "no-mdinterp", "no-same-level",
    "no-freeze", "no-lorenzo", "no-blockwise", "no-eb-tuning"};

std::vector<std::uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

// Turns key=value lines into flags placed before the command-line flags, so
// the command line wins.
std::vector<std::string> config_args(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
            throw UsageError("unknown config key: " + key);
        }
        if (key.rfind("no-", 0) == 0) {
            if (value == "true" || value == "1" || value == "yes") {
                out.push_back("--" + key);
            } else if (value != "false" && value != "0" && value != "no") {
                throw UsageError("config key " + key + " expects true or false");
            }
        } else {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    return out;
}

struct GridArgs {
    std::string input;
    std::vector<std::size_t> dims;
    std::string type = "f32";
};

struct TuneArgs {
    std::string mode = "REL";
    std::string target = "ratio";
    double lambda = 6.02;
    double sample_rate = 0.002;
    std::size_t block_size = kDefaultBlockSize;
    std::size_t anchor_stride = kDefaultAnchorStride;
    std::uint32_t radius = kDefaultRadius;
    double lorenzo_coef = 1.2;
    std::string backend = "zlib";
    std::string kernel_set = "all";
    std::string predictor = "auto";
    bool no_fvfi = false, no_natural = false, no_md = false, no_same_level = false, no_freeze = false,
         no_lorenzo = false, no_blockwise = false, no_eb = false, verbatim = false;
    std::string config;
};

void add_grid_flags(CLI::App *app, GridArgs &g) {
    app->add_option("-i,--input", g.input, "raw little-endian input")->required();
    app->add_option("-d,--dims", g.dims, "extents, slowest first")->required()->expected(1, 4);
    app->add_option("-t,--type", g.type, "f32|f64|i32|i64")->check(CLI::IsMember({"f32", "f64", "i32", "i64"}));
}

void add_tune_flags(CLI::App *app, TuneArgs &t) {
    app->add_option("-M,--mode", t.mode, "REL|ABS")->check(CLI::IsMember({"REL", "ABS"}));
    app->add_option("--target", t.target, "ratio|psnr")->check(CLI::IsMember({"ratio", "psnr"}));
    app->add_option("--lambda", t.lambda, "dB per bit for the psnr target")->check(CLI::NonNegativeNumber);
    app->add_option("--sample-rate", t.sample_rate)->check(CLI::Range(1e-9, 1.0));
    app->add_option("--block-size", t.block_size)->check(CLI::Range(std::size_t{4}, std::size_t{1} << 20));
    app->add_option("--anchor-stride", t.anchor_stride)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    app->add_option("--radius", t.radius)->check(CLI::Range(std::uint32_t{1}, std::uint32_t{1} << 30));
    app->add_option("--lorenzo-coef", t.lorenzo_coef)->check(CLI::PositiveNumber);
    app->add_option("--lossless-backend", t.backend, "store|zlib")->check(CLI::IsMember({"store", "zlib"}));
    app->add_option("--kernel-set", t.kernel_set, "all|linear|cubic")->check(CLI::IsMember({"all", "linear", "cubic"}));
    app->add_option("--predictor", t.predictor, "auto|interp|lorenzo")
        ->check(CLI::IsMember({"auto", "interp", "lorenzo"}));
    app->add_flag("--no-fvfi", t.no_fvfi);
    app->add_flag("--no-natural-spline", t.no_natural);
    app->add_flag("--no-mdinterp", t.no_md);
    app->add_flag("--no-same-level", t.no_same_level);
    app->add_flag("--no-freeze", t.no_freeze);
    app->add_flag("--no-lorenzo", t.no_lorenzo);
    app->add_flag("--no-blockwise", t.no_blockwise);
    app->add_flag("--no-eb-tuning", t.no_eb);
    app->add_flag("--lossless", t.verbatim, "store every value verbatim");
    app->add_option("--config", t.config, "key=value file of defaults");
}

ScalarGrid load_grid(const GridArgs &g) {
    return load_raw(read_file(g.input), g.dims, kKinds.at(g.type));
}

CompressOptions make_options(const TuneArgs &t, double epsilon) {
    if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
    if (!is_power_of_two(t.anchor_stride)) throw UsageError("--anchor-stride must be a power of two");
    CompressOptions o;
    o.bound = {kModes.at(t.mode), epsilon};
    o.backend = kBackends.at(t.backend);
    o.verbatim = t.verbatim;
    TunerOptions &u = o.tuning;
    u.target = {kTargets.at(t.target), t.lambda};
    u.sample_rate = t.sample_rate;
    u.block_size = t.block_size;
    u.anchor_stride = t.anchor_stride;
    u.radius = t.radius;
    u.lorenzo_coef = t.lorenzo_coef;
    u.kernels = kKernelSets.at(t.kernel_set);
    u.predictor = kPredictors.at(t.predictor);
    u.natural_spline = !t.no_natural;
    u.multi_dim = !t.no_md;
    u.same_level = !t.no_same_level;
    u.freeze = !t.no_freeze;
    u.lorenzo = !t.no_lorenzo;
    u.blockwise = !t.no_blockwise;
    u.eb_tuning = !t.no_eb;
    u.traversal = t.no_fvfi ? Traversal::DimMajor : Traversal::FastVaryingFirst;
    return o;
}

void print_report(std::ostream &out, const QualityReport &r) {
    out << std::setprecision(10);
    out << "compression_ratio=" << r.compression_ratio << '\n';
    out << "bit_rate=" << r.bit_rate << '\n';
    out << "psnr=";
    if (r.psnr) {
        out << *r.psnr;
    } else {
        out << "undefined";
    }
    out << '\n';
    if (r.ssim) out << "ssim=" << *r.ssim << '\n';
    out << "max_abs_error=" << r.max_abs_error << '\n';
    out << "max_rel_error=" << r.max_rel_error << '\n';
}

// Inserts config-file flags right after the subcommand name.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string path;
        std::size_t span = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            span = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            span = 1;
        } else {
            continue;
        }
        auto extra = config_args(path);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + span));
        args.insert(args.begin() + std::min<std::ptrdiff_t>(2, static_cast<std::ptrdiff_t>(args.size())), extra.begin(), extra.end());
        break;
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"HPEZ error-bounded lossy compressor", "hpez"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    GridArgs cg;
    TuneArgs ct;
    std::string c_out;
    double c_eps = 0.0;
    auto *comp = app.add_subcommand("compress", "compress a raw grid into an archive");
    add_grid_flags(comp, cg);
    add_tune_flags(comp, ct);
    comp->add_option("-o,--output", c_out)->required();
    comp->add_option("-e,--epsilon", c_eps, "error bound")->required();

    std::string d_in, d_out;
    bool d_no_fvfi = false;
    auto *dec = app.add_subcommand("decompress", "restore a raw grid from an archive");
    dec->add_option("-i,--input", d_in)->required();
    dec->add_option("-o,--output", d_out)->required();
    dec->add_flag("--no-fvfi", d_no_fvfi);

    GridArgs eg;
    std::string e_archive, e_decompressed;
    auto *eval = app.add_subcommand("evaluate", "quality report of an archive against the original");
    add_grid_flags(eval, eg);
    eval->add_option("-a,--archive", e_archive)->required();
    eval->add_option("-z,--decompressed", e_decompressed, "raw decompressed grid (default: decompress the archive)");

    GridArgs sg;
    TuneArgs st;
    std::vector<double> s_eps;
    std::string s_out;
    auto *swp = app.add_subcommand("sweep", "rate-distortion sweep over error bounds, CSV output");
    add_grid_flags(swp, sg);
    add_tune_flags(swp, st);
    swp->add_option("-e,--epsilon", s_eps)->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swp->add_option("-o,--output", s_out, "CSV file (default: stdout)");

    double t_orig = -1, t_arch = -1, t_comp = 0, t_decomp = 0, t_io = 0, t_link = 0;
    std::string t_orig_file, t_arch_file;
    auto *tr = app.add_subcommand("transfer-est", "estimated transfer time with and without compression");
    tr->add_option("--original-bytes", t_orig);
    tr->add_option("--archive-bytes", t_arch);
    tr->add_option("--original-file", t_orig_file);
    tr->add_option("--archive-file", t_arch_file);
    tr->add_option("--comp-seconds", t_comp);
    tr->add_option("--decomp-seconds", t_decomp);
    tr->add_option("--io-seconds", t_io);
    tr->add_option("--link-speed", t_link, "bytes per second")->required();

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
    } catch (const UsageError &e) {
        err << "hpez: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        err << "hpez: " << e.what() << '\n';
        return kExitFailure;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "hpez: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*comp) {
            const auto grid = load_grid(cg);
            const auto opts = make_options(ct, c_eps);
            const auto res = compress(grid, opts);
            write_file(c_out, res.archive);
            out << "compressed " << grid.size() * element_size(grid.kind()) << " bytes to " << res.archive.size()
                << " bytes\n";
        } else if (*dec) {
            const auto grid = decompress(read_file(d_in), d_no_fvfi ? Traversal::DimMajor : Traversal::FastVaryingFirst);
            write_file(d_out, to_raw(grid));
        } else if (*eval) {
            const auto orig = load_grid(eg);
            const auto archive = read_file(e_archive);
            const auto decompressed =
                e_decompressed.empty() ? decompress(archive) : load_raw(read_file(e_decompressed), eg.dims, orig.kind());
            print_report(out, evaluate(orig, archive, decompressed));
        } else if (*swp) {
            const auto grid = load_grid(sg);
            for (double e : s_eps) {
                if (!(e > 0.0)) throw UsageError("epsilon must be positive");
            }
            const auto rows = sweep(grid, s_eps, make_options(st, s_eps.front()));
            if (s_out.empty()) {
                write_sweep_csv(out, rows);
            } else {
                std::ofstream f(s_out);
                if (!f) throw Error(ErrorCode::IoError, "cannot open " + s_out + " for writing");
                write_sweep_csv(f, rows);
            }
        } else if (*tr) {
            if (!t_orig_file.empty()) t_orig = static_cast<double>(read_file(t_orig_file).size());
            if (!t_arch_file.empty()) t_arch = static_cast<double>(read_file(t_arch_file).size());
            if (t_orig < 0 || t_arch < 0) throw UsageError("original and archive sizes are required");
            if (!(t_link > 0.0)) throw UsageError("--link-speed must be positive");
            const auto est = estimate_transfer(t_orig, t_arch, t_comp, t_decomp, t_io, t_link);
            out << std::setprecision(10) << "total_seconds=" << est.total_seconds << '\n'
                << "baseline_seconds=" << est.baseline_seconds << '\n';
        }
    } catch (const UsageError &e) {
        err << "hpez: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        err << "hpez: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

int run(int argc, const char *const *argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace hpez::cli
