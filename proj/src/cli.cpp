#include "crystalbench/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crystalbench/crystal.hpp"
#include "crystalbench/errors.hpp"
#include "crystalbench/evaluator.hpp"
#include "crystalbench/family.hpp"
#include "crystalbench/report.hpp"
#include "crystalbench/verify.hpp"

namespace crystalbench::cli {

namespace {

struct RunConfig {
    int dimension = 2;
    std::string scales;
    std::string set;
    std::string m_range;
    std::optional<std::uint64_t> budget;
    std::string convention = "closed";
    unsigned threads = 0;
    std::string out_path;
    std::string csv_path;
    std::string series_path;
    std::string dump_path;
    std::string kind = "theorem";
    std::optional<int> max_exponent;
    std::string family_path;
    std::vector<std::string> shapes;
    bool dilation_closed = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_budget(const RunConfig& config) {
    std::uint64_t budget = GridSpec::kDefaultBudget;
    if (const char* env = std::getenv(kBudgetEnv); env && *env) {
        try {
            std::size_t used = 0;
            budget = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw UsageError(std::string(kBudgetEnv) + " must be a positive integer");
        }
    }
    if (config.budget) budget = *config.budget;
    if (budget == 0 || budget > GridSpec::kHardCap)
        throw UsageError("cell budget must be in [1, 2^36]");
    return budget;
}

Comparison resolve_comparison(const RunConfig& config) {
    return config.convention == "strict" ? Comparison::Exceeds : Comparison::AtLeast;
}

std::pair<std::size_t, std::size_t> parse_m_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const auto m = std::stoul(text);
            return {m, m};
        }
        return {std::stoul(text.substr(0, dots)), std::stoul(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw UsageError("malformed m range '" + text + "' (expected M or A..B)");
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << content;
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::string describe_cells(const DyadicSet1D& set) {
    std::string out;
    std::size_t i = 0;
    while (i < set.cell_count()) {
        if (!set.test(i)) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < set.cell_count() && set.test(end)) ++end;
        const DyadicRational lo(BigInt(i), set.resolution());
        const DyadicRational hi(BigInt(end), set.resolution());
        out += (out.empty() ? "" : " U ") + ("[" + lo.to_decimal() + "," + hi.to_decimal() + "]");
        i = end;
    }
    return out;
}

int cmd_crystal(const RunConfig& config, std::ostream& out) {
    const ScaleSet scales = ScaleSet::parse(config.scales);
    const Crystal1D crystal = build_crystal(scales);
    const DyadicSet1D& set = crystal.set();
    const DyadicRational measure = set.measure();
    if (measure != crystal.measure()) throw ConstructionError("rasterized measure disagrees with 2^(a_m-(m-1))");

    out << "scales: " << scales.to_string() << "\n";
    out << "grid: resolution 2^" << set.resolution() << ", extent [0, 2^" << set.extent() << "], "
        << set.cell_count() << " cells\n";
    if (set.cell_count() <= 256) {
        out << "cells: ";
        for (std::size_t i = 0; i < set.cell_count(); ++i) out << (set.test(i) ? '1' : '0');
        out << "\n";
        out << "set: " << describe_cells(set) << "\n";
    }
    out << "measure: " << measure.to_decimal() << " (mantissa " << measure.mantissa().str() << ", exponent "
        << measure.exponent() << ")\n";
    out << "primitive interval: I_" << primitive_rectangle(CrystalND({crystal}))[0] << "\n";

    if (!config.dump_path.empty()) {
        const CellMask mask = rasterize(CrystalND({crystal}), GridSpec({scales.min()}, {scales.max()}, GridSpec::kHardCap));
        std::ostringstream bytes;
        write_field(bytes, mask);
        write_file(config.dump_path, bytes.str());
    }
    return kPass;
}

void print_report(const VerificationReport& report, std::ostream& out) {
    out << report.kind << " n=" << report.dimension << " m=" << report.m;
    if (report.progression) {
        out << " progression=";
        for (std::size_t k = 0; k < report.progression->length(); ++k)
            out << (k ? "," : "") << (*report.progression)[k];
    }
    out << "\n|E| = " << report.measure_e.to_decimal() << "\n";
    for (const LevelResult& level : report.levels)
        out << "S(2^" << level.threshold_exponent << ") = " << level.superlevel.to_decimal()
            << "  ratio = " << level.ratio.to_decimal() << " (" << level.ratio.to_string() << ")\n";
    if (report.disjointness)
        out << "min delta = " << report.disjointness->min_delta.to_string()
            << "  rho = " << report.disjointness->rho.to_decimal() << "\n";
    for (const Check& check : report.checks)
        out << (check.pass ? "  [pass] " : "  [FAIL] ") << check.name << ": " << check.detail << "\n";
    out << "threshold convention: " << to_string(report.comparison)
        << "; cell-aligned evaluation (certified lower bounds)\n";
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    VerifyOptions options{resolve_budget(config), resolve_comparison(config), config.threads};
    const std::vector<int> set = parse_int_list(config.set);
    const auto [m, m_last] = parse_m_range(config.m_range);
    if (m != m_last) throw UsageError("verify takes a single m; use sweep for ranges");
    const VerificationReport report = verify_theorem(config.dimension, set, m, options);
    print_report(report, out);
    if (!config.out_path.empty()) write_file(config.out_path, report_to_json(report).dump(2) + "\n");
    if (!config.csv_path.empty()) write_file(config.csv_path, csv_header() + csv_row(report));
    return report.passed() ? kPass : kCheckFailed;
}

int cmd_cube(const RunConfig& config, std::ostream& out) {
    CubeOptions options{{resolve_budget(config), resolve_comparison(config), config.threads}, config.max_exponent};
    const auto [m, m_last] = parse_m_range(config.m_range);
    if (m != m_last) throw UsageError("cube takes a single m; use sweep --kind cube for ranges");
    const VerificationReport report = cube_counterexample(config.dimension, m, options);
    print_report(report, out);
    if (!config.out_path.empty()) write_file(config.out_path, report_to_json(report).dump(2) + "\n");
    return report.passed() ? kPass : kCheckFailed;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const VerifyOptions options{resolve_budget(config), resolve_comparison(config), config.threads};
    const auto [m_first, m_last] = parse_m_range(config.m_range);
    if (m_first > m_last) throw UsageError("empty m range");
    if (config.kind != "theorem" && config.kind != "cube") throw UsageError("--kind must be theorem or cube");
    const std::optional<std::vector<int>> fixed_set =
        config.set.empty() ? std::nullopt : std::optional(parse_int_list(config.set));

    std::string csv = csv_header();
    std::string series = "# m ratio\n";
    int worst = kPass;
    for (std::size_t m = m_first; m <= m_last; ++m) {
        const auto started = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                .count();
        };
        try {
            VerificationReport report;
            if (config.kind == "cube") {
                report = cube_counterexample(config.dimension, m, CubeOptions{options, config.max_exponent});
            } else {
                std::vector<int> set;
                if (fixed_set) {
                    set = *fixed_set;
                } else {
                    for (int a = 0; a < static_cast<int>(m); ++a) set.push_back(a);
                }
                report = verify_theorem(config.dimension, set, m, options);
            }
            csv += csv_row(report);
            series += std::to_string(m) + " " + report.levels.at(0).ratio.to_decimal() + "\n";
            if (!report.passed()) worst = std::max(worst, int{kCheckFailed});
        } catch (const HypothesisError& e) {
            err << "m=" << m << ": " << e.what() << "\n";
            csv += csv_failure_row(config.dimension, m, elapsed(), "no_progression");
            worst = std::max(worst, int{kHypothesisUnsatisfiable});
        } catch (const ResourceError& e) {
            err << "m=" << m << ": " << e.what() << "\n";
            csv += csv_failure_row(config.dimension, m, elapsed(), "budget_exceeded");
            worst = std::max(worst, int{kBudgetExceeded});
        }
    }
    if (config.out_path.empty()) {
        out << csv;
    } else {
        write_file(config.out_path, csv);
    }
    if (!config.series_path.empty()) write_file(config.series_path, series);
    return worst;
}

int cmd_family(const RunConfig& config, std::ostream& out) {
    FamilySpec spec;
    if (!config.family_path.empty()) {
        std::ifstream file(config.family_path);
        if (!file) throw UsageError("cannot read family spec '" + config.family_path + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(file);
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(std::string("family spec is not valid JSON: ") + e.what());
        }
        spec = j.get<FamilySpec>();
    } else {
        if (config.set.empty()) throw UsageError("family needs --spec or --set");
        spec = FamilySpec::power(config.dimension, parse_int_list(config.set), config.dilation_closed);
    }
    out << "family: " << nlohmann::json(spec).dump() << "\n";
    if (config.shapes.empty()) {
        const auto shapes = generate_shapes(spec);
        out << shapes.size() << " generator shapes\n";
        for (const Shape& s : shapes) out << s.to_string() << "\n";
        return kPass;
    }
    bool all = true;
    for (const std::string& text : config.shapes) {
        const Shape shape = Shape::parse(text);
        const Membership membership = is_member(shape, spec);
        out << shape.to_string() << ": " << (membership.member ? "member" : "not a member");
        if (membership.member && membership.dilation) out << " (dilation t=" << *membership.dilation << ")";
        out << "\n";
        all = all && membership.member;
    }
    return all ? kPass : kCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"crystalbench: exact crystal sets, dyadic rectangle families and maximal-operator certificates"};
    app.require_subcommand(1);
    RunConfig config;

    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget", config.budget, "Cell budget (default 2^30; env " + std::string(kBudgetEnv) + ")");
        sub->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
        sub->add_option("--convention", config.convention, "Threshold comparison: closed (>=) or strict (>)")
            ->check(CLI::IsMember({"closed", "strict"}));
    };

    CLI::App* crystal = app.add_subcommand("crystal", "Build a one-dimensional crystal C(A)");
    crystal->add_option("--scales", config.scales, "Strictly increasing scales, e.g. 0,2,3")->required();
    crystal->add_option("--dump", config.dump_path, "Write the rasterized set as a binary field dump");

    CLI::App* verify = app.add_subcommand("verify", "Certify the lower-bound construction for B_{A^{n-1}}");
    verify->add_option("--n", config.dimension, "Dimension n >= 2")->required();
    verify->add_option("--set", config.set, "Finite integer set A, e.g. 0,1,2,3")->required();
    verify->add_option("--m", config.m_range, "Progression length m")->required();
    verify->add_option("--out", config.out_path, "JSON report path");
    verify->add_option("--csv", config.csv_path, "CSV report path");
    add_budget(verify);

    CLI::App* sweep = app.add_subcommand("sweep", "Run verify (or cube) over a range of m and emit CSV");
    sweep->add_option("--n", config.dimension, "Dimension")->required();
    sweep->add_option("--m", config.m_range, "Range A..B")->required();
    sweep->add_option("--set", config.set, "Fixed set A (default {0,...,m-1} per row)");
    sweep->add_option("--kind", config.kind, "theorem or cube")->check(CLI::IsMember({"theorem", "cube"}));
    sweep->add_option("--max-exponent", config.max_exponent, "Cube runs: largest side exponent");
    sweep->add_option("--out", config.out_path, "CSV path (stdout when omitted)");
    sweep->add_option("--series", config.series_path, "x/y series file 'm ratio' for plotting");
    add_budget(sweep);

    CLI::App* cube = app.add_subcommand("cube", "Strong maximal superlevel set of a unit cube");
    cube->add_option("--n", config.dimension, "Dimension")->required();
    cube->add_option("--m", config.m_range, "Level exponent m (threshold 2^-m)")->required();
    cube->add_option("--max-exponent", config.max_exponent, "Largest side exponent (default m)");
    cube->add_option("--out", config.out_path, "JSON report path");
    add_budget(cube);

    CLI::App* family = app.add_subcommand("family", "List generator shapes or test membership");
    family->add_option("--spec", config.family_path, "FamilySpec JSON {n, axis_sets, dilation_closed}");
    family->add_option("--n", config.dimension, "Dimension (with --set)");
    family->add_option("--set", config.set, "Axis set A for B_{A^{n-1}}");
    family->add_flag("--dilation", config.dilation_closed, "Close under dyadic central dilations");
    family->add_option("--shape", config.shapes, "Shape to test, e.g. 1,1,-2 (repeatable)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (crystal->parsed()) return cmd_crystal(config, out);
        if (verify->parsed()) return cmd_verify(config, out);
        if (sweep->parsed()) return cmd_sweep(config, out, err);
        if (cube->parsed()) return cmd_cube(config, out);
        if (family->parsed()) return cmd_family(config, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const HypothesisError& e) {
        err << "hypothesis unsatisfiable: " << e.what() << "\n";
        return kHypothesisUnsatisfiable;
    } catch (const ResourceError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudgetExceeded;
    } catch (const ConstructionError& e) {
        err << "construction failed: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternalError;
    }
    return kUsage;
}

} // namespace crystalbench::cli
