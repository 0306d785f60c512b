#include "crystalbench/report.hpp"

#include <sstream>

namespace crystalbench {

namespace {

nlohmann::json exact(const DyadicRational& value) {
    return {{"mantissa", value.mantissa().str()}, {"exponent", value.exponent()}, {"decimal", value.to_decimal()}};
}

nlohmann::json exact(const ExactRatio& value) {
    return {{"fraction", value.to_string()}, {"decimal", value.to_decimal()}};
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    return out;
}

} // namespace

nlohmann::json report_to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["kind"] = report.kind;
    j["n"] = report.dimension;
    j["m"] = report.m;
    if (!report.set.empty()) j["set"] = report.set;
    if (report.progression) {
        const auto terms = report.progression->terms();
        j["progression"] = {{"terms", std::vector<std::int64_t>(terms.begin(), terms.end())},
                            {"step", report.progression->step()}};
    }
    j["threshold_convention"] = to_string(report.comparison);
    j["evaluation"] = "cell-aligned translates on the grid below; every superlevel measure is a certified lower bound";
    j["grid"] = {{"resolution", report.grid_resolution}, {"extent", report.grid_extent}};
    j["shape_count"] = report.shape_count;
    j["measure_E"] = exact(report.measure_e);
    if (report.kind == "theorem") {
        j["index_count"] = report.index_count;
        j["measure_Y_each"] = exact(report.measure_y_each);
    }
    if (report.disjointness) {
        const DisjointnessResult& d = *report.disjointness;
        nlohmann::json deltas = nlohmann::json::array();
        for (const ExactRatio& delta : d.deltas) deltas.push_back(delta.to_string());
        j["disjointness"] = {{"min_delta", exact(d.min_delta)},
                             {"deltas", deltas},
                             {"union_Y", exact(d.union_y)},
                             {"sum_Y", exact(d.sum_y)},
                             {"rho", exact(d.rho)},
                             {"anchored_union_method", d.used_grid ? "grid" : "inclusion-exclusion"}};
    }
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelResult& level : report.levels)
        levels.push_back({{"threshold_exponent", level.threshold_exponent},
                          {"superlevel", exact(level.superlevel)},
                          {"ratio", exact(level.ratio)}});
    j["levels"] = levels;
    j["ratio_definition"] = "S / (m^(n-1) 2^m |E|)";
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& check : report.checks)
        checks.push_back({{"name", check.name}, {"pass", check.pass}, {"detail", check.detail}});
    j["checks"] = checks;
    j["passed"] = report.passed();
    j["runtime_ms"] = report.runtime_ms;
    return j;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns{
        "n",         "m",           "measure_E_mantissa", "measure_E_exp", "superlevel_mantissa",
        "superlevel_exp", "ratio_decimal", "index_count",  "min_delta",     "runtime_ms",
        "status"};
    return columns;
}

std::string csv_header() {
    return join(csv_columns()) + "\n";
}

std::string csv_row(const VerificationReport& report) {
    const LevelResult& primary = report.levels.at(0);
    const std::vector<std::string> fields{
        std::to_string(report.dimension),
        std::to_string(report.m),
        report.measure_e.mantissa().str(),
        std::to_string(report.measure_e.exponent()),
        primary.superlevel.mantissa().str(),
        std::to_string(primary.superlevel.exponent()),
        primary.ratio.to_decimal(),
        std::to_string(report.kind == "theorem" ? report.index_count : report.shape_count),
        report.disjointness ? report.disjointness->min_delta.to_string() : std::string(),
        std::to_string(report.runtime_ms),
        report.passed() ? "pass" : "check_failed"};
    return join(fields) + "\n";
}

std::string csv_failure_row(int dimension, std::size_t m, std::int64_t runtime_ms, const std::string& status) {
    std::vector<std::string> fields(csv_columns().size());
    fields[0] = std::to_string(dimension);
    fields[1] = std::to_string(m);
    fields[9] = std::to_string(runtime_ms);
    fields[10] = status;
    return join(fields) + "\n";
}

std::string csv_without_column(const std::string& csv, const std::string& column) {
    std::istringstream in(csv);
    std::string line;
    std::string out;
    std::optional<std::size_t> drop;
    while (std::getline(in, line)) {
        std::vector<std::string> fields = split(line, ',');
        if (!drop) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (fields[i] == column) drop = i;
            if (!drop) return csv;
        }
        if (*drop < fields.size()) fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(*drop));
        out += join(fields) + "\n";
    }
    return out;
}

} // namespace crystalbench
