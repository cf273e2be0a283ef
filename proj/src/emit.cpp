#include "lelong/report.hpp"

#include "lelong/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace lelong::cli {

namespace {

double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

Json real_json(double x) {
    if (!std::isfinite(x)) return format_real(x);
    return round12(x);
}

Json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return real_json(v);
            else if constexpr (std::is_same_v<T, Rational>) return to_string(v);
            else if constexpr (std::is_same_v<T, Estimate>) return Json{{"value", real_json(v.value)}, {"error", real_json(v.error)}};
            else return Json(v);
        },
        c);
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return format_real(v);
            else if constexpr (std::is_same_v<T, Rational>) return to_string(v);
            else if constexpr (std::is_same_v<T, Estimate>) return format_real(v.value) + " +/- " + format_real(v.error);
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else return v.dump();
        },
        c);
}

// Splits an estimate into its two csv columns.
std::pair<std::string, std::string> cell_csv(const Cell& c) {
    if (const auto* e = std::get_if<Estimate>(&c)) return {format_real(e->value), format_real(e->error)};
    return {cell_text(c), ""};
}

Json task_json(const TaskRecord& t) {
    Json j;
    j["index"] = t.index;
    j["op"] = t.op;
    j["status"] = t.error ? "error" : "ok";
    j["inputs"] = t.inputs;
    if (t.error) j["error"] = *t.error;
    Json results = Json::object();
    for (const auto& [k, v] : t.results) results[k] = cell_json(v);
    j["results"] = std::move(results);
    Json tables = Json::array();
    for (const auto& tab : t.tables) {
        Json rows = Json::array();
        for (const auto& row : tab.rows) {
            Json r = Json::array();
            for (const auto& c : row) r.push_back(cell_json(c));
            rows.push_back(std::move(r));
        }
        tables.push_back({{"name", tab.name}, {"columns", tab.columns}, {"rows", std::move(rows)}});
    }
    j["tables"] = std::move(tables);
    j["config"] = t.config;
    if (t.check) j["check"] = {{"status", t.check->pass ? "PASS" : "FAIL"}, {"detail", t.check->detail}};
    return j;
}

void aligned(std::ostringstream& os, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s = " ";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += ' ';
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 1, ' ');
        }
        os << s << '\n';
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& r : rows) line(r);
}

void task_text(std::ostringstream& os, const TaskRecord& t) {
    os << "== task " << t.index << ": " << t.op << " [" << (t.error ? "error" : "ok") << "]\n";
    os << "inputs: " << t.inputs.dump() << '\n';
    if (!t.config.is_null()) os << "config: " << t.config.dump() << '\n';
    if (t.error) {
        os << "error: " << *t.error << "\n\n";
        return;
    }
    if (!t.results.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [k, v] : t.results) rows.push_back({k, cell_text(v)});
        aligned(os, {"field", "value"}, rows);
    }
    for (const auto& tab : t.tables) {
        os << "-- " << tab.name << '\n';
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : tab.rows) {
            std::vector<std::string> cells;
            for (const auto& c : r) cells.push_back(cell_text(c));
            rows.push_back(std::move(cells));
        }
        aligned(os, tab.columns, rows);
    }
    if (t.check) os << "check: " << (t.check->pass ? "PASS" : "FAIL") << " (" << t.check->detail << ")\n";
    os << '\n';
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

void csv_row(std::ostringstream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << '\n';
}

void task_csv(std::ostringstream& os, const TaskRecord& t) {
    os << "# task " << t.index << ' ' << t.op << ' ' << (t.error ? "error" : "ok") << '\n';
    csv_row(os, {"field", "value", "error"});
    csv_row(os, {"inputs", t.inputs.dump(), ""});
    if (!t.config.is_null()) csv_row(os, {"config", t.config.dump(), ""});
    if (t.error) csv_row(os, {"error", *t.error, ""});
    for (const auto& [k, v] : t.results) {
        const auto [a, b] = cell_csv(v);
        csv_row(os, {k, a, b});
    }
    if (t.check) csv_row(os, {"check", t.check->pass ? "PASS" : "FAIL", t.check->detail});
    for (const auto& tab : t.tables) {
        os << "# table " << tab.name << '\n';
        csv_row(os, tab.columns);
        for (const auto& r : tab.rows) {
            std::vector<std::string> cells;
            for (const auto& c : r) cells.push_back(cell_text(c));
            csv_row(os, cells);
        }
    }
    os << '\n';
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Format parse_format(std::string_view name) {
    if (name == "text") return Format::text;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw InputError("unsupported format '" + std::string(name) + "' (expected text, json or csv)");
}

int exit_code(const Report& report) {
    bool failed = false;
    for (const auto& t : report.tasks) {
        if (t.error) return 1;
        if (t.check && !t.check->pass) failed = true;
    }
    return failed ? 2 : 0;
}

int exit_code(const std::vector<std::pair<std::string, Report>>& reports) {
    int code = 0;
    for (const auto& [name, r] : reports) {
        const int c = exit_code(r);
        if (c == 1) return 1;
        code = std::max(code, c);
    }
    return code;
}

Json to_json(const Report& report) {
    Json tasks = Json::array();
    std::size_t errors = 0, failed = 0;
    for (const auto& t : report.tasks) {
        tasks.push_back(task_json(t));
        if (t.error) ++errors;
        if (t.check && !t.check->pass) ++failed;
    }
    Json j;
    j["problem"] = report.problem;
    j["config"] = report.run_config;
    j["tasks"] = std::move(tasks);
    j["summary"] = {{"tasks", report.tasks.size()},
                    {"errors", errors},
                    {"failed_checks", failed},
                    {"exit_code", exit_code(report)}};
    return j;
}

std::string emit(const Report& report, Format format) {
    std::ostringstream os;
    switch (format) {
        case Format::json:
            return to_json(report).dump(2) + '\n';
        case Format::text:
            for (const auto& t : report.tasks) task_text(os, t);
            os << "exit code " << exit_code(report) << '\n';
            break;
        case Format::csv:
            for (const auto& t : report.tasks) task_csv(os, t);
            break;
    }
    return os.str();
}

std::string emit_suite(const std::vector<std::pair<std::string, Report>>& reports, Format format) {
    if (format == Format::json) {
        Json suite = Json::array();
        for (const auto& [name, r] : reports) suite.push_back({{"name", name}, {"report", to_json(r)}});
        Json j;
        j["suite"] = std::move(suite);
        j["exit_code"] = exit_code(reports);
        return j.dump(2) + '\n';
    }
    std::string out;
    for (const auto& [name, r] : reports) {
        out += (format == Format::csv ? "## suite " : "#### ") + name + '\n';
        out += emit(r, format);
        if (format == Format::csv) out += '\n';
    }
    return out;
}

}  // namespace lelong::cli
