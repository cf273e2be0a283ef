#pragma once
// Per-task result records produced by the batch runner, and their
// text / json / csv serializations.
#include "lelong/rational.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lelong::cli {

using Json = nlohmann::ordered_json;

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

// Rationals stay exact; doubles are rounded to 12 significant digits only
// when serialized.
using Cell = std::variant<std::monostate, bool, long long, double, Rational, Estimate, std::string, Json>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Check {
    bool pass = false;
    std::string detail;
};

struct TaskRecord {
    std::size_t index = 0;  // 1-based position in the problem file
    std::string op;
    Json inputs;
    std::vector<std::pair<std::string, Cell>> results;
    std::vector<Table> tables;
    Json config;  // schedule / node counts used; null for purely exact tasks
    std::optional<Check> check;
    std::optional<std::string> error;

    void set(std::string name, Cell value) { results.emplace_back(std::move(name), std::move(value)); }
};

struct Report {
    Json problem;  // echo of the input, itself a valid problem file
    Json run_config;
    std::vector<TaskRecord> tasks;
};

enum class Format { text, json, csv };
Format parse_format(std::string_view name);

// 0: all tasks ran and every check passed; 1: some task errored; 2: some
// check failed.
int exit_code(const Report& report);

Json to_json(const Report& report);
std::string emit(const Report& report, Format format);

// Several named reports in one document (used by the golden suite).
std::string emit_suite(const std::vector<std::pair<std::string, Report>>& reports, Format format);
int exit_code(const std::vector<std::pair<std::string, Report>>& reports);

// %.12g, with "inf", "-inf" and "nan" spelled out.
std::string format_real(double x);

}  // namespace lelong::cli
