#pragma once
// Batch problem files: named weights plus a list of tasks, validated up
// front and executed into a Report.
#include "lelong/errors.hpp"
#include "lelong/poly_geom.hpp"
#include "lelong/report.hpp"
#include "lelong/weight_expr.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lelong::cli {

// Parse or validation failure; the message starts with the JSON pointer
// (or line/column for syntax errors) of the offending field.
class ProblemError : public InputError {
public:
    using InputError::InputError;
};

// Command-line overrides; they take precedence over schedules in the file.
struct RunOptions {
    std::optional<double> rmin;
    std::optional<std::size_t> levels;
    std::optional<std::size_t> nodes;
    double tol = 0.02;
};

struct ProblemObject {
    std::string name;
    std::string kind;  // monomial_weight | polynomial_log | expr
    // Generators of the indicator: the exponents of a monomial weight, or the
    // support of a polynomial without constant term.
    std::optional<ExponentSet> exponents;
    WeightExpr expr;
};

using TaskRunner = std::function<void(TaskRecord&, const RunOptions&)>;

struct TaskSpec {
    std::size_t index = 0;
    std::string op;
    Json source;
    TaskRunner run;
};

struct ProblemFile {
    std::size_t dimension = 0;
    std::map<std::string, ProblemObject> objects;
    std::vector<TaskSpec> tasks;
    Json source;
};

ProblemFile parse_problem_text(std::string_view text);
ProblemFile parse_problem(const std::filesystem::path& path);

// Runs the tasks in file order; a failing task becomes an error record.
Report execute(const ProblemFile& problem, const RunOptions& options = {});

// Expression tree <-> JSON node form ({"max": [...]}, {"coord_log": k}, ...).
// Axes are 1-based in JSON.
WeightExpr expr_from_json(const Json& j, std::size_t dimension, const std::string& pointer = "");
Json expr_to_json(const WeightExpr& w);

// Operation names accepted in "op".
std::vector<std::string> supported_ops();

}  // namespace lelong::cli
