#include "lelong/selftest.hpp"

#include "golden_data.hpp"

namespace lelong::cli {

std::vector<std::pair<std::string, std::string>> golden_problems() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, text] : kGoldenProblems) out.emplace_back(name, text);
    return out;
}

std::vector<std::pair<std::string, Report>> run_golden_suite(const RunOptions& options) {
    std::vector<std::pair<std::string, Report>> out;
    for (const auto& [name, text] : golden_problems()) out.emplace_back(name, execute(parse_problem_text(text), options));
    return out;
}

}  // namespace lelong::cli
