#pragma once
// Built-in golden problems (worked examples with expected values).
#include "lelong/problem.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lelong::cli {

std::vector<std::pair<std::string, std::string>> golden_problems();
std::vector<std::pair<std::string, Report>> run_golden_suite(const RunOptions& options = {});

}  // namespace lelong::cli
