#include "lelong/problem.hpp"
#include "lelong/selftest.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lelong::InputError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace lelong::cli;
    CLI::App app{"Exact and numeric Lelong numbers of plurisubharmonic weights"};
    app.require_subcommand(1);

    std::string file, format = "text", out;
    double rmin = 0, tol = 0.02;
    std::size_t levels = 0, nodes = 0;
    auto* run = app.add_subcommand("run", "Run the tasks of a problem file");
    run->add_option("file", file, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    run->add_option("--out", out, "Write the report here instead of stdout");
    auto* rmin_opt = run->add_option("--rmin", rmin, "Deepest radius level (log scale, negative)")
                         ->check(CLI::Range(-1e9, -1e-9));
    auto* levels_opt = run->add_option("--levels", levels, "Number of equally spaced levels down to --rmin")
                           ->check(CLI::Range(2, 1000));
    auto* nodes_opt = run->add_option("--nodes", nodes, "Angular nodes per axis")->check(CLI::Range(64, 1 << 20));
    run->add_option("--tol", tol, "Default tolerance for numeric expectations")->check(CLI::NonNegativeNumber);

    std::string self_format = "json";
    auto* self = app.add_subcommand("selftest", "Run the built-in golden problems");
    self->add_option("--format", self_format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*self) {
            const auto suite = run_golden_suite();
            std::cout << emit_suite(suite, parse_format(self_format));
            return exit_code(suite);
        }
        RunOptions opts;
        if (*rmin_opt) opts.rmin = rmin;
        if (*levels_opt) opts.levels = levels;
        if (*nodes_opt) opts.nodes = nodes;
        opts.tol = tol;
        const auto problem = parse_problem(file);
        const auto report = execute(problem, opts);
        write_output(emit(report, parse_format(format)), out);
        return exit_code(report);
    } catch (const std::exception& e) {
        std::cerr << "lelong: " << e.what() << '\n';
        return 1;
    }
}
