#include <CLI11.hpp>
#include <iostream>

#include "residua/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"residua: exact spectral data of normalized affine Hecke algebras"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    bool json = false;
    std::string v0;

    const std::vector<std::string> commands = {
        "residual-points", "residual-cosets", "mu", "fdeg", "spectral-diagram",
        "arithmetic-diagram", "symmetries", "verify-stm", "compose-stm",
        "search-rank0", "check-order", "correspondence"};
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c);
        sub->add_option("files", files, "input documents")->required()->expected(-1);
        sub->add_flag("--json", json, "emit the machine-readable report");
        sub->add_option("--v0", v0, "rational specialization point for numeric cross-checks");
    }

    CLI11_PARSE(app, argc, argv);

    residua::RunOptions opt;
    opt.json = json;
    if (!v0.empty()) opt.v0 = residua::Rational::parse(v0);
    auto* sub = app.get_subcommands().front();
    residua::RunResult res = residua::run_files(sub->get_name(), files, opt);
    std::cout << res.text;
    return res.exit_code;
}
