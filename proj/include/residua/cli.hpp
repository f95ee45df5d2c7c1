#pragma once

#include <optional>
#include <string>
#include <vector>

#include "residua/stm.hpp"

namespace residua {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                             ": " + msg),
          line(line_),
          col(col_) {}
};

/// One parsed input document: datum + parameters + normalization and an
/// optional spectral-transfer-map section.
struct InputDocument {
    std::string type_expr;
    std::string lattice_str; // "Q", "P" or "basis"
    std::vector<VecQ> basis_rows;
    std::vector<long long> labels; // per arithmetic-diagram node
    NormalizingElement d;

    struct StmSpec {
        bool present = false;
        std::string recipe; // identity | weyl | eta | explicit | rank0
        std::vector<int> word;
        int eta_orbit = -1;
        int eta_parity = 0;
        std::optional<MatZ> matrix;
        std::optional<TorusPoint> base;
        NormalizingElement d0;
    } stm;

    // built objects
    std::shared_ptr<NormalizedHecke> algebra;
};

InputDocument parse_document(const std::string& text);
/// Canonical rendering; parse(render(doc)) reproduces the document.
std::string render_document(const InputDocument& doc);

struct RunOptions {
    bool json = false;
    std::optional<Rational> v0;
};

struct RunResult {
    int exit_code = 0; // 0 ok, 1 error, 2 refutation
    std::string text;
};

/// Dispatches one CLI command over already-loaded documents.
RunResult run_command(const std::string& command, const std::vector<InputDocument>& docs,
                      const RunOptions& opt);

/// Convenience: parse files then dispatch; errors become exit code 1.
RunResult run_files(const std::string& command, const std::vector<std::string>& paths,
                    const RunOptions& opt);

} // namespace residua
