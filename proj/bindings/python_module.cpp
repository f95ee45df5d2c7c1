#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "residua/cli.hpp"

namespace py = pybind11;
using namespace residua;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    namespace nl = nlohmann;
    switch (j.type()) {
        case nl::json::value_t::null: return py::none();
        case nl::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nl::json::value_t::number_integer: return py::int_(j.get<long long>());
        case nl::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nl::json::value_t::number_float: return py::float_(j.get<double>());
        case nl::json::value_t::string: return py::str(j.get<std::string>());
        case nl::json::value_t::array: {
            py::list out;
            for (auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case nl::json::value_t::object: {
            py::dict out;
            for (auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

std::vector<InputDocument> parse_all(const std::vector<std::string>& texts) {
    std::vector<InputDocument> docs;
    for (auto& t : texts) docs.push_back(parse_document(t));
    return docs;
}

} // namespace

PYBIND11_MODULE(_residua, m) {
    m.doc() = "Exact spectral data of normalized affine Hecke algebras";

    m.def(
        "run",
        [](const std::string& command, const std::vector<std::string>& documents,
           const std::string& v0) {
            RunOptions opt;
            opt.json = true;
            if (!v0.empty()) opt.v0 = Rational::parse(v0);
            RunResult r = run_command(command, parse_all(documents), opt);
            py::dict out;
            out["exit_code"] = r.exit_code;
            if (r.exit_code == 1) out["error"] = r.text;
            else out["report"] = json_to_py(nlohmann::json::parse(r.text));
            return out;
        },
        py::arg("command"), py::arg("documents"), py::arg("v0") = "",
        "Dispatch a CLI command over document texts; returns the machine report.");

    m.def(
        "run_text",
        [](const std::string& command, const std::vector<std::string>& documents,
           const std::string& v0) {
            RunOptions opt;
            if (!v0.empty()) opt.v0 = Rational::parse(v0);
            RunResult r = run_command(command, parse_all(documents), opt);
            return py::make_tuple(r.exit_code, r.text);
        },
        py::arg("command"), py::arg("documents"), py::arg("v0") = "",
        "Same dispatch with the human-readable report.");

    m.def(
        "canonical_document",
        [](const std::string& text) { return render_document(parse_document(text)); },
        py::arg("text"), "Parse and re-render a document in canonical form.");

    m.def(
        "residual_point_orbits",
        [](const std::string& document) {
            InputDocument doc = parse_document(document);
            auto pts = enumerate_residual_points(*doc.algebra->datum, *doc.algebra->w0, doc.algebra->m);
            py::list out;
            for (auto& o : pts) {
                py::dict e;
                e["representative"] = o.representative.str();
                e["orbit_size"] = o.orbit.size();
                out.append(e);
            }
            return out;
        },
        py::arg("document"), "W0-orbits of generic residual points.");

    m.def(
        "formal_degrees",
        [](const std::string& document, const std::string& v0) {
            InputDocument doc = parse_document(document);
            const NormalizedHecke& h = *doc.algebra;
            auto pts = enumerate_residual_points(*h.datum, *h.w0, h.m);
            py::list out;
            for (auto& o : pts) {
                FormalDegree f = formal_degree(h.mu, o.representative);
                py::dict e;
                e["representative"] = o.representative.str();
                e["certified"] = f.certified;
                e["order_at_1"] = f.order_at_one;
                if (f.certified) {
                    e["certificate"] = (f.sign < 0 ? "-" : "") + f.certificate.str();
                    e["value"] = f.value.str();
                    if (!v0.empty())
                        e["value_at_v0"] =
                            f.value.eval(Cyclotomic(Rational::parse(v0))).rational_value().str();
                }
                out.append(e);
            }
            return out;
        },
        py::arg("document"), py::arg("v0") = "", "Formal degrees with M-certificates.");

    m.attr("__version__") = "1.0.0";
}
