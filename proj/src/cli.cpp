#include "residua/cli.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "residua/diagrams.hpp"

namespace residua {

namespace {

using nlohmann::json;

struct Lines {
    std::vector<std::string> raw;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

// "[[1,0],[0,1]]" -> rows of rationals
std::vector<VecQ> parse_matrix(const std::string& s, int line) {
    std::vector<VecQ> rows;
    VecQ cur;
    std::string tok;
    int depth = 0;
    auto flush_tok = [&]() {
        if (!tok.empty()) {
            cur.push_back(Rational::parse(tok));
            tok.clear();
        }
    };
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '[') {
            ++depth;
            if (depth == 2) cur.clear();
        } else if (c == ']') {
            if (depth == 2) {
                flush_tok();
                rows.push_back(cur);
            }
            --depth;
        } else if (c == ',') {
            if (depth == 2) flush_tok();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            tok += c;
        }
    }
    if (depth != 0) throw ParseError(line, 1, "unbalanced brackets in matrix literal");
    return rows;
}

VecQ parse_vector(const std::string& s, int line) {
    VecQ out;
    std::string tok;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == ')' || c == '[' || c == ']') continue;
        if (c == ',') {
            if (!tok.empty()) out.push_back(Rational::parse(trim(tok)));
            tok.clear();
        } else
            tok += c;
    }
    if (!trim(tok).empty()) out.push_back(Rational::parse(trim(tok)));
    (void)line;
    return out;
}

// arithmetic-diagram node order: per component, finite simples then the affine node
struct NodeClasses {
    std::vector<AffineReflectionClass> classes;
    std::vector<std::string> names;
};

NodeClasses diagram_node_classes(const BasedRootDatum& datum) {
    NodeClasses out;
    for (size_t c = 0; c < datum.components().size(); ++c) {
        int fin = 0;
        for (int s : datum.simple_indices()) {
            if (datum.component_of_root(s) != static_cast<int>(c)) continue;
            out.classes.push_back({datum.root_orbit_ids()[s], 0});
            out.names.push_back("c" + std::to_string(c) + ".n" + std::to_string(fin++));
        }
        int hc = datum.highest_coroot_root(static_cast<int>(c));
        int par = datum.coroot_in_2Y(hc) ? 1 : 0;
        out.classes.push_back({datum.root_orbit_ids()[hc], par});
        out.names.push_back("c" + std::to_string(c) + ".aff");
    }
    return out;
}

NormalizingElement parse_normalizer(const std::map<std::string, std::pair<std::string, int>>& kv,
                                    const std::string& prefix) {
    NormalizingElement d;
    auto get = [&](const std::string& k) -> std::optional<std::pair<std::string, int>> {
        auto it = kv.find(prefix + k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    if (auto c = get("constant")) d.constant = Rational::parse(c->first);
    if (d.constant <= Rational(0))
        throw ParseError(get("constant") ? get("constant")->second : 0, 1,
                         "normalizing constant must be positive");
    if (auto v = get("vexp")) d.vexp = static_cast<int>(std::stoll(v->first));
    if (auto q = get("qint")) {
        for (auto& tokstr : split_ws(q->first)) {
            auto colon = tokstr.find(':');
            if (colon == std::string::npos)
                throw ParseError(q->second, 1, "qint entries look like n:exponent");
            long long n = std::stoll(tokstr.substr(0, colon));
            long long e = std::stoll(tokstr.substr(colon + 1));
            if (n < 2) throw ParseError(q->second, 1, "q-integer index must be >= 2");
            if (e != 0) d.qints[n] = e;
        }
    }
    return d;
}

} // namespace

InputDocument parse_document(const std::string& text) {
    InputDocument doc;
    std::istringstream is(text);
    std::string lineraw;
    int lineno = 0;
    std::string section;
    // (key -> (value, line)), keys prefixed by section
    std::map<std::string, std::pair<std::string, int>> kv;
    static const std::set<std::string> known_sections{"datum", "parameters", "normalization", "stm"};
    static const std::set<std::string> known_keys{
        "datum.type", "datum.lattice", "datum.basis",
        "parameters.labels",
        "normalization.constant", "normalization.vexp", "normalization.qint",
        "stm.recipe", "stm.word", "stm.orbit", "stm.parity", "stm.matrix",
        "stm.base_torsion", "stm.base_gamma",
        "stm.d0constant", "stm.d0vexp", "stm.d0qint"};
    while (std::getline(is, lineraw)) {
        ++lineno;
        std::string line = trim(lineraw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, 1, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (!known_sections.count(section))
                throw ParseError(lineno, 1, "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) throw ParseError(lineno, 1, "key outside of any section");
        std::string full = section + "." + key;
        if (!known_keys.count(full)) throw ParseError(lineno, static_cast<int>(eq + 2), "unknown key " + full);
        if (kv.count(full)) throw ParseError(lineno, 1, "duplicate key " + full);
        kv[full] = {val, lineno};
    }

    auto need = [&](const std::string& k) -> std::pair<std::string, int> {
        auto it = kv.find(k);
        if (it == kv.end()) throw ParseError(0, 0, "missing required key " + k);
        return it->second;
    };

    doc.type_expr = need("datum.type").first;
    doc.lattice_str = kv.count("datum.lattice") ? kv["datum.lattice"].first : "Q";
    LatticeChoice lat = LatticeChoice::Q();
    if (doc.lattice_str == "Q") lat = LatticeChoice::Q();
    else if (doc.lattice_str == "P") lat = LatticeChoice::P();
    else if (doc.lattice_str == "basis") {
        auto b = need("datum.basis");
        doc.basis_rows = parse_matrix(b.first, b.second);
        lat = LatticeChoice::explicit_basis(doc.basis_rows);
    } else
        throw ParseError(kv["datum.lattice"].second, 1, "lattice must be Q, P or basis");

    BasedRootDatum datum;
    try {
        datum = BasedRootDatum::build(doc.type_expr, lat);
    } catch (const std::exception& e) {
        throw ParseError(need("datum.type").second, 1, e.what());
    }

    // labels per arithmetic-diagram node
    NodeClasses nodes = diagram_node_classes(datum);
    auto lab = need("parameters.labels");
    for (auto& t : split_ws(lab.first)) doc.labels.push_back(std::stoll(t));
    if (doc.labels.size() != nodes.classes.size())
        throw ParseError(lab.second, 1,
                         "expected " + std::to_string(nodes.classes.size()) + " labels (one per node " +
                             [&] {
                                 std::string s;
                                 for (auto& nm : nodes.names) s += nm + " ";
                                 return s;
                             }() + "), got " + std::to_string(doc.labels.size()));
    std::map<AffineReflectionClass, long long> labels;
    for (size_t i = 0; i < nodes.classes.size(); ++i) {
        auto it = labels.find(nodes.classes[i]);
        if (it != labels.end() && it->second != doc.labels[i]) {
            // find the earlier node of the same class for the message
            std::string other;
            for (size_t j = 0; j < i; ++j)
                if (nodes.classes[j] == nodes.classes[i]) other = nodes.names[j];
            throw ParseError(lab.second, 1,
                             "labels not W-invariant: nodes " + other + " and " + nodes.names[i] +
                                 " are conjugate but carry " + std::to_string(it->second) + " and " +
                                 std::to_string(doc.labels[i]));
        }
        labels[nodes.classes[i]] = doc.labels[i];
    }
    ParameterFunction m;
    try {
        m = ParameterFunction(datum, labels);
    } catch (const std::exception& e) {
        throw ParseError(lab.second, 1, e.what());
    }

    doc.d = parse_normalizer(kv, "normalization.");

    if (kv.count("stm.recipe")) {
        doc.stm.present = true;
        doc.stm.recipe = kv["stm.recipe"].first;
        if (kv.count("stm.word"))
            for (auto& t : split_ws(kv["stm.word"].first)) doc.stm.word.push_back(std::stoi(t));
        if (kv.count("stm.orbit")) doc.stm.eta_orbit = std::stoi(kv["stm.orbit"].first);
        if (kv.count("stm.parity")) doc.stm.eta_parity = std::stoi(kv["stm.parity"].first);
        if (kv.count("stm.matrix")) {
            auto rows = parse_matrix(kv["stm.matrix"].first, kv["stm.matrix"].second);
            MatZ mat(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < rows[i].size(); ++j) {
                    if (!rows[i][j].is_integer())
                        throw ParseError(kv["stm.matrix"].second, 1, "stm matrix must be integral");
                    mat(static_cast<int>(i), static_cast<int>(j)) = rows[i][j].num();
                }
            doc.stm.matrix = mat;
        }
        if (kv.count("stm.base_torsion") || kv.count("stm.base_gamma")) {
            VecQ tau = kv.count("stm.base_torsion")
                           ? parse_vector(kv["stm.base_torsion"].first, kv["stm.base_torsion"].second)
                           : VecQ{};
            VecQ gam = kv.count("stm.base_gamma")
                           ? parse_vector(kv["stm.base_gamma"].first, kv["stm.base_gamma"].second)
                           : VecQ(tau.size(), Rational(0));
            if (tau.empty()) tau = VecQ(gam.size(), Rational(0));
            if (tau.size() != gam.size())
                throw ParseError(0, 0, "base_torsion and base_gamma lengths differ");
            doc.stm.base = TorusPoint{tau, gam};
            doc.stm.base->canonicalize();
        }
        doc.stm.d0 = parse_normalizer(kv, "stm.d0");
    }

    doc.algebra = std::make_shared<NormalizedHecke>(NormalizedHecke::make(std::move(datum), m, doc.d));
    return doc;
}

std::string render_document(const InputDocument& doc) {
    std::ostringstream os;
    os << "[datum]\n";
    os << "type = " << doc.type_expr << "\n";
    os << "lattice = " << doc.lattice_str << "\n";
    if (doc.lattice_str == "basis") {
        os << "basis = [";
        for (size_t i = 0; i < doc.basis_rows.size(); ++i) {
            os << (i ? "," : "") << "[";
            for (size_t j = 0; j < doc.basis_rows[i].size(); ++j)
                os << (j ? "," : "") << doc.basis_rows[i][j].str();
            os << "]";
        }
        os << "]\n";
    }
    os << "[parameters]\n";
    os << "labels =";
    for (long long l : doc.labels) os << " " << l;
    os << "\n";
    os << "[normalization]\n";
    os << "constant = " << doc.d.constant.str() << "\n";
    os << "vexp = " << doc.d.vexp << "\n";
    if (!doc.d.qints.empty()) {
        os << "qint =";
        for (auto& [n, e] : doc.d.qints) os << " " << n << ":" << e;
        os << "\n";
    }
    if (doc.stm.present) {
        os << "[stm]\n";
        os << "recipe = " << doc.stm.recipe << "\n";
        if (!doc.stm.word.empty()) {
            os << "word =";
            for (int w : doc.stm.word) os << " " << w;
            os << "\n";
        }
        if (doc.stm.eta_orbit >= 0) {
            os << "orbit = " << doc.stm.eta_orbit << "\n";
            os << "parity = " << doc.stm.eta_parity << "\n";
        }
        if (doc.stm.matrix) {
            os << "matrix = [";
            for (int i = 0; i < doc.stm.matrix->rows(); ++i) {
                os << (i ? "," : "") << "[";
                for (int j = 0; j < doc.stm.matrix->cols(); ++j)
                    os << (j ? "," : "") << (*doc.stm.matrix)(i, j);
                os << "]";
            }
            os << "]\n";
        }
        if (doc.stm.base) {
            os << "base_torsion = (";
            for (int i = 0; i < doc.stm.base->dim(); ++i)
                os << (i ? "," : "") << doc.stm.base->torsion[i].str();
            os << ")\n";
            os << "base_gamma = (";
            for (int i = 0; i < doc.stm.base->dim(); ++i)
                os << (i ? "," : "") << doc.stm.base->gamma[i].str();
            os << ")\n";
        }
        if (!doc.stm.d0.is_one()) {
            os << "d0constant = " << doc.stm.d0.constant.str() << "\n";
            os << "d0vexp = " << doc.stm.d0.vexp << "\n";
            if (!doc.stm.d0.qints.empty()) {
                os << "d0qint =";
                for (auto& [n, e] : doc.stm.d0.qints) os << " " << n << ":" << e;
                os << "\n";
            }
        }
    }
    return os.str();
}

namespace {

STMCandidate candidate_from_spec(const InputDocument& src, const NormalizedHecke& target) {
    const auto& spec = src.stm;
    const NormalizedHecke& h = *src.algebra;
    if (spec.recipe == "identity") return {AffineTorusMap::identity(h.rank())};
    if (spec.recipe == "weyl") {
        STMCandidate c{AffineTorusMap::identity(h.rank())};
        int w = h.w0->identity();
        for (int s : spec.word) w = h.w0->multiply(w, h.w0->simple_reflection(s));
        return post_compose_weyl(h, c, w);
    }
    if (spec.recipe == "eta") {
        auto eta = spectral_isomorphism_eta(*h.datum, *h.w0, h.m, {spec.eta_orbit, spec.eta_parity});
        return {eta.map};
    }
    if (spec.recipe == "explicit") {
        if (!spec.matrix) throw std::invalid_argument("explicit stm needs a matrix");
        TorusPoint base = spec.base ? *spec.base : TorusPoint::identity(target.rank());
        return {AffineTorusMap{*spec.matrix, base}};
    }
    throw std::invalid_argument("unknown stm recipe " + spec.recipe);
}

json point_json(const TorusPoint& p) {
    json j;
    for (int i = 0; i < p.dim(); ++i) {
        j["zeta"].push_back(p.torsion[i].str());
        j["gamma"].push_back(p.gamma[i].str());
    }
    if (p.dim() == 0) {
        j["zeta"] = json::array();
        j["gamma"] = json::array();
    }
    return j;
}

json coset_json(const Coset& c, const std::vector<int>* P = nullptr) {
    json j;
    j["dim"] = c.dim();
    j["base"] = point_json(c.base);
    json rows = json::array();
    for (int i = 0; i < c.subtorus_rows.rows(); ++i) {
        json r = json::array();
        for (int k = 0; k < c.subtorus_rows.cols(); ++k) r.push_back(c.subtorus_rows(i, k));
        rows.push_back(r);
    }
    j["subtorus_rows"] = rows;
    if (P) {
        j["parabolic"] = json::array();
        for (int p : *P) j["parabolic"].push_back(p);
    }
    return j;
}

json mu_factors_json(const MuFunction& mu) {
    json arr = json::array();
    for (auto& f : mu.factors) {
        const char* kind = f.kind == MuFactorKind::NumPlus    ? "num+"
                           : f.kind == MuFactorKind::NumMinus ? "num-"
                           : f.kind == MuFactorKind::DenPlus  ? "den+"
                                                              : "den-";
        json e;
        e["root"] = f.root;
        e["kind"] = kind;
        e["vexp"] = f.vexp;
        arr.push_back(e);
    }
    return arr;
}

std::string verdict_line(const VerificationReport& r) {
    std::ostringstream os;
    if (r.valid)
        os << "VALID, a = " << r.a.str();
    else if (r.t1 && r.t3 && r.essentially_strict && (!r.t4_applicable || r.t4))
        os << "VALID (essentially strict), a = " << r.a.str();
    else
        os << "INVALID: " << (r.failure.empty() ? "verification failed" : r.failure);
    return os.str();
}

bool report_ok(const VerificationReport& r) {
    return r.t1 && r.t3 && (r.t2 || r.essentially_strict) && (!r.t4_applicable || r.t4);
}

} // namespace

RunResult run_command(const std::string& command, const std::vector<InputDocument>& docs,
                      const RunOptions& opt) {
    RunResult out;
    std::ostringstream os;
    json j;
    j["schema"] = "residua/1";
    j["command"] = command;
    if (docs.empty()) {
        out.exit_code = 1;
        out.text = "error: no input documents\n";
        return out;
    }
    const NormalizedHecke& h = *docs[0].algebra;

    if (command == "residual-points") {
        auto pts = enumerate_residual_points(*h.datum, *h.w0, h.m);
        os << pts.size() << " orbit" << (pts.size() == 1 ? "" : "s") << "\n";
        for (size_t i = 0; i < pts.size(); ++i) {
            os << "orbit " << i << " size " << pts[i].orbit.size() << " rep "
               << pts[i].representative.str() << "\n";
            json o;
            o["rep"] = point_json(pts[i].representative);
            o["size"] = pts[i].orbit.size();
            j["orbits"].push_back(o);
        }
        if (pts.empty()) j["orbits"] = json::array();
    } else if (command == "residual-cosets") {
        const auto& cat = *h.catalog;
        os << cat.entries.size() << " orbit" << (cat.entries.size() == 1 ? "" : "s") << "\n";
        for (size_t i = 0; i < cat.entries.size(); ++i) {
            const auto& e = cat.entries[i];
            os << "orbit " << i << " dim " << e.coset.dim() << " P {";
            for (size_t k = 0; k < e.P.size(); ++k) os << (k ? " " : "") << e.P[k];
            os << "} size " << e.orbit.size() << " base " << e.coset.base.str() << "\n";
            os << "  pole/zero: p+ " << e.report.p_plus.size() << " p- " << e.report.p_minus.size()
               << " z+ " << e.report.z_plus.size() << " z- " << e.report.z_minus.size()
               << " lhs " << e.report.lhs << " codim " << e.report.codim
               << (e.report.equality ? " (equality)" : "") << "\n";
            json o = coset_json(e.coset, &e.P);
            o["orbit_size"] = e.orbit.size();
            o["lhs"] = e.report.lhs;
            o["codim"] = e.report.codim;
            json dens;
            dens["factored"] = regularize(h.mu, e.coset).fn.str();
            o["density"] = dens;
            j["orbits"].push_back(o);
        }
    } else if (command == "mu") {
        os << "mu = " << h.mu.str() << "\n";
        os << "canonical: " << h.mu.to_torus_function().str() << "\n";
        j["prefactor_vexp"] = h.mu.prefactor_vexp;
        j["d"] = h.d.str();
        j["factors"] = mu_factors_json(h.mu);
        j["canonical"] = h.mu.to_torus_function().str();
    } else if (command == "fdeg") {
        auto pts = enumerate_residual_points(*h.datum, *h.w0, h.m);
        if (pts.empty()) os << "0 orbits\n";
        for (size_t i = 0; i < pts.size(); ++i) {
            FormalDegree f = formal_degree(h.mu, pts[i].representative);
            os << "orbit " << i << " rep " << pts[i].representative.str() << "\n";
            json o;
            o["rep"] = point_json(pts[i].representative);
            o["certified"] = f.certified;
            o["order_at_1"] = f.order_at_one;
            if (f.certified) {
                os << "  fdeg = " << (f.sign < 0 ? "-" : "") << f.certificate.str() << "\n";
                os << "  value = " << f.value.str() << "\n";
                os << "  order_at_1 = " << f.order_at_one << "\n";
                o["certificate"] = f.certificate.str();
                o["sign"] = f.sign;
                o["value"] = f.value.str();
                if (opt.v0) {
                    Rational val = f.value.eval(Cyclotomic(*opt.v0)).rational_value();
                    os << "  at v0=" << opt.v0->str() << ": " << val.str() << "\n";
                    o["value_at_v0"] = val.str();
                }
            } else {
                os << "  fdeg not in +-M" << (f.even_in_v ? "" : " (odd under v -> -v)")
                   << "; factored = " << f.factored.str() << "\n";
                os << "  order_at_1 = " << f.order_at_one << "\n";
                o["factored"] = f.factored.str();
                o["even_in_v"] = f.even_in_v;
                if (opt.v0) {
                    NumericPoint dummy;
                    auto val = f.factored.eval(dummy, opt.v0->to_double());
                    os << "  at v0=" << opt.v0->str() << ": " << val.real() << " (numeric)\n";
                    o["value_at_v0_numeric"] = val.real();
                }
            }
            j["orbits"].push_back(o);
        }
        if (pts.empty()) j["orbits"] = json::array();
    } else if (command == "spectral-diagram" || command == "arithmetic-diagram") {
        LabelledAffineDiagram dg = command == "spectral-diagram"
                                       ? spectral_diagram(*h.datum, h.m)
                                       : arithmetic_diagram(*h.datum, h.m);
        os << dg.render();
        j["render"] = dg.render();
        j["group"] = dg.lattice_group.str();
        json nodes = json::array();
        for (auto& nd : dg.nodes) {
            json n;
            n["label"] = nd.label;
            n["affine"] = nd.offset != 0;
            n["marked"] = nd.marked;
            n["component"] = nd.component;
            nodes.push_back(n);
        }
        j["nodes"] = nodes;
    } else if (command == "symmetries") {
        Standardization st = standardize(*h.datum, h.m);
        WeylGroup ws(st.datum);
        auto outg = out_T_mu(st.datum, ws, st.m);
        os << "Out_T(mu) order " << outg.elements.size() << " = |Omega_X^*| "
           << outg.omega_x_star_order << " x |Omega_0^Y| " << outg.diagram_auto_order << "\n";
        if (st.changed) os << "(standardized first: " << st.doubled_orbits.size() << " orbit(s) doubled)\n";
        for (size_t i = 0; i < outg.elements.size(); ++i) {
            os << "element " << i << " translation " << outg.elements[i].translation.str() << " sigma";
            for (int s : outg.elements[i].sigma) os << " " << s;
            os << "\n";
        }
        j["order"] = outg.elements.size();
        j["omega_x_star"] = outg.omega_x_star_order;
        j["diagram_autos"] = outg.diagram_auto_order;
        j["omega_y_vee"] = outg.omega_y_vee_order;
        j["omega_m_star"] = outg.omega_m_star_order;
    } else if (command == "verify-stm") {
        if (!docs[0].stm.present) {
            out.exit_code = 1;
            out.text = "error: first document carries no [stm] section\n";
            return out;
        }
        const NormalizedHecke& tgt = docs.size() > 1 ? *docs[1].algebra : h;
        SpectralTransferMap stm = verify_stm(h, tgt, candidate_from_spec(docs[0], tgt));
        os << verdict_line(stm.report) << "\n";
        os << "T1 " << (stm.report.t1 ? "ok" : "FAIL") << ", T2 "
           << (stm.report.t2 ? "ok" : (stm.report.essentially_strict ? "essentially strict" : "FAIL"))
           << ", T3 " << (stm.report.t3 ? "ok" : "FAIL");
        if (stm.report.t4_applicable) os << ", T4 " << (stm.report.t4 ? "ok" : "FAIL");
        os << "\n";
        if (report_ok(stm.report)) {
            os << "image dim " << stm.report.image.dim() << " base " << stm.report.image.base.str() << "\n";
            j["a"] = stm.report.a.str();
        } else
            out.exit_code = 2;
        j["valid"] = stm.report.valid;
        j["essentially_strict"] = stm.report.essentially_strict;
        j["t1"] = stm.report.t1;
        j["t2"] = stm.report.t2;
        j["t3"] = stm.report.t3;
        if (stm.report.t4_applicable) j["t4"] = stm.report.t4;
        if (!stm.report.failure.empty()) j["failure"] = stm.report.failure;
    } else if (command == "compose-stm") {
        if (docs.size() < 3) {
            out.exit_code = 1;
            out.text = "error: compose-stm needs at least three documents\n";
            return out;
        }
        std::vector<SpectralTransferMap> maps;
        for (size_t i = 0; i + 1 < docs.size(); ++i) {
            if (!docs[i].stm.present) {
                out.exit_code = 1;
                out.text = "error: document " + std::to_string(i) + " carries no [stm] section\n";
                return out;
            }
            maps.push_back(verify_stm(*docs[i].algebra, *docs[i + 1].algebra,
                                      candidate_from_spec(docs[i], *docs[i + 1].algebra)));
            if (!report_ok(maps.back().report)) {
                out.exit_code = 2;
                out.text = "link " + std::to_string(i) + " " + verdict_line(maps.back().report) + "\n";
                return out;
            }
        }
        SpectralTransferMap comp = maps[0];
        for (size_t i = 1; i < maps.size(); ++i) comp = compose(comp, maps[i]);
        os << "composite " << verdict_line(comp.report) << "\n";
        j["a"] = comp.report.a.str();
        j["valid"] = comp.report.valid;
        if (!report_ok(comp.report)) out.exit_code = 2;
    } else if (command == "search-rank0") {
        if (!docs[0].stm.present || docs[0].stm.recipe != "rank0") {
            out.exit_code = 1;
            out.text = "error: search-rank0 expects [stm] recipe = rank0 with the d0 payload\n";
            return out;
        }
        auto hits = search_rank0(h, docs[0].stm.d0);
        os << hits.size() << " morphism" << (hits.size() == 1 ? "" : "s") << "\n";
        for (auto& hit : hits) {
            os << "point " << hit.point.str() << " lambda " << hit.lambda.str() << "\n";
            json o;
            o["point"] = point_json(hit.point);
            o["lambda"] = hit.lambda.str();
            j["morphisms"].push_back(o);
        }
        if (hits.empty()) j["morphisms"] = json::array();
    } else if (command == "check-order") {
        if (docs.size() < 2 || !docs[0].stm.present) {
            out.exit_code = 1;
            out.text = "error: check-order needs two documents, the first with an [stm] witness\n";
            return out;
        }
        const NormalizedHecke& h2 = *docs[1].algebra;
        STMCandidate c12 = candidate_from_spec(docs[0], h2);
        std::optional<STMCandidate> c21;
        if (docs[1].stm.present) c21 = candidate_from_spec(docs[1], h);
        OrderVerdict v = check_order_witness(h, h2, c12, c21 ? &*c21 : nullptr);
        const char* name = v == OrderVerdict::Lower ? "lower"
                           : v == OrderVerdict::Isogenous ? "isogenous"
                                                          : "fail";
        os << name << "\n";
        j["verdict"] = name;
        if (v == OrderVerdict::Fail) out.exit_code = 2;
    } else if (command == "correspondence") {
        if (docs.size() < 2 || !docs[0].stm.present) {
            out.exit_code = 1;
            out.text = "error: correspondence needs source (with [stm]) and target documents\n";
            return out;
        }
        const NormalizedHecke& tgt = *docs[1].algebra;
        SpectralTransferMap stm = verify_stm(h, tgt, candidate_from_spec(docs[0], tgt));
        if (!report_ok(stm.report)) {
            out.exit_code = 2;
            out.text = verdict_line(stm.report) + "\n";
            return out;
        }
        os << verdict_line(stm.report) << "\n";
        auto rows = residual_correspondence(stm);
        for (auto& r : rows) {
            Rational c = correspondence_constant(stm, r.source_orbit);
            os << "source orbit " << r.source_orbit << " -> target orbit " << r.target_orbit
               << " fibers " << r.fiber_size << " ratio " << c.str()
               << (r.tempered_checked ? "" : " (tempered check failed)") << "\n";
            json o;
            o["source"] = r.source_orbit;
            o["target"] = r.target_orbit;
            o["fibers"] = r.fiber_size;
            o["ratio"] = c.str();
            o["tempered"] = r.tempered_checked;
            j["rows"].push_back(o);
        }
        j["a"] = stm.report.a.str();
    } else {
        out.exit_code = 1;
        out.text = "error: unknown command " + command + "\n";
        return out;
    }

    out.text = opt.json ? j.dump(2) + "\n" : os.str();
    return out;
}

RunResult run_files(const std::string& command, const std::vector<std::string>& paths,
                    const RunOptions& opt) {
    std::vector<InputDocument> docs;
    for (auto& p : paths) {
        std::ifstream in(p);
        if (!in) return {1, "error: cannot open " + p + "\n"};
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            docs.push_back(parse_document(ss.str()));
        } catch (const ParseError& e) {
            return {1, "error: " + p + ": " + e.what() + "\n"};
        } catch (const std::exception& e) {
            return {1, "error: " + p + ": " + e.what() + "\n"};
        }
    }
    try {
        return run_command(command, docs, opt);
    } catch (const std::exception& e) {
        return {1, std::string("error: ") + e.what() + "\n"};
    }
}

} // namespace residua
