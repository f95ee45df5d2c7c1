#include "residua/diagrams.hpp"

#include "residua/affine_walk.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace residua {

namespace {

// all coset representatives of Z^n / (row lattice), with the quotient group
std::pair<FinAbGroup, std::vector<VecZ>> quotient_reps(const MatZ& sub_rows) {
    const int n = sub_rows.cols();
    FinAbGroup g;
    g.invariants = quotient_invariants(MatZ::identity(n), sub_rows);
    // generators: rows of V^-1 from the SNF of the coefficient matrix
    SmithForm sf = smith_form(sub_rows);
    MatZ vinv = unimodular_inverse(sf.v);
    std::vector<VecZ> gens;
    std::vector<long long> orders;
    for (int i = 0; i < n; ++i) {
        long long d = sf.d(i, i);
        if (d > 1) {
            gens.push_back(vinv.row(i));
            orders.push_back(d);
        }
    }
    std::vector<VecZ> reps;
    std::vector<long long> idx(gens.size(), 0);
    while (true) {
        VecZ r(n, 0);
        for (size_t k = 0; k < gens.size(); ++k)
            for (int j = 0; j < n; ++j) r[j] += idx[k] * gens[k][j];
        reps.push_back(r);
        size_t k = 0;
        while (k < gens.size() && ++idx[k] == orders[k]) idx[k++] = 0;
        if (k == gens.size()) break;
    }
    if (gens.empty()) reps.assign(1, VecZ(n, 0));
    return {g, reps};
}

struct DiagramSpec {
    std::vector<AffineSimple> simples;
    std::vector<long long> labels;
    std::vector<bool> marked;
    std::vector<int> component;
    MatZ translation_sub; // rows: lattice modded out (Q(R_m^vee) or Q(R_0))
};

LabelledAffineDiagram assemble(const DiagramSpec& spec, int n) {
    LabelledAffineDiagram d;
    const auto& s = spec.simples;
    for (size_t i = 0; i < s.size(); ++i) {
        LabelledAffineDiagram::Node node;
        node.gradient = s[i].grad;
        node.refvec = s[i].refvec;
        node.offset = s[i].offset;
        node.label = spec.labels[i];
        node.marked = spec.marked[i];
        node.component = spec.component[i];
        d.nodes.push_back(std::move(node));
    }
    d.bonds = MatZ(static_cast<int>(s.size()), static_cast<int>(s.size()));
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = 0; j < s.size(); ++j)
            d.bonds(static_cast<int>(i), static_cast<int>(j)) = dotzz(s[i].refvec, s[j].grad);
    auto [group, reps] = quotient_reps(spec.translation_sub);
    d.lattice_group = group;
    VecQ x0 = alcove_interior(s, n);
    for (auto& rep : reps) {
        AffQ t = AffQ::id(n);
        for (int i = 0; i < n; ++i) t.b[i] = Rational(rep[i]);
        AffQ norm = alcove_normalize(s, t, n, x0);
        d.group_elements.push_back(t.b);
        d.group_action.push_back(node_permutation(s, norm));
    }
    return d;
}

} // namespace

RmSystem r_m_system(const BasedRootDatum& datum, const ParameterFunction& m) {
    std::vector<VecZ> roots, coroots;
    std::vector<int> map;
    for (int i = 0; i < datum.num_roots(); ++i) {
        int n = m.n_m(i);
        roots.push_back(scalez(n, datum.root(i)));
        VecZ cv = datum.coroot(i);
        VecZ sc(cv.size());
        for (size_t j = 0; j < cv.size(); ++j) {
            if (cv[j] % n != 0) throw std::logic_error("n_m = 2 without alpha^vee in 2Y");
            sc[j] = cv[j] / n;
        }
        coroots.push_back(sc);
        map.push_back(i);
    }
    std::vector<int> simple_positions;
    for (int s : datum.simple_indices())
        simple_positions.push_back(s);
    RmSystem out{BasedRootDatum::from_tables(roots, coroots, simple_positions), {}};
    out.root_map.assign(out.datum.num_roots(), -1);
    for (int i = 0; i < datum.num_roots(); ++i) {
        int idx = out.datum.root_index(scalez(m.n_m(i), datum.root(i)));
        if (idx < 0) throw std::logic_error("lost a scaled root");
        out.root_map[idx] = i;
    }
    return out;
}

LabelledAffineDiagram spectral_diagram(const BasedRootDatum& datum, const ParameterFunction& m) {
    const int n = datum.rank();
    RmSystem rm = r_m_system(datum, m);
    DiagramSpec spec;
    auto label_of = [&](int rm_index, int level) {
        int orig = rm.root_map[rm_index];
        int nm = m.n_m(orig);
        int eps = (level % 2 != 0 && nm == 2) ? -1 : 1;
        long long two_me = eps > 0 ? m.two_m_plus(orig) : m.two_m_minus(orig);
        // n_m * m_eps = n_m * two_me / 2
        return nm * two_me / 2;
    };
    for (size_t c = 0; c < rm.datum.components().size(); ++c) {
        for (int s : rm.datum.simple_indices()) {
            if (rm.datum.component_of_root(s) != static_cast<int>(c)) continue;
            spec.simples.push_back({rm.datum.root(s), rm.datum.coroot(s), 0});
            spec.labels.push_back(label_of(s, 0));
            spec.marked.push_back(false);
            spec.component.push_back(static_cast<int>(c));
        }
        int hi = rm.datum.highest_root(static_cast<int>(c));
        spec.simples.push_back({negz(rm.datum.root(hi)), negz(rm.datum.coroot(hi)), 1});
        spec.labels.push_back(label_of(rm.datum.negative_of(hi), 1));
        spec.marked.push_back(false);
        spec.component.push_back(static_cast<int>(c));
    }
    spec.translation_sub = rm.datum.coroot_lattice_rows(); // Q(R_m^vee)
    return assemble(spec, n);
}

LabelledAffineDiagram arithmetic_diagram(const BasedRootDatum& datum, const ParameterFunction& m) {
    const int n = datum.rank();
    DiagramSpec spec;
    for (size_t c = 0; c < datum.components().size(); ++c) {
        for (int s : datum.simple_indices()) {
            if (datum.component_of_root(s) != static_cast<int>(c)) continue;
            spec.simples.push_back({datum.coroot(s), datum.root(s), 0});
            spec.labels.push_back(m.label_a(s));
            spec.marked.push_back(false);
            spec.component.push_back(static_cast<int>(c));
        }
        int hc = datum.highest_coroot_root(static_cast<int>(c));
        spec.simples.push_back({negz(datum.coroot(hc)), negz(datum.root(hc)), 1});
        spec.labels.push_back(m.label_b(hc));
        spec.marked.push_back(true);
        spec.component.push_back(static_cast<int>(c));
    }
    spec.translation_sub = datum.root_lattice_rows(); // Q(R_0)
    return assemble(spec, n);
}

Standardization standardize(const BasedRootDatum& datum, const ParameterFunction& m) {
    if (!m.is_semistandard()) throw std::invalid_argument("input is not semi-standard");
    Standardization out{datum, m, {}, {}, false};
    // orbits with a coroot divisible by 2 and exactly one vanishing label
    std::set<int> flip, dbl;
    for (int i = 0; i < datum.num_roots(); ++i) {
        if (!datum.coroot_in_2Y(i)) continue;
        long long a = m.label_a(i), b = m.label_b(i);
        int orb = datum.root_orbit_ids()[i];
        if (a == 0 && b != 0) {
            flip.insert(orb);
            dbl.insert(orb);
        } else if (b == 0 && a != 0) {
            dbl.insert(orb);
        }
    }
    if (dbl.empty()) return out;
    out.changed = true;
    out.flipped_orbits.assign(flip.begin(), flip.end());
    out.doubled_orbits.assign(dbl.begin(), dbl.end());

    std::vector<VecZ> roots, coroots;
    std::vector<std::pair<long long, long long>> labels_ab;
    for (int i = 0; i < datum.num_roots(); ++i) {
        int orb = datum.root_orbit_ids()[i];
        long long a = m.label_a(i), b = m.label_b(i);
        if (flip.count(orb)) std::swap(a, b); // m_- -> -m_- exchanges the labels
        if (dbl.count(orb)) {
            roots.push_back(scalez(2, datum.root(i)));
            VecZ cv = datum.coroot(i);
            VecZ half(cv.size());
            for (size_t j = 0; j < cv.size(); ++j) half[j] = cv[j] / 2;
            coroots.push_back(half);
            // doubled orbit: m'_+ = old a (= m_+ + m_-), m'_- = 0
            labels_ab.push_back({a, a});
        } else {
            roots.push_back(datum.root(i));
            coroots.push_back(datum.coroot(i));
            labels_ab.push_back({a, b});
        }
    }
    std::vector<int> simples = datum.simple_indices();
    BasedRootDatum nd = BasedRootDatum::from_tables(roots, coroots, simples);
    std::map<AffineReflectionClass, long long> labels;
    for (size_t i = 0; i < roots.size(); ++i) {
        int idx = nd.root_index(roots[i]);
        int orb = nd.root_orbit_ids()[idx];
        labels[{orb, 0}] = labels_ab[i].first;
        if (nd.coroot_in_2Y(idx)) labels[{orb, 1}] = labels_ab[i].second;
        else if (labels_ab[i].first != labels_ab[i].second)
            throw std::logic_error("standardization produced illegal labels");
    }
    out.datum = std::move(nd);
    out.m = ParameterFunction(out.datum, labels);
    return out;
}

OutTMu out_T_mu(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m) {
    if (!m.is_standard(datum)) throw std::invalid_argument("out_T_mu requires standard data (standardize first)");
    const int n = datum.rank();
    OutTMu out;
    MuFunction mu = build_mu(datum, w0, m, NormalizingElement::one());
    FactoredTorusFunction muf = mu.to_torus_function();

    // Omega_X^* = P(R_0^vee)/Y as torsion translations
    std::vector<TorusPoint> translations;
    {
        std::set<VecQ> seen;
        std::vector<VecQ> frontier{VecQ(n, Rational(0))};
        seen.insert(frontier[0]);
        auto cowe = datum.coweight_lattice_rows();
        while (!frontier.empty()) {
            std::vector<VecQ> next;
            for (auto& f : frontier)
                for (auto& g : cowe) {
                    VecQ h(n);
                    for (int i = 0; i < n; ++i) h[i] = (f[i] + g[i]).mod1();
                    if (seen.insert(h).second) next.push_back(h);
                }
            frontier = std::move(next);
        }
        for (auto& t : seen) translations.push_back(TorusPoint{t, VecQ(n, Rational(0))});
        out.omega_x_star_order = static_cast<long long>(translations.size());
    }

    // Omega_0^Y: diagram automorphisms of (R_0^vee, F_0^vee) normalizing Y
    std::vector<std::pair<std::vector<int>, MatZ>> autos;
    {
        const int k = datum.num_simple();
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<VecZ> corcols;
        for (int s : datum.simple_indices()) corcols.push_back(datum.coroot(s));
        MatZ b = MatZ::from_cols(corcols);
        do {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                for (int j = 0; j < k && ok; ++j)
                    if (datum.cartan(datum.simple_indices()[perm[i]], datum.simple_indices()[perm[j]]) !=
                        datum.cartan(datum.simple_indices()[i], datum.simple_indices()[j]))
                        ok = false;
            if (!ok) continue;
            // G with G * coroot_i = coroot_{perm i}: G = bp b^-1
            std::vector<VecZ> permuted;
            for (int i = 0; i < k; ++i) permuted.push_back(datum.coroot(datum.simple_indices()[perm[i]]));
            MatZ bp = MatZ::from_cols(permuted);
            MatZ g(n, n);
            MatQScaled binv = rational_inverse(b);
            bool integral = true;
            for (int i = 0; i < n && integral; ++i)
                for (int j = 0; j < n && integral; ++j) {
                    Rational acc(0);
                    for (int t = 0; t < n; ++t)
                        acc += Rational(bp(i, t)) * Rational(binv.mat(t, j), 1) / Rational(binv.den);
                    if (!acc.is_integer()) integral = false;
                    else g(i, j) = acc.num();
                }
            if (!integral) continue;
            long long dg = det(g);
            if (dg != 1 && dg != -1) continue;
            autos.push_back({perm, g});
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.diagram_auto_order = static_cast<long long>(autos.size());
    }

    for (auto& [perm, g] : autos)
        for (auto& s : translations) {
            OutTMu::Element e;
            e.translation = s;
            e.sigma = perm;
            e.map = AffineTorusMap{g.transposed(), s};
            FactoredTorusFunction pulled = muf.pullback(e.map);
            std::string why;
            auto ratio = pulled.ratio_to(muf, &why);
            if (!ratio || !(*ratio == RationalFunctionV(Laurent::one())))
                throw std::logic_error("Out_T(mu) generator fails the mu-pullback check: " + why);
            out.elements.push_back(std::move(e));
        }

    // exact sequence orders
    RmSystem rm = r_m_system(datum, m);
    out.omega_y_vee_order = lattice_quotient(MatZ::identity(n), rm.datum.coroot_lattice_rows()).order();
    {
        // [P(R_0^vee) : Q(R_m^vee)] via a common denominator
        auto cowe = datum.coweight_lattice_rows();
        long long den = 1;
        for (auto& r : cowe)
            for (auto& e : r) den = std::lcm(den, e.den());
        MatZ super(static_cast<int>(cowe.size()), n);
        for (size_t i = 0; i < cowe.size(); ++i)
            for (int j = 0; j < n; ++j) super(static_cast<int>(i), j) = (cowe[i][j] * Rational(den)).num();
        MatZ sub = rm.datum.coroot_lattice_rows();
        MatZ subs(sub.rows(), n);
        for (int i = 0; i < sub.rows(); ++i)
            for (int j = 0; j < n; ++j) subs(i, j) = sub(i, j) * den;
        out.omega_m_star_order = lattice_quotient(super, subs).order();
    }
    return out;
}

EtaResult spectral_isomorphism_eta(const BasedRootDatum& datum, const WeylGroup& w0,
                                   const ParameterFunction& m, const AffineReflectionClass& cls) {
    (void)w0;
    const int n = datum.rank();
    // validate the class
    bool orbit_exists = false, split = false;
    for (int i = 0; i < datum.num_roots(); ++i)
        if (datum.root_orbit_ids()[i] == cls.orbit) {
            orbit_exists = true;
            split = datum.coroot_in_2Y(i);
            break;
        }
    if (!orbit_exists) throw std::invalid_argument("no such root orbit");
    if (cls.parity == 1 && !split)
        throw std::invalid_argument("odd class requires alpha^vee in 2Y");

    std::map<AffineReflectionClass, long long> labels = m.labels();
    long long a = labels.at({cls.orbit, 0});
    long long b = split ? labels.at({cls.orbit, 1}) : a;
    EtaResult out{m, AffineTorusMap::identity(n), false};
    if (cls.parity == 0) {
        // m_+ -> -m_+: (a, b) -> (-b, -a)
        labels[{cls.orbit, 0}] = -b;
        if (split) labels[{cls.orbit, 1}] = -a;
        out.new_m = ParameterFunction(datum, labels);
        out.map = AffineTorusMap::identity(n);
        out.is_translation = false;
        return out;
    }
    // parity 1: m_+ <-> m_-: (a, b) -> (a, -b); map is translation by s_c
    labels[{cls.orbit, 1}] = -b;
    out.new_m = ParameterFunction(datum, labels);
    out.is_translation = true;
    // solve <tau, alpha_i> = 1/2 on the orbit simples, 0 elsewhere; verify all roots
    const int k = datum.num_simple();
    MatZ rows(k, n);
    VecQ c(k, Rational(0));
    for (int i = 0; i < k; ++i) {
        int s = datum.simple_indices()[i];
        VecZ r = datum.root(s);
        for (int j = 0; j < n; ++j) rows(i, j) = r[j];
        c[i] = datum.root_orbit_ids()[s] == cls.orbit ? Rational(1, 2) : Rational(0);
    }
    for (auto& tau : solve_congruences(rows, c)) {
        TorusPoint s{tau, VecQ(n, Rational(0))};
        bool good = true;
        for (int i = 0; i < datum.num_roots() && good; ++i) {
            auto [t, g] = s.evaluate(datum.root(i));
            Rational want = datum.root_orbit_ids()[i] == cls.orbit ? Rational(1, 2) : Rational(0);
            if (t != want || !g.is_zero()) good = false;
        }
        if (good) {
            out.map = AffineTorusMap{MatZ::identity(n), s.canonicalize()};
            return out;
        }
    }
    throw std::invalid_argument("no W0-invariant translation point for this class");
}

long long eta_group_order(const BasedRootDatum& datum, const WeylGroup& w0,
                          const ParameterFunction& m,
                          const std::vector<AffineReflectionClass>& classes) {
    (void)w0;
    (void)m;
    // act on a generic label state; the eta's are signed permutations of the
    // label pairs, so the action on a generic point is faithful
    std::map<AffineReflectionClass, long long> start;
    for (int i = 0; i < datum.num_roots(); ++i) {
        int orb = datum.root_orbit_ids()[i];
        start[{orb, 0}] = 3 + 10 * orb;
        if (datum.coroot_in_2Y(i)) start[{orb, 1}] = 7 + 10 * orb;
    }
    auto act = [&](const AffineReflectionClass& cls, std::map<AffineReflectionClass, long long> st) {
        bool split = st.count({cls.orbit, 1}) > 0;
        long long a = st[{cls.orbit, 0}];
        long long b = split ? st[{cls.orbit, 1}] : a;
        if (cls.parity == 0) {
            st[{cls.orbit, 0}] = -b;
            if (split) st[{cls.orbit, 1}] = -a;
        } else {
            st[{cls.orbit, 1}] = -b;
        }
        return st;
    };
    std::set<std::map<AffineReflectionClass, long long>> seen{start};
    std::vector<std::map<AffineReflectionClass, long long>> frontier{start};
    while (!frontier.empty()) {
        std::vector<std::map<AffineReflectionClass, long long>> next;
        for (auto& st : frontier)
            for (auto& cls : classes) {
                auto img = act(cls, st);
                if (seen.insert(img).second) next.push_back(img);
            }
        frontier = std::move(next);
    }
    return static_cast<long long>(seen.size());
}

LabelledAffineDiagram respectralize(const BasedRootDatum& datum, const ParameterFunction& m) {
    Standardization s = standardize(datum, m);
    return spectral_diagram(s.datum, s.m);
}

std::vector<MirrorFamily> predicted_mirrors(const BasedRootDatum& datum, const ParameterFunction& m) {
    std::vector<MirrorFamily> out;
    for (int i = 0; i < datum.num_positive(); ++i) {
        if (m.two_m_plus(i) != 0) out.push_back({i, false});
        if (m.two_m_minus(i) != 0) out.push_back({i, true});
    }
    return out;
}

std::string LabelledAffineDiagram::render() const {
    std::ostringstream os;
    for (size_t i = 0; i < nodes.size(); ++i) {
        os << "node " << i << " comp " << nodes[i].component << (nodes[i].offset ? " affine" : "")
           << " label " << nodes[i].label << (nodes[i].marked ? " *" : "") << "\n";
    }
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j) {
            long long bij = bonds(static_cast<int>(i), static_cast<int>(j));
            long long bji = bonds(static_cast<int>(j), static_cast<int>(i));
            if (bij == 0) continue;
            os << "edge " << i << " " << j << " bond " << (bij * bji);
            if (bij != bji) os << " arrow " << (bij < bji ? j : i);
            os << "\n";
        }
    os << "group " << lattice_group.str() << "\n";
    for (auto& p : group_action) {
        os << "action";
        for (int x : p) os << " " << x;
        os << "\n";
    }
    return os.str();
}

} // namespace residua
