#include "residua/rootdata.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace residua {

std::string FinAbGroup::str() const {
    if (invariants.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < invariants.size(); ++i) {
        if (i) out += " x ";
        out += "Z/" + std::to_string(invariants[i]);
    }
    return out;
}

MatZ standard_cartan(const IrreducibleType& t) {
    const int n = t.rank;
    auto path = [&](MatZ& c) {
        for (int i = 0; i + 1 < n; ++i) {
            c(i, i + 1) = -1;
            c(i + 1, i) = -1;
        }
    };
    MatZ c(n, n);
    for (int i = 0; i < n; ++i) c(i, i) = 2;
    switch (t.letter) {
        case 'A':
            path(c);
            break;
        case 'B': // alpha_n short: <alpha_n^vee, alpha_{n-1}> = -2
            if (n < 2) throw std::invalid_argument("B rank >= 2");
            path(c);
            c(n - 1, n - 2) = -2;
            break;
        case 'C': // alpha_n long: <alpha_{n-1}^vee, alpha_n> = -2
            if (n < 2) throw std::invalid_argument("C rank >= 2");
            path(c);
            c(n - 2, n - 1) = -2;
            break;
        case 'D':
            if (n < 3) throw std::invalid_argument("D rank >= 3");
            for (int i = 0; i + 2 < n; ++i) {
                c(i, i + 1) = -1;
                c(i + 1, i) = -1;
            }
            c(n - 3, n - 1) = -1;
            c(n - 1, n - 3) = -1;
            break;
        case 'E': {
            if (n < 6 || n > 8) throw std::invalid_argument("E rank in {6,7,8}");
            // Bourbaki: chain 1-3-4-5-6(-7-8), node 2 attached to 4
            auto link = [&](int i, int j) {
                c(i - 1, j - 1) = -1;
                c(j - 1, i - 1) = -1;
            };
            link(1, 3);
            link(3, 4);
            link(4, 5);
            link(5, 6);
            if (n >= 7) link(6, 7);
            if (n == 8) link(7, 8);
            link(2, 4);
            break;
        }
        case 'F': {
            if (n != 4) throw std::invalid_argument("F rank 4");
            path(c);
            // alpha_2 long, alpha_3 short: <alpha_3^vee, alpha_2> = -2
            c(2, 1) = -2;
            c(1, 2) = -1;
            break;
        }
        case 'G': {
            if (n != 2) throw std::invalid_argument("G rank 2");
            // alpha_1 short, alpha_2 long: <alpha_1^vee, alpha_2> = -3
            c(0, 1) = -3;
            c(1, 0) = -1;
            break;
        }
        default:
            throw std::invalid_argument(std::string("unknown type letter ") + t.letter);
    }
    return c;
}

namespace {

std::vector<IrreducibleType> parse_type_expr(const std::string& expr) {
    std::vector<IrreducibleType> out;
    size_t i = 0;
    while (i < expr.size()) {
        if (expr[i] == 'x' || expr[i] == '*' || expr[i] == '+' || expr[i] == ' ') {
            ++i;
            continue;
        }
        char letter = expr[i];
        if (letter < 'A' || letter > 'G' || letter == 'H' )
            throw std::invalid_argument("bad type letter in '" + expr + "'");
        ++i;
        size_t j = i;
        while (j < expr.size() && isdigit(expr[j])) ++j;
        if (j == i) throw std::invalid_argument("missing rank in '" + expr + "'");
        int rank = std::stoi(expr.substr(i, j - i));
        if (rank < 1) throw std::invalid_argument("bad rank in '" + expr + "'");
        out.push_back({letter, rank});
        i = j;
    }
    if (out.empty()) throw std::invalid_argument("empty type expression");
    return out;
}

struct GeneratedSystem {
    std::vector<VecZ> roots_q;   // Q-basis coordinates
    std::vector<VecZ> coroots_q; // functional rows on Q-basis
};

GeneratedSystem generate_roots(const MatZ& cartan) {
    const int n = cartan.rows();
    GeneratedSystem g;
    std::map<VecZ, int> seen;
    std::queue<int> work;
    for (int i = 0; i < n; ++i) {
        VecZ r(n, 0), rv(n);
        r[i] = 1;
        rv = cartan.row(i);
        seen[r] = static_cast<int>(g.roots_q.size());
        g.roots_q.push_back(r);
        g.coroots_q.push_back(rv);
        work.push(static_cast<int>(g.roots_q.size()) - 1);
    }
    while (!work.empty()) {
        int cur = work.front();
        work.pop();
        for (int j = 0; j < n; ++j) {
            // s_j(beta) = beta - <alpha_j^vee, beta> alpha_j
            long long pair = 0;
            for (int k = 0; k < n; ++k) pair += cartan(j, k) * g.roots_q[cur][k];
            VecZ nr = g.roots_q[cur];
            nr[j] -= pair;
            if (seen.count(nr)) continue;
            VecZ nv = g.coroots_q[cur];
            long long pv = nv[j]; // <beta^vee, alpha_j>
            for (int k = 0; k < n; ++k) nv[k] -= pv * cartan(j, k);
            seen[nr] = static_cast<int>(g.roots_q.size());
            g.roots_q.push_back(nr);
            g.coroots_q.push_back(nv);
            work.push(static_cast<int>(g.roots_q.size()) - 1);
        }
    }
    return g;
}

} // namespace

BasedRootDatum BasedRootDatum::build(const std::string& type_expr, const LatticeChoice& lattice) {
    auto types = parse_type_expr(type_expr);
    int n = 0;
    for (auto& t : types) n += t.rank;
    MatZ cartan(n, n);
    {
        int off = 0;
        for (auto& t : types) {
            MatZ block = standard_cartan(t);
            for (int i = 0; i < t.rank; ++i)
                for (int j = 0; j < t.rank; ++j) cartan(off + i, off + j) = block(i, j);
            off += t.rank;
        }
    }

    // X-basis columns in simple-root coordinates
    std::vector<VecQ> basis_cols(n, VecQ(n, Rational(0)));
    switch (lattice.kind) {
        case LatticeChoice::RootLattice:
            for (int i = 0; i < n; ++i) basis_cols[i][i] = Rational(1);
            break;
        case LatticeChoice::WeightLattice: {
            // columns of C^-1
            for (int j = 0; j < n; ++j) {
                VecQ e(n, Rational(0));
                e[j] = Rational(1);
                auto sol = solve_rational(cartan, e);
                if (!sol) throw std::logic_error("singular Cartan matrix");
                basis_cols[j] = *sol;
            }
            break;
        }
        case LatticeChoice::Explicit: {
            if (static_cast<int>(lattice.basis_rows.size()) != n)
                throw std::invalid_argument("explicit basis must have rank-many rows");
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(lattice.basis_rows[i].size()) != n)
                    throw std::invalid_argument("explicit basis row has wrong length");
                basis_cols[i] = lattice.basis_rows[i]; // column i = i-th basis vector
            }
            break;
        }
    }

    GeneratedSystem g = generate_roots(cartan);

    // convert: root X-coords solve  B u = root_q ; coroot Y-coords = row * B
    int m = static_cast<int>(g.roots_q.size());
    // clear denominators of basis to integer matrix with scale
    long long scale = 1;
    for (auto& col : basis_cols)
        for (auto& e : col) scale = std::lcm(scale, e.den());
    MatZ bz(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational s = basis_cols[j][i] * Rational(scale);
            bz(i, j) = s.num();
        }

    std::vector<VecZ> roots(m, VecZ(n)), coroots(m, VecZ(n));
    for (int r = 0; r < m; ++r) {
        VecQ rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = Rational(g.roots_q[r][i]) * Rational(scale);
        auto u = solve_rational(bz, rhs);
        if (!u) throw std::logic_error("basis not invertible");
        for (int i = 0; i < n; ++i) {
            if (!(*u)[i].is_integer())
                throw std::invalid_argument("lattice does not contain the root lattice Q(R0)");
            roots[r][i] = (*u)[i].num();
        }
        for (int j = 0; j < n; ++j) {
            Rational acc(0);
            for (int i = 0; i < n; ++i) acc += Rational(g.coroots_q[r][i]) * basis_cols[j][i];
            if (!acc.is_integer())
                throw std::invalid_argument("lattice is not contained in the weight lattice P(R0)");
            coroots[r][j] = acc.num();
        }
    }
    std::vector<int> simple_positions(n);
    std::iota(simple_positions.begin(), simple_positions.end(), 0); // generator order == first n entries
    BasedRootDatum d = from_tables(std::move(roots), std::move(coroots), simple_positions);

    // record component types from the parsed expression (keeps B2 vs C2 apart)
    std::vector<IrreducibleType> generator_type;
    for (auto& t : types)
        for (int i = 0; i < t.rank; ++i) generator_type.push_back(t);
    d.component_types_.assign(d.components().size(), IrreducibleType{});
    for (int k = 0; k < d.num_simple(); ++k)
        d.component_types_[d.component_of_root(d.simple_indices()[k])] = generator_type[k];
    return d;
}

BasedRootDatum BasedRootDatum::from_tables(std::vector<VecZ> roots, std::vector<VecZ> coroots,
                                           std::vector<int> simple_indices) {
    BasedRootDatum d;
    d.rank_ = roots.empty() ? 0 : static_cast<int>(roots[0].size());
    if (static_cast<int>(simple_indices.size()) != d.rank_)
        throw std::invalid_argument("semisimple datum needs rank-many simple roots");

    // fetch simple roots/coroots by value before reordering
    std::vector<VecZ> simple_roots, simple_coroots;
    for (int s : simple_indices) {
        simple_roots.push_back(roots[s]);
        simple_coroots.push_back(coroots[s]);
    }
    const int ns = static_cast<int>(simple_roots.size());

    // decompose each root over the simple roots to split positives/negatives
    MatZ smat = MatZ::from_cols(simple_roots);
    struct Entry {
        VecZ root, coroot;
        VecZ simple_coords;
        long long height;
    };
    std::vector<Entry> pos;
    for (size_t i = 0; i < roots.size(); ++i) {
        VecQ rhs(d.rank_);
        for (int k = 0; k < d.rank_; ++k) rhs[k] = Rational(roots[i][k]);
        auto c = solve_rational(smat, rhs);
        if (!c) throw std::invalid_argument("root outside the span of the simple system");
        VecZ cc(ns);
        long long h = 0;
        int sgn = 0;
        for (int k = 0; k < ns; ++k) {
            if (!(*c)[k].is_integer())
                throw std::invalid_argument("F0 is not a base for the given roots");
            cc[k] = (*c)[k].num();
            h += cc[k];
            if (cc[k] > 0) {
                if (sgn < 0) throw std::invalid_argument("mixed-sign root decomposition");
                sgn = 1;
            } else if (cc[k] < 0) {
                if (sgn > 0) throw std::invalid_argument("mixed-sign root decomposition");
                sgn = -1;
            }
        }
        if (sgn > 0) pos.push_back({roots[i], coroots[i], cc, h});
    }
    if (2 * pos.size() != roots.size())
        throw std::invalid_argument("root set is not symmetric");

    std::sort(pos.begin(), pos.end(), [](const Entry& a, const Entry& b) {
        if (a.height != b.height) return a.height < b.height;
        return a.simple_coords < b.simple_coords;
    });

    for (auto& e : pos) {
        d.roots_.push_back(e.root);
        d.coroots_.push_back(e.coroot);
    }
    for (auto& e : pos) {
        d.roots_.push_back(negz(e.root));
        d.coroots_.push_back(negz(e.coroot));
    }
    d.finalize();

    for (auto& sr : simple_roots) {
        int idx = d.root_index(sr);
        if (idx < 0) throw std::logic_error("lost a simple root");
        d.simple_.push_back(idx);
    }
    // invariants: <alpha^vee, alpha> = 2 and Cartan integers in range
    for (int i = 0; i < d.num_roots(); ++i) {
        if (dotzz(d.coroots_[i], d.roots_[i]) != 2)
            throw std::invalid_argument("coroot pairing <a^vee, a> != 2");
    }
    return d;
}

void BasedRootDatum::finalize() {
    root_lookup_.clear();
    for (int i = 0; i < num_roots(); ++i) root_lookup_[roots_[i]] = i;

    // components: connect roots i, j when <i^vee, j> != 0
    int nr = num_roots();
    std::vector<int> comp(nr, -1);
    int nc = 0;
    for (int i = 0; i < nr; ++i) {
        if (comp[i] >= 0) continue;
        std::queue<int> q;
        q.push(i);
        comp[i] = nc;
        while (!q.empty()) {
            int cur = q.front();
            q.pop();
            for (int j = 0; j < nr; ++j) {
                if (comp[j] >= 0) continue;
                if (dotzz(coroots_[cur], roots_[j]) != 0 || j == negative_of(cur)) {
                    comp[j] = nc;
                    q.push(j);
                }
            }
        }
        ++nc;
    }
    root_component_ = comp;
    components_.assign(nc, {});
    for (int i = 0; i < nr; ++i) components_[comp[i]].push_back(i);

    // orbits under W0 via simple-reflection closure on indices; simples are
    // not known yet at first call, so use all reflections (same orbits).
    orbit_of_root_.assign(nr, -1);
    num_orbits_ = 0;
    for (int i = 0; i < nr; ++i) {
        if (orbit_of_root_[i] >= 0) continue;
        std::queue<int> q;
        q.push(i);
        orbit_of_root_[i] = num_orbits_;
        while (!q.empty()) {
            int cur = q.front();
            q.pop();
            for (int s = 0; s < nr; ++s) {
                int img = reflect_root(s, cur);
                if (orbit_of_root_[img] < 0) {
                    orbit_of_root_[img] = num_orbits_;
                    q.push(img);
                }
            }
        }
        ++num_orbits_;
    }
}

int BasedRootDatum::root_index(const VecZ& r) const {
    auto it = root_lookup_.find(r);
    return it == root_lookup_.end() ? -1 : it->second;
}

std::string BasedRootDatum::type_string() const {
    if (component_types_.empty()) {
        // lazily recognize
        auto* self = const_cast<BasedRootDatum*>(this);
        for (size_t c = 0; c < components_.size(); ++c) {
            // collect simples of the component in order
            std::vector<int> simp;
            for (int s : simple_) {
                if (root_component_[s] == static_cast<int>(c)) simp.push_back(s);
            }
            MatZ cart(static_cast<int>(simp.size()), static_cast<int>(simp.size()));
            for (size_t i = 0; i < simp.size(); ++i)
                for (size_t j = 0; j < simp.size(); ++j)
                    cart(static_cast<int>(i), static_cast<int>(j)) = cartan(simp[i], simp[j]);
            auto t = recognize_type(cart);
            if (!t) throw std::logic_error("unrecognized component type");
            self->component_types_.push_back(*t);
        }
    }
    std::string out;
    for (size_t i = 0; i < component_types_.size(); ++i) {
        if (i) out += "x";
        out += component_types_[i].str();
    }
    return out;
}

bool BasedRootDatum::coroot_in_2Y(int i) const {
    for (long long c : coroots_[i])
        if (c % 2 != 0) return false;
    return true;
}

int BasedRootDatum::highest_root(int compidx) const {
    std::vector<VecZ> cols;
    for (int s : simple_) cols.push_back(roots_[s]);
    MatZ smat = MatZ::from_cols(cols);
    int best = -1;
    long long besth = -1;
    for (int i : components_[compidx]) {
        if (!is_positive(i)) continue;
        VecQ rhs(rank_);
        for (int k = 0; k < rank_; ++k) rhs[k] = Rational(roots_[i][k]);
        auto c = solve_rational(smat, rhs);
        long long h = 0;
        for (auto& e : *c) h += e.num();
        if (h > besth) {
            besth = h;
            best = i;
        }
    }
    return best;
}

int BasedRootDatum::highest_coroot_root(int compidx) const {
    // highest element of the dual system: maximize coroot height over the
    // simple coroot basis
    std::vector<VecZ> cols;
    for (int s : simple_) cols.push_back(coroots_[s]);
    MatZ smat = MatZ::from_cols(cols);
    int best = -1;
    Rational besth(-1);
    for (int i : components_[compidx]) {
        if (!is_positive(i)) continue;
        VecQ rhs(rank_);
        for (int k = 0; k < rank_; ++k) rhs[k] = Rational(coroots_[i][k]);
        auto c = solve_rational(smat, rhs);
        if (!c) throw std::logic_error("coroot outside simple coroot span");
        Rational h(0);
        for (auto& e : *c) h += e;
        if (besth < h) {
            besth = h;
            best = i;
        }
    }
    return best;
}

MatZ BasedRootDatum::reflection_matrix(int root_index) const {
    MatZ s = MatZ::identity(rank_);
    const VecZ& a = roots_[root_index];
    const VecZ& av = coroots_[root_index];
    for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j) s(i, j) -= a[i] * av[j];
    return s;
}

int BasedRootDatum::reflect_root(int i, int j) const {
    long long pair = dotzz(coroots_[i], roots_[j]);
    VecZ img = subz(roots_[j], scalez(pair, roots_[i]));
    int idx = root_index(img);
    if (idx < 0) throw std::logic_error("reflection left the root set");
    return idx;
}

MatZ BasedRootDatum::root_lattice_rows() const {
    std::vector<VecZ> rows;
    for (int s : simple_) rows.push_back(roots_[s]);
    return MatZ::from_rows(rows);
}

MatZ BasedRootDatum::coroot_lattice_rows() const {
    std::vector<VecZ> rows;
    for (int s : simple_) rows.push_back(coroots_[s]);
    return MatZ::from_rows(rows);
}

std::vector<VecQ> BasedRootDatum::coweight_lattice_rows() const {
    // dual basis to the simple roots: rows y_i with <y_i, alpha_j> = delta_ij
    MatZ smat = MatZ::from_cols([&] {
        std::vector<VecZ> cols;
        for (int s : simple_) cols.push_back(roots_[s]);
        return cols;
    }());
    std::vector<VecQ> rows;
    for (int i = 0; i < rank_; ++i) {
        VecQ e(rank_, Rational(0));
        e[i] = Rational(1);
        auto y = solve_rational(smat.transposed(), e);
        if (!y) throw std::logic_error("simple roots do not span");
        rows.push_back(*y);
    }
    return rows;
}

FinAbGroup BasedRootDatum::omega_X() const {
    return lattice_quotient(MatZ::identity(rank_), root_lattice_rows());
}

// ---------------------------------------------------------------------------

WeylGroup::WeylGroup(const BasedRootDatum& datum, long long size_bound) : datum_(&datum) {
    const int n = datum.rank();
    std::vector<MatZ> gens;
    for (int s : datum.simple_indices()) gens.push_back(datum.reflection_matrix(s));

    MatZ id = MatZ::identity(n);
    elements_.push_back({id, {}});
    std::vector<MatZ> inverses{id};
    lookup_[id] = 0;
    std::queue<int> work;
    work.push(0);
    while (!work.empty()) {
        int cur = work.front();
        work.pop();
        for (size_t i = 0; i < gens.size(); ++i) {
            MatZ m = elements_[cur].mx * gens[i];
            if (lookup_.count(m)) continue;
            if (static_cast<long long>(elements_.size()) >= size_bound)
                throw std::runtime_error("Weyl group size bound exceeded");
            WeylElement e;
            e.mx = m;
            e.word = elements_[cur].word;
            e.word.push_back(static_cast<int>(i));
            lookup_[m] = static_cast<int>(elements_.size());
            elements_.push_back(std::move(e));
            inverses.push_back(gens[i] * inverses[cur]);
            work.push(static_cast<int>(elements_.size()) - 1);
        }
    }

    root_perm_.resize(elements_.size());
    y_action_.resize(elements_.size());
    std::vector<int> inv_index(elements_.size());
    for (size_t a = 0; a < elements_.size(); ++a) {
        auto it = lookup_.find(inverses[a]);
        if (it == lookup_.end()) throw std::logic_error("inverse not enumerated");
        inv_index[a] = it->second;
    }
    inverse_ = std::move(inv_index);
    for (size_t a = 0; a < elements_.size(); ++a) {
        root_perm_[a].resize(datum.num_roots());
        for (int r = 0; r < datum.num_roots(); ++r) {
            VecZ img = elements_[a].mx.apply(datum.root(r));
            int idx = datum.root_index(img);
            if (idx < 0) throw std::logic_error("Weyl action left the root set");
            root_perm_[a][r] = idx;
        }
        y_action_[a] = elements_[inverse_[a]].mx.transposed();
    }
    for (size_t a = 0; a < elements_.size(); ++a) {
        if (num_inversions(static_cast<int>(a)) == datum.num_positive()) {
            longest_ = static_cast<int>(a);
            break;
        }
    }
    if (longest_ < 0 && datum.num_positive() == 0) longest_ = 0;
    if (longest_ < 0) throw std::logic_error("longest element not found");
}

int WeylGroup::index_of(const MatZ& m) const {
    auto it = lookup_.find(m);
    return it == lookup_.end() ? -1 : it->second;
}

int WeylGroup::multiply(int a, int b) const {
    MatZ m = elements_[a].mx * elements_[b].mx;
    int idx = index_of(m);
    if (idx < 0) throw std::logic_error("product not in enumerated group");
    return idx;
}

int WeylGroup::inverse(int a) const { return inverse_[a]; }

int WeylGroup::simple_reflection(int simple_pos) const {
    MatZ m = datum_->reflection_matrix(datum_->simple_indices()[simple_pos]);
    int idx = index_of(m);
    if (idx < 0) throw std::logic_error("simple reflection missing");
    return idx;
}

int WeylGroup::num_inversions(int a) const {
    int count = 0;
    for (int r = 0; r < datum_->num_positive(); ++r)
        if (!datum_->is_positive(root_perm_[a][r])) ++count;
    return count;
}

// ---------------------------------------------------------------------------

ParameterFunction::ParameterFunction(const BasedRootDatum& datum,
                                     std::map<AffineReflectionClass, long long> labels)
    : labels_(std::move(labels)) {
    const int nr = datum.num_roots();
    a_.assign(nr, 0);
    b_.assign(nr, 0);
    for (int i = 0; i < nr; ++i) {
        int orb = datum.root_orbit_ids()[i];
        bool split = datum.coroot_in_2Y(i);
        auto it0 = labels_.find({orb, 0});
        if (it0 == labels_.end())
            throw std::invalid_argument("missing label for root orbit " + std::to_string(orb));
        a_[i] = it0->second;
        auto it1 = labels_.find({orb, 1});
        if (it1 != labels_.end()) {
            if (!split)
                throw std::invalid_argument("odd-parity label on a non-split orbit (labels not W-invariant)");
            b_[i] = it1->second;
        } else {
            b_[i] = a_[i];
        }
    }
    // drop redundant explicit odd labels equal on unsplit orbits is impossible
}

ParameterFunction ParameterFunction::constant(const BasedRootDatum& datum, long long value) {
    std::map<AffineReflectionClass, long long> labels;
    for (int i = 0; i < datum.num_roots(); ++i) {
        int orb = datum.root_orbit_ids()[i];
        labels[{orb, 0}] = value;
        if (datum.coroot_in_2Y(i)) labels[{orb, 1}] = value;
    }
    return ParameterFunction(datum, std::move(labels));
}

bool ParameterFunction::is_zero() const {
    for (auto& [c, v] : labels_)
        if (v != 0) return false;
    return true;
}

bool ParameterFunction::is_standard(const BasedRootDatum& datum) const {
    // every affine simple reflection: finite nodes carry label_a of the simple
    // roots, affine nodes carry the odd-class label of the highest dual root.
    for (int s : datum.simple_indices())
        if (a_[s] == 0) return false;
    for (size_t c = 0; c < datum.components().size(); ++c) {
        int th = datum.highest_coroot_root(static_cast<int>(c));
        if (b_[th] == 0) return false;
    }
    return true;
}

bool ParameterFunction::is_semistandard() const {
    for (size_t i = 0; i < a_.size(); ++i)
        if (a_[i] == 0 && b_[i] == 0) return false;
    return true;
}

ParameterFunction ParameterFunction::restrict_to(const BasedRootDatum& sub,
                                                 const std::vector<int>& root_map,
                                                 const BasedRootDatum& parent) const {
    (void)parent;
    std::map<AffineReflectionClass, long long> labels;
    for (int i = 0; i < sub.num_roots(); ++i) {
        int orb = sub.root_orbit_ids()[i];
        long long av = a_[root_map[i]];
        long long bv = b_[root_map[i]];
        labels[{orb, 0}] = av;
        if (sub.coroot_in_2Y(i)) labels[{orb, 1}] = bv;
        else if (av != bv)
            throw std::logic_error("restriction breaks label invariance");
    }
    return ParameterFunction(sub, std::move(labels));
}

long long m_W(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m, int w) {
    long long acc = 0;
    for (int r = 0; r < datum.num_positive(); ++r)
        if (!datum.is_positive(w0.act_on_root(w, r))) acc += m.label_a(r);
    return acc;
}

// ---------------------------------------------------------------------------

ParabolicDatum parabolic_restriction(const BasedRootDatum& datum, const std::vector<int>& P,
                                     const ParameterFunction* m) {
    const int n = datum.rank();
    ParabolicDatum out;
    for (int p : P) out.parent_simples.push_back(p);

    // roots supported on P
    std::vector<int> proots;
    {
        std::vector<VecZ> cols;
        for (int p : P) cols.push_back(datum.root(datum.simple_indices()[p]));
        for (int i = 0; i < datum.num_roots(); ++i) {
            if (cols.empty()) break;
            MatZ smat = MatZ::from_cols(cols);
            VecQ rhs(n);
            for (int k = 0; k < n; ++k) rhs[k] = Rational(datum.root(i)[k]);
            auto c = solve_rational(smat, rhs);
            if (c) proots.push_back(i);
        }
    }

    const int p = static_cast<int>(P.size());
    // kernel of coroot pairings: X^L
    MatZ corows(p, n);
    for (int i = 0; i < p; ++i) {
        VecZ cv = datum.coroot(datum.simple_indices()[P[i]]);
        for (int j = 0; j < n; ++j) corows(i, j) = cv[j];
    }
    MatZ xL = integer_kernel(corows); // rows span X^L = X cap (R_P^vee)-perp

    // projection pi: X -> X_P, kernel X^L
    MatZ proj = (p == 0) ? MatZ(0, n) : integer_kernel(xL.rows() == 0 ? MatZ(0, n) : xL);

    std::vector<VecZ> sroots, scoroots;
    for (int i : proots) {
        sroots.push_back(proj.apply(datum.root(i)));
        // coroot gamma: solve proj^T gamma = coroot
        VecQ rhs(n);
        VecZ cv = datum.coroot(i);
        for (int k = 0; k < n; ++k) rhs[k] = Rational(cv[k]);
        auto g = solve_rational(proj.transposed(), rhs);
        if (!g) throw std::logic_error("coroot not in Y_P span");
        VecZ gz(p);
        for (int k = 0; k < p; ++k) {
            if (!(*g)[k].is_integer()) throw std::logic_error("coroot not integral on X_P");
            gz[k] = (*g)[k].num();
        }
        scoroots.push_back(gz);
    }
    std::vector<int> simple_pos;
    for (int i = 0; i < static_cast<int>(proots.size()); ++i) {
        for (int q : P)
            if (proots[i] == datum.simple_indices()[q]) simple_pos.push_back(i);
    }
    // from_tables reorders roots; build then recompute root_map
    BasedRootDatum sub = p == 0
        ? BasedRootDatum::from_tables({}, {}, {})
        : BasedRootDatum::from_tables(sroots, scoroots, simple_pos);
    out.root_map.assign(sub.num_roots(), -1);
    for (int i = 0; i < static_cast<int>(proots.size()); ++i) {
        int idx = sub.root_index(proj.apply(datum.root(proots[i])));
        if (idx < 0) throw std::logic_error("projected root lost");
        out.root_map[idx] = proots[i];
    }
    out.datum = std::move(sub);
    out.projection = proj;

    // T_P cocharacters: rows of proj as Y-vectors; T^P cocharacters: Y cap roots-perp
    out.t_sub_cochar = proj;
    {
        MatZ rootrows(p == 0 ? 0 : static_cast<int>(P.size()), n);
        for (int i = 0; i < static_cast<int>(P.size()); ++i) {
            VecZ rv = datum.root(datum.simple_indices()[P[i]]);
            for (int j = 0; j < n; ++j) rootrows(i, j) = rv[j];
        }
        out.t_quot_cochar = p == 0 ? MatZ::identity(n) : integer_kernel(rootrows);
    }

    // K_P = dual of X / (X^L + X cap QR_P)
    {
        std::vector<VecZ> stack;
        for (int i = 0; i < xL.rows(); ++i) stack.push_back(xL.row(i));
        if (p > 0) {
            std::vector<VecZ> rows;
            for (int q : P) rows.push_back(datum.root(datum.simple_indices()[q]));
            MatZ sat = saturate_rows(MatZ::from_rows(rows));
            for (int i = 0; i < sat.rows(); ++i) stack.push_back(sat.row(i));
        }
        MatZ s = stack.empty() ? MatZ::identity(n) : MatZ::from_rows(stack);
        out.k_group.invariants = quotient_invariants(MatZ::identity(n), s);
        auto elems = solve_congruences(s, VecQ(s.rows(), Rational(0)));
        out.k_group.generator_torsion = elems;
    }

    if (m) out.m = m->restrict_to(out.datum, out.root_map, datum);
    return out;
}

FinAbGroup lattice_quotient(const MatZ& super_rows, const MatZ& sub_rows) {
    FinAbGroup g;
    g.invariants = quotient_invariants(super_rows, sub_rows);
    return g;
}

std::optional<IrreducibleType> recognize_type(const MatZ& cartan) {
    const int n = cartan.rows();
    if (n > 8) return std::nullopt; // permutation search; ranks beyond E8 not needed
    std::vector<IrreducibleType> candidates;
    candidates.push_back({'A', n});
    if (n >= 2) candidates.push_back({'B', n});
    if (n >= 2) candidates.push_back({'C', n});
    if (n >= 3) candidates.push_back({'D', n});
    if (n >= 6 && n <= 8) candidates.push_back({'E', n});
    if (n == 4) candidates.push_back({'F', n});
    if (n == 2) candidates.push_back({'G', n});

    std::vector<int> perm(n);
    for (auto& cand : candidates) {
        MatZ target = standard_cartan(cand);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if (cartan(perm[i], perm[j]) != target(i, j)) ok = false;
            if (ok) return cand;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return std::nullopt;
}

} // namespace residua
