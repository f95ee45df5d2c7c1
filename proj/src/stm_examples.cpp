#include "residua/stm.hpp"

namespace residua {

namespace {

// e-coordinate root bases of rank n
std::vector<VecQ> d_simples(int n) {
    std::vector<VecQ> s;
    for (int i = 0; i + 1 < n; ++i) {
        VecQ v(n, Rational(0));
        v[i] = Rational(1);
        v[i + 1] = Rational(-1);
        s.push_back(v);
    }
    VecQ v(n, Rational(0));
    v[n - 2] = Rational(1);
    v[n - 1] = Rational(1);
    s.push_back(v);
    // reorder to match standard_cartan('D', n): path 0..n-2, fork n-1 on n-3
    return s;
}

std::vector<VecQ> b_simples(int n) {
    std::vector<VecQ> s;
    for (int i = 0; i + 1 < n; ++i) {
        VecQ v(n, Rational(0));
        v[i] = Rational(1);
        v[i + 1] = Rational(-1);
        s.push_back(v);
    }
    VecQ v(n, Rational(0));
    v[n - 1] = Rational(1);
    s.push_back(v);
    return s;
}

std::vector<VecQ> c_simples(int n) {
    auto s = b_simples(n);
    s[n - 1][n - 1] = Rational(2);
    return s;
}

// coordinates of u over the given basis
VecQ in_basis(const std::vector<VecQ>& basis, const VecQ& u) {
    const int n = static_cast<int>(u.size());
    long long den = 1;
    for (auto& b : basis)
        for (auto& e : b) den = std::lcm(den, e.den());
    for (auto& e : u) den = std::lcm(den, e.den());
    MatZ cols(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) cols(i, j) = (basis[j][i] * Rational(den)).num();
    VecQ rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = u[i] * Rational(den);
    auto c = solve_rational(cols, rhs);
    if (!c) throw std::logic_error("basis solve failed");
    return *c;
}

BasedRootDatum make_datum(const char type, int n, const std::vector<VecQ>& lattice_e) {
    std::vector<VecQ> simp = type == 'D' ? d_simples(n) : (type == 'B' ? b_simples(n) : c_simples(n));
    // lattice basis rows in simple-root coordinates
    std::vector<VecQ> rows;
    for (auto& u : lattice_e) rows.push_back(in_basis(simp, u));
    return BasedRootDatum::build(std::string(1, type) + std::to_string(n),
                                 LatticeChoice::explicit_basis(rows));
}

// label a datum by sample roots given in e-coordinates
ParameterFunction label_by_samples(const BasedRootDatum& d, const std::vector<VecQ>& lattice_e,
                                   const char type, int n,
                                   const std::vector<std::pair<VecQ, std::pair<long long, long long>>>& samples) {
    std::vector<VecQ> simp = type == 'D' ? d_simples(n) : (type == 'B' ? b_simples(n) : c_simples(n));
    // X-coordinates of an e-vector: solve lattice basis
    auto xcoords = [&](const VecQ& u) {
        VecQ c = in_basis(lattice_e, u);
        VecZ z(c.size());
        for (size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_integer()) throw std::logic_error("sample root outside the lattice");
            z[i] = c[i].num();
        }
        return z;
    };
    std::map<AffineReflectionClass, long long> labels;
    for (auto& [root_e, ab] : samples) {
        int idx = d.root_index(xcoords(root_e));
        if (idx < 0) throw std::logic_error("sample root not found");
        int orb = d.root_orbit_ids()[idx];
        labels[{orb, 0}] = ab.first;
        if (d.coroot_in_2Y(idx)) labels[{orb, 1}] = ab.second;
        else if (ab.first != ab.second)
            throw std::logic_error("unequal labels on an unsplit orbit");
    }
    return ParameterFunction(d, labels);
}

} // namespace

CdSquare build_cd_square(int n) {
    if (n < 3) throw std::invalid_argument("cd square needs rank >= 3");
    CdSquare sq;
    // lattice bases in e-coordinates
    std::vector<VecQ> half(1, VecQ(n, Rational(1, 2)));
    std::vector<VecQ> padlat = half; // P(D_n) = P(B_n) = Z^n + (1/2,...,1/2)
    for (int i = 1; i < n; ++i) {
        VecQ e(n, Rational(0));
        e[i] = Rational(1);
        padlat.push_back(e);
    }
    std::vector<VecQ> zlat;
    for (int i = 0; i < n; ++i) {
        VecQ e(n, Rational(0));
        e[i] = Rational(1);
        zlat.push_back(e);
    }
    std::vector<VecQ> qdlat; // Q(D_n): e1 - e2, ..., e_{n-1} - e_n, e_{n-1} + e_n
    for (int i = 0; i + 1 < n; ++i) {
        VecQ e(n, Rational(0));
        e[i] = Rational(1);
        e[i + 1] = Rational(-1);
        qdlat.push_back(e);
    }
    {
        VecQ e(n, Rational(0));
        e[n - 2] = Rational(1);
        e[n - 1] = Rational(1);
        qdlat.push_back(e);
    }

    VecQ long_root(n, Rational(0)), short_b(n, Rational(0)), long_c(n, Rational(0));
    long_root[0] = Rational(1);
    long_root[1] = Rational(-1); // e1 - e2: D-root, B-long, C-short
    short_b[n - 1] = Rational(1);
    long_c[n - 1] = Rational(2);

    auto add_object = [&](const char type, const std::vector<VecQ>& lat,
                          std::vector<std::pair<VecQ, std::pair<long long, long long>>> samples,
                          const std::string& name) {
        BasedRootDatum d = make_datum(type, n, lat);
        ParameterFunction m = label_by_samples(d, lat, type, n, samples);
        sq.objects.push_back(NormalizedHecke::make(std::move(d), m));
        sq.names.push_back(name);
    };

    add_object('D', padlat, {{long_root, {1, 1}}}, "D_ad");
    add_object('D', zlat, {{long_root, {1, 1}}}, "D_zn");
    add_object('D', qdlat, {{long_root, {1, 1}}}, "D_sc");
    add_object('B', padlat, {{long_root, {1, 1}}, {short_b, {0, 0}}}, "B_ad");
    add_object('B', zlat, {{long_root, {1, 1}}, {short_b, {0, 0}}}, "C1");
    add_object('C', qdlat, {{long_root, {1, 1}}, {long_c, {0, 0}}}, "C_sc");

    // arrows: X_target subset X_source; char pullback A = coords of target basis
    // vectors in the source basis
    auto lattice_of = [&](int idx) -> const std::vector<VecQ>& {
        switch (idx) {
            case 0: case 3: return padlat;
            case 1: case 4: return zlat;
            default: return qdlat;
        }
    };
    auto add_arrow = [&](int from, int to, const std::string& name) {
        const auto& bsrc = lattice_of(from);
        const auto& btgt = lattice_of(to);
        MatZ a(n, n);
        for (int j = 0; j < n; ++j) {
            VecQ c = in_basis(bsrc, btgt[j]);
            for (int i = 0; i < n; ++i) {
                if (!c[i].is_integer()) throw std::logic_error("target lattice not inside source");
                a(i, j) = c[i].num();
            }
        }
        sq.arrows.push_back({from, to, STMCandidate{AffineTorusMap{a, TorusPoint::identity(n)}}, name});
    };
    add_arrow(0, 1, "Dad->Dzn");
    add_arrow(1, 2, "Dzn->Dsc");
    add_arrow(0, 3, "Dad->Bad");
    add_arrow(1, 4, "Dzn->C1");
    add_arrow(2, 5, "Dsc->Csc");
    add_arrow(3, 4, "Bad->C1");
    add_arrow(4, 5, "C1->Csc");
    return sq;
}

} // namespace residua
