#include "residua/residual.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace residua {

namespace {

// all size-k index combinations with incremental rational rank pruning
void combinations_with_rank(const BasedRootDatum& d, int k,
                            const std::function<void(const std::vector<int>&)>& emit) {
    const int nr = d.num_roots();
    std::vector<int> cur;
    std::vector<std::vector<VecQ>> basis_stack{{}}; // orthogonalized spans (gram-schmidt free: use rational elimination)
    // maintain row-echelon basis of chosen roots
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            emit(cur);
            return;
        }
        for (int i = start; i < nr; ++i) {
            // check root i independent of current echelon
            VecQ v(d.rank());
            for (int j = 0; j < d.rank(); ++j) v[j] = Rational(d.root(i)[j]);
            auto ech = basis_stack.back();
            for (auto& row : ech) {
                // eliminate leading coordinate of row from v
                int lead = -1;
                for (int j = 0; j < d.rank(); ++j)
                    if (!row[j].is_zero()) { lead = j; break; }
                if (lead >= 0 && !v[lead].is_zero()) {
                    Rational f = v[lead] / row[lead];
                    for (int j = 0; j < d.rank(); ++j) v[j] -= f * row[j];
                }
            }
            bool zero = true;
            for (auto& e : v)
                if (!e.is_zero()) zero = false;
            if (zero) continue;
            ech.push_back(v);
            basis_stack.push_back(std::move(ech));
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
            basis_stack.pop_back();
        }
    };
    rec(0);
}

TorusPoint canonical_orbit_rep(const WeylGroup& w0, const TorusPoint& p, std::vector<TorusPoint>* orbit) {
    std::set<TorusPoint> seen;
    for (int a = 0; a < w0.size(); ++a) seen.insert(p.acted(w0.y_action(a)));
    if (orbit) orbit->assign(seen.begin(), seen.end());
    return *seen.begin();
}

} // namespace

std::vector<ResidualPointOrbit> enumerate_residual_points(const BasedRootDatum& datum,
                                                          const WeylGroup& w0,
                                                          const ParameterFunction& m,
                                                          int rank_bound) {
    const int n = datum.rank();
    if (n > rank_bound) throw std::runtime_error("rank bound exceeded in residual enumeration");
    std::vector<ResidualPointOrbit> out;
    if (n == 0) {
        // the unique point of the trivial torus is residual (codim 0)
        out.push_back({TorusPoint::identity(0), {TorusPoint::identity(0)}});
        return out;
    }
    MuFunction mu = build_mu(datum, w0, m, NormalizingElement::one());
    std::set<TorusPoint> reps;
    std::map<TorusPoint, std::vector<TorusPoint>> orbits;

    combinations_with_rank(datum, n, [&](const std::vector<int>& roots) {
        MatZ b(n, n);
        for (int i = 0; i < n; ++i) {
            VecZ r = datum.root(roots[i]);
            for (int j = 0; j < n; ++j) b(i, j) = r[j];
        }
        for (int mask = 0; mask < (1 << n); ++mask) {
            VecQ cg(n), ct(n);
            for (int i = 0; i < n; ++i) {
                bool minus = mask & (1 << i);
                cg[i] = Rational(minus ? -m.two_m_minus(roots[i]) : -m.two_m_plus(roots[i]));
                ct[i] = minus ? Rational(1, 2) : Rational(0);
            }
            // gamma: solve <gamma, beta_i> = cg_i, i.e. B gamma = cg
            auto gamma = solve_rational(b, cg);
            if (!gamma) continue;
            bool integral = true;
            for (auto& e : *gamma)
                if (!e.is_integer()) integral = false;
            if (!integral) continue; // L-points have gamma in Y
            for (auto& tau : solve_congruences(b, ct)) {
                TorusPoint cand{tau, *gamma};
                cand.canonicalize();
                auto rep = pole_zero_sets(mu, Coset::point(cand));
                if (!rep.residual) continue;
                std::vector<TorusPoint> orbit;
                TorusPoint least = canonical_orbit_rep(w0, cand, &orbit);
                if (reps.insert(least).second) orbits[least] = std::move(orbit);
            }
        }
    });
    for (auto& r : reps) out.push_back({r, orbits[r]});
    return out;
}

TorusPoint lift_parabolic_point(const ParabolicDatum& pd, const TorusPoint& rP) {
    MatZ pt = pd.projection.transposed();
    TorusPoint base{pt.apply(rP.torsion), pt.apply(rP.gamma)};
    return base.canonicalize();
}

int ResidualCatalog::find_orbit(const Coset& L) const {
    std::string key = L.key();
    for (size_t i = 0; i < entries.size(); ++i)
        for (const auto& c : entries[i].orbit)
            if (c.key() == key) return static_cast<int>(i);
    return -1;
}

ResidualCatalog enumerate_residual_cosets(const BasedRootDatum& datum, const WeylGroup& w0,
                                          const ParameterFunction& m, int rank_bound) {
    const int n = datum.rank();
    ResidualCatalog cat;
    MuFunction mu = build_mu(datum, w0, m, NormalizingElement::one());
    std::set<std::string> seen;

    // all standard parabolic subsets
    for (int mask = 0; mask < (1 << datum.num_simple()); ++mask) {
        std::vector<int> P;
        for (int i = 0; i < datum.num_simple(); ++i)
            if (mask & (1 << i)) P.push_back(i);
        ParabolicDatum pd = parabolic_restriction(datum, P, &m);
        WeylGroup wp(pd.datum);
        auto points = enumerate_residual_points(pd.datum, wp, pd.m, rank_bound);
        for (auto& orb : points) {
            for (auto& rP : orb.orbit) {
                TorusPoint base = lift_parabolic_point(pd, rP);
                Coset L{base, pd.t_quot_cochar};
                std::string key = L.key();
                if (seen.count(key)) continue;
                // full W0-orbit
                std::map<std::string, Coset> omap;
                for (int a = 0; a < w0.size(); ++a) {
                    Coset img = L.acted(w0.y_action(a));
                    omap.emplace(img.key(), img);
                }
                bool dup = false;
                for (auto& [k, c] : omap)
                    if (seen.count(k)) dup = true;
                if (dup) continue;
                CatalogEntry e;
                e.coset = L;
                e.P = P;
                e.parabolic_point = rP;
                e.report = pole_zero_sets(mu, L);
                if (!e.report.residual)
                    throw std::logic_error("parabolic pullback produced a non-residual coset");
                for (auto& [k, c] : omap) {
                    seen.insert(k);
                    e.orbit.push_back(c);
                }
                cat.entries.push_back(std::move(e));
            }
        }
    }
    std::sort(cat.entries.begin(), cat.entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
        if (a.coset.dim() != b.coset.dim()) return a.coset.dim() > b.coset.dim();
        if (a.P != b.P) return a.P < b.P;
        return a.coset.key() < b.coset.key();
    });
    (void)n;
    return cat;
}

FormalDegree formal_degree(const MuFunction& mu, const TorusPoint& r) {
    RestrictedMu reg = regularize(mu, Coset::point(r));
    FormalDegree out;
    out.factored = reg.fn;
    auto cert = factor_into_M_linear(reg.fn);
    if (cert) {
        out.certified = true;
        out.certificate = cert->d;
        out.sign = cert->sign;
        out.order_at_one = cert->d.vexp;
        RationalFunctionV ex = cert->d.expand();
        out.value = cert->sign > 0 ? ex : RationalFunctionV::from_coprime(-ex.num(), ex.den());
        // f(1/v) = +-f(v) holds for every +-M element generator by generator;
        // cross-check numerically on the factored form
        NumericPoint dummy;
        double f2 = reg.fn.eval(dummy, 2.0).real();
        double fi2 = reg.fn.eval(dummy, 0.5).real();
        if (std::fabs(std::fabs(f2) - std::fabs(fi2)) > 1e-9 * (1 + std::fabs(f2)))
            throw std::logic_error("certified degree breaks v -> 1/v symmetry");
        return out;
    }
    // outside +-M: vanishing order and -v parity read off the factored profile
    out.certified = false;
    int ord = 0;
    for (auto& [t, e] : reg.fn.v_factors())
        if (t.is_zero()) ord = e;
    out.order_at_one = ord;
    NumericPoint dummy;
    auto f2 = reg.fn.eval(dummy, 2.0);
    auto fm2 = reg.fn.eval(dummy, -2.0);
    out.even_in_v = std::abs(f2 - fm2) < 1e-9 * (1.0 + std::abs(f2));
    return out;
}

std::vector<CentralCharacterComponent> central_character_image(const BasedRootDatum& datum,
                                                               const WeylGroup& w0,
                                                               const MuFunction& mu,
                                                               const ResidualCatalog& catalog) {
    std::vector<CentralCharacterComponent> out;
    for (size_t i = 0; i < catalog.entries.size(); ++i) {
        CentralCharacterComponent c{static_cast<int>(i),
                                    coset_groups(datum, w0, catalog.entries[i].coset),
                                    regularize(mu, catalog.entries[i].coset).fn};
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<TorusPoint> scan_residual_points_numeric(const MuFunction& mu, double v0,
                                                     int ord_bound, long long gamma_bound2,
                                                     double tol) {
    const BasedRootDatum& d = *mu.datum;
    const int n = d.rank();
    std::vector<TorusPoint> found;
    // candidate torsion values: a/b with b <= ord_bound (point order handled below)
    std::vector<Rational> tvals;
    for (long long b = 1; b <= ord_bound; ++b)
        for (long long a = 0; a < b; ++a)
            if (std::gcd(a, b) == 1) tvals.push_back(Rational(a, b));
    std::sort(tvals.begin(), tvals.end());
    // gamma values: g/2 with |g| <= gamma_bound2
    std::vector<Rational> gvals;
    for (long long g = -gamma_bound2; g <= gamma_bound2; ++g) gvals.push_back(Rational(g, 2));

    std::vector<size_t> ti(n, 0), gi(n, 0);
    std::function<void(int, TorusPoint&)> rec = [&](int pos, TorusPoint& p) {
        if (pos == n) {
            // point order bound: lcm of torsion denominators
            long long l = 1;
            for (auto& t : p.torsion) l = std::lcm(l, t.den());
            if (l > ord_bound) return;
            // numeric residual test: count vanishing den minus num factors
            int count = 0;
            for (const auto& mf : mu.factors) {
                auto [t, g] = p.evaluate(d.root(mf.root));
                double ang = 6.283185307179586476925286766559 * t.to_double();
                std::complex<double> aval =
                    std::pow(v0, g.to_double()) * std::complex<double>(std::cos(ang), std::sin(ang));
                std::complex<double> fval;
                double w = std::pow(v0, static_cast<double>(mf.vexp));
                bool plus = mf.kind == MuFactorKind::NumPlus || mf.kind == MuFactorKind::DenPlus;
                fval = 1.0 + (plus ? 1.0 : -1.0) * w / aval;
                bool vanish = std::abs(fval) < tol;
                if (!vanish) continue;
                bool denom = mf.kind == MuFactorKind::DenPlus || mf.kind == MuFactorKind::DenMinus;
                count += denom ? 1 : -1;
            }
            if (count >= n) found.push_back(p);
            return;
        }
        for (auto& t : tvals)
            for (auto& g : gvals) {
                p.torsion[pos] = t;
                p.gamma[pos] = g;
                rec(pos + 1, p);
            }
    };
    TorusPoint p = TorusPoint::identity(n);
    rec(0, p);
    std::sort(found.begin(), found.end());
    return found;
}

} // namespace residua
