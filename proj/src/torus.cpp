#include "residua/torus.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>

namespace residua {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;

double circle_dist(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}
} // namespace

std::string TorusPoint::str() const {
    std::ostringstream os;
    os << "zeta=(";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << torsion[i].str();
    os << ") gamma=(";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << gamma[i].str();
    os << ")";
    return os.str();
}

bool Coset::contains(const TorusPoint& p) const {
    // p * base^-1 in T^L: annihilator characters evaluate trivially
    TorusPoint q = p.mul(base.inverse());
    MatZ ann = char_annihilator();
    for (int i = 0; i < ann.rows(); ++i) {
        auto [t, g] = q.evaluate(ann.row(i));
        if (!t.is_zero() || !g.is_zero()) return false;
    }
    return true;
}

bool Coset::same_coset(const Coset& o) const {
    if (dim() != o.dim()) return false;
    if (hermite_rows(subtorus_rows) != hermite_rows(o.subtorus_rows)) return false;
    return contains(o.base);
}

std::string Coset::key() const {
    MatZ h = hermite_rows(subtorus_rows);
    MatZ ann = char_annihilator();
    std::ostringstream os;
    os << "S[";
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) os << h(i, j) << ",";
    os << "]B[";
    for (int i = 0; i < ann.rows(); ++i) {
        auto [t, g] = base.evaluate(ann.row(i));
        os << t.str() << ";" << g.str() << ",";
    }
    os << "]";
    return os.str();
}

std::vector<int> roots_constant_on(const BasedRootDatum& datum, const Coset& L) {
    std::vector<int> out;
    for (int i = 0; i < datum.num_roots(); ++i) {
        bool constant = true;
        for (int r = 0; r < L.subtorus_rows.rows(); ++r)
            if (dotzz(L.subtorus_rows.row(r), datum.root(i)) != 0) constant = false;
        if (constant) out.push_back(i);
    }
    return out;
}

CosetGroups coset_groups(const BasedRootDatum& datum, const WeylGroup& w0, const Coset& L) {
    CosetGroups out;
    const int n = datum.rank();
    auto rl = roots_constant_on(datum, L);

    // K_L: torsion points pairing integrally with both X cap (R_L^vee)-perp
    // and X cap Q R_L
    std::vector<VecZ> stack;
    if (rl.empty()) {
        for (int i = 0; i < n; ++i) stack.push_back(MatZ::identity(n).row(i));
    } else {
        std::vector<VecZ> covecs, rvecs;
        for (int i : rl) {
            covecs.push_back(datum.coroot(i));
            rvecs.push_back(datum.root(i));
        }
        MatZ kerL = integer_kernel(MatZ::from_rows(covecs));
        for (int i = 0; i < kerL.rows(); ++i) stack.push_back(kerL.row(i));
        MatZ sat = saturate_rows(MatZ::from_rows(rvecs));
        for (int i = 0; i < sat.rows(); ++i) stack.push_back(sat.row(i));
    }
    MatZ s = MatZ::from_rows(stack);
    out.k_group.invariants = quotient_invariants(MatZ::identity(n), s);
    for (auto& tau : solve_congruences(s, VecQ(s.rows(), Rational(0)))) {
        TorusPoint p{tau, VecQ(n, Rational(0))};
        out.k_elements.push_back(p.canonicalize());
    }
    std::sort(out.k_elements.begin(), out.k_elements.end());

    // stabilizer and pointwise stabilizer in W0
    MatZ hsub = hermite_rows(L.subtorus_rows);
    for (int a = 0; a < w0.size(); ++a) {
        const MatZ& ya = w0.y_action(a);
        if (L.subtorus_rows.rows() > 0) {
            MatZ img = hermite_rows(L.subtorus_rows * ya.transposed());
            if (img != hsub) continue;
        }
        TorusPoint moved = L.base.acted(ya);
        if (!L.contains(moved)) continue;
        out.normalizer.push_back(a);
        bool fixes = (moved == TorusPoint(L.base).canonicalize());
        for (int r = 0; r < L.subtorus_rows.rows() && fixes; ++r) {
            VecZ row = L.subtorus_rows.row(r);
            VecQ rq(row.size());
            for (size_t i = 0; i < row.size(); ++i) rq[i] = Rational(row[i]);
            if (ya.apply(rq) != rq) fixes = false;
        }
        if (fixes) out.centralizer.push_back(a);
    }

    // K_L^n via N_{W(R_L)}(L)
    std::vector<int> wrl{w0.identity()};
    {
        std::set<int> seen{w0.identity()};
        std::vector<int> gens;
        for (int i : rl) {
            int idx = w0.index_of(datum.reflection_matrix(i));
            if (idx >= 0) gens.push_back(idx);
        }
        std::queue<int> work;
        work.push(w0.identity());
        while (!work.empty()) {
            int cur = work.front();
            work.pop();
            for (int g : gens) {
                int nxt = w0.multiply(cur, g);
                if (seen.insert(nxt).second) {
                    wrl.push_back(nxt);
                    work.push(nxt);
                }
            }
        }
    }
    std::set<TorusPoint> kn;
    std::map<TorusPoint, int> witness;
    MatZ ann = L.char_annihilator();
    for (int a : wrl) {
        TorusPoint moved = L.base.acted(w0.y_action(a));
        if (!L.contains(moved)) continue;
        TorusPoint diff = moved.mul(L.base.inverse()).canonicalize();
        // identify the K_L representative with the same annihilator values
        for (const auto& k : out.k_elements) {
            bool match = true;
            for (int i = 0; i < ann.rows() && match; ++i) {
                auto [t1, g1] = diff.evaluate(ann.row(i));
                auto [t2, g2] = k.evaluate(ann.row(i));
                if (t1 != t2 || g1 != g2) match = false;
            }
            if (match) {
                if (kn.insert(k).second) witness[k] = a;
                break;
            }
        }
    }
    for (auto& k : kn) {
        out.kn_elements.push_back(k);
        out.kn_witnesses.push_back(witness[k]);
    }
    return out;
}

NumericPoint specialize(const TorusPoint& p, double v0) {
    NumericPoint out;
    const int n = p.dim();
    out.coord.resize(n);
    for (int i = 0; i < n; ++i) {
        VecZ e(n, 0);
        e[i] = 1;
        out.coord[i] = p.value_at(e, v0);
    }
    return out;
}

TemperedCheck tempered_membership(const Coset& L, double v0, const NumericPoint& t, double tol) {
    const int n = L.base.dim();
    NumericPoint r = specialize(L.base, v0);
    double dist = 0;
    for (int i = 0; i < n; ++i) {
        double d = std::fabs(std::log(std::abs(t.coord[i])) - std::log(std::abs(r.coord[i])));
        dist = std::max(dist, d);
    }
    MatZ ann = L.char_annihilator();
    for (int i = 0; i < ann.rows(); ++i) {
        VecZ x = ann.row(i);
        std::complex<double> vt(1, 0), vr(1, 0);
        for (int j = 0; j < n; ++j) {
            vt *= std::pow(t.coord[j], static_cast<double>(x[j]));
            vr *= std::pow(r.coord[j], static_cast<double>(x[j]));
        }
        double d = circle_dist(std::arg(vt) / kTau, std::arg(vr) / kTau);
        dist = std::max(dist, d);
    }
    return {dist <= tol, dist};
}

std::vector<NumericPoint> sample_tempered(const Coset& L, double v0, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int n = L.base.dim();
    NumericPoint r = specialize(L.base, v0);
    std::vector<NumericPoint> out;
    out.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> phase(n, 0.0);
        for (int k = 0; k < L.subtorus_rows.rows(); ++k) {
            double c = uni(rng);
            for (int j = 0; j < n; ++j) phase[j] += c * static_cast<double>(L.subtorus_rows(k, j));
        }
        NumericPoint p;
        p.coord.resize(n);
        for (int j = 0; j < n; ++j)
            p.coord[j] = r.coord[j] * std::complex<double>(std::cos(kTau * phase[j]), std::sin(kTau * phase[j]));
        out.push_back(std::move(p));
    }
    return out;
}

double point_distance(const NumericPoint& a, const NumericPoint& b) {
    double d = 0;
    for (size_t i = 0; i < a.coord.size(); ++i) {
        double rad = std::fabs(std::log(std::abs(a.coord[i])) - std::log(std::abs(b.coord[i])));
        double ph = circle_dist(std::arg(a.coord[i]) / kTau, std::arg(b.coord[i]) / kTau);
        d = std::max(d, std::max(rad, ph));
    }
    return d;
}

double distance_to_tempered(const Coset& L, double v0, const NumericPoint& t) {
    const int n = L.base.dim();
    NumericPoint r = specialize(L.base, v0);
    double radial = 0;
    for (int i = 0; i < n; ++i)
        radial = std::max(radial, std::fabs(std::log(std::abs(t.coord[i])) - std::log(std::abs(r.coord[i]))));
    const int k = L.subtorus_rows.rows();
    std::vector<double> tphase(n), rphase(n);
    for (int i = 0; i < n; ++i) {
        tphase[i] = std::arg(t.coord[i]) / kTau;
        rphase[i] = std::arg(r.coord[i]) / kTau;
    }
    auto phase_defect = [&](const std::vector<double>& c) {
        double d = 0;
        for (int i = 0; i < n; ++i) {
            double p = rphase[i];
            for (int j = 0; j < k; ++j) p += c[j] * static_cast<double>(L.subtorus_rows(j, i));
            d = std::max(d, circle_dist(tphase[i], p));
        }
        return d;
    };
    if (k == 0) return std::max(radial, phase_defect({}));
    std::vector<double> best(k, 0.0);
    double bestd = 1e9;
    const int grid = 64;
    std::vector<int> idx(k, 0);
    while (true) {
        std::vector<double> c(k);
        for (int j = 0; j < k; ++j) c[j] = static_cast<double>(idx[j]) / grid;
        double d = phase_defect(c);
        if (d < bestd) {
            bestd = d;
            best = c;
        }
        int j = 0;
        while (j < k && ++idx[j] == grid) idx[j++] = 0;
        if (j == k) break;
    }
    double step = 1.0 / grid;
    for (int it = 0; it < 60; ++it) {
        bool improved = false;
        for (int j = 0; j < k; ++j)
            for (int s = -1; s <= 1; s += 2) {
                auto c = best;
                c[j] += s * step;
                double d = phase_defect(c);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                    improved = true;
                }
            }
        if (!improved) step /= 2;
    }
    return std::max(radial, bestd);
}

} // namespace residua
