#pragma once

#include <complex>
#include <string>
#include <vector>

#include "residua/rootdata.hpp"

namespace residua {

/// Point of the diagonalizable scheme T over L: the character x takes the value
///   x(p) = e^{2 pi i <torsion, x>} * v^{<gamma, x>}.
/// Both vectors live in Y tensor Q (dual coordinates); an L-point of T has
/// integral gamma.
struct TorusPoint {
    VecQ torsion;
    VecQ gamma;

    static TorusPoint identity(int n) { return {VecQ(n, Rational(0)), VecQ(n, Rational(0))}; }
    int dim() const { return static_cast<int>(torsion.size()); }

    TorusPoint& canonicalize() {
        for (auto& t : torsion) t = t.mod1();
        return *this;
    }
    TorusPoint mul(const TorusPoint& o) const {
        TorusPoint r = *this;
        for (int i = 0; i < dim(); ++i) {
            r.torsion[i] = (r.torsion[i] + o.torsion[i]).mod1();
            r.gamma[i] += o.gamma[i];
        }
        return r;
    }
    TorusPoint inverse() const {
        TorusPoint r = *this;
        for (int i = 0; i < dim(); ++i) {
            r.torsion[i] = (-r.torsion[i]).mod1();
            r.gamma[i] = -r.gamma[i];
        }
        return r;
    }
    bool is_L_point() const {
        for (const auto& g : gamma)
            if (!g.is_integer()) return false;
        return true;
    }
    /// (root-of-unity exponent mod 1, v-exponent) of x(p).
    std::pair<Rational, Rational> evaluate(const VecZ& x) const {
        return {dotqz(torsion, x).mod1(), dotqz(gamma, x)};
    }
    /// Weyl action through a Y-side matrix.
    TorusPoint acted(const MatZ& y_matrix) const {
        TorusPoint r{y_matrix.apply(torsion), y_matrix.apply(gamma)};
        return r.canonicalize();
    }
    std::complex<double> value_at(const VecZ& x, double v0) const {
        auto [t, g] = evaluate(x);
        double ang = 6.283185307179586476925286766559 * t.to_double();
        return std::pow(v0, g.to_double()) * std::complex<double>(std::cos(ang), std::sin(ang));
    }

    bool operator==(const TorusPoint& o) const { return torsion == o.torsion && gamma == o.gamma; }
    bool operator<(const TorusPoint& o) const {
        return torsion != o.torsion ? torsion < o.torsion : gamma < o.gamma;
    }
    std::string str() const;
};

/// Coset L = base * T^L of a subtorus; the subtorus is recorded by the rows of
/// its cocharacter lattice inside Y (saturated).
struct Coset {
    TorusPoint base;
    MatZ subtorus_rows; // k x n, k = dim L

    int dim() const { return subtorus_rows.rows(); }
    int codim() const { return base.dim() - dim(); }
    static Coset point(TorusPoint p) {
        int n = p.dim();
        return {std::move(p), MatZ(0, n)};
    }
    static Coset full(int n) { return {TorusPoint::identity(n), MatZ::identity(n)}; }

    /// X-side annihilator of the subtorus (characters constant on L), saturated rows.
    MatZ char_annihilator() const {
        if (subtorus_rows.rows() == 0) return MatZ::identity(base.dim());
        return integer_kernel(subtorus_rows);
    }
    bool contains(const TorusPoint& p) const;
    bool same_coset(const Coset& o) const;
    /// Canonical dedup key.
    std::string key() const;
    Coset acted(const MatZ& y_matrix) const {
        MatZ rows = subtorus_rows.rows() == 0 ? subtorus_rows
                                              : hermite_rows(subtorus_rows * y_matrix.transposed());
        return {base.acted(y_matrix), rows};
    }
};

/// Roots of the datum that are constant on L.
std::vector<int> roots_constant_on(const BasedRootDatum& datum, const Coset& L);

/// Stabilizer data and the finite groups attached to a residual coset.
struct CosetGroups {
    std::vector<int> normalizer;           // N_{W0}(L) element indices
    std::vector<int> centralizer;          // Z_{W0}(L) element indices
    std::vector<TorusPoint> k_elements;    // K_L = T_L cap T^L as torsion points
    std::vector<TorusPoint> kn_elements;   // K_L^n subset of K_L
    std::vector<int> kn_witnesses;         // Weyl elements inducing kn (in W(R_L))
    FinAbGroup k_group;                    // invariant factors of K_L
};

/// Computes K_L, K_L^n, N/Z stabilizers.  The coset base must lie in T_L
/// (standard catalog presentations do).
CosetGroups coset_groups(const BasedRootDatum& datum, const WeylGroup& w0, const Coset& L);

/// Numeric point of T_v0 given by the complex values of the basis characters.
struct NumericPoint {
    std::vector<std::complex<double>> coord;
};

NumericPoint specialize(const TorusPoint& p, double v0);

/// Tempered membership: is t in L^temp at v0?  Returns the sup-norm defect.
struct TemperedCheck {
    bool member;
    double distance;
};
TemperedCheck tempered_membership(const Coset& L, double v0, const NumericPoint& t, double tol = 1e-9);

/// Deterministic sample of points on L^temp at v0.
std::vector<NumericPoint> sample_tempered(const Coset& L, double v0, int count, unsigned seed);

/// Sup distance between two numeric points (log-radial and circular phase parts).
double point_distance(const NumericPoint& a, const NumericPoint& b);

/// Distance from a point to the tempered form of a coset at v0 (exact in the
/// radial directions, minimized over the compact directions).
double distance_to_tempered(const Coset& L, double v0, const NumericPoint& t);

} // namespace residua
