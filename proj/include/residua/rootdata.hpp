#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "residua/intmat.hpp"

namespace residua {

/// Finitely generated finite abelian group given by its invariant factors
/// (divisibility chain, factors > 1), with optional explicit generators as
/// torsion vectors when the group lives inside a torus.
struct FinAbGroup {
    std::vector<long long> invariants;
    std::vector<VecQ> generator_torsion;

    long long order() const {
        __int128 o = 1;
        for (long long f : invariants) o *= f;
        return detail::checked_cast(o, "group order");
    }
    bool trivial() const { return invariants.empty(); }
    std::string str() const;
};

struct IrreducibleType {
    char letter = 'A';
    int rank = 1;
    std::string str() const { return std::string(1, letter) + std::to_string(rank); }
};

/// Lattice choice for build_root_datum.
struct LatticeChoice {
    enum Kind { RootLattice, WeightLattice, Explicit } kind = RootLattice;
    // rows = basis vectors, coordinates in the simple-root basis
    std::vector<VecQ> basis_rows;
    static LatticeChoice Q() { return {}; }
    static LatticeChoice P() { return {WeightLattice, {}}; }
    static LatticeChoice explicit_basis(std::vector<VecQ> rows) { return {Explicit, std::move(rows)}; }
};

class WeylGroup;

/// Based semisimple root datum R = (X, R0, Y, R0^vee, F0).
/// Roots are stored in coordinates of a fixed X-basis, coroots in the dual
/// basis of Y, so that the natural pairing is the integer dot product.
class BasedRootDatum {
public:
    static BasedRootDatum build(const std::string& type_expr, const LatticeChoice& lattice);
    /// Direct construction from explicit root/coroot tables (already in X/Y coords).
    static BasedRootDatum from_tables(std::vector<VecZ> roots, std::vector<VecZ> coroots,
                                      std::vector<int> simple_indices);

    int rank() const { return rank_; }
    int num_roots() const { return static_cast<int>(roots_.size()); }
    int num_positive() const { return num_roots() / 2; }

    const VecZ& root(int i) const { return roots_[i]; }
    const VecZ& coroot(int i) const { return coroots_[i]; }
    const std::vector<int>& simple_indices() const { return simple_; }
    int num_simple() const { return static_cast<int>(simple_.size()); }

    bool is_positive(int i) const { return i < num_positive(); }
    int negative_of(int i) const { return i < num_positive() ? i + num_positive() : i - num_positive(); }
    int root_index(const VecZ& r) const; // -1 when absent

    /// Cartan pairing <coroot(i), root(j)>.
    long long cartan(int i, int j) const { return dotzz(coroots_[i], roots_[j]); }

    const std::vector<std::vector<int>>& components() const { return components_; }
    int component_of_root(int i) const { return root_component_[i]; }
    const std::vector<IrreducibleType>& component_types() const { return component_types_; }
    std::string type_string() const;

    /// W0-orbits of roots (orbit id per root index).
    const std::vector<int>& root_orbit_ids() const { return orbit_of_root_; }
    int num_root_orbits() const { return num_orbits_; }

    /// True when coroot(i) is divisible by 2 inside Y.
    bool coroot_in_2Y(int i) const;

    /// Index of the highest root of a component (w.r.t. F0).
    int highest_root(int comp) const;
    /// Index of the root whose coroot is the highest root of the dual system.
    int highest_coroot_root(int comp) const;

    /// s_alpha as a matrix acting on X-coordinates.
    MatZ reflection_matrix(int root_index) const;
    /// Image index of root j under s_{root i}.
    int reflect_root(int i, int j) const;

    /// Simple-reflection decomposition data used by the Weyl enumerator.
    friend class WeylGroup;

    /// Q(R0) basis (rows, X-coords) and P(R0^vee) basis (rows, Y tensor Q coords).
    MatZ root_lattice_rows() const;
    std::vector<VecQ> coweight_lattice_rows() const;
    /// Q(R0^vee) basis (rows, Y-coords).
    MatZ coroot_lattice_rows() const;

    /// Omega_X = X / Q(R0).
    FinAbGroup omega_X() const;

private:
    void finalize();

    int rank_ = 0;
    std::vector<VecZ> roots_;   // positives first, negative_of() pairing
    std::vector<VecZ> coroots_;
    std::vector<int> simple_;
    std::vector<std::vector<int>> components_;
    std::vector<IrreducibleType> component_types_;
    std::vector<int> root_component_;
    std::vector<int> orbit_of_root_;
    int num_orbits_ = 0;
    std::map<VecZ, int> root_lookup_;
};

/// Weyl group element: matrix action on X plus a reduced word in F0-indices.
struct WeylElement {
    MatZ mx;               // x -> mx * x on X-coords
    std::vector<int> word; // indices into simple_indices()
    int length() const { return static_cast<int>(word.size()); }
};

/// Fully enumerated finite Weyl group with root permutation tables.
class WeylGroup {
public:
    static constexpr long long kDefaultBound = 51840;
    WeylGroup(const BasedRootDatum& datum, long long size_bound = kDefaultBound);

    const BasedRootDatum& datum() const { return *datum_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const WeylElement& element(int i) const { return elements_[i]; }
    int identity() const { return 0; }
    int longest() const { return longest_; }

    int index_of(const MatZ& m) const; // -1 when absent
    int multiply(int a, int b) const;  // index of ab
    int inverse(int a) const;
    int simple_reflection(int simple_pos) const; // element index of s_i

    /// Permutation of root indices induced by element a.
    const std::vector<int>& root_action(int a) const { return root_perm_[a]; }
    int act_on_root(int a, int root_index) const { return root_perm_[a][root_index]; }

    /// Action on Y-coordinates (torsion/gamma vectors): y -> (mx^-1)^T y.
    const MatZ& y_action(int a) const { return y_action_[a]; }

    int num_inversions(int a) const;

private:
    const BasedRootDatum* datum_;
    std::vector<WeylElement> elements_;
    std::vector<std::vector<int>> root_perm_;
    std::vector<MatZ> y_action_;
    std::vector<int> inverse_;
    std::map<MatZ, int> lookup_;
    int longest_ = -1;
};

/// Conjugacy classes of affine simple reflections: one per root orbit when
/// the coroot is not divisible by 2 in Y, otherwise an even and an odd class.
struct AffineReflectionClass {
    int orbit;
    int parity; // 0: s_{alpha^vee + even}, 1: s_{alpha^vee + odd}; always 0 when unsplit
    bool operator<(const AffineReflectionClass& o) const {
        return orbit != o.orbit ? orbit < o.orbit : parity < o.parity;
    }
    bool operator==(const AffineReflectionClass& o) const {
        return orbit == o.orbit && parity == o.parity;
    }
};

/// W-invariant integer parameter function m_R on the affine root system,
/// stored as labels per affine reflection class.
class ParameterFunction {
public:
    ParameterFunction() = default;
    /// labels: class -> integer; classes must cover every orbit of the datum.
    ParameterFunction(const BasedRootDatum& datum, std::map<AffineReflectionClass, long long> labels);
    static ParameterFunction constant(const BasedRootDatum& datum, long long value);

    /// m_R(alpha^vee) for root index i.
    long long label_a(int root_index) const { return a_[root_index]; }
    /// m_R(1 - alpha^vee) for root index i.
    long long label_b(int root_index) const { return b_[root_index]; }
    /// 2 m_+(alpha) and 2 m_-(alpha) (always integers).
    long long two_m_plus(int root_index) const { return a_[root_index] + b_[root_index]; }
    long long two_m_minus(int root_index) const { return a_[root_index] - b_[root_index]; }
    /// n_m(alpha) = 2 iff the two labels differ.
    int n_m(int root_index) const { return a_[root_index] != b_[root_index] ? 2 : 1; }

    bool is_zero() const;
    /// Standard: every affine simple reflection has a nonzero label.
    bool is_standard(const BasedRootDatum& datum) const;
    /// Semi-standard: for every root, m_+ != 0 or m_- != 0 (equivalently not both labels zero).
    bool is_semistandard() const;

    const std::map<AffineReflectionClass, long long>& labels() const { return labels_; }

    /// Restriction to a parabolic sub-datum (parallel root tables assumed).
    ParameterFunction restrict_to(const BasedRootDatum& sub, const std::vector<int>& root_map,
                                  const BasedRootDatum& parent) const;

private:
    std::map<AffineReflectionClass, long long> labels_;
    std::vector<long long> a_, b_;
};

/// m_W(w) = sum of m_R(alpha^vee) over inversions of w (finite part).
long long m_W(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m, int w);

/// Parabolic restriction package.
struct ParabolicDatum {
    BasedRootDatum datum;             // R_P with X_P = X / X^P
    std::vector<int> root_map;        // R_P root index -> parent root index
    std::vector<int> parent_simples;  // P as parent simple positions
    MatZ projection;                  // p x n, X-coords -> X_P-coords
    MatZ t_sub_cochar;                // rows: Y_P basis in Y-coords (T_P)
    MatZ t_quot_cochar;               // rows: Y^P basis in Y-coords (T^P)
    FinAbGroup k_group;               // K_P = T_P cap T^P with explicit torsion generators
    ParameterFunction m;              // restricted parameters (when supplied)
};

ParabolicDatum parabolic_restriction(const BasedRootDatum& datum, const std::vector<int>& P,
                                     const ParameterFunction* m = nullptr);

/// Quotient of full-rank lattices given by basis rows.
FinAbGroup lattice_quotient(const MatZ& super_rows, const MatZ& sub_rows);

/// Recognizes the Dynkin type of a Cartan matrix block (used for rendering).
std::optional<IrreducibleType> recognize_type(const MatZ& cartan);

/// Cartan matrix of a standard irreducible type, Bourbaki node order.
MatZ standard_cartan(const IrreducibleType& t);

} // namespace residua
