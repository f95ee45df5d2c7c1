#pragma once

#include "residua/mu.hpp"

namespace residua {

/// Labelled affine Dynkin diagram (spectral or arithmetic side).  Nodes carry
/// the affine simple roots: gradient (functional coordinates), the vector used
/// by the reflection (dual coordinates), the affine offset, and an integer
/// label.  A finite abelian group acts by node permutations.
struct LabelledAffineDiagram {
    struct Node {
        VecZ gradient;
        VecZ refvec;
        int offset = 0;
        long long label = 0;
        bool marked = false;
        int component = 0;
    };
    std::vector<Node> nodes;
    MatZ bonds;                                  // pairings <node_i^vee, node_j>
    FinAbGroup lattice_group;                    // Omega group (X/Q or Y/Q(R_m^vee))
    std::vector<VecQ> group_elements;            // translation representatives
    std::vector<std::vector<int>> group_action;  // node permutation per element

    std::string render() const;
};

/// Spectral diagram: affine extension of R_m with labels m_R^vee and the
/// Omega_Y^vee = Y/Q(R_m^vee) action.
LabelledAffineDiagram spectral_diagram(const BasedRootDatum& datum, const ParameterFunction& m);

/// Arithmetic diagram: affine extension of R_0^vee with labels m_R, marked
/// special vertices, and the Omega_X = X/Q(R_0) action.
LabelledAffineDiagram arithmetic_diagram(const BasedRootDatum& datum, const ParameterFunction& m);

/// The scaled root system R_m = { n_m(alpha) alpha } as a based root datum on
/// the same lattice, with a map back to the original root indices.
struct RmSystem {
    BasedRootDatum datum;
    std::vector<int> root_map; // R_m index -> original root index
};
RmSystem r_m_system(const BasedRootDatum& datum, const ParameterFunction& m);

/// Standardization of semi-standard data (Lemma-level surgery: orbits with a
/// single vanishing end label get their roots doubled; mu is unchanged).
struct Standardization {
    BasedRootDatum datum;
    ParameterFunction m;
    std::vector<int> flipped_orbits;  // orbits whose m_- sign was flipped first
    std::vector<int> doubled_orbits;  // orbits replaced by twice the roots
    bool changed = false;
};
Standardization standardize(const BasedRootDatum& datum, const ParameterFunction& m);

/// Out_T(mu) = Omega_X^* x| Omega_0^Y for standard data; every element is an
/// affine torus automorphism verified to fix mu exactly.
struct OutTMu {
    struct Element {
        AffineTorusMap map;        // t -> s * g(t)
        TorusPoint translation;    // s in Omega_X^* = P(R_0^vee)/Y
        std::vector<int> sigma;    // diagram automorphism on simple positions
    };
    std::vector<Element> elements;
    long long omega_x_star_order = 1;
    long long diagram_auto_order = 1;
    // data of the exact sequence 1 -> Omega_Y^vee -> Omega_m^* x| Omega_0^Y -> Out_T(mu) -> 1
    long long omega_y_vee_order = 1;
    long long omega_m_star_order = 1;
};
OutTMu out_T_mu(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m);

/// Spectral isomorphism eta^c attached to a W-conjugacy class of affine simple
/// reflections: flips/swaps the parameters on the class and gives the torus map
/// (identity, or translation by the order-2 point s_c).
struct EtaResult {
    ParameterFunction new_m;
    AffineTorusMap map;     // T -> T
    bool is_translation;    // false: identity map (class meets S_0)
};
EtaResult spectral_isomorphism_eta(const BasedRootDatum& datum, const WeylGroup& w0,
                                   const ParameterFunction& m, const AffineReflectionClass& cls);

/// Order of the group generated by eta^c for the listed classes, acting on the
/// parameter labels (used for the dihedral-order check).
long long eta_group_order(const BasedRootDatum& datum, const WeylGroup& w0,
                          const ParameterFunction& m,
                          const std::vector<AffineReflectionClass>& classes);

/// Rebuilds a standard-preferred pair from the spectral data and returns its
/// spectral diagram (round-trip check support).
LabelledAffineDiagram respectralize(const BasedRootDatum& datum, const ParameterFunction& m);

/// mu-mirror families on the compact torus: (root index, half offset flag)
/// for every predicted mirror; present iff the matching label is nonzero.
struct MirrorFamily {
    int root;      // positive root index
    bool half;     // offset in 1/2 + Z instead of Z
};
std::vector<MirrorFamily> predicted_mirrors(const BasedRootDatum& datum, const ParameterFunction& m);

} // namespace residua
