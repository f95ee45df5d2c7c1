#pragma once

#include <memory>

#include "residua/diagrams.hpp"
#include "residua/residual.hpp"

namespace residua {

/// A normalized affine Hecke algebra bundle: datum, enumerated Weyl group,
/// parameters, normalizer, mu, and the residual catalog.
struct NormalizedHecke {
    std::shared_ptr<BasedRootDatum> datum;
    std::shared_ptr<WeylGroup> w0;
    ParameterFunction m;
    NormalizingElement d;
    MuFunction mu;
    std::shared_ptr<ResidualCatalog> catalog;

    static NormalizedHecke make(BasedRootDatum datum, ParameterFunction m,
                                NormalizingElement d = NormalizingElement::one(),
                                bool with_catalog = true);
    int rank() const { return datum->rank(); }
};

/// Candidate spectral transfer map, stored through a lift into the residual
/// coset L (base in L, hom part mapping onto T^L).
struct STMCandidate {
    AffineTorusMap map; // source rank x target rank char pullback, base in T_2
};

struct VerificationReport {
    bool t1 = false;
    bool t2 = false;           // strict base condition phi(e) in (T_L cap L)/K_L^n
    bool t3 = false;
    bool t4 = true;            // checked only when the source is not semi-standard
    bool t4_applicable = false;
    bool essentially_strict = false; // T2 may fail but the origin sits at a special vertex
    bool valid = false;              // T1 && T2 && T3 && (T4 when applicable)
    Rational a;                      // T3 constant
    std::string failure;
    Coset image;                     // L
    PoleZeroReport image_report;
    CosetGroups image_groups;
};

/// Verified spectral transfer map (class representative).
struct SpectralTransferMap {
    const NormalizedHecke* source;
    const NormalizedHecke* target;
    STMCandidate cand;
    VerificationReport report;

    int rank_paper_convention() const { return source->rank() - 1; } // dim(T_1) - 1
    int dim_source() const { return source->rank(); }
    int corank() const { return target->rank() - source->rank(); }
};

SpectralTransferMap verify_stm(const NormalizedHecke& source, const NormalizedHecke& target,
                               const STMCandidate& cand);

/// phi_T composed with a Weyl element of the target (same class).
STMCandidate post_compose_weyl(const NormalizedHecke& target, const STMCandidate& cand, int w);

/// Equivalence phi_2 in W_{2,0} o phi_1 (modulo K_L^n translates of the lift).
bool equivalent(const SpectralTransferMap& phi1, const SpectralTransferMap& phi2);

/// Composition: the lift of psi_{T,n} o phi_T, re-verified end to end.
SpectralTransferMap compose(const SpectralTransferMap& phi, const SpectralTransferMap& psi);

/// Residual-coset correspondence induced by a verified STM.
struct CorrespondenceRow {
    int source_orbit;           // index into source catalog
    int target_orbit;           // index into target catalog
    Coset image;                // phi_T(L_1)
    int fiber_size;             // number of source-orbit cosets mapping into K^n L_2
    bool tempered_checked;      // sampled tempered forms land in the image closure
};
std::vector<CorrespondenceRow> residual_correspondence(const SpectralTransferMap& phi,
                                                       double v0 = 2.0, int samples = 40);

/// Intertwiner assignment of Prop-level exact equality phi o w_1 = w_2 o phi.
struct Intertwiners {
    std::vector<int> simple_images;   // w_2 in N_{W_{2,0}}(L) per source simple
    bool total = false;               // every w_1 in W_{1,0} admits an intertwiner
};
Intertwiners intertwiners(const SpectralTransferMap& phi);

/// Density-ratio constant of eq-level correspondence:
/// (phi|_{L1})^*(mu_2^{(K^n L2/K^n)}) = r * mu_1^{(L1)}.
Rational correspondence_constant(const SpectralTransferMap& phi, int source_orbit);

/// Rank-0 search: all W0-orbits of target residual points r with
/// d0 = lambda mu^({r}), lambda rational.
struct Rank0Morphism {
    int catalog_point_orbit;    // orbit index among enumerated residual points
    TorusPoint point;
    Rational lambda;
    SpectralTransferMap stm;
    std::shared_ptr<NormalizedHecke> rank0_source; // owns stm.source
};
std::vector<Rank0Morphism> search_rank0(const NormalizedHecke& target, const NormalizingElement& d0);

/// Covering search: STMs represented by lattice inclusions X_2 subset X_1 of
/// index <= max_index mapping the mu-data across (identity on root directions).
std::vector<SpectralTransferMap> search_coverings(const NormalizedHecke& source,
                                                  const NormalizedHecke& target);

/// Excellent-subset analysis for positive-dimensional images.
struct ExcellentSubset {
    std::vector<int> J;                        // node indices in F^m (target affine basis)
    bool excellent = false;
    std::vector<int> complement;               // F^m \ J
    std::vector<int> nu;                       // source node -> complement node bijection
    long long wstar_order_bound = 0;           // |W*| when finite (0 = infinite/affine)
    std::vector<std::pair<std::vector<int>, std::vector<int>>> facet_pairs; // I -> I' = J cup nu(I)
    bool origin_law = false;                   // subtorus image law verified on coroot spans
};
ExcellentSubset excellent_subset(const SpectralTransferMap& phi);

/// Partial-order witness verdicts.
enum class OrderVerdict { Lower, Isogenous, Fail };
OrderVerdict check_order_witness(const NormalizedHecke& h1, const NormalizedHecke& h2,
                                 const STMCandidate& phi12,
                                 const STMCandidate* phi21 = nullptr);

/// eta^c as a verified STM from (R, m, d) to (R, eta(m), d).
SpectralTransferMap eta_stm(const NormalizedHecke& source, const NormalizedHecke& target,
                            const EtaResult& eta);

/// The commuting square of type-D/B/C algebras at rank n >= 3: six objects and
/// the seven lattice-inclusion arrows between them, all with identity torus part.
struct CdSquare {
    std::vector<NormalizedHecke> objects;   // Dad, Dzn, Dsc, Bad, C1, Csc
    std::vector<std::string> names;
    struct Arrow {
        int from, to;
        STMCandidate cand;
        std::string name;
    };
    std::vector<Arrow> arrows;
};
CdSquare build_cd_square(int n = 3);

} // namespace residua
