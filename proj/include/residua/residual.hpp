#pragma once

#include "residua/mu.hpp"

namespace residua {

struct ResidualPointOrbit {
    TorusPoint representative;     // least point in the orbit under the total order
    std::vector<TorusPoint> orbit; // all W0-images
};

/// Enumerates the generic residual points of (R, m): solves n independent pole
/// conditions beta_i(r) = eps_i v^{-2 m_{eps_i}(beta_i)} over all root subsets
/// and sign vectors, filters by the full counting test, and groups the
/// survivors into W0-orbits.
std::vector<ResidualPointOrbit> enumerate_residual_points(const BasedRootDatum& datum,
                                                          const WeylGroup& w0,
                                                          const ParameterFunction& m,
                                                          int rank_bound = 4);

struct CatalogEntry {
    Coset coset;               // representative, standard position L = r T^P
    std::vector<int> P;        // standard parabolic subset (simple positions)
    TorusPoint parabolic_point; // r as a point of T_P (X_P coordinates)
    PoleZeroReport report;
    std::vector<Coset> orbit;  // all W0-images of the representative
};

struct ResidualCatalog {
    std::vector<CatalogEntry> entries; // one per W0-orbit, T first (largest dim first)
    /// index of the orbit containing the coset; -1 when absent
    int find_orbit(const Coset& L) const;
};

ResidualCatalog enumerate_residual_cosets(const BasedRootDatum& datum, const WeylGroup& w0,
                                          const ParameterFunction& m, int rank_bound = 4);

struct FormalDegree {
    FactoredTorusFunction factored{0}; // mu^({r}) in canonically factored form
    bool certified = false;            // true iff the value lies in +-M
    RationalFunctionV value;           // sign * expand(certificate) when certified
    NormalizingElement certificate;
    int sign = 1;
    int order_at_one = 0;
    bool even_in_v = true;             // f(-v) = f(v) numerically at v = 2
};

/// Computes mu^({r}) exactly and certifies membership in +-M together with the
/// symmetries f(1/v) = +-f(v), f(-v) = +-f(v).  Residual points outside the
/// discrete-series locus (special parameter ratios) come back uncertified.
FormalDegree formal_degree(const MuFunction& mu, const TorusPoint& r);

struct CentralCharacterComponent {
    int catalog_index;
    CosetGroups groups;            // N_{W0}(L), Z_{W0}(L), K_L, K_L^n
    FactoredTorusFunction density; // mu^(L) on the coset coordinates
};

std::vector<CentralCharacterComponent> central_character_image(const BasedRootDatum& datum,
                                                               const WeylGroup& w0,
                                                               const MuFunction& mu,
                                                               const ResidualCatalog& catalog);

/// Independent numeric oracle: scans the grid of points zeta * v0^gamma with
/// torsion order <= ord_bound and gamma in (1/2)Z^n, |gamma_i| <= gamma_bound,
/// counting near-vanishing mu-factors at tolerance tol.  Returns grid points
/// passing the numeric residual test.
std::vector<TorusPoint> scan_residual_points_numeric(const MuFunction& mu, double v0,
                                                     int ord_bound, long long gamma_bound2,
                                                     double tol = 1e-9);

/// Lift of a T_P-point through a parabolic package to a point of T.
TorusPoint lift_parabolic_point(const ParabolicDatum& pd, const TorusPoint& rP);

} // namespace residua
