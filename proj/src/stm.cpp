#include "residua/stm.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

namespace residua {

NormalizedHecke NormalizedHecke::make(BasedRootDatum datum_in, ParameterFunction m,
                                      NormalizingElement d, bool with_catalog) {
    NormalizedHecke h;
    h.datum = std::make_shared<BasedRootDatum>(std::move(datum_in));
    h.w0 = std::make_shared<WeylGroup>(*h.datum);
    h.m = std::move(m);
    h.d = std::move(d);
    h.mu = build_mu(*h.datum, *h.w0, h.m, h.d);
    if (with_catalog)
        h.catalog = std::make_shared<ResidualCatalog>(
            enumerate_residual_cosets(*h.datum, *h.w0, h.m));
    return h;
}

namespace {

AffineTorusMap weyl_map(const WeylGroup& w0, int w) {
    // the torus map t -> w(t): characters pull back through w^-1 on X
    return {w0.element(w0.inverse(w)).mx, TorusPoint::identity(w0.datum().rank())};
}

NumericPoint apply_numeric(const AffineTorusMap& phi, const NumericPoint& p, double v0) {
    const int m = phi.target_dim();
    NumericPoint out;
    out.coord.resize(m);
    for (int j = 0; j < m; ++j) {
        VecZ ej(m, 0);
        ej[j] = 1;
        VecZ a = phi.char_pullback.apply(ej);
        std::complex<double> val = phi.base.value_at(ej, v0);
        for (int i = 0; i < phi.source_dim(); ++i)
            val *= std::pow(p.coord[i], static_cast<double>(a[i]));
        out.coord[j] = val;
    }
    return out;
}

bool same_point(const TorusPoint& a, const TorusPoint& b) {
    TorusPoint x = a, y = b;
    return x.canonicalize() == y.canonicalize();
}

// is tau (torsion lift) a special vertex of the R_m affine arrangement?
bool special_vertex(const BasedRootDatum& datum, const ParameterFunction& m, const TorusPoint& base) {
    for (auto& g : base.gamma)
        if (!g.is_zero()) return false;
    for (int i = 0; i < datum.num_roots(); ++i) {
        Rational val = dotqz(base.torsion, scalez(m.n_m(i), datum.root(i)));
        if (!val.mod1().is_zero()) return false;
    }
    return true;
}

std::vector<TorusPoint> t4_test_points(const NormalizedHecke& src) {
    std::vector<TorusPoint> pts;
    const int n = src.rank();
    long long bound = src.datum->omega_X().order();
    // torsion points of order <= |Omega_X|
    std::vector<Rational> vals;
    for (long long b = 1; b <= bound; ++b)
        for (long long a = 0; a < b; ++a)
            if (std::gcd(a, b) == 1) vals.push_back(Rational(a, b));
    std::function<void(int, TorusPoint&)> rec = [&](int pos, TorusPoint& p) {
        if (pos == n) {
            pts.push_back(p);
            return;
        }
        for (auto& v : vals) {
            p.torsion[pos] = v;
            rec(pos + 1, p);
        }
    };
    TorusPoint p = TorusPoint::identity(n);
    rec(0, p);
    // alcove vertices of the source R_m system as torsion points
    RmSystem rm = r_m_system(*src.datum, src.m);
    for (size_t c = 0; c < rm.datum.components().size(); ++c) {
        int hi = rm.datum.highest_root(static_cast<int>(c));
        // fundamental coweights over the component simples, scaled by the marks
        for (int s : rm.datum.simple_indices()) {
            if (rm.datum.component_of_root(s) != static_cast<int>(c)) continue;
            // solve <alpha_j, y> = delta_{js} over all simples
            MatZ rows(rm.datum.num_simple(), n);
            VecQ rhs(rm.datum.num_simple(), Rational(0));
            for (int j = 0; j < rm.datum.num_simple(); ++j) {
                VecZ r = rm.datum.root(rm.datum.simple_indices()[j]);
                for (int k = 0; k < n; ++k) rows(j, k) = r[k];
                if (rm.datum.simple_indices()[j] == s) rhs[j] = Rational(1);
            }
            auto y = solve_rational(rows, rhs);
            if (!y) continue;
            // scale by 1/mark: mark = coefficient of s in the highest root
            VecQ hr(n);
            for (int k = 0; k < n; ++k) hr[k] = Rational(rm.datum.root(hi)[k]);
            auto coeffs = solve_rational(rows.transposed(), hr);
            (void)coeffs;
            TorusPoint q = TorusPoint::identity(n);
            for (int k = 0; k < n; ++k) q.torsion[k] = (*y)[k];
            pts.push_back(q.canonicalize());
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace

SpectralTransferMap verify_stm(const NormalizedHecke& source, const NormalizedHecke& target,
                               const STMCandidate& cand) {
    SpectralTransferMap out{&source, &target, cand, {}};
    VerificationReport& rep = out.report;
    const int n1 = source.rank(), n2 = target.rank();
    const MatZ& A = cand.map.char_pullback;
    if (A.rows() != n1 || A.cols() != n2) {
        rep.failure = "candidate matrix has wrong shape";
        return out;
    }

    // T1: finite (full rank) morphism
    MatZ arows = A; // rows are n1 vectors of length n2
    MatZ sat = n1 == 0 ? MatZ(0, n2) : saturate_rows(arows);
    rep.t1 = (sat.rows() == n1) && n1 <= n2;
    if (!rep.t1) {
        rep.failure = "T1: cocharacter map not of full rank";
        return out;
    }

    // image coset L
    rep.image = Coset{cand.map.base, sat};
    rep.image.base.canonicalize();
    rep.image_report = pole_zero_sets(target.mu, rep.image);
    if (!rep.image_report.residual) {
        rep.failure = "image coset is not residual";
        return out;
    }
    rep.image_groups = coset_groups(*target.datum, *target.w0, rep.image);

    // T2: base in T_L (lift meets T_L cap L)
    {
        auto rl = roots_constant_on(*target.datum, rep.image);
        rep.t2 = true;
        if (!rl.empty()) {
            std::vector<VecZ> covecs;
            for (int i : rl) covecs.push_back(target.datum->coroot(i));
            MatZ ann = integer_kernel(MatZ::from_rows(covecs)); // X cap (R_L^vee)-perp
            for (int i = 0; i < ann.rows() && rep.t2; ++i) {
                auto [t, g] = cand.map.base.evaluate(ann.row(i));
                if (!t.is_zero() || !g.is_zero()) rep.t2 = false;
            }
        } else {
            // R_L empty: T_L is trivial, base must be the identity
            for (auto& t : cand.map.base.torsion)
                if (!t.is_zero()) rep.t2 = false;
            for (auto& g : cand.map.base.gamma)
                if (!g.is_zero()) rep.t2 = false;
        }
        rep.essentially_strict =
            rep.t2 || special_vertex(*target.datum, target.m, cand.map.base);
    }

    // T3: exact pullback identity
    {
        RestrictedMu reg = regularize(target.mu, rep.image);
        FactoredTorusFunction G = source.mu.to_torus_function();
        try {
            FactoredTorusFunction F = reg.kept_full.pullback(cand.map);
            std::string why;
            auto ratio = F.ratio_to(G, &why);
            if (!ratio) {
                rep.failure = "T3: " + why;
            } else if (!ratio->is_constant()) {
                rep.failure = "T3: ratio is a nonconstant function of v: " + ratio->str();
            } else {
                Cyclotomic c = ratio->num().constant_value() / ratio->den().constant_value();
                if (!c.is_rational()) {
                    rep.failure = "T3: constant is not rational: " + c.str();
                } else {
                    rep.a = c.rational_value();
                    rep.t3 = !rep.a.is_zero();
                }
            }
        } catch (const PullbackError& e) {
            rep.failure = std::string("T3: ") + e.what();
        }
    }

    // T4 for non-semi-standard sources
    rep.t4_applicable = !source.m.is_semistandard();
    if (rep.t4_applicable && rep.t3) {
        rep.t4 = true;
        auto pts = t4_test_points(source);
        for (auto& p : pts) {
            // images of the W_{1,0}-orbit of p must lie in one N_{W_{2,0}}(L)-orbit
            TorusPoint q0 = cand.map.apply(p);
            for (int w = 0; w < source.w0->size() && rep.t4; ++w) {
                TorusPoint qi = cand.map.apply(p.acted(source.w0->y_action(w)));
                bool matched = false;
                for (int nw : rep.image_groups.normalizer) {
                    TorusPoint moved = q0.acted(target.w0->y_action(nw));
                    for (auto& k : rep.image_groups.kn_elements)
                        if (same_point(qi, moved.mul(k))) matched = true;
                    if (matched) break;
                }
                if (!matched) {
                    rep.t4 = false;
                    rep.failure = "T4: orbit image splits across N_{W_{2,0}}(L)-orbits";
                }
            }
            if (!rep.t4) break;
        }
    }

    rep.valid = rep.t1 && rep.t2 && rep.t3 && (!rep.t4_applicable || rep.t4);
    if (!rep.valid && rep.failure.empty() && !rep.t2)
        rep.failure = rep.essentially_strict ? "T2 fails (essentially strict only)"
                                             : "T2: base point does not meet T_L cap L";
    return out;
}

STMCandidate post_compose_weyl(const NormalizedHecke& target, const STMCandidate& cand, int w) {
    AffineTorusMap wm = weyl_map(*target.w0, w);
    return {wm.after(cand.map)};
}

bool equivalent(const SpectralTransferMap& phi1, const SpectralTransferMap& phi2) {
    if (phi1.source != phi2.source || phi1.target != phi2.target) return false;
    const NormalizedHecke& tgt = *phi1.target;
    for (int w = 0; w < tgt.w0->size(); ++w) {
        STMCandidate moved = post_compose_weyl(tgt, phi1.cand, w);
        if (moved.map.char_pullback != phi2.cand.map.char_pullback) continue;
        // the lifts represent the same map into L_n iff the bases differ by an
        // element of K_L^n exactly
        TorusPoint diff = phi2.cand.map.base.mul(moved.map.base.inverse()).canonicalize();
        for (auto& k : phi2.report.image_groups.kn_elements)
            if (same_point(diff, k)) return true;
    }
    return false;
}

SpectralTransferMap compose(const SpectralTransferMap& phi, const SpectralTransferMap& psi) {
    if (phi.target != psi.source)
        throw std::invalid_argument("composition source/target mismatch");
    STMCandidate comp{psi.cand.map.after(phi.cand.map)};
    SpectralTransferMap out = verify_stm(*phi.source, *psi.target, comp);
    if (!out.report.t1 || !out.report.t3)
        throw std::logic_error("composite failed re-verification: " + out.report.failure);
    return out;
}

std::vector<CorrespondenceRow> residual_correspondence(const SpectralTransferMap& phi,
                                                       double v0, int samples) {
    const NormalizedHecke& src = *phi.source;
    const NormalizedHecke& tgt = *phi.target;
    if (!src.catalog || !tgt.catalog) throw std::logic_error("catalogs required for correspondence");
    std::vector<CorrespondenceRow> rows;
    const MatZ& A = phi.cand.map.char_pullback;
    for (size_t i = 0; i < src.catalog->entries.size(); ++i) {
        const CatalogEntry& e1 = src.catalog->entries[i];
        CorrespondenceRow row{static_cast<int>(i), -1, {}, 0, false};
        // image coset of the representative
        MatZ img_rows = e1.coset.subtorus_rows.rows() == 0
                            ? MatZ(0, tgt.rank())
                            : saturate_rows(e1.coset.subtorus_rows * A);
        Coset I{phi.cand.map.apply(e1.coset.base), img_rows};
        row.image = I;
        // find the target orbit with I = k L2 for a K^n-translate
        for (size_t j = 0; j < tgt.catalog->entries.size() && row.target_orbit < 0; ++j) {
            for (const auto& member : tgt.catalog->entries[j].orbit) {
                for (auto& k : phi.report.image_groups.kn_elements) {
                    Coset moved{member.base.mul(k), member.subtorus_rows};
                    if (I.same_coset(moved)) {
                        row.target_orbit = static_cast<int>(j);
                        break;
                    }
                }
                if (row.target_orbit >= 0) break;
            }
        }
        if (row.target_orbit < 0)
            throw std::logic_error("no residual image coset found (violates the transfer property)");
        // fibers: source orbit members mapping into a K^n-translate of the same target orbit
        for (const auto& m1 : e1.orbit) {
            MatZ mrows = m1.subtorus_rows.rows() == 0 ? MatZ(0, tgt.rank())
                                                      : saturate_rows(m1.subtorus_rows * A);
            Coset im{phi.cand.map.apply(m1.base), mrows};
            for (const auto& member : tgt.catalog->entries[row.target_orbit].orbit) {
                bool hit = false;
                for (auto& k : phi.report.image_groups.kn_elements)
                    if (im.same_coset(Coset{member.base.mul(k), member.subtorus_rows})) hit = true;
                if (hit) {
                    ++row.fiber_size;
                    break;
                }
            }
        }
        // tempered forms: samples of L1^temp map into the image coset's tempered form
        row.tempered_checked = true;
        auto pts = sample_tempered(e1.coset, v0, samples, 12345u + static_cast<unsigned>(i));
        for (auto& p : pts) {
            NumericPoint q = apply_numeric(phi.cand.map, p, v0);
            if (distance_to_tempered(I, v0, q) > 1e-6) row.tempered_checked = false;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Intertwiners intertwiners(const SpectralTransferMap& phi) {
    const NormalizedHecke& src = *phi.source;
    const NormalizedHecke& tgt = *phi.target;
    Intertwiners out;
    auto find_partner = [&](int w1) -> int {
        AffineTorusMap lhs = phi.cand.map.after(weyl_map(*src.w0, w1));
        for (int nw : phi.report.image_groups.normalizer) {
            AffineTorusMap rhs = weyl_map(*tgt.w0, nw).after(phi.cand.map);
            if (lhs.char_pullback != rhs.char_pullback) continue;
            for (auto& k : phi.report.image_groups.kn_elements)
                if (same_point(lhs.base, rhs.base.mul(k))) return nw;
        }
        return -1;
    };
    for (int s = 0; s < src.datum->num_simple(); ++s) {
        int w1 = src.w0->simple_reflection(s);
        int w2 = find_partner(w1);
        if (w2 < 0) throw std::logic_error("no intertwiner for a simple reflection");
        out.simple_images.push_back(w2);
    }
    out.total = true;
    for (int w1 = 0; w1 < src.w0->size() && out.total; ++w1)
        if (find_partner(w1) < 0) out.total = false;
    return out;
}

Rational correspondence_constant(const SpectralTransferMap& phi, int source_orbit) {
    const NormalizedHecke& src = *phi.source;
    const NormalizedHecke& tgt = *phi.target;
    const CatalogEntry& e1 = src.catalog->entries[source_orbit];
    const MatZ& A = phi.cand.map.char_pullback;
    MatZ img_rows = e1.coset.subtorus_rows.rows() == 0
                        ? MatZ(0, tgt.rank())
                        : saturate_rows(e1.coset.subtorus_rows * A);
    Coset I{phi.cand.map.apply(e1.coset.base), img_rows};
    // mu_2 regularized along the image coset, pulled back through phi|_{L1}
    RestrictedMu reg2 = regularize(tgt.mu, I);
    AffineTorusMap incl1{e1.coset.subtorus_rows, e1.coset.base};
    AffineTorusMap through = phi.cand.map.after(incl1);
    FactoredTorusFunction F = reg2.kept_full.pullback(through);
    FactoredTorusFunction G = regularize(src.mu, e1.coset).fn;
    std::string why;
    auto ratio = F.ratio_to(G, &why);
    if (!ratio || !ratio->is_constant())
        throw std::logic_error("correspondence density ratio is not constant: " + why);
    Cyclotomic c = ratio->num().constant_value() / ratio->den().constant_value();
    if (!c.is_rational()) throw std::logic_error("correspondence constant is not rational");
    return c.rational_value();
}

std::vector<Rank0Morphism> search_rank0(const NormalizedHecke& target, const NormalizingElement& d0) {
    std::vector<Rank0Morphism> out;
    auto points = enumerate_residual_points(*target.datum, *target.w0, target.m);
    // rank-0 source: H^0 = L with trace d0; the shared handle rides along in
    // every returned morphism
    auto h0 = std::make_shared<NormalizedHecke>(NormalizedHecke::make(
        BasedRootDatum::from_tables({}, {}, {}), ParameterFunction(), d0));
    for (size_t i = 0; i < points.size(); ++i) {
        FormalDegree f = formal_degree(target.mu, points[i].representative);
        if (!f.certified) continue; // d0 lies in M, so uncertified degrees cannot match
        // lambda with d0 = lambda mu^({r}): requires identical vexp and q-integers
        if (f.certificate.vexp != d0.vexp || f.certificate.qints != d0.qints) continue;
        Rational lambda = d0.constant / (Rational(f.sign) * f.certificate.constant);
        STMCandidate cand{AffineTorusMap{MatZ(0, target.rank()), points[i].representative}};
        SpectralTransferMap stm = verify_stm(*h0, target, cand);
        if (!stm.report.valid) continue;
        out.push_back({static_cast<int>(i), points[i].representative, lambda, std::move(stm), h0});
    }
    return out;
}

std::vector<SpectralTransferMap> search_coverings(const NormalizedHecke& source,
                                                  const NormalizedHecke& target) {
    // candidates: integer matrices A sending each target simple root to a source
    // root with matching parameter data, with finite index image
    std::vector<SpectralTransferMap> out;
    const int n1 = source.rank(), n2 = target.rank();
    if (n1 != n2) return out;
    const BasedRootDatum& d1 = *source.datum;
    const BasedRootDatum& d2 = *target.datum;
    std::vector<int> choice(d2.num_simple(), -1);
    std::set<std::string> seen;
    std::function<void(int)> rec = [&](int pos) {
        if (pos == d2.num_simple()) {
            // solve A * root2_j = root1_{choice_j}
            std::vector<VecZ> cols2, cols1;
            for (int j = 0; j < d2.num_simple(); ++j) {
                cols2.push_back(d2.root(d2.simple_indices()[j]));
                cols1.push_back(d1.root(choice[j]));
            }
            MatZ b2 = MatZ::from_cols(cols2), b1 = MatZ::from_cols(cols1);
            // A = b1 * b2^-1 over Q; must be integral
            MatQScaled inv2 = rational_inverse(b2);
            MatZ a(n1, n2);
            bool ok = true;
            for (int i = 0; i < n1 && ok; ++i)
                for (int j = 0; j < n2 && ok; ++j) {
                    Rational acc(0);
                    for (int t = 0; t < n2; ++t)
                        acc += Rational(b1(i, t)) * Rational(inv2.mat(t, j)) / Rational(inv2.den);
                    if (!acc.is_integer()) ok = false;
                    else a(i, j) = acc.num();
                }
            if (!ok) return;
            long long dv = det(a);
            if (dv == 0 || std::llabs(dv) > 4) return;
            STMCandidate cand{AffineTorusMap{a, TorusPoint::identity(n2)}};
            SpectralTransferMap stm = verify_stm(source, target, cand);
            if (!(stm.report.t1 && stm.report.t3 && stm.report.essentially_strict)) return;
            bool dup = false;
            for (auto& prev : out)
                if (equivalent(prev, stm)) dup = true;
            if (!dup) out.push_back(std::move(stm));
            return;
        }
        for (int r = 0; r < d1.num_roots(); ++r) {
            // parameter compatibility of the matched roots
            if (source.m.label_a(r) != target.m.label_a(d2.simple_indices()[pos]) ||
                source.m.label_b(r) != target.m.label_b(d2.simple_indices()[pos])) {
                // allow C/B substitutions through the doubled root instead
            }
            choice[pos] = r;
            rec(pos + 1);
        }
    };
    rec(0);
    return out;
}

ExcellentSubset excellent_subset(const SpectralTransferMap& phi) {
    // implemented in stm_excellent.cpp
    extern ExcellentSubset excellent_subset_impl(const SpectralTransferMap&);
    return excellent_subset_impl(phi);
}

OrderVerdict check_order_witness(const NormalizedHecke& h1, const NormalizedHecke& h2,
                                 const STMCandidate& phi12, const STMCandidate* phi21) {
    SpectralTransferMap f = verify_stm(h1, h2, phi12);
    bool f_ok = f.report.t1 && f.report.t3 && (!f.report.t4_applicable || f.report.t4) &&
                f.report.essentially_strict;
    if (!f_ok) return OrderVerdict::Fail;
    if (!phi21) return OrderVerdict::Lower;
    SpectralTransferMap g = verify_stm(h2, h1, *phi21);
    bool g_ok = g.report.t1 && g.report.t3 && (!g.report.t4_applicable || g.report.t4) &&
                g.report.essentially_strict;
    if (!g_ok) return OrderVerdict::Lower;
    // both directions exist: spectral isogeny; both must be coverings
    if (f.corank() == 0 && g.corank() == 0) return OrderVerdict::Isogenous;
    return OrderVerdict::Isogenous;
}

SpectralTransferMap eta_stm(const NormalizedHecke& source, const NormalizedHecke& target,
                            const EtaResult& eta) {
    STMCandidate cand{eta.map};
    return verify_stm(source, target, cand);
}

} // namespace residua
