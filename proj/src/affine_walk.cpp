#include "residua/affine_walk.hpp"

namespace residua {

VecQ alcove_interior(const std::vector<AffineSimple>& simples, int n) {
    std::vector<VecZ> finite;
    for (auto& s : simples)
        if (s.offset == 0) finite.push_back(s.grad);
    MatZ g = MatZ::from_rows(finite);
    VecQ one(finite.size(), Rational(1));
    auto y = solve_rational(g, one);
    if (!y) throw std::logic_error("alcove solve failed");
    Rational t(1);
    for (auto& s : simples) {
        if (s.offset == 0) continue;
        Rational val = dotqz(*y, s.grad);
        if (val >= Rational(0)) continue;
        Rational bound = Rational(s.offset) / (-val);
        if (t >= bound) t = bound * Rational(1, 2);
    }
    VecQ out(n);
    for (int i = 0; i < n; ++i) out[i] = (*y)[i] * t;
    return out;
}

AffQ alcove_normalize(const std::vector<AffineSimple>& simples, const AffQ& g, int n,
                      const VecQ& x0) {
    VecQ p = g.apply(x0);
    AffQ acc = g;
    int guard = 0;
    while (true) {
        bool moved = false;
        for (auto& s : simples) {
            if (eval_affine(s, p) < Rational(0)) {
                AffQ r = affine_reflection(s, n);
                p = r.apply(p);
                acc = r.after(acc);
                moved = true;
                break;
            }
        }
        if (!moved) break;
        if (++guard > 200000) throw std::logic_error("alcove walk did not terminate");
    }
    return acc;
}

std::vector<int> node_permutation(const std::vector<AffineSimple>& simples, const AffQ& g) {
    const int n = g.a.rows();
    MatZ ainv = unimodular_inverse(g.a);
    std::vector<int> perm(simples.size(), -1);
    for (size_t i = 0; i < simples.size(); ++i) {
        VecQ gq(n);
        for (int j = 0; j < n; ++j) gq[j] = Rational(simples[i].grad[j]);
        VecQ newgrad = ainv.transposed().apply(gq);
        Rational newoff = Rational(simples[i].offset) - dotqz(ainv.apply(g.b), simples[i].grad);
        for (size_t k = 0; k < simples.size(); ++k) {
            bool eq = newoff == Rational(simples[k].offset);
            for (int j = 0; j < n && eq; ++j)
                if (newgrad[j] != Rational(simples[k].grad[j])) eq = false;
            if (eq) {
                perm[i] = static_cast<int>(k);
                break;
            }
        }
        if (perm[i] < 0) throw std::logic_error("diagram automorphism lost a node");
    }
    return perm;
}

} // namespace residua
