#pragma once

#include <stdexcept>
#include <vector>

#include "residua/intmat.hpp"

namespace residua {

/// Affine transformation of a rational vector space: y -> A y + b.
struct AffQ {
    MatZ a;
    VecQ b;
    static AffQ id(int n) { return {MatZ::identity(n), VecQ(n, Rational(0))}; }
    VecQ apply(const VecQ& y) const {
        VecQ out = a.apply(y);
        for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
        return out;
    }
    AffQ after(const AffQ& inner) const {
        AffQ out;
        out.a = a * inner.a;
        out.b = a.apply(inner.b);
        for (size_t i = 0; i < b.size(); ++i) out.b[i] += b[i];
        return out;
    }
    AffQ inverse() const {
        AffQ out;
        out.a = unimodular_inverse(a);
        VecQ nb = out.a.apply(b);
        out.b.resize(nb.size());
        for (size_t i = 0; i < nb.size(); ++i) out.b[i] = -nb[i];
        return out;
    }
    bool operator==(const AffQ& o) const { return a == o.a && b == o.b; }
    bool operator<(const AffQ& o) const { return a != o.a ? a < o.a : b < o.b; }
};

/// Affine root a(y) = <grad, y> + offset with reflection y -> y - a(y) refvec.
struct AffineSimple {
    VecZ grad;
    VecZ refvec;
    int offset;
    bool operator==(const AffineSimple& o) const {
        return grad == o.grad && refvec == o.refvec && offset == o.offset;
    }
};

inline Rational eval_affine(const AffineSimple& s, const VecQ& y) {
    return dotqz(y, s.grad) + Rational(s.offset);
}

inline AffQ affine_reflection(const AffineSimple& s, int n) {
    AffQ r = AffQ::id(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.a(i, j) -= s.refvec[i] * s.grad[j];
    for (int i = 0; i < n; ++i) r.b[i] = Rational(-s.offset * s.refvec[i]);
    return r;
}

VecQ alcove_interior(const std::vector<AffineSimple>& simples, int n);
AffQ alcove_normalize(const std::vector<AffineSimple>& simples, const AffQ& g, int n, const VecQ& x0);
std::vector<int> node_permutation(const std::vector<AffineSimple>& simples, const AffQ& g);

} // namespace residua
