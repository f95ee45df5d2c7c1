#pragma once

#include <optional>

#include "residua/laurent.hpp"
#include "residua/torus.hpp"

namespace residua {

/// Affine map between (cosets of) tori: phi(s) = base * hom(s), where the
/// homomorphism pulls a target character lam back to the source character
/// A * lam, and the base point contributes its value on lam.
struct AffineTorusMap {
    MatZ char_pullback; // src_dim x dst_dim
    TorusPoint base;    // point of the target
    int source_dim() const { return char_pullback.rows(); }
    int target_dim() const { return char_pullback.cols(); }

    static AffineTorusMap identity(int n) {
        return {MatZ::identity(n), TorusPoint::identity(n)};
    }
    TorusPoint apply(const TorusPoint& p) const {
        // torsion/gamma of the image on target characters: <tau_img, lam> =
        // <tau_base, lam> + <tau_p, A lam>
        int m = target_dim();
        TorusPoint img = base;
        for (int j = 0; j < m; ++j) {
            VecZ ej(m, 0);
            ej[j] = 1;
            VecZ a = char_pullback.apply(ej); // A e_j? (column j)
            img.torsion[j] = (img.torsion[j] + dotqz(p.torsion, a)).mod1();
            img.gamma[j] = img.gamma[j] + dotqz(p.gamma, a);
        }
        return img;
    }
    /// Composition (this after inner): characters pull back through inner's matrix.
    AffineTorusMap after(const AffineTorusMap& inner) const {
        AffineTorusMap out;
        out.char_pullback = inner.char_pullback * char_pullback;
        out.base = apply(inner.base);
        return out;
    }
};

struct PullbackError : std::runtime_error {
    explicit PullbackError(const std::string& w) : std::runtime_error(w) {}
};

/// Canonically factored function on an l-dimensional torus over L:
///   cst * v^vexp * x^xmono * prod (1 - zeta v)^e * prod (1 - zeta v^j x^lam)^e
/// with every x-binomial irreducible (lambda lex-positive, gcd(content, j) = 1)
/// and every v-binomial linear.  This is an exact UFD representation, so two
/// functions agree iff all fields agree.
class FactoredTorusFunction {
public:
    struct BinKey {
        Rational zeta; // root-of-unity exponent in [0,1)
        int vexp;
        VecZ lam;
        bool operator<(const BinKey& o) const {
            if (lam != o.lam) return lam < o.lam;
            if (vexp != o.vexp) return vexp < o.vexp;
            return zeta < o.zeta;
        }
        bool operator==(const BinKey& o) const {
            return zeta == o.zeta && vexp == o.vexp && lam == o.lam;
        }
    };

    explicit FactoredTorusFunction(int dim)
        : dim_(dim), cst_(Rational(1)), vexp_(0), xmono_(dim, 0) {}

    int dim() const { return dim_; }
    const Cyclotomic& constant() const { return cst_; }
    int v_monomial() const { return vexp_; }
    const VecZ& x_monomial() const { return xmono_; }
    const std::map<Rational, int>& v_factors() const { return vfactors_; }
    const std::map<BinKey, int>& x_factors() const { return xfactors_; }

    void mul_constant(const Cyclotomic& c);
    void mul_monomial(int vexp, const VecZ& x);
    /// (1 - e^{2 pi i t} v^j)^e
    void mul_v_binomial(Rational t, int j, int e);
    /// (1 - e^{2 pi i t} v^j x^lam)^e; lam = 0 delegates to the v-binomial path.
    void mul_x_binomial(Rational t, int j, VecZ lam, int e);
    void mul_normalizing(const NormalizingElement& d, int e = 1);
    void mul(const FactoredTorusFunction& o, int e = 1);

    FactoredTorusFunction pullback(const AffineTorusMap& phi) const;

    bool operator==(const FactoredTorusFunction& o) const {
        return dim_ == o.dim_ && cst_ == o.cst_ && vexp_ == o.vexp_ && xmono_ == o.xmono_ &&
               vfactors_ == o.vfactors_ && xfactors_ == o.xfactors_;
    }

    /// If *this = ratio(v) * g with ratio free of the torus variables, returns
    /// ratio; otherwise nullopt (and a witness description when asked).
    std::optional<RationalFunctionV> ratio_to(const FactoredTorusFunction& g,
                                              std::string* witness = nullptr) const;

    /// The function as an element of K when it has no torus dependence.
    RationalFunctionV as_rational_function() const;

    std::complex<double> eval(const NumericPoint& p, double v0) const;

    std::string str() const;

private:
    int dim_;
    Cyclotomic cst_;
    int vexp_;
    VecZ xmono_;
    std::map<Rational, int> vfactors_;
    std::map<BinKey, int> xfactors_;
};

/// Ledger factor of mu: (1 + sign v^k x^{-alpha}) occurrences from c_m c_m^{w0}.
enum class MuFactorKind { NumPlus, NumMinus, DenPlus, DenMinus };

struct MuFactor {
    int root;
    MuFactorKind kind;
    long long vexp; // k
};

/// Macdonald c-function factors of a single root (numerator binomials and the
/// (1 - alpha^-2) denominator are implicit from the kind).
struct CFactors {
    int root;
    long long num_plus_vexp;  // (1 + v^{-2 m_-} alpha^-1)
    long long num_minus_vexp; // (1 - v^{-2 m_+} alpha^-1)
};
CFactors c_factors(const BasedRootDatum& datum, const ParameterFunction& m, int root);

/// The mu-function in ledger form: v^{-2 m_W(w0)} d / (c_m c_m^{w0}).
struct MuFunction {
    const BasedRootDatum* datum;
    const WeylGroup* w0;
    ParameterFunction m;
    NormalizingElement d;
    int prefactor_vexp;
    std::vector<MuFactor> factors; // stable order: by root index, then kind

    FactoredTorusFunction to_torus_function() const;
    std::string str() const;
};

MuFunction build_mu(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m,
                    const NormalizingElement& d);

struct PoleZeroReport {
    std::vector<int> p_plus, p_minus, z_plus, z_minus;
    int lhs = 0;
    int codim = 0;
    bool residual = false;
    bool equality = false;
};

PoleZeroReport pole_zero_sets(const MuFunction& mu, const Coset& L);

/// Regularization mu^(L): removes the vanishing/blowing factors indexed by the
/// pole/zero sets and restricts to L (coordinates = the subtorus cocharacter
/// basis of the coset).  Throws unless L is residual or force = true.
struct RestrictedMu {
    FactoredTorusFunction fn;        // on dim(L) coordinates
    FactoredTorusFunction kept_full; // the same function before restriction (dim of T)
    PoleZeroReport report;
    std::vector<MuFactor> kept;      // surviving ledger entries
};
RestrictedMu regularize(const MuFunction& mu, const Coset& L, bool force = false);

/// Certification of a variable-free factored function as an element of +-M',
/// working directly on the linear v-factors (no polynomial expansion).
std::optional<MFactorization> factor_into_M_linear(const FactoredTorusFunction& f);

/// Exact check of the splitting of mu^(L) through a standard parabolic:
/// mu^(L) = mu^({r})_{R_P, m_P, d} * v^{-2 m_W(w^P)} / prod_{a in R0+ \ R_P+} c_a c_a^{w^P}.
/// Returns the two sides for inspection; they must be equal.
struct MuSplit {
    FactoredTorusFunction lhs;
    FactoredTorusFunction rhs;
    bool equal;
};
MuSplit split_mu(const MuFunction& mu, const Coset& L, const std::vector<int>& P);

} // namespace residua
