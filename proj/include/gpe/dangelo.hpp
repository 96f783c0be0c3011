#pragma once

#include <complex>
#include <map>
#include <vector>

#include "gpe/arith.hpp"
#include "gpe/geometry.hpp"

namespace gpe {

/// coeff * z^exponent, one component of a formal monomial vector.
struct FormalMonomial {
    SurdScalar coeff;
    MultiIndex exponent;
};

using FormalVector = std::vector<FormalMonomial>;

/// (z_1, ..., z_m) as formal monomials.
inline FormalVector formal_variables(unsigned m) {
    FormalVector v;
    v.reserve(m);
    for (unsigned i = 0; i < m; ++i) {
        std::vector<unsigned> e(m, 0);
        e[i] = 1;
        v.push_back({SurdScalar(1), MultiIndex(e)});
    }
    return v;
}

/// All pairwise products a_mu * b_nu, second factor outermost:
/// (a_1 b_1, a_2 b_1, ..., a_n b_1, a_1 b_2, ..., a_n b_n).
/// Duplicates are not collected.
inline FormalVector tensor_product(const FormalVector& a, const FormalVector& b) {
    FormalVector out;
    out.reserve(a.size() * b.size());
    for (const auto& bn : b) {
        for (const auto& am : a) {
            std::vector<unsigned> e = am.exponent.entries;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += bn.exponent.entries[i];
            out.push_back({surd_mul(am.coeff, bn.coeff), MultiIndex(std::move(e))});
        }
    }
    return out;
}

inline FormalVector tensor_square(const FormalVector& v) { return tensor_product(v, v); }

/// (z_1,...,z_m) tensored M times, uncollected; length m^M.
inline FormalVector tensor_power(unsigned m, unsigned M) {
    if (M < 1) throw std::invalid_argument("tensor_power: M must be >= 1");
    const FormalVector vars = formal_variables(m);
    FormalVector acc = vars;
    for (unsigned k = 1; k < M; ++k) acc = tensor_product(acc, vars);
    return acc;
}

/// The degree-M homogeneous map with collected monomials:
/// one component sqrt(M!/p!) z^p per |p| = M, in the canonical monomial order.
struct MonomialMap {
    unsigned source_dim = 0;
    unsigned degree = 0;
    std::vector<FormalMonomial> terms;

    [[nodiscard]] unsigned target_dim() const { return static_cast<unsigned>(terms.size()); }
};

/// Build H_M on C^m.  The collecting unitary is never materialized: the
/// collected coefficient of the class p is the square root of its
/// multiplicity M!/p! in the raw tensor power.
inline MonomialMap h_map(unsigned m, unsigned M) {
    if (m < 1) throw std::invalid_argument("h_map: m must be >= 1");
    if (M < 1) throw std::invalid_argument("h_map: M must be >= 1");
    MonomialMap map;
    map.source_dim = m;
    map.degree = M;
    for (const auto& p : enumerate_degree(m, M))
        map.terms.push_back({SurdScalar::sqrt_of(coeff_C_squared(M, p)), p});
    return map;
}

/// Componentwise numeric evaluation.
inline CBlock eval_h(const MonomialMap& h, const CBlock& z) {
    if (z.size() != h.source_dim) throw ShapeMismatch("eval_h: wrong source dimension");
    CBlock out;
    out.reserve(h.terms.size());
    for (const auto& t : h.terms) {
        Complex v = t.coeff.to_complex();
        for (unsigned i = 0; i < h.source_dim; ++i)
            for (unsigned k = 0; k < t.exponent[i]; ++k) v *= z[i];
        out.push_back(v);
    }
    return out;
}

/// ||H_M(z)||^2 at a Gaussian-rational point, exactly:
/// sum over terms of |coeff|^2 * prod |z_i|^{2 p_i}.
inline Rational eval_h_sq_norm_exact(const MonomialMap& h, const std::vector<GaussianRational>& z) {
    if (z.size() != h.source_dim) throw ShapeMismatch("eval_h_sq_norm_exact: wrong source dimension");
    Rational sum = 0;
    for (const auto& t : h.terms) {
        Rational term = t.coeff.squared_modulus();
        for (unsigned i = 0; i < h.source_dim; ++i)
            term *= rational_pow(z[i].norm_sq(), t.exponent[i]);
        sum += term;
    }
    return sum;
}

/// ||z||^{2M} == ||H_M(z)||^2 with exact rational arithmetic on both sides.
inline bool norm_identity_exact(unsigned m, unsigned M, const std::vector<GaussianRational>& z) {
    const MonomialMap h = h_map(m, M);
    Rational lhs = 0;
    for (const auto& zi : z) lhs += zi.norm_sq();
    return rational_pow(lhs, M) == eval_h_sq_norm_exact(h, z);
}

/// Multiplicity of each monomial class in the raw M-fold tensor power
/// (test hook for the collection identity multiplicity(p) == M!/p!).
inline std::map<std::vector<unsigned>, Rational> tensor_power_multiplicities(unsigned m, unsigned M) {
    std::map<std::vector<unsigned>, Rational> counts;
    for (const auto& t : tensor_power(m, M)) counts[t.exponent.entries] += t.coeff.squared_modulus();
    return counts;
}

} // namespace gpe
