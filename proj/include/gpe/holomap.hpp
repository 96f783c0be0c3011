#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "gpe/arith.hpp"
#include "gpe/crframe.hpp"
#include "gpe/dangelo.hpp"
#include "gpe/geometry.hpp"

namespace gpe {

// ============================================================================
// Polynomial maps between unbounded models
// ============================================================================

/// Coefficient of a map monomial.  Exact whenever constructible; the floating
/// fallback slot exists for coefficients with no surd representation.
struct PolyCoeff {
    SurdScalar exact;
    bool is_exact = true;
    Complex approx{0, 0};

    PolyCoeff() = default;
    PolyCoeff(SurdScalar s) : exact(std::move(s)) {}  // NOLINT(google-explicit-constructor)
    static PolyCoeff floating(Complex c) {
        PolyCoeff p;
        p.is_exact = false;
        p.approx = c;
        return p;
    }

    [[nodiscard]] Complex value() const { return is_exact ? exact.to_complex() : approx; }

    friend bool operator==(const PolyCoeff& a, const PolyCoeff& b) {
        if (a.is_exact != b.is_exact) return false;
        return a.is_exact ? a.exact == b.exact : a.approx == b.approx;
    }
};

/// coeff * z^z_deg * w^w_exp with w_exp flattened over all blocks.
struct PolyMonomial {
    PolyCoeff coeff;
    unsigned z_deg = 0;
    std::vector<unsigned> w_exp;

    friend bool operator==(const PolyMonomial& a, const PolyMonomial& b) {
        return a.coeff == b.coeff && a.z_deg == b.z_deg && a.w_exp == b.w_exp;
    }
};

using Poly = std::vector<PolyMonomial>;

inline Complex eval_poly(const Poly& p, Complex z, const CBlock& flat_w) {
    Complex acc{0, 0};
    for (const auto& mono : p) {
        Complex v = mono.coeff.value();
        for (unsigned k = 0; k < mono.z_deg; ++k) v *= z;
        for (std::size_t i = 0; i < mono.w_exp.size(); ++i)
            for (unsigned k = 0; k < mono.w_exp[i]; ++k) v *= flat_w[i];
        acc += v;
    }
    return acc;
}

/// Formal d/dz; the degree drops by one, coefficients stay exact.
inline Poly poly_dz(const Poly& p) {
    Poly out;
    for (const auto& mono : p) {
        if (mono.z_deg == 0) continue;
        PolyMonomial d = mono;
        if (d.coeff.is_exact)
            d.coeff.exact = surd_mul(d.coeff.exact, SurdScalar(static_cast<long long>(mono.z_deg)));
        else
            d.coeff.approx *= static_cast<double>(mono.z_deg);
        --d.z_deg;
        out.push_back(std::move(d));
    }
    return out;
}

/// Formal d/dw^k (flattened index).
inline Poly poly_dw(const Poly& p, std::size_t k) {
    Poly out;
    for (const auto& mono : p) {
        if (mono.w_exp[k] == 0) continue;
        PolyMonomial d = mono;
        if (d.coeff.is_exact)
            d.coeff.exact =
                surd_mul(d.coeff.exact, SurdScalar(static_cast<long long>(mono.w_exp[k])));
        else
            d.coeff.approx *= static_cast<double>(mono.w_exp[k]);
        --d.w_exp[k];
        out.push_back(std::move(d));
    }
    return out;
}

/// Holomorphic polynomial map Phi = (F, G_1, ..., G_N) between unbounded
/// models; target block j carries n_j component polynomials.
struct PolyMap {
    BlockSignature source;
    BlockSignature target;
    Poly F;
    std::vector<std::vector<Poly>> G;

    friend bool operator==(const PolyMap& a, const PolyMap& b) {
        return a.source == b.source && a.target == b.target && a.F == b.F && a.G == b.G;
    }
};

inline PolyMonomial make_monomial(const BlockSignature& sig, PolyCoeff c, unsigned z_deg,
                                  int block, const MultiIndex& block_exp) {
    PolyMonomial m;
    m.coeff = std::move(c);
    m.z_deg = z_deg;
    m.w_exp.assign(static_cast<std::size_t>(sig.total_dim()), 0);
    const int off = sig.block_offset(block);
    for (std::size_t i = 0; i < block_exp.size(); ++i)
        m.w_exp[static_cast<std::size_t>(off) + i] = block_exp[i];
    return m;
}

inline PolyMap identity_map(const BlockSignature& sig) {
    PolyMap m{sig, sig, {}, {}};
    PolyMonomial z;
    z.coeff = PolyCoeff(SurdScalar(1));
    z.z_deg = 1;
    z.w_exp.assign(static_cast<std::size_t>(sig.total_dim()), 0);
    m.F.push_back(std::move(z));
    m.G.resize(static_cast<std::size_t>(sig.blocks()));
    for (int j = 0; j < sig.blocks(); ++j)
        for (int mu = 0; mu < sig.block_dim(j); ++mu) {
            std::vector<unsigned> e(static_cast<std::size_t>(sig.block_dim(j)), 0);
            e[static_cast<std::size_t>(mu)] = 1;
            Poly comp{make_monomial(sig, PolyCoeff(SurdScalar(1)), 0, j, MultiIndex(e))};
            m.G[static_cast<std::size_t>(j)].push_back(std::move(comp));
        }
    return m;
}

inline CBlock flatten(const WBlocks& w) {
    CBlock flat;
    for (const auto& blk : w) flat.insert(flat.end(), blk.begin(), blk.end());
    return flat;
}

/// Componentwise polynomial evaluation (coordinates pass through untouched;
/// the model tag of the input is preserved).
inline AmbientPoint eval_map(const PolyMap& m, const AmbientPoint& p) {
    check_shape(m.source, p.w, "eval_map");
    const CBlock flat = flatten(p.w);
    AmbientPoint out;
    out.model = p.model;
    out.z = eval_poly(m.F, p.z, flat);
    out.w.resize(static_cast<std::size_t>(m.target.blocks()));
    for (int j = 0; j < m.target.blocks(); ++j) {
        const auto& comps = m.G[static_cast<std::size_t>(j)];
        CBlock img;
        img.reserve(comps.size());
        for (const auto& comp : comps) img.push_back(eval_poly(comp, p.z, flat));
        out.w[static_cast<std::size_t>(j)] = std::move(img);
    }
    return out;
}

/// Exact partial-derivative table of every component.
struct MapJacobian {
    Poly Fz;
    std::vector<Poly> Fw;                           // per flattened source variable
    std::vector<std::vector<Poly>> Gz;              // [target block][component]
    std::vector<std::vector<std::vector<Poly>>> Gw; // [target block][component][variable]
};

inline MapJacobian differentiate(const PolyMap& m) {
    const auto nvars = static_cast<std::size_t>(m.source.total_dim());
    MapJacobian jac;
    jac.Fz = poly_dz(m.F);
    jac.Fw.resize(nvars);
    for (std::size_t k = 0; k < nvars; ++k) jac.Fw[k] = poly_dw(m.F, k);
    jac.Gz.resize(m.G.size());
    jac.Gw.resize(m.G.size());
    for (std::size_t j = 0; j < m.G.size(); ++j) {
        jac.Gz[j].resize(m.G[j].size());
        jac.Gw[j].resize(m.G[j].size());
        for (std::size_t mu = 0; mu < m.G[j].size(); ++mu) {
            jac.Gz[j][mu] = poly_dz(m.G[j][mu]);
            jac.Gw[j][mu].resize(nvars);
            for (std::size_t k = 0; k < nvars; ++k)
                jac.Gw[j][mu][k] = poly_dw(m.G[j][mu], k);
        }
    }
    return jac;
}

// ============================================================================
// Pushforward through the boundary-restricted map
// ============================================================================

namespace detail {

/// rho_k = alpha_j ||w_j||^{2(alpha_j-1)} conj(w^k) for flattened k in block j:
/// the chain-rule weight of z = x + i |||w|||^{2 alpha} through d/dw^k.
inline CBlock chain_weights(const BlockSignature& sig, const BoundaryPoint& pt) {
    CBlock rho;
    rho.reserve(static_cast<std::size_t>(sig.total_dim()));
    for (int j = 0; j < sig.blocks(); ++j) {
        const double r = rho_weight(sig, pt, j);
        for (const Complex& c : pt.w[static_cast<std::size_t>(j)])
            rho.push_back(r * std::conj(c));
    }
    return rho;
}

struct BoundaryEval {
    Complex z;       // x + i |||w|||
    CBlock flat_w;
    Complex F;       // F(z, w)
    Complex Fz;
    CBlock Fw;
    WBlocks G;       // target-shaped values
    std::vector<CBlock> Gz;          // [block][component]
    std::vector<std::vector<CBlock>> Gw; // [block][component][variable]
};

inline BoundaryEval evaluate_on_boundary(const PolyMap& m, const MapJacobian& jac,
                                         const BoundaryPoint& pt) {
    check_shape(m.source, pt.w, "pushforward");
    BoundaryEval ev;
    ev.z = Complex(pt.x, block_norm_sum(m.source, pt.w));
    ev.flat_w = flatten(pt.w);
    ev.F = eval_poly(m.F, ev.z, ev.flat_w);
    ev.Fz = eval_poly(jac.Fz, ev.z, ev.flat_w);
    ev.Fw.resize(ev.flat_w.size());
    for (std::size_t k = 0; k < ev.flat_w.size(); ++k)
        ev.Fw[k] = eval_poly(jac.Fw[k], ev.z, ev.flat_w);
    ev.G.resize(m.G.size());
    ev.Gz.resize(m.G.size());
    ev.Gw.resize(m.G.size());
    for (std::size_t j = 0; j < m.G.size(); ++j) {
        const auto& comps = m.G[j];
        ev.G[j].resize(comps.size());
        ev.Gz[j].resize(comps.size());
        ev.Gw[j].resize(comps.size());
        for (std::size_t mu = 0; mu < comps.size(); ++mu) {
            ev.G[j][mu] = eval_poly(comps[mu], ev.z, ev.flat_w);
            ev.Gz[j][mu] = eval_poly(jac.Gz[j][mu], ev.z, ev.flat_w);
            ev.Gw[j][mu].resize(ev.flat_w.size());
            for (std::size_t k = 0; k < ev.flat_w.size(); ++k)
                ev.Gw[j][mu][k] = eval_poly(jac.Gw[j][mu][k], ev.z, ev.flat_w);
        }
    }
    return ev;
}

} // namespace detail

/// Pushforward of a realized tangent through the boundary-restricted map
/// (x, w) -> (Re F, G) under the chart identification z = x + i |||w|||^{2a}.
/// Assembled from the exact polynomial Jacobian and the chain rule; no
/// holomorphy of the inputs is assumed, which is what makes the (0,1) output
/// a meaningful residual.
inline RealizedTangent pushforward_realized(const PolyMap& m, const MapJacobian& jac,
                                            const BoundaryPoint& pt, const RealizedTangent& v) {
    check_shape(m.source, v.c_w, "pushforward_realized");
    check_shape(m.source, v.c_wbar, "pushforward_realized");
    const auto ev = detail::evaluate_on_boundary(m, jac, pt);
    const CBlock rho = detail::chain_weights(m.source, pt);

    // X(z o phi) and X(zbar o phi) for the derivation X with realized slots
    Complex Xz = v.c_x, Xzbar = v.c_x;
    {
        const CBlock vw = flatten(v.c_w);
        const CBlock vb = flatten(v.c_wbar);
        for (std::size_t k = 0; k < rho.size(); ++k) {
            const Complex rb = std::conj(rho[k]); // alpha ||w||^{...} w^k
            Xz += Complex(0, 1) * (vw[k] * rho[k] + vb[k] * rb);
            Xzbar += Complex(0, -1) * (vw[k] * rho[k] + vb[k] * rb);
        }
    }

    const CBlock vw = flatten(v.c_w);
    const CBlock vb = flatten(v.c_wbar);
    auto holomorphic_part = [&](Complex dz, const CBlock& dw) {
        // X(g o phi) for holomorphic g with gradient (dz, dw)
        Complex acc = Xz * dz;
        for (std::size_t k = 0; k < vw.size(); ++k) acc += vw[k] * dw[k];
        return acc;
    };
    auto antiholomorphic_part = [&](Complex dz, const CBlock& dw) {
        // X(conj(g) o phi): conj-gradient against the conjugate slots
        Complex acc = Xzbar * std::conj(dz);
        for (std::size_t k = 0; k < vb.size(); ++k) acc += vb[k] * std::conj(dw[k]);
        return acc;
    };

    RealizedTangent out;
    out.c_w.resize(ev.G.size());
    out.c_wbar.resize(ev.G.size());
    const Complex XF = holomorphic_part(ev.Fz, ev.Fw);
    const Complex XFbar = antiholomorphic_part(ev.Fz, ev.Fw);
    out.c_x = 0.5 * (XF + XFbar); // xtilde = Re F
    for (std::size_t j = 0; j < ev.G.size(); ++j) {
        out.c_w[j].resize(ev.G[j].size());
        out.c_wbar[j].resize(ev.G[j].size());
        for (std::size_t mu = 0; mu < ev.G[j].size(); ++mu) {
            out.c_w[j][mu] = holomorphic_part(ev.Gz[j][mu], ev.Gw[j][mu]);
            out.c_wbar[j][mu] = antiholomorphic_part(ev.Gz[j][mu], ev.Gw[j][mu]);
        }
    }
    return out;
}

struct PushforwardResult {
    BoundaryPoint image_base;
    CoordTangent image;   // (1,0) part at the image point
    double cr_residual;   // magnitude of the (0,1) part
};

/// Push a (1,0) boundary tangent forward; requires the base point to land on
/// the target boundary within boundary_tol.
inline PushforwardResult pushforward(const PolyMap& m, const MapJacobian& jac,
                                     const BoundaryPoint& pt, const CoordTangent& X,
                                     double boundary_tol = 1e-8) {
    const auto ev = detail::evaluate_on_boundary(m, jac, pt);
    BoundaryPoint image{ev.F.real(), ev.G};
    const double defect = std::abs(ev.F.imag() - block_norm_sum(m.target, ev.G));
    if (defect > boundary_tol)
        throw NotBoundaryPreserving("pushforward: image off the target boundary by " +
                                    std::to_string(defect));

    RealizedTangent v{X.c_x, X.c_w, detail::zero_like(X.c_w)};
    const RealizedTangent img = pushforward_realized(m, jac, pt, v);

    PushforwardResult res;
    res.image_base = image;
    res.image.c_x = img.c_x;
    res.image.c_w = img.c_w;
    res.image.base = image;
    double r = 0;
    for (const auto& blk : img.c_wbar)
        for (const Complex& c : blk) r = std::max(r, std::abs(c));
    res.cr_residual = r;
    return res;
}

inline PushforwardResult pushforward(const PolyMap& m, const BoundaryPoint& pt,
                                     const CoordTangent& X, double boundary_tol = 1e-8) {
    return pushforward(m, differentiate(m), pt, X, boundary_tol);
}

// ============================================================================
// Block structure of the pushforward
// ============================================================================

/// Which target blocks each source W_i reaches, with the worst radial leak.
struct BlockStructure {
    std::vector<std::set<int>> hits;              // per source block
    std::vector<std::vector<double>> w_component_max; // [source block][target block]
    std::vector<double> e_component_max;          // per source block
    double max_cr_residual = 0;
};

/// Aggregate frame components of Phi_* W^lambda_i over the samples; block l
/// is hit when some coefficient magnitude exceeds threshold.
inline BlockStructure block_structure(const PolyMap& m, const std::vector<BoundaryPoint>& samples,
                                      double threshold = 1e-7) {
    const MapJacobian jac = differentiate(m);
    const int Ns = m.source.blocks(), Nt = m.target.blocks();
    BlockStructure bs;
    bs.hits.resize(static_cast<std::size_t>(Ns));
    bs.w_component_max.assign(static_cast<std::size_t>(Ns),
                              std::vector<double>(static_cast<std::size_t>(Nt), 0.0));
    bs.e_component_max.assign(static_cast<std::size_t>(Ns), 0.0);
    for (const auto& pt : samples) {
        for (int i = 0; i < Ns; ++i) {
            for (int l = 0; l < m.source.block_dim(i); ++l) {
                const auto res = pushforward(m, jac, pt, field_W(m.source, pt, i, l));
                bs.max_cr_residual = std::max(bs.max_cr_residual, res.cr_residual);
                const auto fc = frame_decompose(m.target, res.image_base, res.image);
                for (int t = 0; t < Nt; ++t) {
                    double mag = 0;
                    for (const Complex& c : fc.w_parts[static_cast<std::size_t>(t)])
                        mag = std::max(mag, std::abs(c));
                    auto& cell = bs.w_component_max[static_cast<std::size_t>(i)]
                                                  [static_cast<std::size_t>(t)];
                    cell = std::max(cell, mag);
                }
                for (const Complex& c : fc.e_parts)
                    bs.e_component_max[static_cast<std::size_t>(i)] =
                        std::max(bs.e_component_max[static_cast<std::size_t>(i)], std::abs(c));
            }
        }
    }
    for (int i = 0; i < Ns; ++i)
        for (int t = 0; t < Nt; ++t)
            if (bs.w_component_max[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] >
                threshold)
                bs.hits[static_cast<std::size_t>(i)].insert(t);
    return bs;
}

// ============================================================================
// theta pullback and properness
// ============================================================================

struct PullbackReport {
    double f;        // proportionality factor at the point
    double residual; // max |Phi^* theta~ - f theta| over the real tangent basis
};

/// f = (Phi^* theta~)(d/dx); residual sweeps d/dx and every d/du^k, d/dv^k.
inline PullbackReport theta_pullback_factor(const PolyMap& m, const MapJacobian& jac,
                                            const BoundaryPoint& pt,
                                            double boundary_tol = 1e-8) {
    const auto ev = detail::evaluate_on_boundary(m, jac, pt);
    BoundaryPoint image{ev.F.real(), ev.G};
    if (std::abs(ev.F.imag() - block_norm_sum(m.target, ev.G)) > boundary_tol)
        throw NotBoundaryPreserving("theta_pullback_factor: image off the target boundary");

    auto pulled = [&](const RealizedTangent& v) {
        return theta_realized(m.target, image, pushforward_realized(m, jac, pt, v));
    };
    auto theta_src = [&](const RealizedTangent& v) { return theta_realized(m.source, pt, v); };

    RealizedTangent dx{Complex(1, 0), detail::zero_like(pt.w), detail::zero_like(pt.w)};
    const Complex f_full = pulled(dx);
    PullbackReport rep{f_full.real(), std::abs(f_full - Complex(f_full.real(), 0))};

    for (std::size_t j = 0; j < pt.w.size(); ++j) {
        for (std::size_t k = 0; k < pt.w[j].size(); ++k) {
            RealizedTangent du{Complex(0, 0), detail::zero_like(pt.w), detail::zero_like(pt.w)};
            du.c_w[j][k] = Complex(1, 0);   // d/du = d/dw + d/dwbar
            du.c_wbar[j][k] = Complex(1, 0);
            rep.residual =
                std::max(rep.residual, std::abs(pulled(du) - rep.f * theta_src(du)));
            RealizedTangent dv{Complex(0, 0), detail::zero_like(pt.w), detail::zero_like(pt.w)};
            dv.c_w[j][k] = Complex(0, 1);   // d/dv = i(d/dw - d/dwbar)
            dv.c_wbar[j][k] = Complex(0, -1);
            rep.residual =
                std::max(rep.residual, std::abs(pulled(dv) - rep.f * theta_src(dv)));
        }
    }
    return rep;
}

inline PullbackReport theta_pullback_factor(const PolyMap& m, const BoundaryPoint& pt,
                                            double boundary_tol = 1e-8) {
    return theta_pullback_factor(m, differentiate(m), pt, boundary_tol);
}

/// Sampled properness report: every boundary sample must land on the target
/// boundary within tol and every interior sample must stay interior.
struct ProperReport {
    int boundary_total = 0;
    int boundary_ok = 0;
    int interior_total = 0;
    int interior_ok = 0;
    double max_boundary_residual = 0;

    [[nodiscard]] bool pass() const {
        return boundary_ok == boundary_total && interior_ok == interior_total;
    }
};

inline ProperReport verify_proper(const PolyMap& m, int n_boundary, int n_interior,
                                  std::uint64_t seed, double tol, double sp_margin = 1e-2) {
    ProperReport rep;
    rep.boundary_total = n_boundary;
    rep.interior_total = n_interior;
    if (n_boundary > 0) {
        for (const auto& pt : sample_boundary(m.source, n_boundary, seed, sp_margin)) {
            const AmbientPoint img = eval_map(m, to_ambient(m.source, pt));
            const double defect = std::abs(boundary_defect(m.target, img));
            rep.max_boundary_residual = std::max(rep.max_boundary_residual, defect);
            if (defect < tol) ++rep.boundary_ok;
        }
    }
    if (n_interior > 0) {
        for (const auto& p : sample_interior(m.source, n_interior, seed ^ 0x9e37u, sp_margin)) {
            const AmbientPoint img = eval_map(m, p);
            if (classify_point(m.target, img, tol) == Region::Interior) ++rep.interior_ok;
        }
    }
    return rep;
}

} // namespace gpe
