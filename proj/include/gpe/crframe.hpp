#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "gpe/geometry.hpp"

namespace gpe {

// ============================================================================
// Tangent vectors in the boundary chart (x, w)
// ============================================================================

/// (1,0)-type boundary tangent: c_x d/dx + sum c^lambda_j d/dw^lambda_j.
struct CoordTangent {
    Complex c_x{0};
    WBlocks c_w;
    BoundaryPoint base;
};

/// Fully realized tangent with both dw and dwbar slots; what the commutator
/// and pushforward machinery work with.
struct RealizedTangent {
    Complex c_x{0};
    WBlocks c_w;
    WBlocks c_wbar;
};

namespace detail {

inline WBlocks zero_like(const WBlocks& w) {
    WBlocks out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) out[j].assign(w[j].size(), Complex(0));
    return out;
}

inline void axpy(WBlocks& acc, Complex a, const WBlocks& x) {
    for (std::size_t j = 0; j < acc.size(); ++j)
        for (std::size_t k = 0; k < acc[j].size(); ++k) acc[j][k] += a * x[j][k];
}

/// <a, b> = sum a^mu conj(b^mu).
inline Complex hermitian(const CBlock& a, const CBlock& b) {
    Complex s{0};
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
    return s;
}

/// alpha_j ||w_j||^{2(alpha_j - 1)}, the weight in L, theta and the Levi form.
inline double rho_weight(const BlockSignature& sig, const BoundaryPoint& pt, int j) {
    const int a = sig.exponent(j);
    return a * ipow(block_sq_norm(pt.w[static_cast<std::size_t>(j)]), a - 1);
}

inline void check_block_index(const BlockSignature& sig, int j, int lambda, const char* who) {
    if (j < 0 || j >= sig.blocks())
        throw std::out_of_range(std::string(who) + ": block index out of range");
    if (lambda < 0 || lambda >= sig.block_dim(j))
        throw std::out_of_range(std::string(who) + ": entry index out of range");
}

} // namespace detail

inline double tangent_sup_norm(const CoordTangent& v) {
    double m = std::abs(v.c_x);
    for (const auto& blk : v.c_w)
        for (const auto& c : blk) m = std::max(m, std::abs(c));
    return m;
}

/// dx coefficient that makes the vector with dw coefficients c_w a (1,0)
/// boundary tangent: c_x = i sum_j rho_j(pt) <c_j, w_j>.
inline Complex tangent_x_coefficient(const BlockSignature& sig, const BoundaryPoint& pt,
                                     const WBlocks& c_w) {
    Complex s{0};
    for (int j = 0; j < sig.blocks(); ++j)
        s += detail::rho_weight(sig, pt, j) *
             detail::hermitian(c_w[static_cast<std::size_t>(j)], pt.w[static_cast<std::size_t>(j)]);
    return Complex(0, 1) * s;
}

inline CoordTangent make_tangent(const BlockSignature& sig, const BoundaryPoint& pt, WBlocks c_w) {
    check_shape(sig, c_w, "make_tangent");
    CoordTangent v;
    v.c_x = tangent_x_coefficient(sig, pt, c_w);
    v.c_w = std::move(c_w);
    v.base = pt;
    return v;
}

// ============================================================================
// Frame fields
// ============================================================================

/// L^lambda_j = d/dw^lambda_j + i alpha_j ||w_j||^{2(alpha_j-1)} conj(w^lambda_j) d/dx.
inline CoordTangent field_L(const BlockSignature& sig, const BoundaryPoint& pt, int j, int lambda) {
    detail::check_block_index(sig, j, lambda, "field_L");
    check_shape(sig, pt.w, "field_L");
    CoordTangent v;
    v.c_w = detail::zero_like(pt.w);
    v.c_w[static_cast<std::size_t>(j)][static_cast<std::size_t>(lambda)] = Complex(1, 0);
    v.c_x = Complex(0, 1) * detail::rho_weight(sig, pt, j) *
            std::conj(pt.w[static_cast<std::size_t>(j)][static_cast<std::size_t>(lambda)]);
    v.base = pt;
    return v;
}

/// Radial field E_j = (1/alpha_j) sum_mu w^mu_j L^mu_j.
inline CoordTangent field_E(const BlockSignature& sig, const BoundaryPoint& pt, int j) {
    detail::check_block_index(sig, j, 0, "field_E");
    check_shape(sig, pt.w, "field_E");
    CoordTangent v;
    v.c_w = detail::zero_like(pt.w);
    v.base = pt;
    const double inv_a = 1.0 / sig.exponent(j);
    for (int mu = 0; mu < sig.block_dim(j); ++mu) {
        const CoordTangent L = field_L(sig, pt, j, mu);
        const Complex f = inv_a * pt.w[static_cast<std::size_t>(j)][static_cast<std::size_t>(mu)];
        v.c_x += f * L.c_x;
        detail::axpy(v.c_w, f, L.c_w);
    }
    return v;
}

/// W^lambda_j = sum_mu (delta^lambda_mu - conj(w^lambda_j) w^mu_j / ||w_j||^2) L^mu_j.
/// Only defined on the strongly pseudoconvex part (||w_j|| > 0).
inline CoordTangent field_W(const BlockSignature& sig, const BoundaryPoint& pt, int j, int lambda) {
    detail::check_block_index(sig, j, lambda, "field_W");
    check_shape(sig, pt.w, "field_W");
    const CBlock& wj = pt.w[static_cast<std::size_t>(j)];
    const double nsq = block_sq_norm(wj);
    if (nsq == 0.0) throw DegenerateBasePoint("field_W: ||w_j|| = 0");
    CoordTangent v;
    v.c_w = detail::zero_like(pt.w);
    v.base = pt;
    const Complex wl_bar = std::conj(wj[static_cast<std::size_t>(lambda)]);
    for (int mu = 0; mu < sig.block_dim(j); ++mu) {
        Complex coeff = -wl_bar * wj[static_cast<std::size_t>(mu)] / nsq;
        if (mu == lambda) coeff += 1.0;
        const CoordTangent L = field_L(sig, pt, j, mu);
        v.c_x += coeff * L.c_x;
        detail::axpy(v.c_w, coeff, L.c_w);
    }
    return v;
}

// ============================================================================
// Pseudohermitian structure and Levi forms
// ============================================================================

/// theta = dx - i sum alpha_j ||w_j||^{2(alpha_j-1)} (conj(w^mu_j) dw^mu_j - w^mu_j dwbar^mu_j)
/// applied to a realized tangent.
inline Complex theta_realized(const BlockSignature& sig, const BoundaryPoint& pt,
                              const RealizedTangent& v) {
    Complex s = v.c_x;
    for (int j = 0; j < sig.blocks(); ++j) {
        const double rho = detail::rho_weight(sig, pt, j);
        const CBlock& wj = pt.w[static_cast<std::size_t>(j)];
        const CBlock& cw = v.c_w[static_cast<std::size_t>(j)];
        const CBlock& cb = v.c_wbar[static_cast<std::size_t>(j)];
        for (std::size_t mu = 0; mu < wj.size(); ++mu)
            s -= Complex(0, 1) * rho * (std::conj(wj[mu]) * cw[mu] - wj[mu] * cb[mu]);
    }
    return s;
}

/// theta on a (1,0) vector (the dwbar term contributes nothing).
inline Complex theta_eval(const BlockSignature& sig, const BoundaryPoint& pt,
                          const CoordTangent& v) {
    check_shape(sig, v.c_w, "theta_eval");
    return v.c_x - tangent_x_coefficient(sig, pt, v.c_w);
}

/// The sesquilinear Levi form on (1,0) coordinate tangents, from the closed
/// bracket form: block-diagonal with
///   Levi(L^mu_j, conj L^nu_j) = 2 rho_j (delta_{mu nu} + (alpha_j - 1) conj(w^mu) w^nu / ||w_j||^2).
/// This is what Q and frame_decompose are built on.
inline Complex levi_form_coord(const BlockSignature& sig, const BoundaryPoint& pt,
                               const CoordTangent& X, const CoordTangent& Y) {
    check_shape(sig, X.c_w, "levi_form_coord");
    check_shape(sig, Y.c_w, "levi_form_coord");
    Complex total{0};
    for (int j = 0; j < sig.blocks(); ++j) {
        const auto js = static_cast<std::size_t>(j);
        const double rho = detail::rho_weight(sig, pt, j);
        if (rho == 0.0) continue;
        const int a = sig.exponent(j);
        const double nsq = block_sq_norm(pt.w[js]);
        Complex s = 2.0 * rho * detail::hermitian(X.c_w[js], Y.c_w[js]);
        if (a > 1 && nsq > 0.0) {
            const Complex xw = detail::hermitian(X.c_w[js], pt.w[js]);
            const Complex wy = detail::hermitian(pt.w[js], Y.c_w[js]);
            s += 2.0 * rho * (a - 1) / nsq * xw * wy;
        }
        total += s;
    }
    return total;
}

/// Levi(X, conj E_k) = 2 alpha_k ||w_k||^{2(alpha_k-1)} <X_k, w_k>.
inline Complex levi_against_E(const BlockSignature& sig, const BoundaryPoint& pt,
                              const CoordTangent& X, int k) {
    const auto ks = static_cast<std::size_t>(k);
    return 2.0 * detail::rho_weight(sig, pt, k) * detail::hermitian(X.c_w[ks], pt.w[ks]);
}

/// Frame label: W^lambda_j or E_j.
struct FrameLabel {
    enum class Kind : int { W, E } kind;
    int block;
    int lambda = 0; // ignored for E

    static FrameLabel W(int j, int l) { return {Kind::W, j, l}; }
    static FrameLabel E(int j) { return {Kind::E, j, 0}; }
};

/// The tabulated Levi values on the frame, verbatim:
///   Levi(W^l_j, conj W^m_j) = -2 alpha_j ||w_j||^{2(alpha_j-1)} conj(w^l_j) w^m_j / ||w_j||^2,
///   cross-block and W-E pairs vanish, Levi(E_j, conj E_j) = 2 ||w_j||^{2 alpha_j}.
/// The W-diagonal sign of this table is cross-checked, not trusted, elsewhere;
/// see levi_finite_difference and levi_form_coord.
inline Complex levi_pair(const BlockSignature& sig, const BoundaryPoint& pt,
                         const FrameLabel& X, const FrameLabel& Y) {
    check_shape(sig, pt.w, "levi_pair");
    auto need_nonzero = [&](int j) {
        if (block_sq_norm(pt.w[static_cast<std::size_t>(j)]) == 0.0)
            throw DegenerateBasePoint("levi_pair: ||w_j|| = 0");
    };
    detail::check_block_index(sig, X.block, X.lambda, "levi_pair");
    detail::check_block_index(sig, Y.block, Y.lambda, "levi_pair");
    need_nonzero(X.block);
    need_nonzero(Y.block);
    if (X.kind != Y.kind) return {0, 0};
    if (X.block != Y.block) return {0, 0};
    const auto js = static_cast<std::size_t>(X.block);
    if (X.kind == FrameLabel::Kind::E) {
        const double nsq = block_sq_norm(pt.w[js]);
        return {2.0 * ipow(nsq, sig.exponent(X.block)), 0};
    }
    const double nsq = block_sq_norm(pt.w[js]);
    const double rho = detail::rho_weight(sig, pt, X.block);
    return -2.0 * rho *
           std::conj(pt.w[js][static_cast<std::size_t>(X.lambda)]) *
           pt.w[js][static_cast<std::size_t>(Y.lambda)] / nsq;
}

// ============================================================================
// Projection and frame decomposition
// ============================================================================

/// Q(X) = X - sum_j Levi(X, conj E_j)/Levi(E_j, conj E_j) E_j; kills the
/// radial components, leaves the W span.
inline CoordTangent project_Q(const BlockSignature& sig, const BoundaryPoint& pt,
                              const CoordTangent& X) {
    check_shape(sig, X.c_w, "project_Q");
    CoordTangent out = X;
    out.base = pt;
    for (int k = 0; k < sig.blocks(); ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double nsq = block_sq_norm(pt.w[ks]);
        if (nsq == 0.0) throw DegenerateBasePoint("project_Q: ||w_j|| = 0");
        const Complex ec = static_cast<double>(sig.exponent(k)) *
                           detail::hermitian(X.c_w[ks], pt.w[ks]) / nsq;
        if (ec == Complex(0, 0)) continue;
        const CoordTangent E = field_E(sig, pt, k);
        out.c_x -= ec * E.c_x;
        detail::axpy(out.c_w, -ec, E.c_w);
    }
    return out;
}

/// Coefficients of a tangent over the frame {W^lambda_j} u {E_j}.  The W
/// coefficients of block j use the canonical gauge <u_j, w_j> = 0 (the
/// kernel direction sum w^lambda W^lambda = 0 is quotiented out).
struct FrameCoefficients {
    WBlocks w_parts;
    std::vector<Complex> e_parts;
};

inline FrameCoefficients frame_decompose(const BlockSignature& sig, const BoundaryPoint& pt,
                                         const CoordTangent& X, double tangency_tol = 1e-8) {
    check_shape(sig, X.c_w, "frame_decompose");
    const Complex expected = tangent_x_coefficient(sig, pt, X.c_w);
    const double scale = std::max(1.0, tangent_sup_norm(X));
    if (std::abs(X.c_x - expected) > tangency_tol * scale)
        throw NotTangent("frame_decompose: c_x inconsistent with c_w");

    FrameCoefficients out;
    out.e_parts.resize(static_cast<std::size_t>(sig.blocks()));
    out.w_parts = detail::zero_like(pt.w);
    for (int k = 0; k < sig.blocks(); ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double nsq = block_sq_norm(pt.w[ks]);
        if (nsq == 0.0) throw DegenerateBasePoint("frame_decompose: ||w_j|| = 0");
        const Complex ec = static_cast<double>(sig.exponent(k)) *
                           detail::hermitian(X.c_w[ks], pt.w[ks]) / nsq;
        out.e_parts[ks] = ec;
        // remainder block is automatically <., w_k>-orthogonal, and in the
        // gauge <u, w> = 0 the W coefficients coincide with the coordinates
        for (std::size_t mu = 0; mu < pt.w[ks].size(); ++mu)
            out.w_parts[ks][mu] =
                X.c_w[ks][mu] - ec * pt.w[ks][mu] / static_cast<double>(sig.exponent(k));
    }
    return out;
}

/// Rebuild sum u^lambda_j W^lambda_j + sum ec_k E_k (test/report hook).
inline CoordTangent frame_reconstruct(const BlockSignature& sig, const BoundaryPoint& pt,
                                      const FrameCoefficients& fc) {
    CoordTangent acc;
    acc.c_w = detail::zero_like(pt.w);
    acc.base = pt;
    for (int j = 0; j < sig.blocks(); ++j) {
        const auto js = static_cast<std::size_t>(j);
        for (int l = 0; l < sig.block_dim(j); ++l) {
            const Complex u = fc.w_parts[js][static_cast<std::size_t>(l)];
            if (u == Complex(0, 0)) continue;
            const CoordTangent W = field_W(sig, pt, j, l);
            acc.c_x += u * W.c_x;
            detail::axpy(acc.c_w, u, W.c_w);
        }
        const Complex ec = fc.e_parts[js];
        if (ec != Complex(0, 0)) {
            const CoordTangent E = field_E(sig, pt, j);
            acc.c_x += ec * E.c_x;
            detail::axpy(acc.c_w, ec, E.c_w);
        }
    }
    return acc;
}

// ============================================================================
// Finite-difference Levi form (independent cross-check)
// ============================================================================

namespace detail {

using FieldGen = std::function<CoordTangent(const BoundaryPoint&)>;

inline FieldGen frame_field_generator(const BlockSignature& sig, const FrameLabel& label) {
    if (label.kind == FrameLabel::Kind::E)
        return [&sig, label](const BoundaryPoint& pt) { return field_E(sig, pt, label.block); };
    return [&sig, label](const BoundaryPoint& pt) {
        return field_W(sig, pt, label.block, label.lambda);
    };
}

/// Real coordinate slots of the boundary chart: slot 0 is x, then
/// (Re w^k, Im w^k) pairs in flattened order.
inline BoundaryPoint shift_slot(const BoundaryPoint& pt, int slot, double delta) {
    BoundaryPoint out = pt;
    if (slot == 0) {
        out.x += delta;
        return out;
    }
    int idx = slot - 1;
    const bool imag_part = idx % 2;
    idx /= 2;
    for (auto& blk : out.w) {
        if (idx < static_cast<int>(blk.size())) {
            blk[static_cast<std::size_t>(idx)] +=
                imag_part ? Complex(0, delta) : Complex(delta, 0);
            return out;
        }
        idx -= static_cast<int>(blk.size());
    }
    throw std::out_of_range("shift_slot");
}

template <typename F>
Complex slot_derivative(const F& f, const BoundaryPoint& pt, int slot, double h) {
    return (f(shift_slot(pt, slot, h)) - f(shift_slot(pt, slot, -h))) / (2.0 * h);
}

/// Derivative of scalar f along the (1,0) vector with coefficients c at pt.
template <typename F>
Complex derive_along(const F& f, const BoundaryPoint& pt, const CoordTangent& dir, double h,
                     bool conjugate_direction) {
    const Complex cx = conjugate_direction ? std::conj(dir.c_x) : dir.c_x;
    Complex acc = cx * slot_derivative(f, pt, 0, h);
    int slot = 1;
    for (const auto& blk : dir.c_w) {
        for (const Complex& c : blk) {
            const Complex du = slot_derivative(f, pt, slot, h);
            const Complex dv = slot_derivative(f, pt, slot + 1, h);
            if (conjugate_direction)
                acc += std::conj(c) * 0.5 * (du + Complex(0, 1) * dv); // d/dwbar
            else
                acc += c * 0.5 * (du - Complex(0, 1) * dv); // d/dw
            slot += 2;
        }
    }
    return acc;
}

} // namespace detail

/// -i dtheta(X, conj Y) for frame fields X, Y computed from second-order
/// central differences of theta along the coordinate extensions of the
/// fields: dtheta(X,Ybar) = X theta(Ybar) - Ybar theta(X) - theta([X, Ybar]).
/// Entirely independent of the closed-form tables; used to audit them.
inline Complex levi_finite_difference(const BlockSignature& sig, const BoundaryPoint& pt,
                                      const FrameLabel& A, const FrameLabel& B, double h = 1e-5) {
    const auto genX = detail::frame_field_generator(sig, A);
    const auto genY = detail::frame_field_generator(sig, B);
    const CoordTangent X = genX(pt);
    const CoordTangent Y = genY(pt);

    const auto theta_of_Ybar = [&](const BoundaryPoint& q) {
        const CoordTangent y = genY(q);
        RealizedTangent bar;
        bar.c_x = std::conj(y.c_x);
        bar.c_w = detail::zero_like(q.w);
        bar.c_wbar = y.c_w;
        for (auto& blk : bar.c_wbar)
            for (auto& c : blk) c = std::conj(c);
        return theta_realized(sig, q, bar);
    };
    const auto theta_of_X = [&](const BoundaryPoint& q) { return theta_eval(sig, q, genX(q)); };

    const Complex term1 = detail::derive_along(theta_of_Ybar, pt, X, h, false);
    const Complex term2 = detail::derive_along(theta_of_X, pt, Y, h, true);

    // commutator [X, Ybar], slot by slot
    RealizedTangent comm;
    comm.c_w = detail::zero_like(pt.w);
    comm.c_wbar = detail::zero_like(pt.w);
    comm.c_x = detail::derive_along(
                   [&](const BoundaryPoint& q) { return std::conj(genY(q).c_x); }, pt, X, h, false) -
               detail::derive_along(
                   [&](const BoundaryPoint& q) { return genX(q).c_x; }, pt, Y, h, true);
    for (std::size_t j = 0; j < pt.w.size(); ++j) {
        for (std::size_t k = 0; k < pt.w[j].size(); ++k) {
            comm.c_w[j][k] = -detail::derive_along(
                [&](const BoundaryPoint& q) { return genX(q).c_w[j][k]; }, pt, Y, h, true);
            comm.c_wbar[j][k] = detail::derive_along(
                [&](const BoundaryPoint& q) { return std::conj(genY(q).c_w[j][k]); }, pt, X, h,
                false);
        }
    }
    const Complex term3 = theta_realized(sig, pt, comm);

    return Complex(0, -1) * (term1 - term2 - term3);
}

} // namespace gpe
