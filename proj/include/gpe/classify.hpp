#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gpe/dangelo.hpp"
#include "gpe/geometry.hpp"
#include "gpe/holomap.hpp"

namespace gpe {

// ============================================================================
// Problems and admissible embeddings
// ============================================================================

/// Source/target pair for the classification.  Both must have the same number
/// of blocks; every nontrivial source block must have dimension >= 2.
struct ClassificationProblem {
    BlockSignature source;
    BlockSignature target;

    ClassificationProblem(BlockSignature src, BlockSignature dst)
        : source(std::move(src)), target(std::move(dst)) {
        if (source.blocks() != target.blocks())
            throw StructureMismatch("classification: source and target block counts differ");
        for (int j = 0; j + 1 < source.blocks(); ++j)
            if (source.block_dim(j) < 2)
                throw HypothesisViolation(
                    "classification: source block " + std::to_string(j + 1) +
                    " has dimension < 2");
    }
};

/// One solution of the combinatorics: target block j is fed from source block
/// sigma[j] with multiplier M[j] (j = 0..N-2; the last block maps to itself
/// with multiplier 1).
struct Admissible {
    std::vector<int> sigma;
    std::vector<int> M;

    friend bool operator==(const Admissible& a, const Admissible& b) {
        return a.sigma == b.sigma && a.M == b.M;
    }

    [[nodiscard]] std::string label() const {
        auto list = [](const std::vector<int>& v, int base) {
            std::string s = "[";
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i] + base);
            return s + "]";
        };
        return "sigma=" + list(sigma, 1) + " M=" + list(M, 0);
    }
};

/// All (sigma, M) with beta_j | alpha_{sigma(j)}, T(M_j, m_{sigma(j)}) <= n_j
/// and n_N >= m_N, in lexicographic sigma order.
inline std::vector<Admissible> admissible_embeddings(const ClassificationProblem& p) {
    const int N = p.source.blocks();
    std::vector<Admissible> out;
    if (p.target.block_dim(N - 1) < p.source.block_dim(N - 1)) return out;
    std::vector<int> sigma(static_cast<std::size_t>(N - 1));
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        std::vector<int> M;
        bool ok = true;
        for (int j = 0; j < N - 1; ++j) {
            const int a = p.source.exponent(sigma[static_cast<std::size_t>(j)]);
            const int b = p.target.exponent(j);
            if (a % b != 0) { ok = false; break; }
            const int mult = a / b;
            if (count_T(static_cast<unsigned>(mult),
                        static_cast<unsigned>(p.source.block_dim(sigma[static_cast<std::size_t>(j)]))) >
                p.target.block_dim(j)) {
                ok = false;
                break;
            }
            M.push_back(mult);
        }
        if (ok) out.push_back({sigma, std::move(M)});
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

inline bool is_admissible(const ClassificationProblem& p, const Admissible& a) {
    const auto all = admissible_embeddings(p);
    return std::find(all.begin(), all.end(), a) != all.end();
}

// ============================================================================
// Normal forms
// ============================================================================

/// The canonical representative in the unbounded models:
///   F = z, G_j = (H_{M_j}(w_{sigma(j)}), 0), G_N = (w_N, 0).
inline PolyMap build_normal_form(const ClassificationProblem& p, const Admissible& a) {
    if (!is_admissible(p, a))
        throw std::invalid_argument("build_normal_form: pair is not admissible");
    const int N = p.source.blocks();
    PolyMap m{p.source, p.target, {}, {}};
    PolyMonomial z;
    z.coeff = PolyCoeff(SurdScalar(1));
    z.z_deg = 1;
    z.w_exp.assign(static_cast<std::size_t>(p.source.total_dim()), 0);
    m.F.push_back(std::move(z));
    m.G.resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N - 1; ++j) {
        const int src = a.sigma[static_cast<std::size_t>(j)];
        const auto h = h_map(static_cast<unsigned>(p.source.block_dim(src)),
                             static_cast<unsigned>(a.M[static_cast<std::size_t>(j)]));
        auto& block = m.G[static_cast<std::size_t>(j)];
        for (const auto& term : h.terms)
            block.push_back(
                Poly{make_monomial(p.source, PolyCoeff(term.coeff), 0, src, term.exponent)});
        block.resize(static_cast<std::size_t>(p.target.block_dim(j))); // zero padding
    }
    auto& last = m.G[static_cast<std::size_t>(N - 1)];
    for (int mu = 0; mu < p.source.block_dim(N - 1); ++mu) {
        std::vector<unsigned> e(static_cast<std::size_t>(p.source.block_dim(N - 1)), 0);
        e[static_cast<std::size_t>(mu)] = 1;
        last.push_back(
            Poly{make_monomial(p.source, PolyCoeff(SurdScalar(1)), 0, N - 1, MultiIndex(e))});
    }
    last.resize(static_cast<std::size_t>(p.target.block_dim(N - 1)));
    return m;
}

/// The normal form between the bounded models, in two evaluable versions: the
/// same monomial formula applied to bounded coordinates (direct), and the
/// unbounded form conjugated through the two Cayley transforms.  The two are
/// claimed to agree; compare_pointwise makes that claim checkable.
struct BoundedNormalForm {
    BlockSignature source;
    BlockSignature target;
    PolyMap unbounded;

    [[nodiscard]] AmbientPoint eval_direct(const AmbientPoint& p) const {
        if (p.model != Model::Bounded)
            throw ShapeMismatch("BoundedNormalForm: expects a bounded-model point");
        AmbientPoint q = p;
        q.model = Model::Unbounded; // coordinates pass through the same polynomials
        AmbientPoint img = eval_map(unbounded, q);
        img.model = Model::Bounded;
        return img;
    }

    [[nodiscard]] AmbientPoint eval_conjugated(const AmbientPoint& p) const {
        return cayley(target, eval_map(unbounded, cayley_inverse(source, p)));
    }
};

inline BoundedNormalForm build_normal_form_bounded(const ClassificationProblem& p,
                                                   const Admissible& a) {
    return {p.source, p.target, build_normal_form(p, a)};
}

// ============================================================================
// Automorphisms
// ============================================================================

using CMatrix = std::vector<std::vector<Complex>>;

/// (z, w) -> ((z - a0)/a1, ..., w_j / a1^{1/(2 alpha_j)}, ...), a1 > 0;
/// unbounded model only.
struct AffineZ {
    double a0 = 0;
    double a1 = 1;
};

/// w_j -> w_j Ubar^t with U unitary; either model.
struct BlockUnitary {
    int block = 0;
    CMatrix U;
};

/// (z, w) -> (z + t, w); unbounded model only.
struct RealTranslation {
    double t = 0;
};

using AutomorphismSpec = std::variant<AffineZ, BlockUnitary, RealTranslation>;

namespace detail {

inline void check_unitary(const CMatrix& U) {
    const std::size_t n = U.size();
    for (const auto& row : U)
        if (row.size() != n) throw InvalidAutomorphism("unitary matrix must be square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{0};
            for (std::size_t k = 0; k < n; ++k) dot += U[i][k] * std::conj(U[j][k]);
            const Complex expect = (i == j) ? Complex(1, 0) : Complex(0, 0);
            if (std::abs(dot - expect) > 1e-12)
                throw InvalidAutomorphism("matrix is not unitary to 1e-12");
        }
}

} // namespace detail

inline AmbientPoint apply_automorphism(const BlockSignature& sig, const AutomorphismSpec& spec,
                                       const AmbientPoint& p) {
    check_shape(sig, p.w, "apply_automorphism");
    AmbientPoint out = p;
    if (const auto* aff = std::get_if<AffineZ>(&spec)) {
        if (p.model != Model::Unbounded)
            throw InvalidAutomorphism("AffineZ acts on the unbounded model");
        if (!(aff->a1 > 0)) throw InvalidAutomorphism("AffineZ: a1 must be positive");
        out.z = (p.z - aff->a0) / aff->a1;
        for (int j = 0; j < sig.blocks(); ++j) {
            const double scale = std::pow(aff->a1, -1.0 / (2.0 * sig.exponent(j)));
            for (Complex& c : out.w[static_cast<std::size_t>(j)]) c *= scale;
        }
        return out;
    }
    if (const auto* tr = std::get_if<RealTranslation>(&spec)) {
        if (p.model != Model::Unbounded)
            throw InvalidAutomorphism("RealTranslation acts on the unbounded model");
        out.z = p.z + tr->t;
        return out;
    }
    const auto& bu = std::get<BlockUnitary>(spec);
    if (bu.block < 0 || bu.block >= sig.blocks())
        throw InvalidAutomorphism("BlockUnitary: block index out of range");
    const auto js = static_cast<std::size_t>(bu.block);
    if (bu.U.size() != p.w[js].size())
        throw InvalidAutomorphism("BlockUnitary: matrix size does not match the block");
    detail::check_unitary(bu.U);
    CBlock img(p.w[js].size(), Complex(0));
    for (std::size_t nu = 0; nu < img.size(); ++nu)
        for (std::size_t mu = 0; mu < img.size(); ++mu)
            img[nu] += p.w[js][mu] * std::conj(bu.U[nu][mu]); // w Ubar^t
    out.w[js] = std::move(img);
    return out;
}

inline AmbientPoint apply_automorphism_chain(const BlockSignature& sig,
                                             const std::vector<AutomorphismSpec>& chain,
                                             AmbientPoint p) {
    for (const auto& spec : chain) p = apply_automorphism(sig, spec, p);
    return p;
}

// ============================================================================
// Sample-based equivalence
// ============================================================================

struct EquivalenceResult {
    bool equivalent = false;
    double max_deviation = 0;
};

/// Does post o m2 o pre agree with m1 at every sample?  pre/post are
/// composition chains applied in list order on the source/target models.
inline EquivalenceResult equivalent_at_samples(const PolyMap& m1, const PolyMap& m2,
                                               const std::vector<AutomorphismSpec>& pre,
                                               const std::vector<AutomorphismSpec>& post,
                                               const std::vector<AmbientPoint>& samples,
                                               double tol) {
    if (!(m1.source == m2.source) || !(m1.target == m2.target))
        throw ShapeMismatch("equivalent_at_samples: maps must share source and target");
    EquivalenceResult res;
    for (const auto& s : samples) {
        const AmbientPoint lhs = eval_map(m1, s);
        const AmbientPoint rhs = apply_automorphism_chain(
            m2.target, post, eval_map(m2, apply_automorphism_chain(m2.source, pre, s)));
        double gap = std::abs(lhs.z - rhs.z);
        for (std::size_t j = 0; j < lhs.w.size(); ++j)
            for (std::size_t k = 0; k < lhs.w[j].size(); ++k)
                gap = std::max(gap, std::abs(lhs.w[j][k] - rhs.w[j][k]));
        res.max_deviation = std::max(res.max_deviation, gap);
    }
    res.equivalent = res.max_deviation <= tol;
    return res;
}

/// Exact per-block boundary identity of a normal form at Gaussian-rational w:
/// ||w_{sigma(j)}||^{2 alpha_{sigma(j)}} == ||H_{M_j}(w_{sigma(j)})||^{2 beta_j}.
inline bool normal_form_boundary_identity_exact(
    const ClassificationProblem& p, const Admissible& a,
    const std::vector<std::vector<GaussianRational>>& w) {
    const int N = p.source.blocks();
    for (int j = 0; j < N - 1; ++j) {
        const int src = a.sigma[static_cast<std::size_t>(j)];
        const auto& block = w[static_cast<std::size_t>(src)];
        Rational nsq = 0;
        for (const auto& c : block) nsq += c.norm_sq();
        const auto h = h_map(static_cast<unsigned>(p.source.block_dim(src)),
                             static_cast<unsigned>(a.M[static_cast<std::size_t>(j)]));
        const Rational lhs = rational_pow(nsq, static_cast<unsigned>(p.source.exponent(src)));
        const Rational rhs = rational_pow(eval_h_sq_norm_exact(h, block),
                                          static_cast<unsigned>(p.target.exponent(j)));
        if (lhs != rhs) return false;
    }
    return true;
}

} // namespace gpe
