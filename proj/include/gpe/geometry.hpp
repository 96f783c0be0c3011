#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gpe/errors.hpp"

namespace gpe {

using Complex = std::complex<double>;
using CBlock  = std::vector<Complex>;
/// One complex block per signature block.
using WBlocks = std::vector<CBlock>;

/// Integer power with the 0^0 = 1 convention used by the exponent formulas.
inline double ipow(double base, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

// ============================================================================
// Signatures and points
// ============================================================================

/// Shape data of a generalized pseudoellipsoid: N blocks of dimensions
/// m_1..m_N with integer exponents alpha_1..alpha_{N-1} >= 2 and alpha_N = 1.
class BlockSignature {
public:
    /// head_exponents lists alpha_1..alpha_{N-1}; the trailing 1 is implied.
    BlockSignature(std::vector<int> block_dims, std::vector<int> head_exponents)
        : dims_(std::move(block_dims)), exps_(std::move(head_exponents)) {
        if (dims_.empty()) throw std::invalid_argument("signature: at least one block");
        if (exps_.size() + 1 != dims_.size())
            throw std::invalid_argument("signature: need exactly N-1 exponents");
        for (int m : dims_)
            if (m < 1) throw std::invalid_argument("signature: block dimensions must be >= 1");
        for (int a : exps_)
            if (a < 2) throw std::invalid_argument("signature: exponents alpha_1..alpha_{N-1} must be >= 2");
        exps_.push_back(1);
    }

    [[nodiscard]] int blocks() const { return static_cast<int>(dims_.size()); }
    [[nodiscard]] int block_dim(int j) const { return dims_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] int exponent(int j) const { return exps_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] const std::vector<int>& block_dims() const { return dims_; }

    /// m = m_1 + ... + m_N (the ambient space is C^{m+1}).
    [[nodiscard]] int total_dim() const {
        return std::accumulate(dims_.begin(), dims_.end(), 0);
    }

    /// Offset of block j in the flattened w coordinate vector.
    [[nodiscard]] int block_offset(int j) const {
        return std::accumulate(dims_.begin(), dims_.begin() + j, 0);
    }

    friend bool operator==(const BlockSignature& a, const BlockSignature& b) {
        return a.dims_ == b.dims_ && a.exps_ == b.exps_;
    }

    [[nodiscard]] WBlocks zero_w() const {
        WBlocks w(dims_.size());
        for (std::size_t j = 0; j < dims_.size(); ++j)
            w[j].assign(static_cast<std::size_t>(dims_[j]), Complex(0));
        return w;
    }

    [[nodiscard]] std::string to_string() const {
        auto list = [](const std::vector<int>& v, std::size_t n) {
            std::string s = "[";
            for (std::size_t i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s + "]";
        };
        return "blocks=" + list(dims_, dims_.size()) +
               " exponents=" + list(exps_, exps_.size() - 1);
    }

private:
    std::vector<int> dims_;
    std::vector<int> exps_; // stored with the trailing 1
};

enum class Model : std::uint8_t { Bounded, Unbounded };

/// Point of the ambient C^{m+1}, tagged with the model its coordinates refer to.
struct AmbientPoint {
    Complex z;
    WBlocks w;
    Model model = Model::Unbounded;
};

/// Boundary chart point of the unbounded model: (x, w) stands for
/// (x + i*|||w|||^{2 alpha}, w).
struct BoundaryPoint {
    double x = 0.0;
    WBlocks w;
};

inline void check_shape(const BlockSignature& sig, const WBlocks& w, const char* who) {
    if (static_cast<int>(w.size()) != sig.blocks())
        throw ShapeMismatch(std::string(who) + ": block count mismatch");
    for (int j = 0; j < sig.blocks(); ++j)
        if (static_cast<int>(w[static_cast<std::size_t>(j)].size()) != sig.block_dim(j))
            throw ShapeMismatch(std::string(who) + ": block " + std::to_string(j + 1) +
                                " dimension mismatch");
}

inline double block_sq_norm(const CBlock& b) {
    double s = 0.0;
    for (const Complex& c : b) s += std::norm(c);
    return s;
}

/// |||w|||^{2 alpha} = sum_j ||w_j||^{2 alpha_j}  (alpha_N = 1).
inline double block_norm_sum(const BlockSignature& sig, const WBlocks& w) {
    check_shape(sig, w, "block_norm_sum");
    double s = 0.0;
    for (int j = 0; j < sig.blocks(); ++j)
        s += ipow(block_sq_norm(w[static_cast<std::size_t>(j)]), sig.exponent(j));
    return s;
}

/// Defining function of the bounded model:
/// R = |z|^2 + sum_j ||w_j||^{2 alpha_j} - 1, negative inside.
inline double defining_R(const BlockSignature& sig, const AmbientPoint& p) {
    if (p.model != Model::Bounded)
        throw ShapeMismatch("defining_R: expects a bounded-model point");
    return std::norm(p.z) + block_norm_sum(sig, p.w) - 1.0;
}

/// Signed boundary distance proxy: negative inside, positive outside,
/// regardless of model.
inline double boundary_defect(const BlockSignature& sig, const AmbientPoint& p) {
    if (p.model == Model::Bounded) return defining_R(sig, p);
    return block_norm_sum(sig, p.w) - p.z.imag();
}

enum class Region : std::uint8_t { Interior, Boundary, Exterior };

inline Region classify_point(const BlockSignature& sig, const AmbientPoint& p, double tol) {
    if (tol <= 0) throw std::invalid_argument("classify_point: tol must be positive");
    const double s = boundary_defect(sig, p);
    if (std::abs(s) <= tol) return Region::Boundary;
    return s < 0 ? Region::Interior : Region::Exterior;
}

inline AmbientPoint to_ambient(const BlockSignature& sig, const BoundaryPoint& pt) {
    return {Complex(pt.x, block_norm_sum(sig, pt.w)), pt.w, Model::Unbounded};
}

// ============================================================================
// Cayley-type transform between the models
// ============================================================================

/// Unbounded -> bounded:
///   (z, w) -> ((i-z)/(i+z), 2^{1/alpha_j} w_j / (i+z)^{1/alpha_j}).
/// Principal fractional powers; Im(i+z) >= 1 on the closed domain, so the
/// branch cut is never approached.
inline AmbientPoint cayley(const BlockSignature& sig, const AmbientPoint& p) {
    if (p.model != Model::Unbounded)
        throw ShapeMismatch("cayley: expects an unbounded-model point");
    check_shape(sig, p.w, "cayley");
    const Complex denom = Complex(0, 1) + p.z;
    if (denom == Complex(0, 0)) throw PoleError("cayley: z = -i");
    AmbientPoint out;
    out.model = Model::Bounded;
    out.z = (Complex(0, 1) - p.z) / denom;
    out.w = p.w;
    for (int j = 0; j < sig.blocks(); ++j) {
        const int a = sig.exponent(j);
        const Complex scale = (a == 1)
            ? 2.0 / denom
            : std::pow(2.0, 1.0 / a) / std::pow(denom, 1.0 / a);
        for (Complex& c : out.w[static_cast<std::size_t>(j)]) c *= scale;
    }
    return out;
}

/// Bounded -> unbounded, inverse of cayley; the pole z = -1 sits on the
/// boundary sphere |z| = 1, w = 0.
inline AmbientPoint cayley_inverse(const BlockSignature& sig, const AmbientPoint& p) {
    if (p.model != Model::Bounded)
        throw ShapeMismatch("cayley_inverse: expects a bounded-model point");
    check_shape(sig, p.w, "cayley_inverse");
    const Complex one_plus = 1.0 + p.z;
    if (one_plus == Complex(0, 0)) throw PoleError("cayley_inverse: z = -1");
    AmbientPoint out;
    out.model = Model::Unbounded;
    out.z = Complex(0, 1) * (1.0 - p.z) / one_plus;
    const Complex denom = Complex(0, 1) + out.z; // = 2i/(1+z)
    out.w = p.w;
    for (int j = 0; j < sig.blocks(); ++j) {
        const int a = sig.exponent(j);
        const Complex scale = (a == 1)
            ? denom / 2.0
            : std::pow(denom, 1.0 / a) / std::pow(2.0, 1.0 / a);
        for (Complex& c : out.w[static_cast<std::size_t>(j)]) c *= scale;
    }
    return out;
}

// ============================================================================
// Deterministic boundary sampling
// ============================================================================

/// splitmix64-based stream; stdlib distributions are avoided so that a seed
/// produces the same points on every platform.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    Complex unit_disc() {
        const double r = std::sqrt(uniform01());
        const double t = 2.0 * 3.14159265358979323846 * uniform01();
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t state_;
};

/// Deterministic samples of the strongly pseudoconvex part of the boundary:
/// entries drawn in the unit disc, each block rescaled to norm
/// t_j in [2*sp_margin, 1], x uniform in [-1, 1].  Boundary membership is
/// exact by construction (the chart supplies Im z).
inline std::vector<BoundaryPoint> sample_boundary(const BlockSignature& sig, int count,
                                                  std::uint64_t seed, double sp_margin) {
    if (count < 1) throw std::invalid_argument("sample_boundary: count must be >= 1");
    if (sp_margin <= 0) throw std::invalid_argument("sample_boundary: sp_margin must be positive");
    SampleRng rng(seed);
    const double lo = std::min(2.0 * sp_margin, 1.0);
    std::vector<BoundaryPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        BoundaryPoint pt;
        pt.w.resize(static_cast<std::size_t>(sig.blocks()));
        for (int j = 0; j < sig.blocks(); ++j) {
            CBlock& blk = pt.w[static_cast<std::size_t>(j)];
            blk.resize(static_cast<std::size_t>(sig.block_dim(j)));
            for (Complex& c : blk) c = rng.unit_disc();
            double nrm = std::sqrt(block_sq_norm(blk));
            if (nrm < 1e-12) {
                blk[0] = Complex(1, 0);
                nrm = 1.0;
            }
            const double target = rng.uniform(lo, 1.0);
            for (Complex& c : blk) c *= target / nrm;
        }
        pt.x = rng.uniform(-1.0, 1.0);
        out.push_back(std::move(pt));
    }
    return out;
}

/// Interior samples of the unbounded model: boundary samples lifted by
/// Im z += t with t in [0.05, 1].
inline std::vector<AmbientPoint> sample_interior(const BlockSignature& sig, int count,
                                                 std::uint64_t seed, double sp_margin = 1e-2) {
    auto boundary = sample_boundary(sig, count, seed, sp_margin);
    SampleRng lift(seed ^ 0x5bf0'3635'dee3'9d1dULL);
    std::vector<AmbientPoint> out;
    out.reserve(boundary.size());
    for (const auto& pt : boundary) {
        AmbientPoint p = to_ambient(sig, pt);
        p.z += Complex(0, lift.uniform(0.05, 1.0));
        out.push_back(std::move(p));
    }
    return out;
}

inline bool strongly_pseudoconvex(const BlockSignature& sig, const BoundaryPoint& pt,
                                  double sp_margin) {
    check_shape(sig, pt.w, "strongly_pseudoconvex");
    for (const auto& blk : pt.w)
        if (std::sqrt(block_sq_norm(blk)) < sp_margin) return false;
    return true;
}

} // namespace gpe
