#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gpe/geometry.hpp"
#include "test_support.hpp"

using namespace gpe;
using testsupport::Rng;

namespace {

const BlockSignature kSig21({2, 1}, {2});      // alpha = (2, 1)
const BlockSignature kSig221({2, 2, 1}, {2, 3});
const BlockSignature kBall({2}, {});           // N = 1, plain ball

AmbientPoint bounded(Complex z, WBlocks w) { return {z, std::move(w), Model::Bounded}; }
AmbientPoint unbounded(Complex z, WBlocks w) { return {z, std::move(w), Model::Unbounded}; }

double max_component_gap(const AmbientPoint& a, const AmbientPoint& b) {
    double m = std::abs(a.z - b.z);
    for (std::size_t j = 0; j < a.w.size(); ++j)
        for (std::size_t k = 0; k < a.w[j].size(); ++k)
            m = std::max(m, std::abs(a.w[j][k] - b.w[j][k]));
    return m;
}

} // namespace

TEST_CASE("signature validation") {
    REQUIRE_THROWS_AS(BlockSignature({2, 1}, {1}), std::invalid_argument); // alpha_1 < 2
    REQUIRE_THROWS_AS(BlockSignature({2, 0}, {2}), std::invalid_argument);
    REQUIRE_THROWS_AS(BlockSignature({2, 1}, {2, 2}), std::invalid_argument);
    REQUIRE(kSig221.total_dim() == 5);
    REQUIRE(kSig221.exponent(2) == 1);
    REQUIRE(kSig221.block_offset(2) == 4);
}

TEST_CASE("block_norm_sum") {
    REQUIRE(block_norm_sum(kSig21, kSig21.zero_w()) == 0.0);

    WBlocks w = {{Complex(1, 0), Complex(0, 0)}, {Complex(2, 0)}};
    REQUIRE(block_norm_sum(kSig21, w) == Catch::Approx(5.0)); // 1^2 + 4

    // single block: alpha_N = 1 gives the plain squared norm
    WBlocks wb = {{Complex(1, 1), Complex(0, 2)}};
    REQUIRE(block_norm_sum(kBall, wb) == Catch::Approx(6.0));

    SECTION("zero iff w = 0") {
        Rng rng(3);
        for (int t = 0; t < 50; ++t) {
            WBlocks v = kSig221.zero_w();
            v[static_cast<std::size_t>(rng.integer(0, 2))][0] = Complex(rng.uniform(0.1, 1), 0);
            REQUIRE(block_norm_sum(kSig221, v) > 0.0);
        }
    }
    REQUIRE_THROWS_AS(block_norm_sum(kSig21, WBlocks{{Complex(0)}}), ShapeMismatch);
}

TEST_CASE("defining_R") {
    REQUIRE(defining_R(kSig21, bounded(0, kSig21.zero_w())) == Catch::Approx(-1.0));
    REQUIRE(defining_R(kSig21, bounded(1, kSig21.zero_w())) == Catch::Approx(0.0));

    SECTION("rejection-sampled interior points have R < 0") {
        // independent oracle: accept iff the hand-summed norms stay below 1
        Rng rng(17);
        int accepted = 0;
        while (accepted < 100) {
            Complex z(rng.uniform(-1, 1), rng.uniform(-1, 1));
            WBlocks w = kSig221.zero_w();
            double total = std::norm(z);
            for (auto& blk : w)
                for (auto& c : blk) c = Complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
            double n1 = 0, n2 = 0, n3 = 0;
            for (auto& c : w[0]) n1 += std::norm(c);
            for (auto& c : w[1]) n2 += std::norm(c);
            for (auto& c : w[2]) n3 += std::norm(c);
            total += n1 * n1 + n2 * n2 * n2 + n3;
            if (total >= 1.0) continue;
            ++accepted;
            REQUIRE(defining_R(kSig221, bounded(z, w)) < 0.0);
        }
    }
}

TEST_CASE("classify_point") {
    REQUIRE(classify_point(kSig21, bounded(0, kSig21.zero_w()), 1e-9) == Region::Interior);

    // unbounded: z = x + i*|||w|||^{2a} lies on the boundary by construction
    auto pts = sample_boundary(kSig221, 50, 99, 1e-2);
    for (const auto& pt : pts)
        REQUIRE(classify_point(kSig221, to_ambient(kSig221, pt), 1e-12) == Region::Boundary);

    REQUIRE(classify_point(kSig21, unbounded(Complex(0, -1), kSig21.zero_w()), 1e-9) ==
            Region::Exterior);
}

TEST_CASE("cayley basics") {
    auto img = cayley(kSig21, unbounded(Complex(0, 1), kSig21.zero_w()));
    REQUIRE(std::abs(img.z) < 1e-15);
    for (const auto& blk : img.w)
        for (const auto& c : blk) REQUIRE(std::abs(c) < 1e-15);
    REQUIRE(img.model == Model::Bounded);

    auto back = cayley_inverse(kSig21, bounded(0, kSig21.zero_w()));
    REQUIRE(std::abs(back.z - Complex(0, 1)) < 1e-15);

    REQUIRE_THROWS_AS(cayley(kSig21, unbounded(Complex(0, -1), kSig21.zero_w())), PoleError);
    REQUIRE_THROWS_AS(cayley_inverse(kSig21, bounded(-1, kSig21.zero_w())), PoleError);
}

TEST_CASE("cayley maps boundary to boundary and interior to interior") {
    for (const auto* sig : {&kSig21, &kSig221, &kBall}) {
        auto pts = sample_boundary(*sig, 1000, 4242, 1e-2);
        double worst = 0;
        for (const auto& pt : pts)
            worst = std::max(worst, std::abs(defining_R(*sig, cayley(*sig, to_ambient(*sig, pt)))));
        REQUIRE(worst < 1e-10);

        for (const auto& p : sample_interior(*sig, 200, 7, 1e-2)) {
            REQUIRE(classify_point(*sig, p, 1e-12) == Region::Interior);
            REQUIRE(classify_point(*sig, cayley(*sig, p), 1e-12) == Region::Interior);
        }
    }
}

TEST_CASE("cayley round trips") {
    double worst = 0;
    for (const auto* sig : {&kSig21, &kSig221}) {
        for (const auto& p : sample_interior(*sig, 1000, 2024, 1e-2)) {
            auto round = cayley_inverse(*sig, cayley(*sig, p));
            worst = std::max(worst, max_component_gap(p, round));
            auto down = cayley(*sig, p);
            auto round2 = cayley(*sig, cayley_inverse(*sig, down));
            worst = std::max(worst, max_component_gap(down, round2));
        }
    }
    REQUIRE(worst < 1e-12);
}

TEST_CASE("sample_boundary is deterministic and respects the margin") {
    auto a = sample_boundary(kSig221, 64, 12345, 1e-2);
    auto b = sample_boundary(kSig221, 64, 12345, 1e-2);
    REQUIRE(a.size() == 64);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].x == b[i].x);
        REQUIRE(a[i].w == b[i].w);
        REQUIRE(strongly_pseudoconvex(kSig221, a[i], 1e-2));
        REQUIRE(std::abs(a[i].x) <= 1.0);
    }
    auto c = sample_boundary(kSig221, 64, 54321, 1e-2);
    REQUIRE(a[0].w != c[0].w);
}
