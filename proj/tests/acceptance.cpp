// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpe/classify.hpp"
#include "gpe/crframe.hpp"
#include "gpe/dangelo.hpp"
#include "gpe/formats.hpp"
#include "gpe/geometry.hpp"
#include "gpe/holomap.hpp"
#include "test_support.hpp"

using namespace gpe;
using testsupport::Rng;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& name, bool pass, double elapsed,
            double budget, const std::string& detail) {
    const bool in_budget = elapsed < budget;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d: %s (%.2fs of %.0fs budget) %s%s\n", ok ? "PASS" : "FAIL",
                criterion, name.c_str(), elapsed, budget, detail.c_str(),
                in_budget ? "" : " [over budget]");
}

double tangent_gap(const CoordTangent& a, const CoordTangent& b) {
    double m = std::abs(a.c_x - b.c_x);
    for (std::size_t j = 0; j < a.c_w.size(); ++j)
        for (std::size_t k = 0; k < a.c_w[j].size(); ++k)
            m = std::max(m, std::abs(a.c_w[j][k] - b.c_w[j][k]));
    return m;
}

double point_gap(const AmbientPoint& a, const AmbientPoint& b) {
    double m = std::abs(a.z - b.z);
    for (std::size_t j = 0; j < a.w.size(); ++j)
        for (std::size_t k = 0; k < a.w[j].size(); ++k)
            m = std::max(m, std::abs(a.w[j][k] - b.w[j][k]));
    return m;
}

// ---------------------------------------------------------------------------
// criterion 1: exact properness identity
// ---------------------------------------------------------------------------
void criterion_1() {
    Timer t;
    Rng rng(20240901);
    bool pass = true;
    int checked = 0;
    for (unsigned m = 1; m <= 4 && pass; ++m)
        for (unsigned M = 1; M <= 5 && pass; ++M)
            for (int trial = 0; trial < 100; ++trial) {
                if (!norm_identity_exact(m, M, testsupport::random_gaussian_vector(rng, m))) {
                    pass = false;
                    break;
                }
                ++checked;
            }
    std::ostringstream d;
    d << checked << " exact identities, zero tolerance";
    report(1, "exact properness identity |H_M(z)|^2 = |z|^{2M}", pass, t.seconds(), 10, d.str());
}

// ---------------------------------------------------------------------------
// criterion 2: dimension formula
// ---------------------------------------------------------------------------
void criterion_2() {
    Timer t;
    bool pass = true;
    for (unsigned m = 1; m <= 6; ++m)
        for (unsigned M = 1; M <= 6; ++M)
            if (BigInt(h_map(m, M).target_dim()) != count_T(M, m)) pass = false;
    report(2, "dimension formula dim H_M = T(M, m)", pass, t.seconds(), 1, "m, M <= 6, exact");
}

// ---------------------------------------------------------------------------
// criterion 3: frame suite
// ---------------------------------------------------------------------------
const std::vector<BlockSignature>& frame_signatures() {
    static const std::vector<BlockSignature> sigs = {
        BlockSignature({2, 2}, {2}),       BlockSignature({3, 1}, {4}),
        BlockSignature({2, 2, 2}, {2, 3}), BlockSignature({3, 3, 1}, {4, 4}),
        BlockSignature({2, 3, 2}, {3, 2}),
    };
    return sigs;
}

void criterion_3() {
    Timer t;
    double theta_max = 0, kernel_max = 0, zeros_max = 0, idem_max = 0, recon_max = 0;
    Rng rng(3llu);
    for (const auto& sig : frame_signatures()) {
        for (const auto& pt : sample_boundary(sig, 1000, 33, 1e-2)) {
            std::vector<CoordTangent> Ws, Es;
            for (int j = 0; j < sig.blocks(); ++j) {
                Es.push_back(field_E(sig, pt, j));
                theta_max = std::max(theta_max, std::abs(theta_eval(sig, pt, Es.back())));
                CoordTangent kernel;
                kernel.c_w = sig.zero_w();
                for (int l = 0; l < sig.block_dim(j); ++l) {
                    auto W = field_W(sig, pt, j, l);
                    theta_max = std::max(theta_max, std::abs(theta_eval(sig, pt, W)));
                    theta_max = std::max(theta_max,
                                         std::abs(theta_eval(sig, pt, field_L(sig, pt, j, l))));
                    const Complex wl =
                        pt.w[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
                    kernel.c_x += wl * W.c_x;
                    for (std::size_t b = 0; b < kernel.c_w.size(); ++b)
                        for (std::size_t k = 0; k < kernel.c_w[b].size(); ++k)
                            kernel.c_w[b][k] += wl * W.c_w[b][k];
                    Ws.push_back(std::move(W));
                }
                kernel_max = std::max(kernel_max, tangent_sup_norm(kernel));
            }
            // tabulated zero entries: every W against every E, cross-block
            // W-W and E-E pairs
            for (const auto& W : Ws)
                for (const auto& E : Es)
                    zeros_max = std::max(zeros_max, std::abs(levi_form_coord(sig, pt, W, E)));
            int off_a = 0;
            for (int ja = 0; ja < sig.blocks(); ++ja) {
                int off_b = 0;
                for (int jb = 0; jb < sig.blocks(); ++jb) {
                    if (ja != jb)
                        for (int la = 0; la < sig.block_dim(ja); ++la)
                            for (int lb = 0; lb < sig.block_dim(jb); ++lb)
                                zeros_max = std::max(
                                    zeros_max,
                                    std::abs(levi_form_coord(
                                        sig, pt,
                                        Ws[static_cast<std::size_t>(off_a + la)],
                                        Ws[static_cast<std::size_t>(off_b + lb)])));
                    off_b += sig.block_dim(jb);
                }
                off_a += sig.block_dim(ja);
            }
            for (int ja = 0; ja < sig.blocks(); ++ja)
                for (int jb = 0; jb < sig.blocks(); ++jb)
                    if (ja != jb)
                        zeros_max = std::max(zeros_max,
                                             std::abs(levi_form_coord(
                                                 sig, pt, Es[static_cast<std::size_t>(ja)],
                                                 Es[static_cast<std::size_t>(jb)])));

            WBlocks c = sig.zero_w();
            for (auto& blk : c)
                for (auto& v : blk) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            const CoordTangent X = make_tangent(sig, pt, std::move(c));
            const CoordTangent QX = project_Q(sig, pt, X);
            idem_max = std::max(idem_max, tangent_gap(project_Q(sig, pt, QX), QX));
            recon_max = std::max(
                recon_max, tangent_gap(frame_reconstruct(sig, pt, frame_decompose(sig, pt, X)), X));
        }
    }
    const double worst = std::max({theta_max, kernel_max, zeros_max, idem_max, recon_max});
    std::ostringstream d;
    d << "max violations: theta " << theta_max << ", kernel " << kernel_max << ", levi zeros "
      << zeros_max << ", Q idempotence " << idem_max << ", reconstruction " << recon_max;
    report(3, "frame suite on 5 signatures x 1000 points", worst < 1e-10, t.seconds(), 30,
           d.str());
}

// ---------------------------------------------------------------------------
// criterion 4 (+8): normal forms pass properness, block structure, pullback positivity
// ---------------------------------------------------------------------------
std::vector<ClassificationProblem> acceptance_matrix() {
    auto S = [](std::vector<int> d, std::vector<int> e) { return BlockSignature(d, e); };
    std::vector<ClassificationProblem> out;
    out.emplace_back(S({2, 1}, {2}), S({2, 1}, {2}));
    out.emplace_back(S({2, 1}, {4}), S({3, 1}, {2}));
    out.emplace_back(S({2, 1}, {6}), S({4, 1}, {2}));
    out.emplace_back(S({2, 2, 1}, {2, 3}), S({2, 2, 1}, {2, 3}));
    out.emplace_back(S({2, 2, 2}, {4, 6}), S({3, 10, 2}, {2, 3}));
    out.emplace_back(S({2, 2, 1}, {2, 2}), S({2, 2, 1}, {2, 2}));
    out.emplace_back(S({2, 2, 1}, {4, 2}), S({2, 3, 1}, {2, 2}));
    out.emplace_back(S({3, 1}, {2}), S({6, 1}, {2}));
    out.emplace_back(S({3, 1}, {4}), S({6, 1}, {2}));
    out.emplace_back(S({2, 1}, {3}), S({5, 1}, {2}));   // no divisibility
    out.emplace_back(S({2, 1}, {2}), S({1, 1}, {2}));   // dimension bound fails
    out.emplace_back(S({2, 3}, {2}), S({2, 2}, {2}));   // last block too small
    out.emplace_back(S({2}, {}), S({5}, {}));
    out.emplace_back(S({3}, {}), S({3}, {}));
    out.emplace_back(S({2, 2, 2}, {2, 2}), S({2, 2, 2}, {2, 2}));
    out.emplace_back(S({2, 2, 2}, {4, 2}), S({3, 2, 3}, {2, 2}));
    out.emplace_back(S({2, 3, 1}, {6, 3}), S({4, 3, 2}, {2, 3}));
    out.emplace_back(S({3, 2, 1}, {2, 4}), S({3, 5, 1}, {2, 2}));
    out.emplace_back(S({2, 2}, {3}), S({4, 2}, {3}));
    out.emplace_back(S({2, 2}, {4}), S({3, 3}, {2}));
    return out;
}

void criteria_4_and_8() {
    Timer t;
    bool pass = true;
    double max_cr = 0;
    int forms = 0;
    std::ostringstream why;
    for (const auto& p : acceptance_matrix()) {
        for (const auto& a : admissible_embeddings(p)) {
            ++forms;
            const PolyMap nf = build_normal_form(p, a);
            const auto proper = verify_proper(nf, 1000, 1000, 44, 1e-9);
            if (!proper.pass() || proper.max_boundary_residual >= 1e-9) {
                pass = false;
                why << " properness failed for " << a.label() << ";";
            }
            const auto samples = sample_boundary(p.source, 100, 45, 1e-2);
            const auto bs = block_structure(nf, samples, 1e-7);
            max_cr = std::max(max_cr, bs.max_cr_residual);

            const int N = p.source.blocks();
            std::vector<int> target_of(static_cast<std::size_t>(N));
            for (int j = 0; j < N - 1; ++j)
                target_of[static_cast<std::size_t>(a.sigma[static_cast<std::size_t>(j)])] = j;
            target_of[static_cast<std::size_t>(N - 1)] = N - 1;
            for (int s = 0; s < N; ++s) {
                const auto& hits = bs.hits[static_cast<std::size_t>(s)];
                if (p.source.block_dim(s) >= 2) {
                    if (hits != std::set<int>{target_of[static_cast<std::size_t>(s)]}) {
                        pass = false;
                        why << " block structure wrong for " << a.label() << ";";
                    }
                } else if (!hits.empty()) {
                    pass = false;
                    why << " unexpected hits from a rank-0 block;";
                }
                if (bs.e_component_max[static_cast<std::size_t>(s)] >= 1e-9) {
                    pass = false;
                    why << " radial leak " << bs.e_component_max[static_cast<std::size_t>(s)]
                        << ";";
                }
            }

            const auto jac = differentiate(nf);
            for (const auto& pt : sample_boundary(p.source, 1000, 46, 1e-2)) {
                const auto pull = theta_pullback_factor(nf, jac, pt);
                if (!(pull.f > 0) || pull.residual >= 1e-9) {
                    pass = false;
                    why << " pullback factor not positive;";
                    break;
                }
            }
        }
    }
    std::ostringstream d;
    d << forms << " normal forms across 20 problems" << why.str();
    report(4, "normal-form properness, block structure and pullback positivity", pass, t.seconds(), 120, d.str());

    Timer t8;
    std::ostringstream d8;
    d8 << "max cr residual " << max_cr << " across all pushforwards of criterion 4";
    report(8, "CR sanity of the pushforward engine", max_cr < 1e-10, t8.seconds(), 10, d8.str());
}

// ---------------------------------------------------------------------------
// criteria 5 and 6: classifier grid vs brute-force oracle, small-regime law
// ---------------------------------------------------------------------------
struct GridCase {
    std::vector<int> m, alpha, n, beta; // alpha/beta without the trailing 1
};

std::vector<GridCase> classifier_grid() {
    std::vector<GridCase> grid;
    for (int m1 : {2, 3, 4, 6})
        for (int mN : {1, 2, 6})
            for (int a1 : {2, 3, 4, 6, 8, 12})
                for (int n1 : {2, 3, 4, 6})
                    for (int nN : {1, 2, 6})
                        for (int b1 : {2, 3, 4, 6, 8, 12})
                            grid.push_back({{m1, mN}, {a1}, {n1, nN}, {b1}});
    const std::vector<std::vector<int>> m3 = {{2, 2, 1}, {2, 3, 1}, {3, 3, 2}, {2, 2, 2}};
    const std::vector<std::vector<int>> n3 = {{3, 3, 1}, {3, 6, 2}, {6, 6, 1}, {2, 3, 1}};
    for (const auto& m : m3)
        for (int a1 : {2, 4, 6, 12})
            for (int a2 : {2, 4, 6, 12})
                for (const auto& n : n3)
                    for (int b1 : {2, 3, 4, 6})
                        for (int b2 : {2, 3, 4, 6})
                            grid.push_back({m, {a1, a2}, n, {b1, b2}});
    const std::vector<std::vector<int>> m4 = {{2, 2, 2, 1}, {3, 2, 2, 1}};
    const std::vector<std::vector<int>> n4 = {{3, 3, 3, 1}, {6, 6, 6, 2}};
    for (const auto& m : m4)
        for (int a1 : {2, 4, 6})
            for (int a2 : {2, 4, 6})
                for (int a3 : {2, 4, 6})
                    for (const auto& n : n4)
                        for (int b1 : {2, 3})
                            for (int b2 : {2, 3})
                                for (int b3 : {2, 3})
                                    grid.push_back({m, {a1, a2, a3}, n, {b1, b2, b3}});
    return grid;
}

void criteria_5_and_6() {
    Timer t;
    const auto grid = classifier_grid();
    bool agree = true;
    long long cases = 0, admissible_total = 0;
    bool regime_ok = true;
    bool found_m2 = false;
    ClassificationProblem m2_problem(BlockSignature({2, 1}, {2}), BlockSignature({2, 1}, {2}));
    Admissible m2_admissible;
    for (const auto& g : grid) {
        ++cases;
        ClassificationProblem p(BlockSignature(g.m, g.alpha), BlockSignature(g.n, g.beta));
        const auto lib = admissible_embeddings(p);
        auto ab = g.alpha;
        ab.push_back(1);
        auto bb = g.beta;
        bb.push_back(1);
        const auto brute = testsupport::brute_force_admissible({g.m, ab, g.n, bb});
        if (lib.size() != brute.size()) {
            agree = false;
        } else {
            for (std::size_t i = 0; i < lib.size(); ++i)
                if (lib[i].sigma != brute[i].sigma || lib[i].M != brute[i].M) agree = false;
        }
        admissible_total += static_cast<long long>(lib.size());
        for (const auto& a : lib) {
            bool small_regime = true;
            bool has_m2 = false;
            for (std::size_t j = 0; j < a.sigma.size(); ++j) {
                if (p.target.block_dim(static_cast<int>(j)) >=
                    2 * p.source.block_dim(a.sigma[j]) - 1)
                    small_regime = false;
                if (a.M[j] == 2) has_m2 = true;
            }
            if (small_regime)
                for (int Mj : a.M)
                    if (Mj != 1) regime_ok = false;
            if (has_m2 && !found_m2) {
                found_m2 = true;
                m2_problem = p;
                m2_admissible = a;
            }
        }
    }
    {
        std::ostringstream d;
        d << cases << " grid cases, " << admissible_total << " admissible pairs, orders identical";
        report(5, "classifier agrees with the brute-force oracle", agree, t.seconds(), 60,
               d.str());
    }

    Timer t6;
    bool inequiv_ok = found_m2;
    if (found_m2) {
        const PolyMap nf = build_normal_form(m2_problem, m2_admissible);
        // the degree-one comparison map on the same shapes: (z, w_sigma(j), 0)
        PolyMap embed{m2_problem.source, m2_problem.target, nf.F, {}};
        embed.G.resize(static_cast<std::size_t>(m2_problem.source.blocks()));
        const int N = m2_problem.source.blocks();
        for (int j = 0; j < N; ++j) {
            const int src = (j < N - 1) ? m2_admissible.sigma[static_cast<std::size_t>(j)] : N - 1;
            for (int mu = 0; mu < m2_problem.source.block_dim(src); ++mu) {
                std::vector<unsigned> e(
                    static_cast<std::size_t>(m2_problem.source.block_dim(src)), 0);
                e[static_cast<std::size_t>(mu)] = 1;
                embed.G[static_cast<std::size_t>(j)].push_back(Poly{make_monomial(
                    m2_problem.source, PolyCoeff(SurdScalar(1)), 0, src, MultiIndex(e))});
            }
            embed.G[static_cast<std::size_t>(j)].resize(
                static_cast<std::size_t>(m2_problem.target.block_dim(j)));
        }
        const auto samples = sample_interior(m2_problem.source, 200, 47, 1e-2);
        CMatrix phase(static_cast<std::size_t>(m2_problem.target.block_dim(0)));
        for (std::size_t i = 0; i < phase.size(); ++i) {
            phase[i].assign(phase.size(), Complex(0, 0));
            phase[i][i] = (i == 0) ? Complex(0, 1) : Complex(1, 0);
        }
        const std::vector<std::vector<AutomorphismSpec>> pre_family = {
            {},
            {AutomorphismSpec(RealTranslation{0.4})},
            {AutomorphismSpec(AffineZ{0.1, 2.0})},
        };
        const std::vector<std::vector<AutomorphismSpec>> post_family = {
            {},
            {AutomorphismSpec(RealTranslation{-0.2})},
            {AutomorphismSpec(AffineZ{0.0, 0.5})},
            {AutomorphismSpec(BlockUnitary{0, phase})},
        };
        for (const auto& pre : pre_family)
            for (const auto& post : post_family)
                if (equivalent_at_samples(nf, embed, pre, post, samples, 1e-6).equivalent)
                    inequiv_ok = false;
    }
    std::ostringstream d;
    d << "small-dimension admissibles all have M = 1"
      << (found_m2 ? "; M = 2 witness found and inequivalent to every degree-one form"
                   : "; NO M = 2 witness found");
    report(6, "small-regime law and degree separation", regime_ok && inequiv_ok, t6.seconds(), 60,
           d.str());
}

// ---------------------------------------------------------------------------
// criterion 7: Cayley suite
// ---------------------------------------------------------------------------
void criterion_7() {
    Timer t;
    double round_max = 0, boundary_max = 0, agree_max = 0;
    for (const auto& sig : frame_signatures()) {
        for (const auto& p : sample_interior(sig, 1000, 48, 1e-2)) {
            round_max = std::max(round_max, point_gap(cayley_inverse(sig, cayley(sig, p)), p));
            const auto down = cayley(sig, p);
            round_max = std::max(round_max, point_gap(cayley(sig, cayley_inverse(sig, down)), down));
        }
        for (const auto& bp : sample_boundary(sig, 1000, 49, 1e-2))
            boundary_max = std::max(
                boundary_max, std::abs(defining_R(sig, cayley(sig, to_ambient(sig, bp)))));
    }
    int compared = 0;
    for (const auto& p : acceptance_matrix()) {
        if (compared >= 5) break;
        const auto adm = admissible_embeddings(p);
        if (adm.empty()) continue;
        ++compared;
        const auto bnf = build_normal_form_bounded(p, adm[0]);
        for (const auto& q : sample_interior(p.source, 1000, 50, 1e-2)) {
            const AmbientPoint pb = cayley(p.source, q);
            agree_max = std::max(agree_max,
                                 point_gap(bnf.eval_direct(pb), bnf.eval_conjugated(pb)));
        }
    }
    std::ostringstream d;
    d << "round trip " << round_max << ", boundary image " << boundary_max
      << ", bounded-vs-conjugated " << agree_max << " over " << compared << " normal forms";
    const bool pass = round_max < 1e-10 && boundary_max < 1e-10 && agree_max < 1e-10;
    report(7, "Cayley suite", pass, t.seconds(), 30, d.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criteria_4_and_8();
    criteria_5_and_6();
    criterion_7();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
