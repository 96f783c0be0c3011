#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "gpe/runner.hpp"

namespace {

void add_common(CLI::App* cmd, gpe::RunConfig& cfg, std::string& format) {
    cmd->add_option("--samples", cfg.samples, "number of sample points")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--tol", cfg.tol, "violation tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--sp-margin", cfg.sp_margin,
                    "lower bound on sampled block norms (strongly pseudoconvex part)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification and verification of proper holomorphic maps between "
                 "generalized pseudoellipsoids"};
    app.require_subcommand(1);

    gpe::RunConfig cfg;
    std::string format = "text";

    auto* classify = app.add_subcommand("classify",
                                        "enumerate admissible (sigma, M) pairs and normal forms");
    classify->add_option("--source", cfg.source_path, "source signature file")->required();
    classify->add_option("--target", cfg.target_path, "target signature file")->required();
    classify->add_option("--emit-normal-forms", cfg.emit_dir,
                         "directory for emitted normal-form map files");
    add_common(classify, cfg, format);

    auto* vproper = app.add_subcommand("verify-proper", "sampled properness check of a map file");
    vproper->add_option("--map", cfg.map_path, "map file")->required();
    add_common(vproper, cfg, format);

    auto* vframe = app.add_subcommand("verify-frame", "CR frame invariant report for a signature");
    vframe->add_option("--sig", cfg.source_path, "signature file")->required();
    add_common(vframe, cfg, format);

    auto* hmap = app.add_subcommand("h-map", "print the degree-M homogeneous map term table");
    hmap->add_option("--dim", cfg.hmap_dim, "source dimension m")->required();
    hmap->add_option("--degree", cfg.hmap_degree, "degree M")->required();
    add_common(hmap, cfg, format);

    auto* equiv = app.add_subcommand("equivalence",
                                     "compare two map files up to supplied automorphisms");
    equiv->add_option("--map-a", cfg.map_path, "first map file")->required();
    equiv->add_option("--map-b", cfg.map_b_path, "second map file")->required();
    std::vector<double> pre_affine, post_affine;
    double pre_translate = 0, post_translate = 0;
    auto* pt_opt = equiv->add_option("--pre-translate", pre_translate,
                                     "source translation (z, w) -> (z + t, w)");
    auto* pa_opt = equiv->add_option("--pre-affine", pre_affine,
                                     "source rescaling a0 a1: (z, w) -> ((z-a0)/a1, ...)")
                       ->expected(2);
    auto* qt_opt = equiv->add_option("--post-translate", post_translate, "target translation");
    auto* qa_opt = equiv->add_option("--post-affine", post_affine, "target rescaling a0 a1")
                       ->expected(2);
    add_common(equiv, cfg, format);

    CLI11_PARSE(app, argc, argv);

    if (classify->parsed()) cfg.command = gpe::Command::Classify;
    if (vproper->parsed()) cfg.command = gpe::Command::VerifyProper;
    if (vframe->parsed()) cfg.command = gpe::Command::VerifyFrame;
    if (hmap->parsed()) cfg.command = gpe::Command::HMap;
    if (equiv->parsed()) {
        cfg.command = gpe::Command::Equivalence;
        if (pt_opt->count()) cfg.pre.emplace_back(gpe::RealTranslation{pre_translate});
        if (pa_opt->count()) cfg.pre.emplace_back(gpe::AffineZ{pre_affine[0], pre_affine[1]});
        if (qt_opt->count()) cfg.post.emplace_back(gpe::RealTranslation{post_translate});
        if (qa_opt->count()) cfg.post.emplace_back(gpe::AffineZ{post_affine[0], post_affine[1]});
    }
    cfg.format = (format == "json") ? gpe::OutputFormat::Json : gpe::OutputFormat::Text;

    const auto result = gpe::run(cfg);
    std::cout << gpe::emit_report(result.report, cfg.format);
    return result.exit_code;
}
