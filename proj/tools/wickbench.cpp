// Command-line surface: scenario builders, batch verification and exports.
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 invalid input.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wick/io.hpp"

using namespace wick;
using nlohmann::json;

namespace {

struct CommonInput {
    std::string input_path;
    std::vector<double> three_cusp;
    int word_length = 6;
    double window_radius = 2.4;
};

void add_common(CLI::App* cmd, CommonInput& in) {
    cmd->add_option("--input", in.input_path, "lamination json file");
    cmd->add_option("--three-cusp", in.three_cusp,
                    "weights a1 a2 a3 of the punctured-sphere lamination")
        ->expected(3);
    cmd->add_option("--word-length", in.word_length, "orbit truncation word length");
    cmd->add_option("--window-radius", in.window_radius, "orbit truncation window radius");
}

FiniteLamination resolve_lamination(const CommonInput& in) {
    if (!in.three_cusp.empty()) {
        ThreeCusp tc = three_cusp_build(in.three_cusp[0], in.three_cusp[1], in.three_cusp[2],
                                        in.window_radius, in.word_length);
        return tc.table.domain().lamination();
    }
    if (in.input_path.empty())
        throw InvalidInput("no lamination given: use --input or --three-cusp");
    return load_lamination_file(in.input_path).lamination;
}

HolonomyTable resolve_table(const CommonInput& in) {
    if (!in.three_cusp.empty()) {
        ThreeCusp tc = three_cusp_build(in.three_cusp[0], in.three_cusp[1], in.three_cusp[2],
                                        in.window_radius, in.word_length);
        return std::move(tc.table);
    }
    if (in.input_path.empty())
        throw InvalidInput("no lamination given: use --input or --three-cusp");
    LaminationInput li = load_lamination_file(in.input_path);
    if (!li.has_group)
        throw InvalidInput("spectra need the group form of the lamination file");
    return HolonomyTable(li.generators, li.base_leaves, li.window_radius, li.word_length);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InvalidInput("cannot open output file: " + out_path);
    out << text << '\n';
}

Target parse_target(const std::string& name) {
    if (name == "hyp") return Target::Hyp;
    if (name == "ds") return Target::DS;
    if (name == "ads") return Target::AdS;
    throw InvalidInput("unknown target: " + name);
}

json ct_json(const CtPoint& c) {
    json j;
    j["p"] = {c.p[0], c.p[1], c.p[2]};
    j["T"] = c.T;
    j["N"] = {c.N[0], c.N[1], c.N[2]};
    j["r"] = {c.r[0], c.r[1], c.r[2]};
    if (c.kind == CtPoint::Band) {
        j["stratum"] = {{"kind", "band"}, {"leaf", c.leaf}, {"t", c.band_t}};
    } else {
        j["stratum"] = {{"kind", "open"}, {"index", c.stratum}};
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measured-lamination spacetimes: construction and verification"};
    app.require_subcommand(1);

    CommonInput in;
    std::string out_path, target_name_arg = "hyp", word_text = "g1";
    std::vector<double> point{2.0, 0.0, 0.0};
    int samples = 200, kappa = 1, subdiv = 24, failure_n = 8;
    double tol = 1e-4, step = 1e-4, alpha_scale = 1.0, level = 1.0, extent = 1.2;
    std::uint64_t seed = 0;
    std::string csv_path;

    auto* cbuild = app.add_subcommand("build", "validate a lamination and summarize its domain");
    add_common(cbuild, in);
    cbuild->add_option("--out", out_path, "summary json path");

    auto* cct = app.add_subcommand("ct", "cosmological time decomposition of a point");
    add_common(cct, in);
    cct->add_option("--point", point, "ambient point")->expected(3);
    cct->add_option("--out", out_path);

    auto* cdev = app.add_subcommand("develop", "developing-map image of a point");
    add_common(cdev, in);
    cdev->add_option("--target", target_name_arg, "hyp | ds | ads");
    cdev->add_option("--point", point, "ambient point")->expected(3);
    cdev->add_option("--out", out_path);

    auto* cver = app.add_subcommand("verify", "pull back the target metric at random samples");
    add_common(cver, in);
    cver->add_option("--target", target_name_arg, "hyp | ds | ads");
    cver->add_option("--samples", samples);
    cver->add_option("--tol", tol);
    cver->add_option("--step", step);
    cver->add_option("--seed", seed);
    cver->add_option("--alpha-scale", alpha_scale, "corruption hook for the negative control");
    cver->add_option("--out", out_path, "report json path");

    auto* cspec = app.add_subcommand("spectrum", "length and rotation spectrum of a word");
    add_common(cspec, in);
    cspec->add_option("--kappa", kappa, "0, 1 or -1");
    cspec->add_option("--word", word_text, "word in the generators, e.g. \"g1 g2\"");
    cspec->add_option("--out", out_path, "csv path");

    auto* cray = app.add_subcommand("ray-deriv", "spectrum derivatives along the weight ray");
    add_common(cray, in);
    cray->add_option("--kappa", kappa);
    cray->add_option("--word", word_text);
    cray->add_option("--step", step);
    cray->add_option("--out", out_path);

    auto* cmesh = app.add_subcommand("mesh", "triangulated level surface export");
    add_common(cmesh, in);
    cmesh->add_option("--level", level, "cosmological time of the surface");
    cmesh->add_option("--extent", extent, "half-width over the horizontal plane");
    cmesh->add_option("--subdiv", subdiv, "grid subdivisions");
    cmesh->add_option("--out", out_path, "obj path");
    cmesh->add_option("--csv", csv_path, "per-vertex csv path");

    auto* ctc = app.add_subcommand("three-cusp", "emit the punctured-sphere lamination");
    std::vector<double> tc_weights{0.3, 0.5, 0.7};
    ctc->add_option("weights", tc_weights, "a1 a2 a3")->expected(3);
    ctc->add_option("--word-length", in.word_length);
    ctc->add_option("--window-radius", in.window_radius);
    ctc->add_option("--out", out_path, "lamination json path");

    auto* cfail = app.add_subcommand("earthquake-failure", "the accumulating-leaves diagnostic");
    cfail->add_option("--n", failure_n, "number of leaves");
    cfail->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cbuild->parsed()) {
            FlatDomain dom(resolve_lamination(in));
            emit(build_summary_json(dom), out_path);
            return 0;
        }
        if (cct->parsed()) {
            FlatDomain dom(resolve_lamination(in));
            emit(ct_json(dom.ct_decompose(Vec3{point[0], point[1], point[2]})).dump(2), out_path);
            return 0;
        }
        if (cdev->parsed()) {
            FlatDomain dom(resolve_lamination(in));
            CtPoint c = dom.ct_decompose(Vec3{point[0], point[1], point[2]});
            Target t = parse_target(target_name_arg);
            json j = ct_json(c);
            if (t == Target::Hyp) {
                Vec4 d = wick_develop(dom, c);
                j["image"] = {d[0], d[1], d[2], d[3]};
                j["boundary_distance"] = hyp_boundary_distance(c);
            } else if (t == Target::DS) {
                Vec4 d = ds_develop(dom, c);
                j["image"] = {d[0], d[1], d[2], d[3]};
            } else {
                Mat2r d = ads_develop(dom, c);
                j["image"] = {{d.a, d.b}, {d.c, d.d}};
            }
            j["target"] = target_name_arg;
            emit(j.dump(2), out_path);
            return 0;
        }
        if (cver->parsed()) {
            FlatDomain dom(resolve_lamination(in));
            VerifyOptions opt;
            opt.samples = samples;
            opt.tol = tol;
            opt.step = step;
            opt.seed = seed;
            opt.alpha_scale = alpha_scale;
            VerificationReport rep = verify_rescaling(dom, parse_target(target_name_arg), opt);
            emit(report_to_json(rep), out_path);
            return rep.pass ? 0 : 1;
        }
        if (cspec->parsed()) {
            HolonomyTable table = resolve_table(in);
            Word w = parse_word(word_text, table.num_generators());
            SpectrumEntry e = spectrum(table, w, kappa);
            emit(spectrum_csv_header() + "\n" + spectrum_csv_row(e), out_path);
            return 0;
        }
        if (cray->parsed()) {
            HolonomyTable table = resolve_table(in);
            Word w = parse_word(word_text, table.num_generators());
            RayDerivative d = ray_derivative(table, w, kappa, step);
            json j;
            j["word"] = word_to_string(w);
            j["kappa"] = kappa;
            j["step"] = step;
            j["d_ell"] = d.d_ell;
            j["d_M"] = d.d_margulis;
            j["M0"] = d.margulis0;
            emit(j.dump(2), out_path);
            return 0;
        }
        if (cmesh->parsed()) {
            FlatDomain dom(resolve_lamination(in));
            LevelMesh mesh = mesh_level_surface(dom, level, extent, subdiv);
            if (!out_path.empty()) {
                std::ofstream obj(out_path);
                if (!obj) throw InvalidInput("cannot open output file: " + out_path);
                write_obj(obj, mesh);
            } else {
                write_obj(std::cout, mesh);
            }
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) throw InvalidInput("cannot open output file: " + csv_path);
                write_mesh_csv(csv, mesh);
            }
            return 0;
        }
        if (ctc->parsed()) {
            ThreeCusp tc = three_cusp_build(tc_weights[0], tc_weights[1], tc_weights[2],
                                            in.window_radius, in.word_length);
            emit(orbit_to_json(tc.table.orbit()), out_path);
            return 0;
        }
        if (cfail->parsed()) {
            EarthquakeFailureCase diag = earthquake_failure_case(failure_n);
            json j = json::array();
            for (const auto& e : diag.entries) {
                j.push_back({{"k", e.k},
                             {"trace", e.trace},
                             {"length", e.length},
                             {"fixed_points", {e.fix_lo, e.fix_hi}},
                             {"axis_gap", e.axis_gap},
                             {"axis_inside", e.axis_inside},
                             {"length_exceeds_k", e.length > e.k}});
            }
            emit(j.dump(2), out_path);
            return 0;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
