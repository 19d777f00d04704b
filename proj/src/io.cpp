#include "wick/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace wick {

using nlohmann::json;

namespace {

FiniteLamination leaves_from_json(const json& leaves, const HPoint& base,
                                  bool allow_base_on_leaf = false) {
    std::vector<WeightedGeodesic> lv;
    for (const auto& leaf : leaves) {
        auto ep = leaf.at("endpoints");
        double w = leaf.at("weight").get<double>();
        lv.push_back({Geodesic::from_endpoints(ep.at(0).get<double>(), ep.at(1).get<double>()), w});
    }
    return FiniteLamination(std::move(lv), base, allow_base_on_leaf);
}

Mat2r matrix_from_json(const json& m) {
    Mat2r g{m.at(0).at(0).get<double>(), m.at(0).at(1).get<double>(),
            m.at(1).at(0).get<double>(), m.at(1).at(1).get<double>()};
    if (std::abs(g.det() - 1.0) > 1e-9)
        throw InvalidInput("lamination json: generator determinant differs from 1");
    return sl2_normalize(g);
}

}  // namespace

LaminationInput load_lamination_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("lamination json: parse error: ") + e.what());
    }
    try {
        auto bp = j.at("basepoint");
        // near-unit base points are renormalized on load
        HPoint base(Vec3{bp.at(0).get<double>(), bp.at(1).get<double>(), bp.at(2).get<double>()},
                    1e-4);
        LaminationInput in;
        if (j.contains("group")) {
            const auto& g = j.at("group");
            in.has_group = true;
            for (const auto& m : g.at("generators")) in.generators.push_back(matrix_from_json(m));
            in.base_leaves = leaves_from_json(g.at("base_leaves"), base);
            in.word_length = g.at("word_length").get<int>();
            in.window_radius = g.at("window_radius").get<double>();
            in.lamination = materialize(
                OrbitLamination{in.generators, in.base_leaves, in.window_radius, in.word_length});
        } else {
            in.lamination = leaves_from_json(j.at("leaves"), base);
        }
        return in;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("lamination json: ") + e.what());
    }
}

LaminationInput load_lamination_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open lamination file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_lamination_json(buf.str());
}

namespace {

json leaves_to_json(const FiniteLamination& lam) {
    json leaves = json::array();
    for (int i = 0; i < lam.size(); ++i)
        leaves.push_back(
            {{"endpoints", {lam.geo(i).xi_minus, lam.geo(i).xi_plus}}, {"weight", lam.weight(i)}});
    return leaves;
}

}  // namespace

std::string lamination_to_json(const FiniteLamination& lam) {
    json j;
    j["basepoint"] = {lam.basepoint.v[0], lam.basepoint.v[1], lam.basepoint.v[2]};
    j["leaves"] = leaves_to_json(lam);
    return j.dump(2);
}

std::string orbit_to_json(const OrbitLamination& orbit) {
    json j;
    const HPoint& b = orbit.base.basepoint;
    j["basepoint"] = {b.v[0], b.v[1], b.v[2]};
    json gens = json::array();
    for (const auto& g : orbit.generators)
        gens.push_back({{g.a, g.b}, {g.c, g.d}});
    j["group"] = {{"generators", gens},
                  {"base_leaves", leaves_to_json(orbit.base)},
                  {"word_length", orbit.word_length},
                  {"window_radius", orbit.window_radius}};
    return j.dump(2);
}

std::string report_to_json(const VerificationReport& rep) {
    json j;
    j["target"] = target_name(rep.target);
    j["tolerance"] = rep.tolerance;
    j["step"] = rep.step;
    j["samples_requested"] = rep.requested_samples;
    j["seed"] = rep.seed;
    j["alpha_scale"] = rep.alpha_scale;
    j["verdict"] = rep.pass ? "pass" : "fail";
    j["max_alpha_residual"] = rep.max_alpha_residual;
    j["max_beta_residual"] = rep.max_beta_residual;
    j["max_cross_residual"] = rep.max_cross_residual;
    j["samples"] = json::array();
    for (const auto& s : rep.samples) {
        j["samples"].push_back({{"p", {s.p[0], s.p[1], s.p[2]}},
                                {"T", s.T},
                                {"alpha_residual", s.alpha_residual},
                                {"beta_residual", s.beta_residual},
                                {"cross_residual", s.cross_residual}});
    }
    return j.dump(2);
}

std::string spectrum_csv_header() { return "word,kappa,ell,M,trace_re,trace_im"; }

std::string spectrum_csv_row(const SpectrumEntry& e) {
    std::ostringstream out;
    out << std::setprecision(16);
    out << '"' << word_to_string(e.word) << '"' << ',' << e.kappa << ',' << e.ell << ','
        << e.margulis << ',' << e.trace.real() << ',' << e.trace.imag();
    return out.str();
}

void write_obj(std::ostream& out, const LevelMesh& mesh) {
    out << std::setprecision(12);
    for (const auto& v : mesh.vertices)
        out << "v " << v.p[1] << ' ' << v.p[2] << ' ' << v.p[0] << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_mesh_csv(std::ostream& out, const LevelMesh& mesh) {
    out << std::setprecision(16);
    out << "p0,p1,p2,T,N0,N1,N2,r0,r1,r2\n";
    for (const auto& v : mesh.vertices) {
        out << v.p[0] << ',' << v.p[1] << ',' << v.p[2] << ',' << v.T << ',' << v.N[0] << ','
            << v.N[1] << ',' << v.N[2] << ',' << v.r[0] << ',' << v.r[1] << ',' << v.r[2] << '\n';
    }
}

std::string build_summary_json(const FlatDomain& dom) {
    const FiniteLamination& lam = dom.lamination();
    SingularityGraph g = dom.singularity_graph();
    double total = 0, max_edge = 0;
    for (const auto& e : g.edges) {
        total += e.length;
        max_edge = std::max(max_edge, e.length);
    }
    json j;
    j["leaves"] = lam.size();
    double mass = 0;
    for (int i = 0; i < lam.size(); ++i) mass += lam.weight(i);
    j["total_weight"] = mass;
    j["singularity"] = {{"vertices", g.vertices.size()},
                        {"edges", g.edges.size()},
                        {"total_edge_length", total},
                        {"max_edge_length", max_edge},
                        {"is_tree", g.vertices.size() == g.edges.size() + 1}};
    j["basepoint"] = {lam.basepoint.v[0], lam.basepoint.v[1], lam.basepoint.v[2]};
    j["valid"] = true;
    return j.dump(2);
}

}  // namespace wick
