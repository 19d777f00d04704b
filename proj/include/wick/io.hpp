#pragma once

#include <iosfwd>

#include "wick/holonomy.hpp"

// File formats of the tool: the lamination description, verification
// reports, spectrum rows and level-surface meshes.
//
// Lamination JSON:
//   { "basepoint": [x0, x1, x2],
//     "leaves": [{"endpoints": [t1, t2], "weight": w}, ...],
//     "group": {                               // optional orbit form
//        "generators": [[[a,b],[c,d]], ...],   // det 1 up to 1e-9
//        "base_leaves": [{"endpoints": ..., "weight": ...}, ...],
//        "word_length": N, "window_radius": R } }
// Angles are radians on the circle at infinity.

namespace wick {

struct LaminationInput {
    FiniteLamination lamination;     // materialized when a group is present
    bool has_group = false;
    std::vector<Mat2r> generators;
    FiniteLamination base_leaves;    // the orbit seeds when has_group
    double window_radius = 0;
    int word_length = 0;
};

LaminationInput load_lamination_json(const std::string& text);
LaminationInput load_lamination_file(const std::string& path);
std::string lamination_to_json(const FiniteLamination& lam);
std::string orbit_to_json(const OrbitLamination& orbit);

std::string report_to_json(const VerificationReport& rep);

std::string spectrum_csv_header();
std::string spectrum_csv_row(const SpectrumEntry& e);

void write_obj(std::ostream& out, const LevelMesh& mesh);
void write_mesh_csv(std::ostream& out, const LevelMesh& mesh);

std::string build_summary_json(const FlatDomain& dom);

}  // namespace wick
