#pragma once

// Dataset ingestion, model-file persistence, grid import/export. All formats
// are line-oriented UTF-8 text; floating-point fields are written with 17
// significant digits so parsing recovers the exact double.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hef/optimize.hpp"
#include "hef/transforms.hpp"

namespace hef {

// Locates a column by header name (case-insensitive) or, if the string is a
// plain non-negative integer, by zero-based position.
struct ColumnMap {
    std::string latitude = "LATITUDE";
    std::string longitude = "LONGITUDE";
};

struct ParseReport {
    std::vector<ManifoldPoint> points;
    long discarded = 0;  // rows missing a coordinate
    long warnings = 0;   // rows with an unparseable numeric field (also discarded)
};

// Tab-separated table with a header row; latitude/longitude in degrees are
// mapped to the sphere chart (beta = (90 - lat) * pi/180, phi = lon * pi/180).
ParseReport parse_earthquakes(std::istream& in, const ColumnMap& columns);

// Generic angle tables (radians) for the other manifolds, same conventions:
// S^1 expects a THETA column, SO(3) expects ALPHA, BETA, GAMMA.
ParseReport parse_angles(std::istream& in, Manifold m);

struct ModelFile {
    int version = 1;
    Manifold manifold = Manifold::S2;
    int L = 0;
    double oversample = 2.0;
    RegScheme scheme = RegScheme::None;
    double reg_strength = 0.0;
    std::vector<double> coef;  // natural parameters, degrees 1..L
};

void write_model(std::ostream& out, const ModelFile& model);
ModelFile read_model(std::istream& in);
void write_model_file(const std::string& path, const ModelFile& model);
ModelFile read_model_file(const std::string& path);

// Self-describing grid table: header with manifold, bandlimit and axis nodes,
// then one row per node (coordinates, weight, value) in storage order.
void export_grid(std::ostream& out, const GridFunction& f);
GridFunction import_grid(std::istream& in);

}  // namespace hef
