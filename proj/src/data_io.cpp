#include "hef/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hef {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

int find_column(const std::vector<std::string>& header, const std::string& key) {
    // A plain non-negative integer selects the column by position.
    if (!key.empty() && std::all_of(key.begin(), key.end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
        const int idx = std::stoi(key);
        if (idx >= static_cast<int>(header.size()))
            throw std::runtime_error("column index " + key + " out of range");
        return idx;
    }
    for (size_t i = 0; i < header.size(); ++i)
        if (iequals(header[i], key)) return static_cast<int>(i);
    throw std::runtime_error("column '" + key + "' not found in header");
}

ParseReport parse_table(std::istream& in, const std::vector<std::string>& keys,
                        const std::vector<std::pair<double, double>>& ranges,
                        const std::function<ManifoldPoint(const std::vector<double>&)>& build) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("input is empty, expected a header row");
    const std::vector<std::string> header = split(strip_cr(line), '\t');
    std::vector<int> cols;
    for (const auto& k : keys) cols.push_back(find_column(header, k));

    ParseReport report;
    std::vector<double> vals(keys.size());
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, '\t');
        bool missing = false, bad = false;
        for (size_t k = 0; k < cols.size() && !missing && !bad; ++k) {
            if (cols[k] >= static_cast<int>(fields.size()) || fields[cols[k]].empty()) {
                missing = true;
            } else if (!parse_double(fields[cols[k]], vals[k])) {
                bad = true;
            } else if (!ranges.empty() &&
                       (vals[k] < ranges[k].first || vals[k] > ranges[k].second)) {
                bad = true;
            }
        }
        if (missing) {
            ++report.discarded;
        } else if (bad) {
            ++report.warnings;
        } else {
            report.points.push_back(build(vals));
        }
    }
    return report;
}

}  // namespace

ParseReport parse_earthquakes(std::istream& in, const ColumnMap& columns) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    return parse_table(
        in, {columns.latitude, columns.longitude}, {{-90.0, 90.0}, {-180.0, 180.0}},
        [&](const std::vector<double>& v) {
            return ManifoldPoint::sphere((90.0 - v[0]) * kDeg, v[1] * kDeg);
        });
}

ParseReport parse_angles(std::istream& in, Manifold m) {
    switch (m) {
        case Manifold::S1:
            return parse_table(in, {"THETA"}, {}, [](const std::vector<double>& v) {
                return ManifoldPoint::circle(v[0]);
            });
        case Manifold::S2:
            return parse_table(in, {"BETA", "PHI"}, {}, [](const std::vector<double>& v) {
                return ManifoldPoint::sphere(v[0], v[1]);
            });
        case Manifold::SO3:
            return parse_table(in, {"ALPHA", "BETA", "GAMMA"}, {},
                               [](const std::vector<double>& v) {
                                   return ManifoldPoint::rotation(v[0], v[1], v[2]);
                               });
    }
    throw std::logic_error("parse_angles: unknown manifold");
}

namespace {

Manifold manifold_from_name(const std::string& name) {
    if (name == "s1") return Manifold::S1;
    if (name == "s2") return Manifold::S2;
    if (name == "so3") return Manifold::SO3;
    throw std::runtime_error("unknown manifold tag '" + name + "'");
}

[[noreturn]] void model_error(int lineno, const std::string& what) {
    throw std::runtime_error("model file, line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

void write_model(std::ostream& out, const ModelFile& model) {
    if (static_cast<long>(model.coef.size()) != param_count(model.manifold, model.L))
        throw std::invalid_argument("write_model: coefficient count does not match bandlimit");
    out << "hef model " << model.version << "\n";
    out << "manifold " << manifold_name(model.manifold) << "\n";
    out << "bandlimit " << model.L << "\n";
    out << "oversample " << fmt(model.oversample) << "\n";
    out << "reg " << (model.scheme == RegScheme::Plancherel ? "plancherel" : "none") << " "
        << fmt(model.reg_strength) << "\n";
    out << "coefficients " << model.coef.size() << "\n";
    for (double c : model.coef) out << fmt(c) << "\n";
}

ModelFile read_model(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw std::runtime_error("model file is empty");
    ++lineno;
    line = strip_cr(line);
    {
        std::istringstream h(line);
        std::string a, b;
        int version = -1;
        h >> a >> b >> version;
        if (a != "hef" || b != "model") model_error(lineno, "not a hef model file");
        if (version != 1)
            model_error(lineno, "unsupported model version " + std::to_string(version));
    }
    ModelFile model;
    bool have_manifold = false, have_L = false, have_count = false;
    long count = -1;
    while (!have_count) {
        if (!std::getline(in, line)) model_error(lineno, "unexpected end of header");
        ++lineno;
        std::istringstream ls(strip_cr(line));
        std::string key;
        ls >> key;
        if (key == "manifold") {
            std::string name;
            ls >> name;
            model.manifold = manifold_from_name(name);
            have_manifold = true;
        } else if (key == "bandlimit") {
            if (!(ls >> model.L) || model.L < 0) model_error(lineno, "bad bandlimit");
            have_L = true;
        } else if (key == "oversample") {
            std::string v;
            if (!(ls >> v) || !parse_double(v, model.oversample))
                model_error(lineno, "bad oversample value");
        } else if (key == "reg") {
            std::string scheme, v;
            if (!(ls >> scheme >> v) || !parse_double(v, model.reg_strength))
                model_error(lineno, "bad regularization line");
            if (scheme == "plancherel")
                model.scheme = RegScheme::Plancherel;
            else if (scheme == "none")
                model.scheme = RegScheme::None;
            else
                model_error(lineno, "unknown regularization scheme '" + scheme + "'");
        } else if (key == "coefficients") {
            if (!(ls >> count) || count < 0) model_error(lineno, "bad coefficient count");
            have_count = true;
        } else {
            model_error(lineno, "unknown field '" + key + "' for hef model version 1");
        }
    }
    if (!have_manifold) model_error(lineno, "missing manifold");
    if (!have_L) model_error(lineno, "missing bandlimit");
    if (count != param_count(model.manifold, model.L))
        model_error(lineno, "coefficient count " + std::to_string(count) + " does not match " +
                                std::to_string(param_count(model.manifold, model.L)) +
                                " for bandlimit " + std::to_string(model.L));
    model.coef.resize(count);
    for (long i = 0; i < count; ++i) {
        if (!std::getline(in, line)) model_error(lineno, "truncated coefficient list");
        ++lineno;
        if (!parse_double(strip_cr(line), model.coef[i]))
            model_error(lineno, "corrupt coefficient value");
    }
    return model;
}

void write_model_file(const std::string& path, const ModelFile& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_model(out, model);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ModelFile read_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_model(in);
}

void export_grid(std::ostream& out, const GridFunction& f) {
    const GridSpec& spec = f.spec;
    if (static_cast<long>(f.values.size()) != spec.node_count())
        throw std::invalid_argument("export_grid: value count does not match the grid");
    out << "hef grid 1\n";
    out << "manifold " << manifold_name(spec.manifold) << "\n";
    out << "grid_bandlimit " << spec.B << "\n";
    auto axis = [&](const char* name, const std::vector<double>& nodes) {
        out << "axis " << name << " " << nodes.size();
        for (double v : nodes) out << " " << fmt(v);
        out << "\n";
    };
    switch (spec.manifold) {
        case Manifold::S1:
            axis("theta", spec.periodic_nodes);
            out << "columns theta weight value\n";
            break;
        case Manifold::S2:
            axis("beta", spec.beta_nodes);
            axis("phi", spec.periodic_nodes);
            out << "columns beta phi weight value\n";
            break;
        case Manifold::SO3:
            axis("beta", spec.beta_nodes);
            axis("alpha", spec.periodic_nodes);
            axis("gamma", spec.periodic_nodes);
            out << "columns alpha beta gamma weight value\n";
            break;
    }
    out << "nodes " << spec.node_count() << "\n";
    for (long i = 0; i < spec.node_count(); ++i) {
        const ManifoldPoint p = spec.point(i);
        switch (spec.manifold) {
            case Manifold::S1:
                out << fmt(p.theta());
                break;
            case Manifold::S2:
                out << fmt(p.beta()) << " " << fmt(p.phi());
                break;
            case Manifold::SO3:
                out << fmt(p.alpha()) << " " << fmt(p.beta()) << " " << fmt(p.gamma());
                break;
        }
        out << " " << fmt(spec.weight(i)) << " " << fmt(f.values[i]) << "\n";
    }
}

GridFunction import_grid(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next = [&]() {
        if (!std::getline(in, line))
            throw std::runtime_error("grid file, line " + std::to_string(lineno + 1) +
                                     ": unexpected end of file");
        ++lineno;
        line = strip_cr(line);
    };
    next();
    if (line != "hef grid 1") throw std::runtime_error("not a hef grid file (version 1)");
    next();
    std::istringstream ms(line);
    std::string key, name;
    ms >> key >> name;
    if (key != "manifold") throw std::runtime_error("grid file: expected manifold line");
    const Manifold m = manifold_from_name(name);
    next();
    std::istringstream bs(line);
    int B = 0;
    bs >> key >> B;
    if (key != "grid_bandlimit" || B < 1) throw std::runtime_error("grid file: bad bandlimit");

    GridFunction f{make_grid(m, B), {}};
    const int naxes = m == Manifold::S1 ? 1 : (m == Manifold::S2 ? 2 : 3);
    for (int a = 0; a < naxes; ++a) next();  // axis lines are informational
    next();
    if (line.rfind("columns", 0) != 0) throw std::runtime_error("grid file: expected columns line");
    next();
    std::istringstream ns(line);
    long nodes = 0;
    ns >> key >> nodes;
    if (key != "nodes" || nodes != f.spec.node_count())
        throw std::runtime_error("grid file: node count does not match the grid");
    f.values.resize(nodes);
    const int ncoord = m == Manifold::S1 ? 1 : (m == Manifold::S2 ? 2 : 3);
    for (long i = 0; i < nodes; ++i) {
        next();
        const std::vector<std::string> fields = split(line, ' ');
        if (static_cast<int>(fields.size()) != ncoord + 2 ||
            !parse_double(fields.back(), f.values[i]))
            throw std::runtime_error("grid file, line " + std::to_string(lineno) +
                                     ": corrupt row");
    }
    return f;
}

}  // namespace hef
