#include "htype/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace htype {

nlohmann::json structure_to_json(const Structure& s) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["n"] = s.n();
    doc["m"] = s.m();
    nlohmann::json mats = nlohmann::json::array();
    for (const auto& J : s.matrices()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < J.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < J.cols(); ++k) row.push_back(J(i, k));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    doc["J"] = std::move(mats);
    return doc;
}

Structure structure_from_json(const nlohmann::json& doc) {
    if (!doc.contains("n") || !doc.contains("m") || !doc.contains("J")) {
        throw std::invalid_argument("structure json: missing n, m or J");
    }
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    const int d = 2 * n;
    const auto& mats = doc.at("J");
    if (!mats.is_array()) throw std::invalid_argument("structure json: J must be an array");
    std::vector<Mat> J;
    for (const auto& entry : mats) {
        Mat M(d, d);
        if (entry.is_array() && !entry.empty() && entry.front().is_array()) {
            if (static_cast<int>(entry.size()) != d) throw std::invalid_argument("structure json: wrong row count");
            for (int i = 0; i < d; ++i) {
                const auto& row = entry[static_cast<std::size_t>(i)];
                if (static_cast<int>(row.size()) != d) throw std::invalid_argument("structure json: wrong row length");
                for (int k = 0; k < d; ++k) M(i, k) = row[static_cast<std::size_t>(k)].get<double>();
            }
        } else {
            if (static_cast<int>(entry.size()) != d * d) throw std::invalid_argument("structure json: wrong flat length");
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) M(i, k) = entry[static_cast<std::size_t>(i * d + k)].get<double>();
        }
        J.push_back(std::move(M));
    }
    return Structure(n, m, std::move(J));
}

Structure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return structure_from_json(nlohmann::json::parse(in));
}

void save_structure(const Structure& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << structure_to_json(s).dump(2) << '\n';
}

Structure structure_preset(const std::string& name) {
    if (name == "complex-heisenberg") return build_complex_heisenberg();
    if (name == "heisenberg") return build_heisenberg(1);
    const std::string heis = "heisenberg-";
    if (name.rfind(heis, 0) == 0) return build_heisenberg(std::stoi(name.substr(heis.size())));
    const std::string cliff = "clifford-";
    if (name.rfind(cliff, 0) == 0) {
        const std::string rest = name.substr(cliff.size());
        const auto x = rest.find('x');
        const int m = std::stoi(rest.substr(0, x));
        const int copies = x == std::string::npos ? 1 : std::stoi(rest.substr(x + 1));
        return build_clifford(m, copies);
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

Structure structure_for_dims(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("structure: n and m must be >= 1");
    if (m == 1) return build_heisenberg(n);
    const int w = clifford_module_dim(m);
    if ((2 * n) % w != 0) {
        throw std::invalid_argument("no H-type structure with 2n = " + std::to_string(2 * n) + ", m = " +
                                    std::to_string(m) + " (2n must be a multiple of " + std::to_string(w) + ")");
    }
    return build_clifford(m, 2 * n / w);
}

Vec parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw std::invalid_argument("not a number: '" + item + "'");
        vals.push_back(v);
    }
    return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

GroupPoint parse_group_point(const std::string& text, const Structure& s) {
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw std::invalid_argument("group point must look like 'x1,...,x2n;z1,...,zm'");
    GroupPoint g{parse_vector(text.substr(0, semi)), parse_vector(text.substr(semi + 1))};
    if (g.x.size() != s.horizontal_dim() || g.z.size() != s.m()) {
        throw std::invalid_argument("group point needs " + std::to_string(s.horizontal_dim()) + " x and " +
                                    std::to_string(s.m()) + " z coordinates");
    }
    return g;
}

nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["pass"] = r.pass;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"max_deviation", c.max_deviation}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    doc["checks"] = std::move(checks);
    return doc;
}

nlohmann::json to_json(const EvalResult& r) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["value"] = r.value;
    doc["err"] = r.abs_err;
    doc["method"] = r.method;
    doc["log_value"] = r.log_value;
    doc["converged"] = r.converged;
    doc["extended_precision"] = r.extended_precision;
    if (!r.diagnostic.empty()) doc["diagnostic"] = r.diagnostic;
    return doc;
}

namespace {

nlohmann::json point_json(const ScanPoint& p) {
    return {{"x_norm", p.r}, {"z_norm", p.s}, {"d0", p.d}, {"value", p.value}, {"envelope", p.envelope}, {"ratio", p.ratio}};
}

}  // namespace

nlohmann::json to_json(const ScanReport& r) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["kind"] = envelope_name(r.kind);
    doc["n"] = r.n;
    doc["m"] = r.m;
    doc["grid"] = r.grid.describe();
    doc["rel_tol"] = r.grid.rel_tol;
    doc["d0_min"] = r.d0_min;
    doc["points"] = r.points;
    doc["unconverged"] = r.unconverged;
    doc["min_ratio"] = r.min_ratio;
    doc["max_ratio"] = r.max_ratio;
    doc["argmin"] = point_json(r.argmin);
    doc["argmax"] = point_json(r.argmax);
    doc["pass"] = r.pass;
    return doc;
}

nlohmann::json to_json(const DriftReport& r) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["coarse"] = to_json(r.coarse);
    doc["fine"] = to_json(r.fine);
    doc["drift_min"] = r.drift_min;
    doc["drift_max"] = r.drift_max;
    doc["pass"] = r.pass;
    return doc;
}

nlohmann::json to_json(const GroupPoint& g) {
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["x"] = std::vector<double>(g.x.data(), g.x.data() + g.x.size());
    doc["z"] = std::vector<double>(g.z.data(), g.z.data() + g.z.size());
    return doc;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace htype
