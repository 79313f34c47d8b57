#include "kw/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace kw {

std::string Report::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["environment"] = {{"dim", dim}, {"n", n}, {"seed", seed}, {"stencil", stencil}};
    j["pass"] = all_pass();
    j["diverged"] = diverged;
    if (!divergence_note.empty()) j["divergence_note"] = divergence_note;
    j["checks"] = nlohmann::json::array();
    for (const auto &r : records) {
        nlohmann::json c;
        c["name"] = r.name;
        c["measured"] = r.measured;
        if (r.informational)
            c["diagnostic"] = true;
        else
            c[r.is_order ? "min_order" : "tolerance"] = r.bound;
        c["pass"] = r.pass;
        if (!r.note.empty()) c["note"] = r.note;
        j["checks"].push_back(c);
    }
    return j.dump(2);
}

void Report::write_json(const std::string &path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report to " + path);
    out << to_json() << "\n";
}

void Report::print(std::ostream &os) const {
    for (const auto &r : records) {
        if (r.informational) {
            os << "INFO  " << r.name << ": " << r.measured;
        } else {
            os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": measured " << r.measured
               << (r.is_order ? " (min order " : " (tol ") << r.bound << ")";
        }
        if (!r.note.empty()) os << "  [" << r.note << "]";
        os << "\n";
    }
}

OrderFit fit_order(const std::vector<double> &h, const std::vector<double> &defect,
                   double floor) {
    if (h.size() != defect.size() || h.size() < 3)
        throw std::invalid_argument("order fit needs at least three grid sizes");
    OrderFit f;

    bool all_floored = true;
    for (double d : defect)
        if (d > floor) all_floored = false;
    if (all_floored) {
        f.floored = true;
        f.note = "floor reached";
        return f;
    }

    // h is decreasing along the list; defects should decrease with it
    for (size_t i = 0; i + 1 < defect.size(); ++i)
        if (defect[i + 1] >= defect[i] && defect[i + 1] > floor) f.monotone = false;
    if (!f.monotone) f.note = "no clean order";

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = h.size();
    for (size_t i = 0; i < m; ++i) {
        double x = std::log(h[i]);
        double y = std::log(std::max(defect[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = m * sxx - sx * sx;
    f.order = (m * sxy - sx * sy) / denom;
    double a = (sy - f.order * sx) / m;
    double res = 0;
    for (size_t i = 0; i < m; ++i) {
        double e = std::log(std::max(defect[i], 1e-300)) - (a + f.order * std::log(h[i]));
        res += e * e;
    }
    f.fit_residual = std::sqrt(res / m);
    return f;
}

void write_csv(const std::string &path, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    out.precision(17);
    for (const auto &row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
}

} // namespace kw
