#ifndef KW_REPORT_HPP
#define KW_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "kw/grid.hpp"

namespace kw {

/// One named check: a measured value against a tolerance or an expected order.
struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;      // tolerance (measured <= bound) or minimum order
    bool is_order = false;   // order checks pass when measured >= bound
    bool pass = false;
    std::string note;
    bool informational = false; // diagnostic only, never fails

    static CheckRecord tolerance(const std::string &name, double measured, double tol,
                                 const std::string &note = "") {
        return {name, measured, tol, false, measured <= tol, note, false};
    }
    static CheckRecord order(const std::string &name, double measured, double min_order,
                             bool floored = false, const std::string &note = "") {
        return {name, measured, min_order, true, floored || measured >= min_order,
                floored ? (note.empty() ? "floor reached" : note) : note, false};
    }
    /// reported value with no bound asserted
    static CheckRecord info(const std::string &name, double measured,
                            const std::string &note = "diagnostic") {
        return {name, measured, 0.0, false, true, note, true};
    }
};

struct Report {
    std::vector<CheckRecord> records;
    // environment stamp
    int dim = 0, n = 0;
    std::uint64_t seed = 0;
    std::string stencil;
    std::string scenario;
    bool diverged = false;
    std::string divergence_note;

    void add(CheckRecord r) { records.push_back(std::move(r)); }
    bool all_pass() const {
        for (const auto &r : records)
            if (!r.pass) return false;
        return true;
    }
    std::string to_json() const;
    void write_json(const std::string &path) const;
    void print(std::ostream &os) const;
};

/// Least-squares order of log(defect) against log(h).
struct OrderFit {
    double order = 0.0;
    double fit_residual = 0.0;
    bool floored = false;   // all defects at the roundoff floor
    bool monotone = true;   // defects decrease with h
    std::string note;
};

OrderFit fit_order(const std::vector<double> &h, const std::vector<double> &defect,
                   double floor = 1e-13);

void write_csv(const std::string &path, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &rows);

} // namespace kw

#endif
