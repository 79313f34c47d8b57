#ifndef KW_SCENARIOS_HPP
#define KW_SCENARIOS_HPP

#include "kw/report.hpp"
#include "kw/cs_flow.hpp"
#include "kw/kw_systems.hpp"

namespace kw {

/// Everything a scenario run needs; populated from the config file / flags.
struct RunConfig {
    std::string scenario = "identities";
    int dim = 4;
    int n = 8;
    double length = 2.0 * std::numbers::pi;
    std::string stencil = "central2";
    std::uint64_t seed = 1;
    double amplitude = 0.1;
    int band = 2;
    double theta = 0.25 * std::numbers::pi;
    double tol_exact = 1e-12;   // pure pointwise algebra / exact adjointness
    double tol_algebra = 1e-10; // exact linear combinations of assembled fields
    double tol_gradient = 1e-6; // finite-difference cross checks (relative)
    double min_order = 1.8;     // second-order stencil refinement studies
    std::string out_dir;        // empty: write nothing
    // minimize
    double minimize_tol = 1e-6;
    int max_iter = 5000;
    // gauge fixing
    double gauge_tol = 1e-8;
    int gauge_max_iter = 30;
    // flow
    double dt = 0.02;
    int steps = 50;
    std::string flow_scheme = "rk4";
    // convergence studies
    std::string study = "bianchi";
    std::vector<int> sizes = {8, 16, 32};

    TorusGrid grid() const {
        return TorusGrid(dim, n, length,
                         stencil == "central4" ? Stencil::central4 : Stencil::central2);
    }
    void validate() const;
};

Report run_scenario(const RunConfig &cfg);

Report scenario_identities(const RunConfig &cfg);
Report scenario_kw_check(const RunConfig &cfg);
Report scenario_gauge_fix(const RunConfig &cfg);
Report scenario_minimize(const RunConfig &cfg);
Report scenario_flow(const RunConfig &cfg);
Report scenario_converge(const RunConfig &cfg);

/// one named defect at one grid size (the unit of a convergence study)
double study_defect(const std::string &name, const RunConfig &base, int n);

/// run `study_defect` over cfg.sizes and fit the order
OrderFit convergence_study(const std::string &name, const RunConfig &base);

const std::vector<std::string> &study_names();

} // namespace kw

#endif
