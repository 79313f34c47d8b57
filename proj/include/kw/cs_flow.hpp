#ifndef KW_CS_FLOW_HPP
#define KW_CS_FLOW_HPP

#include "kw/functionals.hpp"

namespace kw {

struct FlowHistoryRow {
    double t;
    double cs_re, cs_im;   // Re / Im of e^{2 i theta} CS
    double grad_sq;        // |rhs|^2
    double moment_norm;    // |D_A^* phi|
};

/// State of one gradient-flow run on the 3-torus (temporal gauge,
/// phi_t = 0 by construction).
struct FlowState {
    Configuration cfg;
    double t = 0.0;
    std::vector<FlowHistoryRow> history;
    bool diverged = false;
    std::string divergence_message;
    // optional per-step snapshots (tests / diagnostics)
    std::vector<Configuration> states;
    std::vector<TangentPair> rhs_samples;
};

/// dA/dt = *Re(e^{2 i theta} F_C), dphi/dt = -*Im(e^{2 i theta} F_C)
TangentPair flow_rhs(const Configuration &cfg3, double theta);

enum class FlowScheme { rk4, euler };

struct FlowOptions {
    double dt = 0.01;
    int steps = 50;
    FlowScheme scheme = FlowScheme::rk4;
    double cfl = 0.2;                 // require dt <= cfl * h
    double blowup_factor = 1e3;       // abort when fields grow past this
    bool record_states = false;
};

FlowState integrate_flow(const Configuration &cfg0, double theta, const FlowOptions &opt);

/// Trajectory diagnostics: the differential form of the Chern-Simons
/// difference identity and the moment-map drift.
struct FlowDiagnostics {
    // e^{2 i theta}(CS(0) - CS(T)) versus the time quadrature of
    // (1/2) integral |F_C(4d)|^2 reconstructed from (A-dot, phi-dot)
    cplx cs_difference;
    double energy_quadrature;     // Simpson in t of int |F_C(3d)|^2
    double spacetime_quadrature;  // same, of (1/2)(|F_C|^2 + |Adot|^2 + |phidot|^2)
    double chain_rule_defect;     // |Re cs_difference - energy_quadrature| etc.
    double moment_drift;          // max_t |mu(t)| - |mu(0)|
};

FlowDiagnostics flow_diagnostics(const FlowState &state);

/// 4d self-duality defect of the trajectory, with time derivatives taken by
/// forward differences of the recorded states: O(h^2) + O(dt).
double succinct_form_defect(const FlowState &state, double theta);

} // namespace kw

#endif
