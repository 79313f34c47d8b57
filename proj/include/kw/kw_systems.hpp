#ifndef KW_KW_SYSTEMS_HPP
#define KW_KW_SYSTEMS_HPP

#include <string>

#include "kw/functionals.hpp"
#include "kw/gauge.hpp"

namespace kw {

/// Family angle; theta and theta + pi give the same equations.
struct ThetaParameter {
    double radians = 0.0;

    ThetaParameter() = default;
    ThetaParameter(double r) : radians(r) {}

    double normalized() const {
        double pi = std::numbers::pi;
        double t = std::fmod(radians, pi);
        if (t < 0) t += pi;
        return t;
    }
    /// cot(2 theta), csc(2 theta) blow up at theta = 0, pi/2 (mod pi)
    bool alt_form_pole(double eps = 1e-9) const {
        double t = normalized();
        double pi = std::numbers::pi;
        return t < eps || std::abs(t - 0.5 * pi) < eps || t > pi - eps;
    }
};

/// The two projected lines of the family plus the moment condition.
struct KWResidual {
    AdjointForm r_plus;   // (cos F_flat - sin D phi)^+   (self-dual)
    AdjointForm r_minus;  // (sin F_flat + cos D phi)^-   (anti-self-dual)
    AdjointForm r_moment; // D_A^* phi
    double r_plus_norm = 0.0, r_minus_norm = 0.0, r_moment_norm = 0.0;
    // |(e^{i theta} F_C)^+|^2; combines the two lines exactly:
    // succinct_sq == r_plus_norm^2 + r_minus_norm^2
    double succinct_sq = 0.0;
    // |(e^{i theta} F_C)^-|^2 == |F_C|^2 - succinct_sq (the theta-defect of
    // the energy identity; see functionals::EnergyBreakdown::sd_defect)
    double opposite_sq = 0.0;

    double total_sq() const {
        return r_plus_norm * r_plus_norm + r_minus_norm * r_minus_norm +
               r_moment_norm * r_moment_norm;
    }
};

KWResidual kw_residual(const Configuration &cfg, ThetaParameter theta);

/// defect of the rearranged single-equation form
///   F_A - (1/2)[phi^phi] + cot(2 theta) D_A phi - csc(2 theta) * D_A phi,
/// which equals sec(theta) r_plus + csc(theta) r_minus exactly.
double kw_alt_check(const Configuration &cfg, ThetaParameter theta);

/// Exact discrete gradient of the complex Yang-Mills functional.
struct ELResidual {
    AdjointForm grad_A;
    AdjointForm grad_phi;
    double norm_A = 0.0, norm_phi = 0.0;
};

ELResidual el_residual(const Configuration &cfg);

/// Weitzenboch identity checks (flat grid, Ricci = 0).
struct WeitzenbockReport {
    double r_weitz;        // | (nab*nab phi - [F,phi]) - (D*D + DD*) phi |, O(h^2)
    double r_cym_reduced;  // exact-algebra combination, ~roundoff for any field
    double ric2_min;       // min over sites of the ric2 scalar field
    std::vector<double> ric2_field;
};

WeitzenbockReport weitzenbock_check(const Configuration &cfg);

/// Coulomb gauge fixing by FFT Laplace solves (d*A = 0 up to tol).
struct GaugeFixResult {
    GaugeField gauge;
    AdjointForm A_fixed;
    int iterations = 0;
    double final_divergence = 0.0;
};

GaugeFixResult coulomb_gauge_fix(const AdjointForm &A, double tol = 1e-8, int max_iter = 30);

/// Rotated variables Q1 = cos A - sin phi, Q2 = sin A + cos phi and the
/// quadratic elliptic system they satisfy.
struct QSplitReport {
    AdjointForm q1, q2;
    double rotation_defect;      // | (|q1|^2+|q2|^2) - (|A|^2+|phi|^2) |
    double residual_norms[4];    // the four system lines
    double repackaging_defect;   // max distance to (r_plus, r_minus, rotated gauge/moment)
};

QSplitReport q_split(const Configuration &cfg, ThetaParameter theta);

/// R = |r_plus|^2 + |r_minus|^2 + |D_A^* phi|^2; zero exactly on the family.
struct ResidualValue {
    double R = 0.0;
    double r_plus_sq = 0.0, r_minus_sq = 0.0, moment_sq = 0.0;
};

ResidualValue kw_residual_functional(const Configuration &cfg, ThetaParameter theta,
                                     TangentPair *grad = nullptr);

struct MinimizeOptions {
    double tol = 1e-6;
    int max_iter = 5000;
    double step0 = 0.05;
    std::string step_rule = "bb"; // "bb" or "fixed" trial step, Armijo backtracking
    int max_backtracks = 40;
};

struct MinimizeLogRow {
    int iter;
    double R, r_plus, r_minus, r_moment, step;
};

struct MinimizeResult {
    Configuration cfg;
    std::vector<MinimizeLogRow> log;
    bool converged = false;
    std::string status; // "converged", "max_iter", "stalled"
    double final_R = 0.0;
};

MinimizeResult minimize_kw(const Configuration &cfg0, ThetaParameter theta,
                           const MinimizeOptions &opt = {});

} // namespace kw

#endif
