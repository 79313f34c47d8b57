#ifndef KW_FUNCTIONALS_HPP
#define KW_FUNCTIONALS_HPP

#include <optional>
#include <string>

#include "kw/calculus.hpp"

namespace kw {

/// All scalar functionals of one configuration at one family angle.
/// Norms use the orthonormal pairing; wedge traces use tr2/tr3 of algebra.hpp.
struct EnergyBreakdown {
    double ym = 0.0;          // |F_A|^2
    double cym = 0.0;         // |F_C|^2
    double augmented = 0.0;   // cym + |D_A* phi|^2
    double flat_part = 0.0;   // |F_A - (1/2)[phi^phi]|^2
    double dphi_part = 0.0;   // |D_A phi|^2
    double moment_part = 0.0; // |D_A* phi|^2
    std::optional<double> sd_defect_part;    // 2 |(e^{i theta} F_C)^-|^2, dim 4 only
    std::optional<cplx> topo_part;           // tr(F_C ^ F_C), dim 4 only
    std::optional<double> k_estimate_part;   // Re topo / 8 pi^2, a near-integer diagnostic

    double sd_defect() const {
        if (!sd_defect_part) throw std::domain_error("sd_defect requires dimension 4");
        return *sd_defect_part;
    }
    cplx topo() const {
        if (!topo_part) throw std::domain_error("topological pairing requires dimension 4");
        return *topo_part;
    }
    double k_estimate() const {
        if (!k_estimate_part) throw std::domain_error("topological pairing requires dimension 4");
        return *k_estimate_part;
    }
};

EnergyBreakdown energies(const Configuration &cfg, double theta);

/// flat JSON object with the field names above
std::string to_json(const EnergyBreakdown &e);

/// CS(A + i phi) on the 3-torus, normalized so that the directional derivative
/// along B + i psi is exactly the discrete integral tr(F_C ^ (B + i psi)).
cplx chern_simons(const Configuration &cfg3);

/// directional derivative pairing tr(F_C ^ (B + i psi)) on the 3-torus
cplx chern_simons_derivative(const Configuration &cfg3, const TangentPair &t);

/// tr(F_C ^ F_C) on the closed 4-torus (8 pi^2 k with k = 0 up to O(h^2))
cplx topological_pairing(const Configuration &cfg);

/// Self-dual decomposition of the real Yang-Mills functional.
/// The +- trace term here is the pairing-oriented wedge (the opposite
/// orientation from tr2; the two identities fix it uniquely).
struct DecompositionReport {
    double ym;            // |F_A|^2
    double sd_sq;         // 2 |F+|^2
    double asd_sq;        // 2 |F-|^2
    double trFF;          // pairing-oriented integral of tr(F ^ F)
    double defect_plus;   // |ym - (sd_sq - trFF)|
    double defect_minus;  // |ym - (asd_sq + trFF)|
};

DecompositionReport decomposition_identity(const AdjointForm &A);

} // namespace kw

#endif
