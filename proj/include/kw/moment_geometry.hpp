#ifndef KW_MOMENT_GEOMETRY_HPP
#define KW_MOMENT_GEOMETRY_HPP

#include "kw/calculus.hpp"

// Flat Kahler structure on configuration space and the moment map for the
// real gauge action.  Sign conventions, fixed here once: with
//   omega(t1, t2) = integral <B1, psi2> - <B2, psi1>
//   H(cfg, V)     = integral <D_A^* phi, V>
// the Hamiltonian identity reads  dH(t) = omega(action_V, t)  where
// action_V = (D_A V, [phi, V]) is the infinitesimal gauge direction.
// It holds to roundoff for arbitrary fields -- summation by parts is exact.

namespace kw {

double kahler_pairing(const TangentPair &t1, const TangentPair &t2);

/// mu = D_A^* phi, the covariant codifferential of the Higgs field
AdjointForm moment_map(const Configuration &cfg);

/// infinitesimal real gauge action (D_A V, [phi, V]) at cfg
TangentPair gauge_direction(const Configuration &cfg, const AdjointForm &V);

/// |dH(t) - omega(action_V, t)| with dH assembled by exact linearization
double moment_identity_check(const Configuration &cfg, const AdjointForm &V,
                             const TangentPair &t);

} // namespace kw

#endif
