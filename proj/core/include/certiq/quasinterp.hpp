#pragma once

#include "certiq/fields.hpp"

namespace certiq {

/// J u = sum_a s_a((pi u)|_{omega_a}) for elementwise P_p data pi_u, with the
/// patch contributions added in ascending vertex order.
ConformingField quasi_interpolate_broken(const BrokenField& pi_u, const ConformingSpace& space);

/// quasi_interpolate_broken(local_best(u)).
ConformingField quasi_interpolate(const ElementSource& u, const ConformingSpace& space, int exactness = 0);
ConformingField quasi_interpolate(const FieldFunction& u, const ConformingSpace& space, int exactness = 0);

/// H^1 seminorm best approximation, solved with Jacobi-preconditioned CG.
ConformingField global_best(const ElementSource& u, const ConformingSpace& space, double rel_tol = 1e-10,
                            int exactness = 0);
ConformingField global_best(const FieldFunction& u, const ConformingSpace& space, double rel_tol = 1e-10,
                            int exactness = 0);

/// Values of a continuous u at the free Lagrange nodes.
ConformingField nodal_interpolant(const FieldFunction& u, const ConformingSpace& space);

} // namespace certiq
