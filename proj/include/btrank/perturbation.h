#ifndef BTRANK_PERTURBATION_H_
#define BTRANK_PERTURBATION_H_

#include "btrank/types.h"

namespace btrank {

// Applies `spec` to the win counts of `dataset`.
//
//   Improved(eps):    a~_ij = a_ij + eps * I(n_ij > 0) for the venue-free
//                     view; a~_{ij.i} = a_{ij.i} + eps * I(n_{ij.i} > 0) for
//                     the venue split. The venue-free view is computed
//                     directly, not as the sum of the split cells.
//   ConnerGrant(eps): eps added to every off-diagonal cell (both views).
//   Matrix(A0):       a~_ij = a_ij + A0_ij; no venue split is produced.
//
// Ties are copied unchanged. Venueless data sets never get a venue split.
// Throws NonPositiveEpsilonError, ShapeError or ConfigError.
PerturbedCounts Perturb(const Dataset& dataset, const PerturbationSpec& spec);

// Counts as they are, with no pseudo-counts (the unpenalized likelihood).
PerturbedCounts Unperturbed(const Dataset& dataset);

// sqrt(log t / t), the default perturbation size for t teams.
double AutoEpsilon(int num_teams);

}  // namespace btrank

#endif  // BTRANK_PERTURBATION_H_
