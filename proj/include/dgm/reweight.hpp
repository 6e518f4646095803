#pragma once

#include "dgm/types.hpp"

namespace dgm {

/// Arithmetic mean of all cost entries; the shared re-weighting threshold.
double mean_cost(const CostMatrix& costs);

/// Converts a hard assignment into soft labels:
///   matched   and C(i,j) < mean  ->  e^{-C(i,j)}   (soft positive)
///   unmatched and C(i,j) < mean  ->  -1            (hard negative)
///   otherwise                    ->   0            (filtered)
/// Costs exactly at the mean count as above it. Throws NoPositives /
/// NoNegatives when a class comes out empty, signalling the caller to skip
/// the metric update.
SoftLabelMatrix reweight_labels(const CostMatrix& costs,
                                const Assignment& assignment);

/// Same partition but tolerates an empty class (its weight becomes zero).
/// Used where labels are reported rather than trained on.
SoftLabelMatrix soft_label_partition(const CostMatrix& costs,
                                     const Assignment& assignment);

}  // namespace dgm
