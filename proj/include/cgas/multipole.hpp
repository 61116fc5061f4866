#pragma once

#include <map>
#include <vector>

#include "cgas/matching.hpp"
#include "cgas/params.hpp"

// Spatial coarse-graining of a matched configuration, in three layers.
//
//  1. multipole_partition groups dipoles whose mutual distance is small
//     relative to their sizes. Blocks are connected components of the
//     proximity relation, so a chain of pairwise-close dipoles is one block.
//  2. q_cluster grows balls of one common radius around same-sign charges.
//     A ball is removed alone when the radius reaches a quarter of the
//     charge's partner distance, and together with all balls touching it
//     when it touches q of them. The removal radii are the truncation
//     scales used by the energy lower bound.
//  3. classify_points splits the dipoles into "good" ones (small, isolated,
//     and sparse enough per size class for the series expansion) and the
//     bad remainder, then assigns truncation radii to both kinds.

namespace cgas {

// Collection of disjoint, non-empty, sorted index blocks over
// {0, ..., universe-1}. A partition when the blocks cover everything;
// sub-partitions (uncovered indices) are legal.
struct IndexPartition {
    std::vector<std::vector<int>> blocks;
    int universe = 0;

    // position of the block containing i, or -1 when i is uncovered.
    // Throws invalid_param when i lies outside the universe.
    int block_of(int i) const;

    // throws invalid_param on out-of-range indices, empty or unsorted
    // blocks, or overlapping blocks
    void validate() const;
};

// One clustering pass over a single charge sign.
struct QClustering {
    IndexPartition clusters;
    std::vector<double> tau; // removal radius per point, always >= lambda
};

// Event-driven ball growth. points[i] carries partner distance r[i] > 0;
// q >= 2 is the contact budget; the sweep stops at radius eps0 * r_bar and
// turns every surviving point into a singleton. Removal events are either
// quarter-radius removals (radius r[i]/4, the point leaves alone) or contact
// triggers (a ball touching q live balls leaves with all of them). Events
// fire in increasing radius; simultaneous quarter-radius removals commute
// and are processed as a batch, but a contact trigger coinciding with any
// other removal event is order-dependent and throws degenerate_input. An
// event landing exactly on the stopping radius is preempted by the stop.
// Returned radii are floored at lambda.
QClustering q_cluster(const std::vector<Point>& points, const std::vector<double>& r,
                      int q, double eps0, double r_bar, double lambda);

// q_cluster applied to both charge signs of a matched configuration.
// tau_minus is indexed by the negative charge's own index: the partner
// distance of y_j is r_i for the dipole i with sigma(i) = j.
struct ClusteringResult {
    IndexPartition clusters_pos;
    IndexPartition clusters_neg;
    std::vector<double> tau_plus;
    std::vector<double> tau_minus;
};

ClusteringResult cluster_both_signs(const MatchedConfiguration& matched, int q,
                                    double eps0, double r_bar, double lambda);

// Connected components of the relation
//   d_ij <= m_mult * min(max(r_i, lambda), max(r_j, lambda)),
// where d_ij is the distance between the two-point sets of dipoles i and j.
// Requires m_mult > 10. O(N^2) edge tests feeding a union-find.
IndexPartition multipole_partition(const MatchedConfiguration& matched, double m_mult,
                                   double lambda);

// Disjoint classification of all dipole indices. The bad sets are built in
// order; each later rule only inspects dipoles not already discarded.
struct BadPointClassification {
    // a charge's ball was removed before reaching a quarter of
    // max(partner distance, lambda), on either sign
    std::vector<int> bad1;
    // survivor sitting in a multipole larger than the convergent size
    std::vector<int> bad2_1;
    // survivors in size-k multipoles, for each k whose population exceeds
    // its dilute-regime budget
    std::map<int, std::vector<int>> bad2_2;
    // survivors close to a member of bad1/bad2, closed under the
    // multipole relation
    std::vector<int> bad3;
    std::vector<int> good;

    // distance from dipole i to the nearest bad dipole, capped at
    // 4 * eps0 * r_bar; NaN on bad indices, where it is meaningless
    std::vector<double> d_bad;

    // truncation radii per dipole: max(d_bad/4, lambda) on both signs of a
    // good dipole, the dipole's own clustering radii on a bad one
    std::vector<double> tau_z_plus;
    std::vector<double> tau_z_minus;
};

// throws invalid_param when the contact budget derived from scales.q_beta
// is below 2 (possible only for beta >= 4 with p0 = 1)
BadPointClassification classify_points(const MatchedConfiguration& matched,
                                       const DerivedScales& scales,
                                       const ModelParams& params);

} // namespace cgas
