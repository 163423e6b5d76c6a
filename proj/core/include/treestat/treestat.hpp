#pragma once

// Umbrella header: statistics for samples of phylogenetic trees in the
// geodesic (BHV) tree space: geodesics, Frechet means, log-map embeddings,
// covariance estimation, confidence sets, split-support tests, and the
// Monte Carlo coverage harness.

#include "treestat/bitset.hpp"
#include "treestat/coordinate_frame.hpp"
#include "treestat/distributions.hpp"
#include "treestat/error.hpp"
#include "treestat/frechet.hpp"
#include "treestat/geodesic.hpp"
#include "treestat/inference.hpp"
#include "treestat/linalg.hpp"
#include "treestat/logmap.hpp"
#include "treestat/newick.hpp"
#include "treestat/phylo_tree.hpp"
#include "treestat/rng.hpp"
#include "treestat/simulate.hpp"
#include "treestat/split.hpp"
#include "treestat/taxon_set.hpp"
