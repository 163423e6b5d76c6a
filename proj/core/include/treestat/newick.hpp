#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treestat/phylo_tree.hpp"

namespace treestat {

/// Parses one or more semicolon-terminated Newick strings.
///
/// Rooted inputs (root of degree 2) are read as unrooted: the root is
/// suppressed and its two incident edge lengths are summed. Absent branch
/// lengths default to 0 with a warning. When `taxa` is null the first tree
/// fixes the taxon set (labels in order of appearance); every subsequent tree
/// must carry exactly the same label set.
///
/// Throws ParseError on malformed syntax and Error on semantic problems
/// (duplicate labels, leaf-set mismatch, negative lengths).
std::vector<PhyloTree> parse_newick(std::string_view text,
                                    TaxonSetPtr taxa = nullptr,
                                    std::vector<std::string>* warnings = nullptr);

/// Serializes a tree to canonical Newick: children ordered by smallest taxon
/// index, every edge carrying an explicit length in shortest round-trip
/// decimal form. parse_newick(write_newick(t)) reproduces t exactly.
std::string write_newick(const PhyloTree& tree);

/// One Newick string per line.
std::string write_newick(std::span<const PhyloTree> trees);

}  // namespace treestat
