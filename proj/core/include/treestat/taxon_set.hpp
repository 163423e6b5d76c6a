#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treestat {

/// An ordered collection of distinct, non-empty taxon labels. The ordering is
/// fixed at construction; every split bitmask in the library is interpreted
/// relative to it.
class TaxonSet {
 public:
  /// Throws Error if a label is empty or repeated.
  explicit TaxonSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Label sequences compare element-wise; two sets with the same labels in a
  /// different order are distinct.
  bool operator==(const TaxonSet& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using TaxonSetPtr = std::shared_ptr<const TaxonSet>;

inline TaxonSetPtr make_taxon_set(std::vector<std::string> labels) {
  return std::make_shared<const TaxonSet>(std::move(labels));
}

/// Trees share a taxon universe when they hold the same TaxonSet object or
/// equal label sequences.
inline bool same_taxa(const TaxonSetPtr& a, const TaxonSetPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace treestat
