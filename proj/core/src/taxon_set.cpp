#include "treestat/taxon_set.hpp"

#include "treestat/error.hpp"

namespace treestat {

TaxonSet::TaxonSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error("taxon set must not be empty");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty())
      throw Error("taxon label at position " + std::to_string(i) +
                  " is empty");
    auto [it, inserted] = index_.emplace(labels_[i], i);
    if (!inserted) throw Error("duplicate taxon label '" + labels_[i] + "'");
  }
}

std::optional<std::size_t> TaxonSet::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace treestat
