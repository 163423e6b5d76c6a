#include "treestat/split.hpp"

#include "treestat/error.hpp"

namespace treestat {

Split::Split(const Bitset& side, std::size_t taxon_count)
    : taxon_count_(taxon_count) {
  if (side.bit_count() != taxon_count)
    throw Error("split mask width does not match taxon count");
  if (side.none() || side.count() == taxon_count)
    throw Error("both sides of a split must be non-empty");
  mask_ = side.test(0) ? side.complement() : side;
}

Split::Split(std::initializer_list<std::size_t> side_indices,
             std::size_t taxon_count)
    : Split(
          [&] {
            Bitset b(taxon_count);
            for (auto i : side_indices) {
              if (i >= taxon_count) throw Error("taxon index out of range");
              b.set(i);
            }
            return b;
          }(),
          taxon_count) {}

bool Split::compatible_with(const Split& other) const {
  if (taxon_count_ != other.taxon_count_)
    throw Error("compatibility is only defined over one taxon universe");
  return mask_.disjoint_with(other.mask_) || mask_.is_subset_of(other.mask_) ||
         other.mask_.is_subset_of(mask_);
}

std::string Split::to_string(const TaxonSet& taxa) const {
  std::string out;
  for (std::size_t i = 0; i < taxon_count_; ++i) {
    if (!mask_.test(i)) continue;
    if (!out.empty()) out += '|';
    out += taxa.label(i);
  }
  return out;
}

Split split_from_string(const std::string& text, const TaxonSet& taxa) {
  Bitset side(taxa.size());
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('|', start);
    if (end == std::string::npos) end = text.size();
    const std::string label = text.substr(start, end - start);
    auto idx = taxa.index_of(label);
    if (!idx) throw Error("unknown taxon '" + label + "' in split '" + text + "'");
    side.set(*idx);
    if (end == text.size()) break;
    start = end + 1;
  }
  return Split(side, taxa.size());
}

}  // namespace treestat
