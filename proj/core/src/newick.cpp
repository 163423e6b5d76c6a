#include "treestat/newick.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "treestat/error.hpp"

namespace treestat {

namespace {

struct RawNode {
  std::string label;
  std::optional<double> length;
  std::vector<RawNode> children;
  bool is_leaf() const { return children.empty(); }
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char take() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return advance();
  }

  void expect(char c) {
    if (take() != c) fail(std::string("expected '") + c + "'");
  }

  /// Unquoted label characters, or a single-quoted label with '' escapes.
  std::string read_label() {
    skip_ws();
    std::string out;
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      advance();
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        char c = advance();
        if (c == '\'') {
          if (pos_ < text_.size() && text_[pos_] == '\'') {
            out += '\'';
            advance();
          } else {
            break;
          }
        } else {
          out += c;
        }
      }
      return out;
    }
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
          c == '\'' || std::isspace(static_cast<unsigned char>(c)))
        break;
      out += c;
      advance();
    }
    return out;
  }

  double read_number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("malformed branch length");
    while (text_.data() + pos_ < ptr) advance();
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  std::vector<RawNode> parse_all() {
    std::vector<RawNode> trees;
    while (!lex_.at_end()) {
      trees.push_back(parse_subtree());
      lex_.expect(';');
    }
    if (trees.empty()) lex_.fail("input contains no trees");
    return trees;
  }

 private:
  RawNode parse_subtree() {
    RawNode node;
    if (lex_.peek() == '(') {
      lex_.take();
      node.children.push_back(parse_subtree());
      while (lex_.peek() == ',') {
        lex_.take();
        node.children.push_back(parse_subtree());
      }
      lex_.expect(')');
      if (node.children.size() < 2)
        lex_.fail("internal nodes need at least two children");
      // Optional internal label (support values etc.); parsed and discarded.
      node.label = lex_.read_label();
    } else {
      node.label = lex_.read_label();
      if (node.label.empty()) lex_.fail("expected a leaf label");
    }
    if (lex_.peek() == ':') {
      lex_.take();
      node.length = lex_.read_number();
    }
    return node;
  }

  Lexer lex_;
};

void collect_leaf_labels(const RawNode& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.label);
    return;
  }
  for (const auto& child : node.children) collect_leaf_labels(child, out);
}

double edge_length(const RawNode& node, std::size_t tree_index,
                   std::vector<std::string>* warnings, bool* warned) {
  if (node.length) {
    if (*node.length < 0.0)
      throw Error("negative branch length in tree " +
                  std::to_string(tree_index));
    return *node.length;
  }
  if (warnings && !*warned) {
    warnings->push_back("tree " + std::to_string(tree_index) +
                        ": missing branch length treated as 0");
    *warned = true;
  }
  return 0.0;
}

/// Returns the set of taxa below `node` and records splits/pendants.
Bitset extract(const RawNode& node, const TaxonSet& taxa, bool is_root,
               std::size_t tree_index, std::map<Split, double>& splits,
               std::vector<double>& pendant,
               std::vector<std::string>* warnings, bool* warned) {
  const std::size_t n = taxa.size();
  if (node.is_leaf()) {
    auto idx = taxa.index_of(node.label);
    if (!idx)
      throw Error("leaf '" + node.label + "' in tree " +
                  std::to_string(tree_index) + " is not in the taxon set");
    Bitset below(n);
    below.set(*idx);
    pendant[*idx] += edge_length(node, tree_index, warnings, warned);
    return below;
  }
  Bitset below(n);
  for (const auto& child : node.children) {
    const Bitset sub =
        extract(child, taxa, false, tree_index, splits, pendant, warnings,
                warned);
    if (!below.disjoint_with(sub))
      throw Error("duplicate leaf label in tree " +
                  std::to_string(tree_index));
    below = below | sub;
  }
  if (!is_root) {
    const double len = edge_length(node, tree_index, warnings, warned);
    Split s(below, n);
    auto [it, inserted] = splits.emplace(s, len);
    if (!inserted) it->second += len;
  }
  return below;
}

PhyloTree to_tree(RawNode root, const TaxonSetPtr& taxa,
                  std::size_t tree_index,
                  std::vector<std::string>* warnings, bool* warned) {
  // Suppress a degree-2 root: merge its two incident edges.
  while (root.children.size() == 2) {
    RawNode a = std::move(root.children[0]);
    RawNode b = std::move(root.children[1]);
    const double joined = edge_length(a, tree_index, warnings, warned) +
                          edge_length(b, tree_index, warnings, warned);
    RawNode* keep = !a.is_leaf() ? &a : (!b.is_leaf() ? &b : nullptr);
    if (keep == nullptr) throw Error("trees require at least 3 taxa");
    RawNode* other = keep == &a ? &b : &a;
    other->length = joined;
    root = std::move(*keep);
    root.children.push_back(std::move(*other));
    root.length.reset();
  }

  std::map<Split, double> splits;
  std::vector<double> pendant(taxa->size(), 0.0);
  extract(root, *taxa, true, tree_index, splits, pendant, warnings, warned);
  return PhyloTree(taxa, std::move(splits), std::move(pendant));
}

bool needs_quoting(const std::string& label) {
  for (char c : label) {
    if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
        c == '\'' || c == '[' || c == ']' ||
        std::isspace(static_cast<unsigned char>(c)))
      return true;
  }
  return false;
}

std::string format_label(const std::string& label) {
  if (!needs_quoting(label)) return label;
  std::string out = "'";
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

std::string format_length(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void emit(const std::vector<detail::ClusterNode>& nodes, std::size_t id,
          const TaxonSet& taxa, std::string& out) {
  const auto& node = nodes[id];
  if (node.is_leaf) {
    out += format_label(taxa.label(node.leaf_index));
  } else {
    out += '(';
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i > 0) out += ',';
      emit(nodes, node.children[i], taxa, out);
    }
    out += ')';
  }
  if (id != 0) {
    out += ':';
    out += format_length(node.length);
  }
}

}  // namespace

std::vector<PhyloTree> parse_newick(std::string_view text, TaxonSetPtr taxa,
                                    std::vector<std::string>* warnings) {
  Parser parser(text);
  std::vector<RawNode> raw = parser.parse_all();

  std::vector<PhyloTree> trees;
  trees.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<std::string> labels;
    collect_leaf_labels(raw[i], labels);
    if (!taxa) {
      taxa = make_taxon_set(std::move(labels));  // throws on duplicates
    } else {
      if (labels.size() != taxa->size())
        throw Error("tree " + std::to_string(i) +
                    " has a different leaf count than the taxon set");
      std::vector<bool> seen(taxa->size(), false);
      for (const auto& label : labels) {
        auto idx = taxa->index_of(label);
        if (!idx)
          throw Error("tree " + std::to_string(i) + ": leaf '" + label +
                      "' is not in the taxon set");
        if (seen[*idx])
          throw Error("duplicate leaf label '" + label + "' in tree " +
                      std::to_string(i));
        seen[*idx] = true;
      }
    }
    bool warned = false;
    trees.push_back(to_tree(std::move(raw[i]), taxa, i, warnings, &warned));
  }
  return trees;
}

std::string write_newick(const PhyloTree& tree) {
  const auto nodes = detail::build_hierarchy(tree);
  std::string out;
  emit(nodes, 0, *tree.taxa(), out);
  out += ';';
  return out;
}

std::string write_newick(std::span<const PhyloTree> trees) {
  std::string out;
  for (const auto& tree : trees) {
    out += write_newick(tree);
    out += '\n';
  }
  return out;
}

}  // namespace treestat
