// treestat: command-line statistics for samples of phylogenetic trees.
//
// Subcommands: dist, mean, logmap, confset, test, pca, simulate.
// Inputs are Newick files (UTF-8, one or more semicolon-terminated trees);
// outputs are CSV (RFC 4180 quoting) or JSON (stable key order). Warnings and
// diagnostics go to stderr. Exit codes: 0 success, 1 data error, 2 usage.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treestat/treestat.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace treestat;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::optional<std::string>& path,
                  const std::string& content) {
  if (!path) {
    std::cout << content;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error("cannot write '" + *path + "'");
  out << content;
}

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& raw) {
  const bool quote = raw.find_first_of(",\"\n\r") != std::string::npos;
  if (!quote) return raw;
  std::string out = "\"";
  for (char c : raw) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::vector<PhyloTree> load_trees(const std::string& path,
                                  TaxonSetPtr taxa = nullptr) {
  std::vector<std::string> warnings;
  auto trees = parse_newick(read_file(path), std::move(taxa), &warnings);
  for (const auto& w : warnings) std::cerr << path << ": " << w << "\n";
  return trees;
}

struct MeanFlags {
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::size_t max_iters = 5000;

  MeanConfig config() const {
    MeanConfig c;
    c.seed = seed;
    c.tolerance = tolerance;
    c.max_iterations = max_iters;
    return c;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed for the mean iteration");
    cmd->add_option("--tolerance", tolerance,
                    "convergence tolerance for the mean iteration");
    cmd->add_option("--max-iters", max_iters,
                    "maximum passes of the mean iteration");
  }
};

void print_summary_warnings(const InferenceSummary& summary) {
  for (const auto& w : summary.warnings()) std::cerr << "warning: " << w << "\n";
}

json report_json(const InferenceSummary& summary, const ConfidenceReport& r) {
  json out;
  out["schema"] = "1";
  out["n"] = summary.sample_size();
  out["m"] = summary.retained_dimension();
  out["retained_splits"] = summary.retained_split_names();
  out["statistic"] = r.statistic;
  out["threshold"] = r.threshold;
  out["alpha"] = r.alpha;
  out["member"] = r.member;
  out["p_value"] = r.p_value;
  json warnings = json::array();
  for (const auto& w : summary.warnings()) warnings.push_back(w);
  for (const auto& w : r.warnings) warnings.push_back(w);
  out["warnings"] = warnings;
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{
      "statistics for samples of phylogenetic trees: geodesic distances, "
      "mean trees, log-map embeddings, confidence sets, split tests, and "
      "coverage simulation"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::optional<std::string> output;

  // ---- dist ----------------------------------------------------------
  auto* dist_cmd = app.add_subcommand(
      "dist", "geodesic distance between the first trees of two files");
  std::string dist_a, dist_b;
  bool dist_pendant = false;
  dist_cmd->add_option("file1", dist_a)->required();
  dist_cmd->add_option("file2", dist_b)->required();
  dist_cmd->add_flag("--pendant", dist_pendant,
                     "include pendant edges in the metric");

  // ---- mean ----------------------------------------------------------
  auto* mean_cmd =
      app.add_subcommand("mean", "Frechet mean of a tree sample as Newick");
  std::string mean_input;
  MeanFlags mean_flags;
  mean_cmd->add_option("trees", mean_input)->required();
  mean_flags.attach(mean_cmd);
  mean_cmd->add_option("-o,--output", output, "output path (default stdout)");

  // ---- logmap --------------------------------------------------------
  auto* logmap_cmd = app.add_subcommand(
      "logmap",
      "log-map coordinates of every tree under the fitted mean frame (CSV)");
  std::string logmap_input;
  MeanFlags logmap_flags;
  logmap_cmd->add_option("trees", logmap_input)->required();
  logmap_flags.attach(logmap_cmd);
  logmap_cmd->add_option("-o,--output", output, "output path (default stdout)");

  // ---- confset -------------------------------------------------------
  auto* confset_cmd = app.add_subcommand(
      "confset", "confidence-set membership report for a candidate tree");
  std::string confset_input, confset_candidate;
  std::vector<double> confset_alphas;
  MeanFlags confset_flags;
  confset_cmd->add_option("trees", confset_input)->required();
  confset_cmd->add_option("--candidate", confset_candidate, "candidate tree file")
      ->required();
  confset_cmd->add_option("--alpha", confset_alphas,
                          "confidence level(s), repeatable (default 0.05)");
  confset_flags.attach(confset_cmd);
  confset_cmd->add_option("-o,--output", output, "output path (default stdout)");

  // ---- test ----------------------------------------------------------
  auto* test_cmd = app.add_subcommand(
      "test", "split-support tests on the fitted frame's coordinates");
  std::string test_input;
  std::vector<std::string> test_splits;
  std::string test_mode = "marginal";
  bool test_bonferroni = false;
  MeanFlags test_flags;
  test_cmd->add_option("trees", test_input)->required();
  test_cmd->add_option("--split", test_splits,
                       "split as canonical-side labels joined by '|'; "
                       "repeatable (default: every frame split)");
  test_cmd->add_option("--mode", test_mode, "marginal|joint")
      ->check(CLI::IsMember({"marginal", "joint"}));
  test_cmd->add_flag("--bonferroni", test_bonferroni,
                     "multiply p-values by the retained dimension");
  test_flags.attach(test_cmd);
  test_cmd->add_option("-o,--output", output, "output path (default stdout)");

  // ---- pca -----------------------------------------------------------
  auto* pca_cmd = app.add_subcommand(
      "pca", "principal directions of the log-mapped sample (CSV)");
  std::string pca_input;
  MeanFlags pca_flags;
  pca_cmd->add_option("trees", pca_input)->required();
  pca_flags.attach(pca_cmd);
  pca_cmd->add_option("-o,--output", output, "output path (default stdout)");

  // ---- simulate ------------------------------------------------------
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo coverage of the confidence-set procedure (CSV)");
  std::string sim_base;
  std::vector<double> sim_sigma_diag;
  std::vector<double> sim_alphas;
  std::size_t sim_n = 20;
  std::size_t sim_replicates = 200;
  std::size_t sim_threads = 0;
  MeanFlags sim_flags;
  sim_cmd->add_option("--base", sim_base, "base tree file (binary, interior)")
      ->required();
  sim_cmd
      ->add_option("--sigma-diag", sim_sigma_diag,
                   "diagonal standard deviations: one value broadcast, or one "
                   "per coordinate")
      ->required();
  sim_cmd->add_option("--n", sim_n, "sample size per replicate");
  sim_cmd->add_option("--replicates", sim_replicates, "number of replicates");
  sim_cmd->add_option("--alpha", sim_alphas,
                      "levels, repeatable (default 0.10 0.05 0.01)");
  sim_cmd->add_option("--threads", sim_threads, "worker threads (0 = auto)");
  sim_flags.attach(sim_cmd);
  sim_cmd->add_option("-o,--output", output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (dist_cmd->parsed()) {
    const auto a = load_trees(dist_a);
    const auto b = load_trees(dist_b, a.front().taxa());
    if (a.size() > 1 || b.size() > 1)
      std::cerr << "warning: extra trees ignored; dist uses the first tree of "
                   "each file\n";
    std::cout << format_double(
                     distance(a.front(), b.front(),
                              {.include_pendant = dist_pendant}))
              << "\n";
    return kExitOk;
  }

  if (mean_cmd->parsed()) {
    const auto trees = load_trees(mean_input);
    const MeanResult r = frechet_mean(trees, mean_flags.config());
    std::cerr << "mean: " << (r.converged ? "converged" : "pass limit reached")
              << " after " << r.iterations_used
              << " passes; frechet value " << format_double(r.frechet_value)
              << "\n";
    if (r.boundary_flag)
      std::cerr << "warning: mean tree lies on or near an orthant boundary\n";
    write_output(output, write_newick(r.mean) + "\n");
    return kExitOk;
  }

  if (logmap_cmd->parsed()) {
    const auto trees = load_trees(logmap_input);
    const MeanResult r = frechet_mean(trees, logmap_flags.config());
    if (r.boundary_flag)
      std::cerr << "warning: mean tree lies on or near an orthant boundary\n";
    const FramePtr frame = make_frame(r.mean);
    const auto vectors = batch_log_map(frame, trees);
    std::string csv;
    const auto& taxa = *frame->base().taxa();
    for (std::size_t i = 0; i < frame->dimension(); ++i) {
      if (i > 0) csv += ',';
      csv += csv_field(frame->order()[i].to_string(taxa));
    }
    csv += '\n';
    for (const auto& v : vectors) {
      for (std::size_t i = 0; i < v.coords.size(); ++i) {
        if (i > 0) csv += ',';
        csv += format_double(v.coords[i]);
      }
      csv += '\n';
    }
    write_output(output, csv);
    return kExitOk;
  }

  if (confset_cmd->parsed()) {
    const auto trees = load_trees(confset_input);
    const auto candidates = load_trees(confset_candidate, trees.front().taxa());
    if (confset_alphas.empty()) confset_alphas.push_back(0.05);
    const InferenceSummary summary = summarize(trees, confset_flags.config());
    print_summary_warnings(summary);
    json out;
    if (confset_alphas.size() == 1) {
      out = report_json(summary, confidence_member(summary, candidates.front(),
                                                   confset_alphas.front()));
    } else {
      out = json::array();
      for (double alpha : confset_alphas)
        out.push_back(report_json(
            summary, confidence_member(summary, candidates.front(), alpha)));
    }
    write_output(output, out.dump(2) + "\n");
    return kExitOk;
  }

  if (test_cmd->parsed()) {
    const auto trees = load_trees(test_input);
    const InferenceSummary summary = summarize(trees, test_flags.config());
    print_summary_warnings(summary);
    const auto& taxa = *summary.frame()->base().taxa();
    std::vector<Split> targets;
    if (test_splits.empty()) {
      targets = summary.frame()->order();
    } else {
      for (const auto& text : test_splits)
        targets.push_back(split_from_string(text, taxa));
    }
    const SplitTestMode mode = test_mode == "joint" ? SplitTestMode::joint
                                                    : SplitTestMode::marginal;
    json results = json::array();
    for (const auto& split : targets) {
      const SplitTestResult r =
          split_support_test(summary, split, mode, test_bonferroni);
      json item;
      item["split"] = split.to_string(taxa);
      item["statistic"] = r.statistic;
      item["p_value"] = r.p_value;
      item["degenerate"] = r.degenerate;
      if (!r.note.empty()) item["note"] = r.note;
      results.push_back(item);
    }
    json out;
    out["schema"] = "1";
    out["n"] = summary.sample_size();
    out["m"] = summary.retained_dimension();
    out["retained_splits"] = summary.retained_split_names();
    out["mode"] = test_mode;
    out["bonferroni"] = test_bonferroni;
    out["results"] = results;
    json warnings = json::array();
    for (const auto& w : summary.warnings()) warnings.push_back(w);
    out["warnings"] = warnings;
    write_output(output, out.dump(2) + "\n");
    return kExitOk;
  }

  if (pca_cmd->parsed()) {
    const auto trees = load_trees(pca_input);
    const InferenceSummary summary = summarize(trees, pca_flags.config());
    print_summary_warnings(summary);
    const PcaResult p = pca(summary);
    const auto& taxa = *summary.frame()->base().taxa();
    std::string csv = "component,eigenvalue";
    for (std::size_t idx : p.coordinate_indices)
      csv += "," + csv_field(summary.frame()->order()[idx].to_string(taxa));
    csv += '\n';
    for (std::size_t k = 0; k < p.eigenvalues.size(); ++k) {
      csv += "pc" + std::to_string(k + 1);
      csv += "," + format_double(p.eigenvalues[k]);
      for (std::size_t i = 0; i < p.coordinate_indices.size(); ++i)
        csv += "," + format_double(p.eigenvectors(i, k));
      csv += '\n';
    }
    write_output(output, csv);
    return kExitOk;
  }

  if (sim_cmd->parsed()) {
    const auto bases = load_trees(sim_base);
    GeneratorSpec spec;
    spec.base = make_frame(bases.front());
    const std::size_t m = spec.base->dimension();
    if (sim_sigma_diag.size() != 1 && sim_sigma_diag.size() != m)
      throw Error("--sigma-diag needs 1 or " + std::to_string(m) + " values");
    spec.sigma = Matrix(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double sd =
          sim_sigma_diag.size() == 1 ? sim_sigma_diag[0] : sim_sigma_diag[i];
      spec.sigma(i, i) = sd * sd;
    }
    spec.seed = sim_flags.seed;
    if (sim_alphas.empty()) sim_alphas = {0.10, 0.05, 0.01};
    const CoverageResult r =
        coverage_experiment(spec, sim_n, sim_replicates, sim_alphas,
                            sim_flags.config(), sim_threads);
    if (r.skipped > 0)
      std::cerr << "warning: " << r.skipped << " replicates skipped\n";
    if (r.total_rejections > 0)
      std::cerr << "note: " << r.total_rejections
                << " generator draws rejected and redrawn\n";
    std::string csv = "alpha,coverage,replicates,n\n";
    for (std::size_t i = 0; i < r.alphas.size(); ++i) {
      csv += format_double(r.alphas[i]);
      csv += "," + format_double(r.coverage[i]);
      csv += "," + std::to_string(r.replicates);
      csv += "," + std::to_string(r.sample_size);
      csv += '\n';
    }
    write_output(output, csv);
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
