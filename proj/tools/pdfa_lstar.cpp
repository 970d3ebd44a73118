// pdfa-lstar: extract, evaluate, sample and draw PDFAs.
//
// Exit codes: 0 success (including runs stopped by a limit), 2 bad arguments,
// unresolvable target or I/O failure, 3 model server protocol failure.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pdfa/errors.hpp"
#include "pdfa/eval.hpp"
#include "pdfa/extract.hpp"
#include "pdfa/pdfa_io.hpp"
#include "pdfa/target.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitOracle = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pdfa::InputError("cannot write " + path);
  out << text;
  if (!out) throw pdfa::InputError("failed writing " + path);
}

pdfa::OpenedTarget open(const std::string& text) {
  return pdfa::open_target(pdfa::TargetSpec::parse(text));
}

struct ExtractArgs {
  std::string target;
  pdfa::ExtractionConfig cfg;
  double time_budget = 0.0;
  std::size_t max_rounds = 0;
  std::string out = "pdfa.json";
  std::string report = "report.json";
  std::string dot;
  bool timings = false;
  bool quiet = false;
};

class Progress final : public pdfa::ExtractionObserver {
public:
  explicit Progress(bool quiet) : quiet_(quiet) {}
  void on_hypothesis(std::size_t round, const pdfa::ObservationTable& t,
                     const pdfa::ClusteringTrace&, const pdfa::Pdfa& h) override {
    if (quiet_) return;
    std::cout << "round " << round + 1 << ": " << h.num_states() << " states, |P|=" << t.size()
              << ", |S|=" << t.suffixes().size() << "\n";
  }
  void on_counterexample(std::size_t, const pdfa::Word& w, std::size_t before,
                         std::size_t after) override {
    if (quiet_) return;
    std::cout << "  counterexample of length " << w.size() << " added " << after - before
              << " prefixes\n";
  }

private:
  bool quiet_;
};

int run_extract(const ExtractArgs& a) {
  pdfa::ExtractionConfig cfg = a.cfg;
  if (a.time_budget > 0) cfg.time_budget = a.time_budget;
  if (a.max_rounds > 0) cfg.max_rounds = a.max_rounds;
  cfg.validate();

  pdfa::OpenedTarget target = open(a.target);
  Progress progress(a.quiet);
  pdfa::ExtractionReport rep = pdfa::extract(*target.oracle, cfg, nullptr, &progress);
  const pdfa::Alphabet& sigma = target.oracle->alphabet();

  write_file(a.report, pdfa::report_to_json(rep, cfg, sigma, a.timings));
  if (rep.final) {
    pdfa::save_pdfa(*rep.final, a.out);
    if (!a.dot.empty()) write_file(a.dot, pdfa::to_dot(*rep.final));
  }
  std::cout << "stop: " << pdfa::to_string(rep.stop_reason);
  if (rep.final) std::cout << ", " << rep.final->num_states() << " states";
  std::cout << ", " << rep.rounds.size() << " rounds\n";
  if (rep.stop_reason == pdfa::StopReason::Error) {
    std::cerr << "error: " << rep.error << "\n";
    return kExitOracle;
  }
  return 0;
}

struct EvaluateArgs {
  std::string model;
  std::string reference;
  bool wer = false;
  std::size_t ndcg_k = 0;
  std::size_t samples = pdfa::kMetricSamples;
  std::size_t max_len = pdfa::kMetricMaxLen;
  std::uint64_t seed = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  pdfa::OpenedTarget model = open(a.model);
  pdfa::OpenedTarget ref = open(a.reference);
  if (!(model.oracle->alphabet() == ref.oracle->alphabet()))
    throw pdfa::InputError("model and reference alphabets differ");
  const bool want_wer = a.wer || a.ndcg_k == 0;
  const std::size_t k = a.ndcg_k ? a.ndcg_k : (a.wer ? 0 : 2);

  pdfa::MetricRow row;
  row.model = a.model;
  if (model.pdfa) row.states = model.pdfa->num_states();
  if (want_wer) row.wer = pdfa::wer(*model.oracle, *ref.oracle, a.samples, a.seed, a.max_len);
  std::size_t skipped = 0;
  if (k) {
    auto r = pdfa::ndcg(*model.oracle, *ref.oracle, k, a.samples, a.seed, a.max_len);
    row.ndcg = r.score;
    skipped = r.skipped;
  }
  std::cout << pdfa::format_metric_table({row}, k ? k : 2);
  if (skipped) std::cout << skipped << " prefixes skipped (zero top-k mass in the reference)\n";
  return 0;
}

struct SampleArgs {
  std::string target;
  std::size_t count = 100;
  std::size_t max_len = pdfa::kMetricMaxLen;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  pdfa::OpenedTarget target = open(a.target);
  std::vector<pdfa::Sample> kept;
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < a.count; ++i) {
    pdfa::Sample s = pdfa::sample_target(*target.oracle, pdfa::derive_seed(a.seed, i), a.max_len);
    if (s.stopped) kept.push_back(std::move(s));
    else ++truncated;
  }
  const std::string text = pdfa::format_samples(kept, target.oracle->alphabet());
  if (a.out.empty()) std::cout << text;
  else write_file(a.out, text);
  if (truncated)
    std::cerr << truncated << " samples reached --max-len without stopping and were omitted\n";
  return 0;
}

int run_export_dot(const std::string& model, const std::string& out) {
  pdfa::OpenedTarget t = open(model);
  if (!t.pdfa) throw pdfa::InputError("export-dot needs a PDFA file or grammar target");
  const std::string text = pdfa::to_dot(*t.pdfa);
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract weighted automata from black-box language models"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Learn a PDFA from a target");
  extract->add_option("--target", ex.target, "Target model")->required();
  extract->add_option("--tolerance,-t", ex.cfg.table.t, "Variation tolerance t")
      ->capture_default_str();
  extract->add_option("--eps-p", ex.cfg.table.eps_p, "Prefix threshold")->capture_default_str();
  extract->add_option("--eps-s", ex.cfg.table.eps_s, "Suffix threshold")->capture_default_str();
  extract->add_option("--max-p", ex.cfg.table.max_p, "Row cap")->capture_default_str();
  extract->add_option("--max-s", ex.cfg.table.max_s, "Column cap")->capture_default_str();
  extract->add_option("--eq-samples", ex.cfg.eq_samples, "Samples per equivalence query")
      ->capture_default_str();
  extract->add_option("--eq-max-len", ex.cfg.eq_max_len,
                      "Sample length cap for equivalence queries (0: automatic)");
  extract->add_option("--time-budget", ex.time_budget, "Wall-clock budget in seconds");
  extract->add_option("--seed", ex.cfg.seed, "Random seed")->capture_default_str();
  extract->add_option("--max-rounds", ex.max_rounds, "Cap on equivalence queries");
  extract->add_option("--out,-o", ex.out, "Learned PDFA file")->capture_default_str();
  extract->add_option("--report", ex.report, "Run report file")->capture_default_str();
  extract->add_option("--dot", ex.dot, "Also write a Graphviz file");
  extract->add_flag("--timings", ex.timings, "Include wall-clock times in the report");
  extract->add_flag("--quiet,-q", ex.quiet, "Only print the final summary");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare a model against a reference");
  evaluate->add_option("--model", ev.model, "Model under test")->required();
  evaluate->add_option("--reference", ev.reference, "Reference model (sampled)")->required();
  evaluate->add_flag("--wer", ev.wer, "Word error rate");
  evaluate->add_option("--ndcg", ev.ndcg_k, "NDCG at k");
  evaluate->add_option("--samples", ev.samples, "Samples (WER) / prefixes (NDCG)")
      ->capture_default_str();
  evaluate->add_option("--max-len", ev.max_len, "Sample length cap")->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "Random seed")->capture_default_str();

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Draw sequences from a target");
  sample->add_option("--target", sa.target, "Target model")->required();
  sample->add_option("-n,--count", sa.count, "Number of draws")->capture_default_str();
  sample->add_option("--max-len", sa.max_len, "Length cap")->capture_default_str();
  sample->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  sample->add_option("--out,-o", sa.out, "Output file (default: stdout)");

  std::string dot_model, dot_out;
  auto* dot = app.add_subcommand("export-dot", "Write a PDFA as Graphviz");
  dot->add_option("--model", dot_model, "PDFA file or grammar")->required();
  dot->add_option("--out,-o", dot_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*extract) return run_extract(ex);
    if (*evaluate) return run_evaluate(ev);
    if (*sample) return run_sample(sa);
    if (*dot) return run_export_dot(dot_model, dot_out);
  } catch (const pdfa::OracleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracle;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
