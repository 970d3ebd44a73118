#include "pdfa/extract.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pdfa/errors.hpp"

namespace pdfa {

void ExtractionConfig::validate() const {
  table.validate();
  if (eq_samples == 0) throw InputError("eq_samples must be at least 1");
  if (time_budget && !(*time_budget >= 0.0)) throw InputError("time budget must be non-negative");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Accepted: return "accepted";
    case StopReason::RowCap: return "row-cap";
    case StopReason::SuffixCap: return "suffix-cap";
    case StopReason::Time: return "time";
    case StopReason::RoundCap: return "round-cap";
    case StopReason::Error: return "error";
  }
  return "error";
}

EqResult equivalence_query(Oracle& target, const Pdfa& hyp, std::size_t samples,
                           std::size_t max_len, double t, std::uint64_t seed,
                           const Deadline& deadline) {
  if (!(hyp.alphabet() == target.alphabet()))
    throw InputError("hypothesis and target alphabets differ");
  const std::size_t width = hyp.alphabet().dist_size();
  for (std::size_t i = 0; i < samples; ++i) {
    if (deadline.expired()) return {EqVerdict::Timeout, {}};
    const std::uint64_t s = derive_seed(seed, i);
    const Sample drawn = (i % 2 == 0) ? sample_target(target, s, max_len) : sample(hyp, s, max_len);
    const Word& w = drawn.tokens;
    StateId q = hyp.initial();
    for (std::size_t k = 0; k <= w.size(); ++k) {
      auto u = std::span<const Symbol>(w).first(k);
      const Dist td = target.next_dist(u);
      const auto hd = hyp.weights(q);
      double gap = t;
      std::optional<Symbol> worst;
      for (Symbol a = 0; a < width; ++a) {
        const double d = std::abs(td[a] - hd[a]);
        if (d > gap) {
          gap = d;
          worst = a;
        }
      }
      if (worst) return {EqVerdict::Counterexample, extend(u, *worst)};
      if (k < w.size()) q = hyp.next(q, w[k]);
    }
  }
  return {EqVerdict::Accept, {}};
}

std::size_t auto_sample_cap(Oracle& target, std::uint64_t seed) {
  constexpr std::size_t kProbes = 100;
  constexpr std::size_t kProbeCap = 1000;
  double total = 0.0;
  for (std::size_t i = 0; i < kProbes; ++i)
    total += static_cast<double>(
        sample_target(target, derive_seed(seed, 0x5eed0000 + i), kProbeCap).tokens.size());
  const double cap = std::ceil(4.0 * total / kProbes);
  return std::max<std::size_t>(1, static_cast<std::size_t>(cap));
}

EqResult SamplingEquivalence::check(Oracle& target, const Pdfa& hyp, std::size_t round,
                                    const Deadline& deadline) {
  return equivalence_query(target, hyp, samples_, max_len_, t_, derive_seed(seed_, round),
                           deadline);
}

EqResult ScriptedEquivalence::check(Oracle&, const Pdfa&, std::size_t round, const Deadline&) {
  if (round < script_.size()) return {EqVerdict::Counterexample, script_[round]};
  return {EqVerdict::Accept, {}};
}

namespace {

class TableForwarder {
public:
  explicit TableForwarder(ExtractionObserver* o) : o_(o) {}
  void operator()(const ObservationTable& t, TableEvent e) const {
    if (o_) o_->on_table_event(t, e);
  }

private:
  ExtractionObserver* o_;
};

} // namespace

ExtractionReport extract(Oracle& target, const ExtractionConfig& cfg, EquivalenceChecker* checker,
                         ExtractionObserver* observer) {
  cfg.validate();
  if (target.alphabet().empty()) throw InputError("oracle alphabet is empty");
  Deadline deadline(cfg.time_budget);
  CachedOracle cache(target);
  ExtractionReport rep;
  std::optional<ObservationTable> table;
  std::optional<SamplingEquivalence> sampling;

  try {
    table.emplace(cache, cfg.table);
    if (observer) table->set_listener(TableForwarder(observer));
    if (!checker) {
      rep.eq_max_len = cfg.eq_max_len ? cfg.eq_max_len : auto_sample_cap(cache, cfg.seed);
      sampling.emplace(cfg.eq_samples, rep.eq_max_len, cfg.table.t, cfg.seed);
      checker = &*sampling;
    }
    for (std::size_t round = 0;; ++round) {
      const double started = deadline.elapsed();
      const ExpandOutcome outcome = table->expand(deadline);
      ClusteringTrace trace;
      Pdfa hyp = construct_hypothesis(*table, cfg.match_policy, &trace);
      if (observer) observer->on_hypothesis(round, *table, trace, hyp);

      RoundRecord rec;
      rec.hypothesis_states = hyp.num_states();
      rec.p_size = table->size();
      rec.s_size = table->suffixes().size();
      rep.final = std::move(hyp);

      auto close_round = [&](std::optional<StopReason> stop) {
        rec.queries = cache.query_count();
        rec.unique_queries = cache.unique_count();
        rec.seconds = deadline.elapsed() - started;
        rep.rounds.push_back(rec);
        if (stop) rep.stop_reason = *stop;
        return stop.has_value();
      };

      if (outcome == ExpandOutcome::RowCap) {
        close_round(StopReason::RowCap);
        break;
      }
      if (outcome == ExpandOutcome::Time || deadline.expired()) {
        close_round(StopReason::Time);
        break;
      }
      if (cfg.max_rounds && round >= *cfg.max_rounds) {
        close_round(StopReason::RoundCap);
        break;
      }
      EqResult res = checker->check(cache, *rep.final, round, deadline);
      if (res.verdict == EqVerdict::Timeout) {
        close_round(StopReason::Time);
        break;
      }
      if (res.verdict == EqVerdict::Accept) {
        close_round(table->consistency_enabled() ? StopReason::Accepted : StopReason::SuffixCap);
        break;
      }
      rec.counterexample = res.counterexample;
      close_round(std::nullopt);
      const std::size_t before = table->size();
      table->add_counterexample(res.counterexample);
      if (observer) observer->on_counterexample(round, res.counterexample, before, table->size());
    }
  } catch (const OracleError& e) {
    rep.stop_reason = StopReason::Error;
    rep.error = e.what();
  }
  if (table) {
    rep.p_snapshot = table->prefixes();
    rep.s_snapshot = table->suffixes();
  }
  rep.seconds = deadline.elapsed();
  return rep;
}

namespace {

std::string fmt_t(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

} // namespace

std::string choose_tolerance_hint(const std::vector<std::pair<double, std::size_t>>& runs) {
  std::ostringstream out;
  bool collapsed = false;
  for (const auto& [t, states] : runs)
    if (states <= 1) {
      collapsed = true;
      out << "t=" << fmt_t(t) << " reached equivalence on a single state; try t=" << fmt_t(t / 2)
          << "\n";
    }
  if (!collapsed) return "";
  for (const auto& [t, states] : runs)
    if (states > 1) {
      out << "t=" << fmt_t(t) << " is adequate (" << states << " states)\n";
      break;
    }
  return out.str();
}

std::string report_to_json(const ExtractionReport& r, const ExtractionConfig& cfg,
                           const Alphabet& sigma, bool include_timings) {
  using ordered_json = nlohmann::ordered_json;
  auto cap = [](std::size_t v) -> ordered_json {
    if (v == kUnlimited) return nullptr;
    return v;
  };
  auto words = [&](const std::vector<Word>& ws) {
    ordered_json out = ordered_json::array();
    for (const Word& w : ws) out.push_back(sigma.decode(w));
    return out;
  };

  ordered_json doc;
  ordered_json c;
  c["tolerance"] = cfg.table.t;
  c["eps_p"] = cfg.table.eps_p;
  c["eps_s"] = cfg.table.eps_s;
  c["max_p"] = cap(cfg.table.max_p);
  c["max_s"] = cap(cfg.table.max_s);
  c["eq_samples"] = cfg.eq_samples;
  c["eq_max_len"] = r.eq_max_len;
  c["seed"] = cfg.seed;
  c["max_rounds"] = cfg.max_rounds ? ordered_json(*cfg.max_rounds) : ordered_json(nullptr);
  c["time_budget"] = cfg.time_budget ? ordered_json(*cfg.time_budget) : ordered_json(nullptr);
  c["match_policy"] = cfg.match_policy == MatchPolicy::MinDistance ? "min-distance" : "first";
  doc["config"] = std::move(c);
  doc["alphabet"] = sigma.tokens();
  doc["stop_reason"] = to_string(r.stop_reason);
  if (!r.error.empty()) doc["error"] = r.error;
  doc["states"] = r.final ? ordered_json(r.final->num_states()) : ordered_json(nullptr);

  ordered_json rounds = ordered_json::array();
  for (std::size_t i = 0; i < r.rounds.size(); ++i) {
    const RoundRecord& rec = r.rounds[i];
    ordered_json o;
    o["round"] = i + 1;
    o["hypothesis_states"] = rec.hypothesis_states;
    o["prefixes"] = rec.p_size;
    o["suffixes"] = rec.s_size;
    o["queries"] = rec.queries;
    o["unique_queries"] = rec.unique_queries;
    o["counterexample"] =
        rec.counterexample ? ordered_json(sigma.decode(*rec.counterexample)) : ordered_json(nullptr);
    if (include_timings) o["seconds"] = rec.seconds;
    rounds.push_back(std::move(o));
  }
  doc["rounds"] = std::move(rounds);
  doc["prefixes"] = words(r.p_snapshot);
  doc["suffixes"] = words(r.s_snapshot);
  if (include_timings) doc["seconds"] = r.seconds;
  return doc.dump(2) + "\n";
}

} // namespace pdfa
