#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedaug/core/atomic_file.hpp"
#include "seedaug/core/corpus_io.hpp"
#include "seedaug/core/method.hpp"
#include "seedaug/metrics/naive_bayes.hpp"
#include "seedaug/metrics/report.hpp"
#include "seedaug/mixing/mixing.hpp"
#include "seedaug/pipeline/local_augmenters.hpp"
#include "seedaug/pipeline/pipeline.hpp"
#include "seedaug/remote/plugin_augmenter.hpp"
#include "seedaug/review/review_server.hpp"

namespace seedaug::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AugmentOptions {
  std::string seeds;
  std::string method;
  std::string strategy;
  std::string out;
  std::size_t per_intent = PipelineConfig{}.per_intent_quota;
  std::size_t candidates = PipelineConfig{}.candidates_per_round;
  std::size_t retries = PipelineConfig{}.retry_limit;
  std::uint64_t rng_seed = PipelineConfig{}.rng_seed;
  std::size_t workers = PipelineConfig{}.workers;
  std::string pool;
  std::string embeddings;
  std::string thesaurus;
  std::string pos_lexicon;
  std::string scores;
  std::vector<std::string> plugins;
  std::vector<std::string> members;
  std::size_t mask_count = 1;
  std::size_t typo_edits = 0;
};

void add_generation_flags(CLI::App* cmd, AugmentOptions& o) {
  cmd->add_option("--seeds", o.seeds, "Seed set JSONL")->required();
  cmd->add_option("--out", o.out, "Output augmentations JSONL")->required();
  cmd->add_option("--per-intent", o.per_intent, "Augmentations per intent")->capture_default_str();
  cmd->add_option("--candidates", o.candidates, "Candidates generated per round")->capture_default_str();
  cmd->add_option("--retries", o.retries, "Duplicate budget per intent")->capture_default_str();
  cmd->add_option("--rng-seed", o.rng_seed, "Base RNG seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Intents processed concurrently")->capture_default_str();
  cmd->add_option("--pool", o.pool, "Unlabeled candidate pool, one text per line");
  cmd->add_option("--embeddings", o.embeddings, "Word vectors: token v1 .. vd");
  cmd->add_option("--thesaurus", o.thesaurus, "Thesaurus TSV");
  cmd->add_option("--pos-lexicon", o.pos_lexicon, "POS lexicon TSV");
  cmd->add_option("--plugin", o.plugins, "method=cmd:/path or method=http://host:port (repeatable)");
  cmd->add_option("--mask-count", o.mask_count, "Masked tokens per infill candidate")->capture_default_str();
  cmd->add_option("--typo-edits", o.typo_edits, "Typo edits per candidate (0 = 5% of characters)")
      ->capture_default_str();
}

PipelineConfig pipeline_config(const AugmentOptions& o) {
  PipelineConfig cfg;
  cfg.per_intent_quota = o.per_intent;
  cfg.candidates_per_round = o.candidates;
  cfg.retry_limit = o.retries;
  cfg.rng_seed = o.rng_seed;
  cfg.workers = o.workers;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

MethodId parse_single(const std::string& name) {
  auto m = parse_method(name);
  if (!m || !is_single_method(*m))
    throw UsageError("unknown method '" + name + "'; valid methods: " + single_method_names());
  return *m;
}

MethodId parse_strategy(const std::string& name) {
  auto m = parse_method(name);
  if (!m || !is_mix_strategy(*m)) {
    std::string valid;
    for (MethodId s : kMixStrategies) valid += (valid.empty() ? "" : ", ") + std::string(to_string(s));
    throw UsageError("unknown strategy '" + name + "'; valid strategies: " + valid);
  }
  return *m;
}

// Builds augmenters on demand and keeps them alive for the run.
class AugmenterFactory {
 public:
  AugmenterFactory(const AugmentOptions& o, const SeedSet& seeds) : o_(o), seeds_(seeds) {
    for (const auto& spec : o.plugins) {
      PluginEndpoint ep;
      try {
        ep = PluginEndpoint::parse_spec(spec);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      plugins_[ep.method] = ep;
    }
  }

  const Augmenter& get(MethodId m) {
    auto it = built_.find(m);
    if (it != built_.end()) return *it->second;
    auto a = build(m);
    const Augmenter& ref = *a;
    built_.emplace(m, std::move(a));
    return ref;
  }

 private:
  std::unique_ptr<Augmenter> build(MethodId m) {
    if (auto p = plugins_.find(m); p != plugins_.end()) {
      auto client = std::make_shared<PluginClient>(p->second);
      client->handshake();
      return std::make_unique<PluginAugmenter>(client);
    }
    switch (m) {
      case MethodId::eda:
        return std::make_unique<EdaAugmenter>();
      case MethodId::synonym:
        require(o_.thesaurus, "--thesaurus", m);
        require(o_.pos_lexicon, "--pos-lexicon", m);
        return std::make_unique<SynonymAugmenter>(std::make_shared<PosLexicon>(PosLexicon::load(o_.pos_lexicon)),
                                                  std::make_shared<Thesaurus>(Thesaurus::load(o_.thesaurus)));
      case MethodId::infill: {
        std::vector<std::string> texts;
        for (const auto& [intent, us] : seeds_.intents)
          for (const auto& u : us) texts.push_back(u.text);
        if (!o_.pool.empty())
          for (auto& t : CandidatePool::read_texts(o_.pool)) texts.push_back(std::move(t));
        return std::make_unique<InfillAugmenter>(std::make_shared<NGramModel>(NGramModel::train(texts)),
                                                 o_.mask_count);
      }
      case MethodId::typo:
        return std::make_unique<TypoAugmenter>(o_.typo_edits);
      case MethodId::knn: {
        require(o_.pool, "--pool", m);
        require(o_.embeddings, "--embeddings", m);
        auto table = std::make_shared<EmbeddingTable>(EmbeddingTable::load(o_.embeddings));
        auto pool = std::make_shared<CandidatePool>(CandidatePool::read_texts(o_.pool), *table);
        return std::make_unique<KnnAugmenter>(pool, table);
      }
      default:
        throw UsageError("method " + std::string(to_string(m)) + " needs --plugin " + std::string(to_string(m)) +
                         "=cmd:... or =http://...");
    }
  }

  static void require(const std::string& v, const char* flag, MethodId m) {
    if (v.empty()) throw UsageError("method " + std::string(to_string(m)) + " requires " + flag);
  }

  const AugmentOptions& o_;
  const SeedSet& seeds_;
  std::map<MethodId, PluginEndpoint> plugins_;
  std::map<MethodId, std::unique_ptr<Augmenter>> built_;
};

int finish_run(const DomainResult& result, const std::string& out_path, std::ostream& out) {
  write_augmentations(result.records, out_path);
  out << summary_to_json(result.summary) << "\n";
  return kOk;
}

int cmd_augment(const AugmentOptions& o, std::ostream& out) {
  MethodId m = parse_single(o.method);
  PipelineConfig cfg = pipeline_config(o);
  SeedSet seeds = load_seed_set(o.seeds);
  AugmenterFactory factory(o, seeds);
  const Augmenter& aug = factory.get(m);
  return finish_run(augment_domain(seeds, aug, cfg), o.out, out);
}

int cmd_mix(const AugmentOptions& o, std::ostream& out) {
  MethodId strategy = parse_strategy(o.strategy);
  PipelineConfig cfg = pipeline_config(o);
  std::optional<MethodScoreTable> scores;
  if (!o.scores.empty()) scores = MethodScoreTable::load(o.scores);
  if (strategy == MethodId::top4 && !scores) throw UsageError("strategy top4 requires --scores");
  std::optional<std::vector<MethodId>> members;
  if (!o.members.empty()) {
    members.emplace();
    for (const auto& name : o.members) members->push_back(parse_single(name));
  }
  MixPlan plan = build_mix_plan(strategy, scores ? &*scores : nullptr, members);

  SeedSet seeds = load_seed_set(o.seeds);
  AugmenterFactory factory(o, seeds);
  AugmenterSet set;
  for (MethodId mem : plan.members) set[mem] = &factory.get(mem);
  return finish_run(mixed_augment(seeds, plan, set, cfg), o.out, out);
}

int cmd_evaluate(const std::vector<std::string>& train_paths, const std::string& test_path,
                 const std::string& label, const std::string& out_path, std::ostream& out) {
  std::vector<Utterance> train;
  for (const auto& p : train_paths)
    for (auto& u : load_labeled_corpus(p)) train.push_back(std::move(u));
  auto test = load_labeled_corpus(test_path);
  auto model = NaiveBayesClassifier::train(train);
  auto acc = accuracy(model, test);
  const double pct = round_to(100.0 * acc.fraction(), 2);
  json j{{"correct", acc.correct}, {"total", acc.total}, {"accuracy_pct", pct}};
  if (!label.empty()) j["accuracy"] = json{{label, pct}};
  const std::string text = j.dump() + "\n";
  if (!out_path.empty()) write_file_atomic(out_path, text);
  out << text;
  return kOk;
}

std::map<std::string, double> load_eval(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("accuracy") || !j["accuracy"].is_object())
    throw Error(path + ": expected {\"accuracy\": {name: percent, ...}}");
  std::map<std::string, double> acc;
  for (const auto& [k, v] : j["accuracy"].items()) {
    if (!v.is_number()) throw Error(path + ": accuracy for " + k + " is not a number");
    acc[k] = v.get<double>();
  }
  return acc;
}

int cmd_report(const std::string& aug_path, const std::string& reviews_path, const std::string& eval_path,
               const std::string& format, const std::string& out_path, std::ostream& out) {
  auto records = load_augmentations(aug_path);
  auto reviews = read_review_log(reviews_path);
  std::map<std::string, double> acc;
  if (!eval_path.empty()) acc = load_eval(eval_path);
  auto report = build_report(records, reviews, acc);
  std::string text = format == "json" ? report_to_json(report) + "\n" : report_to_table(report);
  if (!out_path.empty()) write_file_atomic(out_path, text);
  out << text;
  return kOk;
}

struct ServeOptions {
  std::string augmentations;
  std::string log;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string seeds;
  std::size_t batch_size = ReviewServiceConfig{}.batch_size;
  double lease_minutes = 30.0;
  std::vector<std::string> annotators;
  bool allow_overlap = false;
};

int cmd_serve(const ServeOptions& o, std::ostream& out) {
  ReviewServiceConfig cfg;
  cfg.batch_size = o.batch_size;
  cfg.lease = std::chrono::milliseconds(static_cast<std::int64_t>(o.lease_minutes * 60000.0));
  cfg.allow_overlap = o.allow_overlap;
  if (!o.annotators.empty()) {
    cfg.require_registration = true;
    cfg.annotators.insert(o.annotators.begin(), o.annotators.end());
  }
  if (!o.seeds.empty()) {
    for (const auto& [intent, us] : load_seed_set(o.seeds).intents)
      for (const auto& u : us) cfg.seeds[intent].push_back(u.text);
  }

  // Block the stop signals before any thread exists so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  ReviewStore store(load_augmentations(o.augmentations), o.log, cfg);
  std::optional<std::filesystem::path> static_dir;
  if (!o.static_dir.empty()) static_dir = o.static_dir;
  ReviewServer server(store, static_dir);
  int port = server.bind(o.host, o.port);
  server.start();
  out << json{{"listening", o.host + ":" + std::to_string(port)}}.dump() << std::endl;
  int sig = 0;
  sigwait(&stop_signals, &sig);
  server.stop();
  return kOk;
}

int cmd_plugin_check(const std::string& spec, std::ostream& out) {
  PluginEndpoint ep;
  try {
    ep = PluginEndpoint::parse_spec(spec);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  PluginClient client(ep);
  auto methods = client.handshake();
  json announced = json::array();
  for (MethodId m : methods) announced.push_back(to_string(m));
  out << json{{"ok", true}, {"method", to_string(ep.method)}, {"announced", announced}}.dump() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seed-set augmentation engine"};
  app.require_subcommand(1);

  AugmentOptions aug;
  auto* augment = app.add_subcommand("augment", "Generate augmentations with one method");
  add_generation_flags(augment, aug);
  augment->add_option("--method", aug.method, "Augmentation method")->required();

  AugmentOptions mixo;
  auto* mix = app.add_subcommand("mix", "Generate augmentations with a mixing strategy");
  add_generation_flags(mix, mixo);
  mix->add_option("--strategy", mixo.strategy, "top4, category_best, heuristic or mix_all")->required();
  mix->add_option("--scores", mixo.scores, "Per-method accuracy JSON, needed by top4");
  mix->add_option("--members", mixo.members, "Override category_best members");

  std::vector<std::string> train_paths;
  std::string test_path, eval_label, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Naive-Bayes accuracy of a training set on a test set");
  evaluate->add_option("--train", train_paths, "Labeled JSONL (repeatable; augmentation files work too)")->required();
  evaluate->add_option("--test", test_path, "Labeled test JSONL")->required();
  evaluate->add_option("--label", eval_label, "Row name to file the accuracy under");
  evaluate->add_option("--out", eval_out, "Also write the JSON here");

  std::string rep_aug, rep_reviews, rep_eval, rep_format = "table", rep_out;
  auto* report = app.add_subcommand("report", "Metrics table over augmentations and reviews");
  report->add_option("--augmentations", rep_aug, "Augmentations JSONL")->required();
  report->add_option("--reviews", rep_reviews, "Review log JSONL")->required();
  report->add_option("--eval", rep_eval, "Accuracy JSON: {\"accuracy\": {name: percent}}");
  report->add_option("--format", rep_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  report->add_option("--out", rep_out, "Also write the report here");

  ServeOptions so;
  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve->add_option("--augmentations", so.augmentations, "Augmentations JSONL")->required();
  serve->add_option("--log", so.log, "Append-only review log")->required();
  serve->add_option("--port", so.port, "TCP port (0 picks one)")->capture_default_str();
  serve->add_option("--host", so.host, "Bind address")->capture_default_str();
  serve->add_option("--static", so.static_dir, "Directory served at /");
  serve->add_option("--seeds", so.seeds, "Seed set shown to reviewers as context");
  serve->add_option("--batch-size", so.batch_size, "Records per batch")->capture_default_str();
  serve->add_option("--lease-minutes", so.lease_minutes, "Batch lease")->capture_default_str();
  serve->add_option("--annotator", so.annotators, "Registered annotator (repeatable; enables registration)");
  serve->add_flag("--allow-overlap", so.allow_overlap, "Let several annotators review one record");

  std::string check_spec;
  auto* check = app.add_subcommand("plugin-check", "Handshake with a plugin and report what it serves");
  check->add_option("--plugin", check_spec, "method=cmd:/path or method=http://host:port")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kUsage;
  }

  try {
    if (*augment) return cmd_augment(aug, out);
    if (*mix) return cmd_mix(mixo, out);
    if (*evaluate) return cmd_evaluate(train_paths, test_path, eval_label, eval_out, out);
    if (*report) return cmd_report(rep_aug, rep_reviews, rep_eval, rep_format, rep_out, out);
    if (*serve) return cmd_serve(so, out);
    if (*check) return cmd_plugin_check(check_spec, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace seedaug::cli
