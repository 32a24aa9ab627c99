#include "tweetsent/cli_app.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tweetsent/embeddings.hpp"
#include "tweetsent/eval.hpp"
#include "tweetsent/io_util.hpp"
#include "tweetsent/lstm.hpp"
#include "tweetsent/normalize.hpp"
#include "tweetsent/vader.hpp"

namespace tweetsent {

namespace {

std::string flatten_whitespace(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string corpus_lines(const std::vector<LabeledTweet>& tweets) {
  std::string out;
  for (const LabeledTweet& t : tweets) {
    out += to_string(t.label);
    out += '\t';
    out += t.text;
    out += '\n';
  }
  return out;
}

struct SourceFile {
  DatasetId id;
  std::string path;
};

std::vector<SourceFile> parse_source_args(const std::vector<std::string>& specs) {
  std::vector<SourceFile> files;
  for (const std::string& spec : specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--source expects <name>=<path>, got '" + spec +
                               "'");
    }
    const std::string name = spec.substr(0, eq);
    const auto id = dataset_from_string(name);
    if (!id) {
      throw std::runtime_error("unknown dataset name '" + name +
                               "' (expected one of sts_test, hcr, omd, "
                               "ss_twitter, sanders, semeval, sts_gold)");
    }
    for (const SourceFile& f : files) {
      if (f.id == *id) {
        throw std::runtime_error("dataset '" + name + "' given twice");
      }
    }
    files.push_back(SourceFile{*id, spec.substr(eq + 1)});
  }
  // Canonical source order, independent of flag order.
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return static_cast<int>(a.id) < static_cast<int>(b.id);
  });
  return files;
}

int cmd_ingest(const std::vector<std::string>& sources, const std::string& out,
               std::string manifest_path, const std::string& raw_out,
               const std::string& emoticon_path) {
  const std::vector<SourceFile> files = parse_source_args(sources);
  if (manifest_path.empty()) manifest_path = out + ".manifest.json";

  std::vector<RawRecord> records;
  for (const SourceFile& f : files) {
    std::vector<RawRecord> batch = load_dataset(f.path, f.id);
    records.insert(records.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));
  }
  auto [tweets, manifest] = build_corpus(records);

  const EmoticonTable table = emoticon_path.empty()
                                  ? EmoticonTable::builtin()
                                  : EmoticonTable::load(emoticon_path);
  std::vector<LabeledTweet> normalized = tweets;
  for (LabeledTweet& t : normalized) t.text = normalize(t.text, table).text;

  write_file_atomic(out, corpus_lines(normalized));
  write_file_atomic(manifest_path, manifest.to_json());
  if (!raw_out.empty()) {
    std::vector<LabeledTweet> raw = tweets;
    for (LabeledTweet& t : raw) t.text = flatten_whitespace(t.text);
    write_file_atomic(raw_out, corpus_lines(raw));
  }
  std::cout << "retained " << manifest.total.retained() << " of "
            << manifest.total.total() << " records (" << manifest.total.dropped
            << " dropped) from " << files.size() << " source(s)\n"
            << "corpus: " << out << "\nmanifest: " << manifest_path << "\n";
  return 0;
}

// Reconstructs per-record sources for a corpus file from its manifest:
// ingest writes tweets grouped in canonical source order, so the
// manifest's retained counts give the segment boundaries.
std::vector<LabeledTweet> assign_sources_from_manifest(
    std::vector<LabeledTweet> tweets, const std::string& manifest_path) {
  const auto j = nlohmann::json::parse(read_file(manifest_path));
  std::size_t offset = 0;
  for (int s = 0; s < kDatasetCount; ++s) {
    const char* name = to_string(static_cast<DatasetId>(s));
    if (!j.contains(name)) continue;
    const auto& counts = j.at(name);
    const std::int64_t retained = counts.at("positive").get<std::int64_t>() +
                                  counts.at("negative").get<std::int64_t>() +
                                  counts.at("neutral").get<std::int64_t>();
    for (std::int64_t k = 0; k < retained; ++k) {
      if (offset >= tweets.size()) {
        throw std::runtime_error(manifest_path +
                                 ": manifest counts exceed corpus size");
      }
      tweets[offset++].source = static_cast<DatasetId>(s);
    }
  }
  if (offset != tweets.size()) {
    throw std::runtime_error(manifest_path +
                             ": manifest counts do not match corpus size");
  }
  return tweets;
}

int cmd_split(const std::string& in, double fraction, std::uint64_t seed,
              const std::string& train_out, const std::string& test_out,
              bool per_source, const std::string& manifest_path) {
  std::vector<LabeledTweet> corpus = read_corpus_file(in);
  DatasetSplit split;
  if (per_source) {
    if (manifest_path.empty()) {
      throw std::runtime_error(
          "--per-source needs --manifest to recover source segments");
    }
    corpus = assign_sources_from_manifest(std::move(corpus), manifest_path);
    split = shuffle_split_per_source(corpus, fraction, seed);
  } else {
    split = shuffle_split(corpus, fraction, seed);
  }
  write_file_atomic(train_out, corpus_lines(split.train));
  write_file_atomic(test_out, corpus_lines(split.test));
  std::cout << "train: " << split.train.size() << " -> " << train_out
            << "\ntest: " << split.test.size() << " -> " << test_out << "\n";
  return 0;
}

std::string train_meta_json(const TrainConfig& config, int embedding_dim) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["epochs"] = config.epochs;
  j["batch_size"] = config.batch_size;
  j["hidden"] = config.hidden_size;
  j["max_len"] = config.max_len;
  j["learning_rate"] = config.adam.learning_rate;
  j["activation"] = to_string(config.activation);
  j["embedding_dim"] = embedding_dim;
  return j.dump();
}

int cmd_train(const std::string& in, const std::string& embeddings_path,
              const std::string& out, std::string history_path,
              TrainConfig config, const std::string& activation_name,
              const std::string& resume_path) {
  if (auto act = activation_from_string(activation_name)) {
    config.activation = *act;
  } else {
    throw std::runtime_error("unknown activation '" + activation_name +
                             "' (expected relu or tanh)");
  }
  if (history_path.empty()) history_path = out + ".history.csv";

  const std::vector<LabeledTweet> examples = read_corpus_file(in);
  const EmbeddingTable table = load_embeddings(embeddings_path);

  std::optional<LstmParams> resume;
  if (!resume_path.empty()) {
    Checkpoint ck = load_checkpoint(resume_path);
    if (ck.params.input_dim != table.dim) {
      throw std::runtime_error(
          "embedding dimension mismatch: checkpoint expects d=" +
          std::to_string(ck.params.input_dim) + ", embeddings file has d=" +
          std::to_string(table.dim));
    }
    config.hidden_size = ck.params.hidden_dim;
    resume = std::move(ck.params);
  }

  std::printf("config: epochs=%d batch=%d h=%d lr=%g max_len=%d "
              "activation=%s seed=%llu threads=%d\n",
              config.epochs, config.batch_size, config.hidden_size,
              config.adam.learning_rate, config.max_len,
              to_string(config.activation),
              static_cast<unsigned long long>(config.seed),
              config.num_threads);

  TrainResult result;
  if (resume) {
    // Resume: keep the loaded weights, fresh optimizer state.
    config.validate();
    result = train_from(*resume, examples, config, table);
  } else {
    result = train(examples, config, table);
  }

  std::string history;
  for (std::size_t e = 0; e < result.history.size(); ++e) {
    char line[96];
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", e + 1,
                  result.history[e].mean_loss, result.history[e].accuracy);
    history += line;
  }
  write_file_atomic(history_path, history);
  save_checkpoint(out, result.params, train_meta_json(config, table.dim));

  std::cout << "checkpoint: " << out << "\nhistory: " << history_path << "\n";
  if (!result.history.empty()) {
    std::cout << "final epoch: loss=" << result.history.back().mean_loss
              << " accuracy=" << result.history.back().accuracy << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& in,
             const std::string& embeddings_path, const std::string& out,
             const std::string& name, int max_len_flag,
             const std::string& activation_flag) {
  Checkpoint ck = load_checkpoint(model_path);
  const EmbeddingTable table = load_embeddings(embeddings_path);
  if (table.dim != ck.params.input_dim) {
    throw std::runtime_error(
        "embedding dimension mismatch: model expects d=" +
        std::to_string(ck.params.input_dim) + ", embeddings file has d=" +
        std::to_string(table.dim));
  }

  int max_len = 64;
  Activation act = Activation::Relu;
  if (!ck.meta.empty()) {
    const auto meta = nlohmann::json::parse(ck.meta, nullptr, false);
    if (!meta.is_discarded()) {
      if (meta.contains("max_len")) max_len = meta.at("max_len").get<int>();
      if (meta.contains("activation")) {
        if (auto a = activation_from_string(
                meta.at("activation").get<std::string>())) {
          act = *a;
        }
      }
    }
  }
  if (max_len_flag > 0) max_len = max_len_flag;
  if (!activation_flag.empty()) {
    if (auto a = activation_from_string(activation_flag)) {
      act = *a;
    } else {
      throw std::runtime_error("unknown activation '" + activation_flag + "'");
    }
  }

  const std::vector<LabeledTweet> tweets = read_corpus_file(in);
  std::vector<std::pair<SentimentLabel, SentimentLabel>> pairs;
  pairs.reserve(tweets.size());
  for (const LabeledTweet& t : tweets) {
    const EmbeddedSequence seq =
        embed(tokenize(NormalizedText{t.text}), table, max_len);
    pairs.emplace_back(t.label, predict(ck.params, seq, act).label);
  }
  const EvalReport rep = report(confusion(pairs));
  if (!out.empty()) write_file_atomic(out, report_to_json(name, rep));
  std::cout << render_comparison({{name, rep}});
  return 0;
}

int cmd_vader(const std::string& in, const std::string& lexicon_path,
              const std::string& out, const std::string& name,
              const std::string& boosters_path,
              const std::string& negators_path) {
  const Lexicon lexicon = load_lexicon(lexicon_path);
  RuleConfig rules = RuleConfig::defaults();
  if (!boosters_path.empty()) rules.boosters = load_word_list(boosters_path);
  if (!negators_path.empty()) rules.negators = load_word_list(negators_path);

  const std::vector<LabeledTweet> tweets = read_corpus_file(in);
  const auto pairs = classify_corpus(tweets, lexicon, rules);
  const EvalReport rep = report(confusion(pairs));
  if (!out.empty()) write_file_atomic(out, report_to_json(name, rep));
  if (lexicon.rejected_lines > 0) {
    std::cout << "lexicon: " << lexicon.rejected_lines
              << " line(s) rejected\n";
  }
  std::cout << render_comparison({{name, rep}});
  return 0;
}

int cmd_compare(const std::string& report_a, const std::string& report_b,
                const std::string& out) {
  const auto a = report_from_json(read_file(report_a));
  const auto b = report_from_json(read_file(report_b));
  const std::string table = compare(a, b);
  if (!out.empty()) write_file_atomic(out, table);
  std::cout << table;
  return 0;
}

int cmd_summarize(const std::string& in) {
  const std::vector<LabeledTweet> tweets = read_corpus_file(in);
  LabelCounts counts;
  for (const LabeledTweet& t : tweets) counts.add(t.label);
  nlohmann::ordered_json j;
  j["total"] = counts.retained();
  j["positive"] = counts.positive;
  j["negative"] = counts.negative;
  j["neutral"] = counts.neutral;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

void write_corpus_file(const std::string& path,
                       const std::vector<LabeledTweet>& tweets) {
  write_file_atomic(path, corpus_lines(tweets));
}

std::vector<LabeledTweet> read_corpus_file(const std::string& path) {
  std::vector<LabeledTweet> tweets;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() && ln + 1 == lines.size()) break;  // trailing newline
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ": line " + std::to_string(ln + 1) +
                               ": missing label column");
    }
    const auto label = sentiment_from_string(line.substr(0, tab));
    if (!label) {
      throw std::runtime_error(path + ": line " + std::to_string(ln + 1) +
                               ": unknown label '" + line.substr(0, tab) + "'");
    }
    tweets.push_back(
        LabeledTweet{DatasetId::StsTest, line.substr(tab + 1), *label});
  }
  return tweets;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Twitter sentiment toolkit: corpus building, LSTM training, "
               "and a lexicon-rule baseline"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "Load datasets, harmonize labels, normalize, write corpus");
  std::vector<std::string> sources;
  std::string ingest_out = "corpus.tsv";
  std::string manifest_path;
  std::string raw_out;
  std::string emoticon_path;
  ingest->add_option("--source", sources, "<name>=<path>, repeatable")
      ->required();
  ingest->add_option("--out", ingest_out, "normalized corpus file");
  ingest->add_option("--manifest", manifest_path,
                     "manifest path (default <out>.manifest.json)");
  ingest->add_option("--raw-out", raw_out,
                     "also write the un-normalized corpus here");
  ingest->add_option("--emoticons", emoticon_path,
                     "emoticon table file (default: built-in)");

  // split
  auto* split_cmd = app.add_subcommand("split", "Shuffle and split a corpus");
  std::string split_in;
  double fraction = 0.2;
  std::uint64_t seed = 0;
  std::string train_out = "train.tsv";
  std::string test_out = "test.tsv";
  bool per_source = false;
  std::string split_manifest;
  split_cmd->add_option("--in", split_in, "corpus file")->required();
  split_cmd->add_option("--fraction", fraction, "test fraction (default 0.2)");
  split_cmd->add_option("--seed", seed, "shuffle seed");
  split_cmd->add_option("--train-out", train_out, "train output file");
  split_cmd->add_option("--test-out", test_out, "test output file");
  split_cmd->add_flag("--per-source", per_source,
                      "split each source separately (e.g. --fraction 0.1)");
  split_cmd->add_option("--manifest", split_manifest,
                        "ingest manifest (required with --per-source)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the LSTM classifier");
  std::string train_in;
  std::string embeddings_path;
  std::string ckpt_out = "model.ckpt";
  std::string history_path;
  std::string activation_name = "relu";
  std::string resume_path;
  TrainConfig config;
  train_cmd->add_option("--in", train_in, "training corpus")->required();
  train_cmd->add_option("--embeddings", embeddings_path, "GloVe text file")
      ->required();
  train_cmd->add_option("--out", ckpt_out, "checkpoint output");
  train_cmd->add_option("--history", history_path,
                        "history CSV (default <out>.history.csv)");
  train_cmd->add_option("--epochs", config.epochs, "epochs (default 50)");
  train_cmd->add_option("--batch-size", config.batch_size,
                        "batch size (default 256)");
  train_cmd->add_option("--hidden", config.hidden_size,
                        "hidden units (default 100)");
  train_cmd->add_option("--max-len", config.max_len,
                        "sequence length cap (default 64)");
  train_cmd->add_option("--lr", config.adam.learning_rate,
                        "learning rate (default 0.001)");
  train_cmd->add_option("--seed", config.seed, "seed for init and shuffles");
  train_cmd->add_option("--activation", activation_name, "relu|tanh");
  train_cmd->add_option("--threads", config.num_threads,
                        "batch-parallel workers (default 1)");
  train_cmd->add_option("--resume", resume_path,
                        "checkpoint to continue training from");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  std::string eval_model, eval_in, eval_embeddings, eval_out, eval_name = "lstm";
  int eval_max_len = 0;
  std::string eval_activation;
  eval_cmd->add_option("--model", eval_model, "checkpoint")->required();
  eval_cmd->add_option("--in", eval_in, "test corpus")->required();
  eval_cmd->add_option("--embeddings", eval_embeddings, "GloVe text file")
      ->required();
  eval_cmd->add_option("--out", eval_out, "report JSON output");
  eval_cmd->add_option("--name", eval_name, "model name in the report");
  eval_cmd->add_option("--max-len", eval_max_len,
                       "override the checkpoint's max_len");
  eval_cmd->add_option("--activation", eval_activation,
                       "override the checkpoint's activation");

  // vader
  auto* vader_cmd =
      app.add_subcommand("vader", "Score with the lexicon-rule baseline");
  std::string vader_in, lexicon_path, vader_out, vader_name = "vader";
  std::string boosters_path, negators_path;
  vader_cmd->add_option("--in", vader_in, "test corpus (raw text recommended)")
      ->required();
  vader_cmd->add_option("--lexicon", lexicon_path, "token<TAB>valence file")
      ->required();
  vader_cmd->add_option("--out", vader_out, "report JSON output");
  vader_cmd->add_option("--name", vader_name, "model name in the report");
  vader_cmd->add_option("--boosters", boosters_path, "booster word list");
  vader_cmd->add_option("--negators", negators_path, "negator word list");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "Render a comparison table of two reports");
  std::string report_a, report_b, compare_out;
  compare_cmd->add_option("reportA", report_a, "first report JSON")->required();
  compare_cmd->add_option("reportB", report_b, "second report JSON")
      ->required();
  compare_cmd->add_option("--out", compare_out, "write the table here too");

  // summarize
  auto* summarize_cmd =
      app.add_subcommand("summarize", "Label counts of a corpus file");
  std::string summarize_in;
  summarize_cmd->add_option("--in", summarize_in, "corpus file")->required();

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());  // CLI11 wants reversed argv
  try {
    app.name("tweetsent");
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ingest) {
      return cmd_ingest(sources, ingest_out, manifest_path, raw_out,
                        emoticon_path);
    }
    if (*split_cmd) {
      return cmd_split(split_in, fraction, seed, train_out, test_out,
                       per_source, split_manifest);
    }
    if (*train_cmd) {
      return cmd_train(train_in, embeddings_path, ckpt_out, history_path,
                       config, activation_name, resume_path);
    }
    if (*eval_cmd) {
      return cmd_eval(eval_model, eval_in, eval_embeddings, eval_out, eval_name,
                      eval_max_len, eval_activation);
    }
    if (*vader_cmd) {
      return cmd_vader(vader_in, lexicon_path, vader_out, vader_name,
                       boosters_path, negators_path);
    }
    if (*compare_cmd) return cmd_compare(report_a, report_b, compare_out);
    if (*summarize_cmd) return cmd_summarize(summarize_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand given\n";
  return 2;
}

}  // namespace tweetsent
