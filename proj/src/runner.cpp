#include "battleship/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "battleship/eig.hpp"
#include "battleship/errors.hpp"
#include "battleship/hypotheses.hpp"
#include "battleship/pcfg.hpp"

namespace battleship {

namespace {

using nlohmann::json;

namespace fs = std::filesystem;

std::string board_id_of(const std::string& board_file) {
  return fs::path(board_file).stem().string();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed while writing " + path.string());
}

std::optional<AnswerType> parse_answer_type(const std::string& name) {
  for (AnswerType t : {AnswerType::Boolean, AnswerType::Number,
                       AnswerType::Color, AnswerType::Orientation,
                       AnswerType::Location}) {
    if (name == answer_type_name(t)) return t;
  }
  return std::nullopt;
}

json record_to_json(const CandidateRecord& rec) {
  json j;
  j["index"] = rec.index;
  j["provenance"] = rec.provenance;
  j["question"] = rec.question ? json(*rec.question) : json(nullptr);
  j["program_text"] = rec.program_text;
  j["valid"] = rec.valid;
  j["informative"] = rec.informative;
  j["eig_bits"] = rec.eig_bits ? json(*rec.eig_bits) : json(nullptr);
  j["depth"] = rec.depth ? json(*rec.depth) : json(nullptr);
  j["size"] = rec.size ? json(*rec.size) : json(nullptr);
  j["word_count"] = rec.word_count ? json(*rec.word_count) : json(nullptr);
  j["error"] = rec.error;
  j["answer_type"] = (rec.valid && rec.program)
                         ? json(answer_type_name(top_level_type(*rec.program)))
                         : json(nullptr);
  return j;
}

// %.10g: compact, stable, and plenty for table output.
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

// mean,sem cell pair; "--" when the metric had no observations.
std::string metric_cells(const MetricSummary& m) {
  if (m.n == 0) return "--,--";
  return fmt(m.mean) + "," + fmt(m.std_error);
}

struct RunData {
  std::string label;
  std::string proposal;
  std::vector<CandidateRecord> records;           // pooled across boards
  std::vector<std::optional<AnswerType>> types;   // parallel to records
  std::vector<BucketRow> buckets;
};

RunData load_run_dir(const std::string& dir) {
  const fs::path root(dir);
  const fs::path manifest_path = root / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot read " + manifest_path.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw InputError(manifest_path.string() + ": " + e.what());
  }

  RunData run;
  run.label = manifest.at("label").get<std::string>();
  run.proposal = manifest.at("proposal").get<std::string>();
  for (const auto& board : manifest.at("results")) {
    const auto id = board.at("board_id").get<std::string>();
    for (auto& row :
         load_records_jsonl(root / "records" / (id + ".jsonl"))) {
      run.records.push_back(std::move(row.record));
      run.types.push_back(row.answer_type);
    }
  }
  run.buckets = load_buckets_jsonl(root / "buckets.jsonl");
  return run;
}

std::vector<double> valid_eig_pool(const std::vector<CandidateRecord>& records) {
  std::vector<double> pool;
  for (const auto& rec : records)
    if (rec.valid) pool.push_back(*rec.eig_bits);
  return pool;
}

}  // namespace

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return sha256_hex(bytes.str());
}

void RunOptions::validate() const {
  if (board_files.empty()) throw InputError("a run needs at least one board");
  if (n == 0) throw InputError("a run needs at least one candidate per board");
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw InputError("candidate count does not fit a completion request");
  if (ks.empty()) throw InputError("a run needs at least one bucket size k");
  for (std::size_t k : ks)
    if (k == 0 || k > n)
      throw InputError("bucket size k must lie in [1, n]; got " +
                       std::to_string(k));
  if (out_dir.empty()) throw InputError("a run needs an output directory");
  if (proposal == ProposalKind::Llm) {
    if (dataset_path.empty())
      throw InputError("llm proposals need an example dataset for prompts");
    if (provider != "replay" && provider != "http")
      throw InputError("provider must be 'replay' or 'http'; got '" +
                       provider + "'");
    if (provider == "replay" && fixtures_path.empty())
      throw InputError("the replay provider needs a fixtures file");
    if (provider == "http" && provider_spec.endpoint.empty())
      throw InputError("the http provider needs an endpoint");
    if (translation_attempts < 1)
      throw InputError("translation needs at least one attempt");
  }
}

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<CandidateRecord>& records) {
  std::string body;
  for (const auto& rec : records) {
    body += record_to_json(rec).dump();
    body += '\n';
  }
  write_text_file(path, body);
}

std::vector<RecordRow> load_records_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::vector<RecordRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    RecordRow row;
    CandidateRecord& rec = row.record;
    try {
      const json j = json::parse(line);
      rec.index = j.at("index").get<std::size_t>();
      rec.provenance = j.at("provenance").get<std::string>();
      if (!j.at("question").is_null())
        rec.question = j.at("question").get<std::string>();
      rec.program_text = j.at("program_text").get<std::string>();
      rec.valid = j.at("valid").get<bool>();
      rec.informative = j.at("informative").get<bool>();
      if (!j.at("eig_bits").is_null())
        rec.eig_bits = j.at("eig_bits").get<double>();
      if (!j.at("depth").is_null()) rec.depth = j.at("depth").get<int>();
      if (!j.at("size").is_null()) rec.size = j.at("size").get<int>();
      if (!j.at("word_count").is_null())
        rec.word_count = j.at("word_count").get<int>();
      rec.error = j.at("error").get<std::string>();
      if (!j.at("answer_type").is_null()) {
        row.answer_type =
            parse_answer_type(j.at("answer_type").get<std::string>());
        if (!row.answer_type) throw InputError("unknown answer type");
      }
    } catch (const json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BucketRow> load_buckets_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::vector<BucketRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    BucketRow row;
    try {
      const json j = json::parse(line);
      row.board_id = j.at("board_id").get<std::string>();
      row.k = j.at("k").get<std::size_t>();
      row.bucket = j.at("bucket").get<std::size_t>();
      row.winner = j.at("winner").get<std::size_t>();
      row.any_valid = j.at("any_valid").get<bool>();
      row.eig_bits = j.at("eig_bits").get<double>();
    } catch (const json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunResult run_experiment(const RunOptions& opts,
                         std::shared_ptr<ChatProvider> provider_override) {
  opts.validate();
  const std::string label =
      opts.label.empty() ? proposal_kind_name(opts.proposal) : opts.label;

  const fs::path out(opts.out_dir);
  fs::create_directories(out / "records");

  // Provider and prompt material (llm proposals only).
  std::shared_ptr<ChatProvider> provider = std::move(provider_override);
  std::vector<HumanExample> dataset;
  std::vector<ShotBoard> shot_pool;
  if (opts.proposal == ProposalKind::Llm) {
    if (!provider) {
      if (opts.provider == "replay") {
        provider = std::make_shared<ReplayProvider>(opts.fixtures_path);
      } else {
        provider = std::make_shared<HttpChatProvider>(opts.provider_spec);
        if (!opts.cache_dir.empty())
          provider = std::make_shared<CachingProvider>(
              provider, opts.provider_spec, opts.cache_dir);
      }
    }
    dataset = load_human_dataset(opts.dataset_path);
    const std::string pool_dir =
        opts.shot_boards_dir.empty()
            ? fs::path(opts.board_files.front()).parent_path().string()
            : opts.shot_boards_dir;
    shot_pool = load_shot_pool(opts.dataset_path, pool_dir);
  }

  RunResult result;
  result.dir = out;
  std::vector<BucketRow> bucket_rows;

  for (const std::string& board_file : opts.board_files) {
    const std::string board_id = board_id_of(board_file);
    const std::uint64_t board_seed = derive_seed(opts.seed, board_id);

    const PartialBoard board = load_board_file(board_file);
    const HypothesisSpace space = enumerate_hypotheses(board);

    std::vector<RawCandidate> raw;
    raw.reserve(opts.n);
    if (opts.proposal == ProposalKind::Grammar) {
      const Grammar grammar = default_battleship_grammar(board.config);
      SampleConfig sample_cfg;
      sample_cfg.seed = derive_seed(board_seed, "samples");
      for (ExprPtr& program : sample_batch(grammar, sample_cfg, opts.n)) {
        RawCandidate r;
        r.program = std::move(program);
        raw.push_back(std::move(r));
      }
    } else {
      try {
        Rng prompt_rng(derive_seed(board_seed, "prompt"));
        const PromptBundle bundle =
            build_generation_prompt(board, board_id, opts.mode, opts.format,
                                    shot_pool, prompt_rng);
        const std::vector<std::string> questions =
            propose_questions(*provider, bundle, static_cast<int>(opts.n));

        Rng translation_rng(derive_seed(board_seed, "translation"));
        const std::vector<QAExample> examples = sample_translation_examples(
            dataset, board_id, translation_rng, board.config);

        for (std::size_t q = 0; q < questions.size(); ++q) {
          RawCandidate r;
          r.question = questions[q];
          if (questions[q].empty()) {
            // Nothing to translate; becomes an invalid record that still
            // counts against % valid.
            r.error = "empty completion";
          } else {
            const TranslationResult tr = translate_question(
                *provider, questions[q], examples, board.config,
                opts.translation_attempts, board_id,
                static_cast<int>(q) * opts.translation_attempts);
            r.program = tr.program;
            r.program_text = tr.raw;
            if (!tr.error.empty()) r.error = tr.error;
          }
          raw.push_back(std::move(r));
        }
      } catch (const ProviderError& e) {
        result.aborted = true;
        result.abort_reason =
            "board " + board_id + ": " + e.what();
        break;
      }
    }

    const std::vector<CandidateRecord> records =
        score_candidates(raw, space, label);
    write_records_jsonl(out / "records" / (board_id + ".jsonl"), records);

    BoardRunSummary summary;
    summary.board_id = board_id;
    summary.n_records = records.size();
    for (const auto& rec : records) summary.n_valid += rec.valid ? 1 : 0;
    Rng select_rng(derive_seed(board_seed, "select"));
    const Selection sel = select_best(records, select_rng);
    if (sel.any_valid) summary.best_index = sel.index;
    result.boards.push_back(std::move(summary));

    // One shared shuffled order across every k: each k re-seeds the same
    // stream, and the shuffle is the first thing bucketize_estimate draws.
    for (std::size_t k : opts.ks) {
      Rng bucket_rng(derive_seed(board_seed, "buckets"));
      const BucketEstimate est = bucketize_estimate(records, k, bucket_rng);
      for (std::size_t b = 0; b < est.buckets.size(); ++b) {
        const BucketOutcome& outcome = est.buckets[b];
        bucket_rows.push_back(BucketRow{board_id, k, b, outcome.winner,
                                        outcome.any_valid, outcome.eig_bits});
      }
    }
  }

  // Bucket outcomes, one JSON object per line.
  std::string bucket_body;
  for (const BucketRow& row : bucket_rows) {
    json j;
    j["board_id"] = row.board_id;
    j["k"] = row.k;
    j["bucket"] = row.bucket;
    j["winner"] = row.winner;
    j["any_valid"] = row.any_valid;
    j["eig_bits"] = row.eig_bits;
    bucket_body += j.dump();
    bucket_body += '\n';
  }
  write_text_file(out / "buckets.jsonl", bucket_body);

  // Manifest last, so its presence marks a finished (or cleanly aborted) run.
  json manifest;
  manifest["schema"] = "battleship-run/1";
  manifest["command"] = opts.command_line;
  manifest["created"] =
      opts.timestamp.empty() ? utc_timestamp_now() : opts.timestamp;
  manifest["label"] = label;
  manifest["proposal"] = proposal_kind_name(opts.proposal);
  manifest["n"] = opts.n;
  manifest["ks"] = opts.ks;
  manifest["seed"] = opts.seed;
  json boards = json::array();
  for (const std::string& board_file : opts.board_files) {
    json b;
    b["id"] = board_id_of(board_file);
    b["path"] = board_file;
    b["sha256"] = sha256_file(board_file);
    b["seed"] = derive_seed(opts.seed, board_id_of(board_file));
    boards.push_back(std::move(b));
  }
  manifest["boards"] = std::move(boards);
  if (opts.proposal == ProposalKind::Llm) {
    manifest["dataset"] = {{"path", opts.dataset_path},
                           {"sha256", sha256_file(opts.dataset_path)}};
    manifest["prompt"] = {{"mode", prompt_mode_name(opts.mode)},
                          {"format", board_format_name(opts.format)},
                          {"translation_attempts", opts.translation_attempts}};
    json prov;
    prov["kind"] = opts.provider;
    prov["describe"] = provider ? provider->describe() : "";
    if (opts.provider == "replay") {
      prov["fixtures"] = {{"path", opts.fixtures_path},
                          {"sha256", sha256_file(opts.fixtures_path)}};
    } else {
      const ProviderSpec& spec = opts.provider_spec;
      prov["endpoint"] = spec.endpoint;
      prov["api_path"] = spec.api_path;
      prov["model"] = spec.model;
      prov["temperature"] = spec.temperature;
      prov["top_p"] = spec.top_p ? json(*spec.top_p) : json(nullptr);
      prov["max_tokens"] =
          spec.max_tokens ? json(*spec.max_tokens) : json(nullptr);
      prov["role_encoding"] = role_encoding_name(spec.role_encoding);
      prov["api_key_env"] = spec.api_key_env;
      prov["cache_dir"] = opts.cache_dir;
    }
    manifest["provider"] = std::move(prov);
  } else {
    manifest["dataset"] = nullptr;
    manifest["prompt"] = nullptr;
    manifest["provider"] = nullptr;
  }
  manifest["aborted"] = result.aborted;
  manifest["abort_reason"] = result.abort_reason;
  json results = json::array();
  for (const BoardRunSummary& s : result.boards) {
    json j;
    j["board_id"] = s.board_id;
    j["n_records"] = s.n_records;
    j["n_valid"] = s.n_valid;
    j["best_index"] = s.best_index ? json(*s.best_index) : json(nullptr);
    results.push_back(std::move(j));
  }
  manifest["results"] = std::move(results);
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

  return result;
}

void ReportOptions::validate() const {
  if (run_dirs.empty()) throw InputError("a report needs at least one run");
  if (out_dir.empty()) throw InputError("a report needs an output directory");
  if (!human_dataset.empty() && boards_dir.empty())
    throw InputError("scoring a human dataset needs --boards for its boards");
  if (n_boot == 0) throw InputError("bootstrap needs at least one replicate");
  if (!(level > 0.0 && level < 1.0))
    throw InputError("confidence level must lie in (0, 1)");
}

void write_report(const ReportOptions& opts) {
  opts.validate();
  const fs::path out(opts.out_dir);
  fs::create_directories(out);

  std::vector<RunData> runs;
  std::set<std::string> seen_labels;
  for (const std::string& dir : opts.run_dirs) {
    RunData run = load_run_dir(dir);
    // Reports key everything by label; disambiguate collisions.
    std::string label = run.label;
    for (int i = 2; seen_labels.count(label); ++i)
      label = run.label + "#" + std::to_string(i);
    seen_labels.insert(label);
    run.label = label;
    runs.push_back(std::move(run));
  }

  // Optional human rows, scored in memory against their boards.
  std::optional<RunData> human;
  if (!opts.human_dataset.empty()) {
    RunData data;
    data.label = "human";
    data.proposal = "human";
    std::map<std::string, std::vector<HumanExample>> by_board;
    std::vector<std::string> board_order;
    for (auto& row : load_human_dataset(opts.human_dataset)) {
      if (!by_board.count(row.board_id)) board_order.push_back(row.board_id);
      by_board[row.board_id].push_back(std::move(row));
    }
    for (const std::string& id : board_order) {
      const PartialBoard board =
          load_board_file((fs::path(opts.boards_dir) / (id + ".json")).string());
      const HypothesisSpace space = enumerate_hypotheses(board);
      std::vector<RawCandidate> raw;
      for (const HumanExample& ex : by_board[id]) {
        RawCandidate r;
        r.question = ex.question;
        r.program_text = ex.program;
        if (ex.program.empty()) {
          r.error = "no program annotation";
        } else {
          try {
            r.program = parse_program(ex.program, board.config);
          } catch (const Error& e) {
            r.error = e.what();
          }
        }
        raw.push_back(std::move(r));
      }
      for (auto& rec : score_candidates(raw, space, "human")) {
        data.types.push_back(
            (rec.valid && rec.program)
                ? std::optional<AnswerType>(top_level_type(*rec.program))
                : std::nullopt);
        data.records.push_back(std::move(rec));
      }
    }
    human = std::move(data);
  }

  const auto all_runs = [&]() {
    std::vector<const RunData*> ptrs;
    for (const RunData& run : runs) ptrs.push_back(&run);
    if (human) ptrs.push_back(&*human);
    return ptrs;
  }();

  // summary.csv: one Table-1-style row per run (k = 1 over the raw records).
  {
    std::string body =
        "label,proposal,records,eig_mean,eig_sem,eig_n,valid_mean,valid_sem,"
        "informative_mean,informative_sem,depth_mean,depth_sem,size_mean,"
        "size_sem,words_mean,words_sem,words_n\n";
    for (const RunData* run : all_runs) {
      if (run->records.empty())
        throw InputError("run '" + run->label + "' has no scored records");
      const SummaryRow row = summarize(run->records, run->label);
      body += run->label + "," + run->proposal + "," +
              std::to_string(row.n_records) + "," + metric_cells(row.eig) +
              "," + std::to_string(row.eig.n) + "," +
              metric_cells(row.valid) + "," + metric_cells(row.informative) +
              "," + metric_cells(row.depth) + "," + metric_cells(row.size) +
              "," + metric_cells(row.words) + "," +
              std::to_string(row.words.n) + "\n";
    }
    write_text_file(out / "summary.csv", body);
  }

  // curves.tsv: per-bucket maxima aggregated per k, pooled ("all") and per
  // board, with percentile-bootstrap confidence intervals.
  {
    std::string body =
        "label\tboard\tk\tn_buckets\tinvalid_buckets\tmean_eig\tci_lo\tci_hi\n";
    for (const RunData& run : runs) {
      // Group bucket values by k, then by board within k.
      std::map<std::size_t, std::map<std::string, std::vector<double>>> per_k;
      std::map<std::size_t, std::map<std::string, std::size_t>> invalid;
      std::vector<std::string> board_order;
      for (const BucketRow& row : run.buckets) {
        auto& values = per_k[row.k][row.board_id];
        if (values.empty()) {
          auto& order = board_order;
          if (std::find(order.begin(), order.end(), row.board_id) ==
              order.end())
            order.push_back(row.board_id);
        }
        values.push_back(row.eig_bits);
        invalid[row.k][row.board_id] += row.any_valid ? 0 : 1;
      }
      for (const auto& [k, boards] : per_k) {
        std::vector<double> pooled;
        std::size_t pooled_invalid = 0;
        for (const std::string& id : board_order) {
          const auto it = boards.find(id);
          if (it == boards.end()) continue;
          pooled.insert(pooled.end(), it->second.begin(), it->second.end());
          pooled_invalid += invalid[k][id];
        }
        const auto emit = [&](const std::string& board,
                              const std::vector<double>& values,
                              std::size_t n_invalid) {
          const auto [lo, hi] = bootstrap_ci(
              values, opts.level, opts.n_boot,
              derive_seed(opts.seed, run.label + "/" + board + "/" +
                                         std::to_string(k)));
          const MetricSummary m = summarize_metric(values);
          body += run.label + "\t" + board + "\t" + std::to_string(k) + "\t" +
                  std::to_string(values.size()) + "\t" +
                  std::to_string(n_invalid) + "\t" + fmt(m.mean) + "\t" +
                  fmt(lo) + "\t" + fmt(hi) + "\n";
        };
        emit("all", pooled, pooled_invalid);
        for (const std::string& id : board_order) {
          const auto it = boards.find(id);
          if (it != boards.end()) emit(id, it->second, invalid[k][id]);
        }
      }
    }
    write_text_file(out / "curves.tsv", body);
  }

  // types.csv: answer-type proportions over the valid records.
  {
    std::string body = "label,boolean,number,color,orientation,location\n";
    for (const RunData* run : all_runs) {
      std::map<AnswerType, double> counts = {{AnswerType::Boolean, 0.0},
                                             {AnswerType::Number, 0.0},
                                             {AnswerType::Color, 0.0},
                                             {AnswerType::Orientation, 0.0},
                                             {AnswerType::Location, 0.0}};
      std::size_t total = 0;
      for (std::size_t i = 0; i < run->records.size(); ++i) {
        if (!run->records[i].valid || !run->types[i]) continue;
        counts[*run->types[i]] += 1.0;
        ++total;
      }
      body += run->label;
      for (AnswerType t : {AnswerType::Boolean, AnswerType::Number,
                           AnswerType::Color, AnswerType::Orientation,
                           AnswerType::Location}) {
        body += ",";
        body += total == 0 ? std::string("--")
                           : fmt(counts[t] / static_cast<double>(total));
      }
      body += "\n";
    }
    write_text_file(out / "types.csv", body);
  }

  // welch.csv: pairwise tests on the valid-record EIG pools.
  {
    std::string body = "label_a,label_b,t,dof,p\n";
    for (std::size_t i = 0; i < all_runs.size(); ++i) {
      for (std::size_t j = i + 1; j < all_runs.size(); ++j) {
        const std::vector<double> a = valid_eig_pool(all_runs[i]->records);
        const std::vector<double> b = valid_eig_pool(all_runs[j]->records);
        body += all_runs[i]->label + "," + all_runs[j]->label + ",";
        try {
          const WelchResult res = welch_t_test(a, b);
          body += fmt(res.t) + "," + fmt(res.dof) + "," + fmt(res.p) + "\n";
        } catch (const InputError&) {
          body += "--,--,--\n";
        }
      }
    }
    write_text_file(out / "welch.csv", body);
  }

  // qq.tsv: run-vs-human EIG quantiles on a shared percentile grid.
  if (human && !valid_eig_pool(human->records).empty()) {
    const std::vector<double> human_pool = valid_eig_pool(human->records);
    std::vector<double> grid;
    for (int pct = 1; pct <= 99; ++pct) grid.push_back(pct);
    std::string body = "label\tpercentile\trun_eig\thuman_eig\n";
    for (const RunData& run : runs) {
      const std::vector<double> pool = valid_eig_pool(run.records);
      if (pool.empty()) continue;
      const QQData qq = qq_points(pool, human_pool, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        body += run.label + "\t" + fmt(grid[i]) + "\t" + fmt(qq.a[i]) + "\t" +
                fmt(qq.b[i]) + "\n";
    }
    write_text_file(out / "qq.tsv", body);
  }
}

}  // namespace battleship
