#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "discocirc/errors.hpp"
#include "discocirc/ingest.hpp"

namespace discocirc::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Bad flag combinations; reported with exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open input");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class InputKind { document, diagram, circuit, dataset, plain };

InputKind sniff(const std::string& path, const std::string& content) {
  if (fs::path(path).extension() == ".jsonl") return InputKind::dataset;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || content[first] != '{') return InputKind::plain;
  json j;
  try {
    j = json::parse(content);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  if (j.contains("n_qubits")) return InputKind::circuit;
  if (j.contains("states") && j.contains("layers")) return InputKind::diagram;
  return InputKind::document;
}

Lexicon lexicon_of(const PipelineConfig& cfg) {
  return cfg.lexicon.empty() ? Lexicon::standard() : load_lexicon_file(cfg.lexicon);
}

Document document_of(const PipelineConfig& cfg, InputKind kind, const std::string& content) {
  if (kind == InputKind::document) {
    try {
      return parse_document(content);
    } catch (const FormatError& e) {
      throw FormatError(cfg.input + ": " + e.what());
    }
  }
  if (kind == InputKind::plain) {
    auto lex = lexicon_of(cfg);
    return parse_text(content, lex);
  }
  throw UsageError("stage needs a document or plain text input");
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::parse: return "parse";
    case Stage::tree: return "tree";
    case Stage::diagram: return "diagram";
    case Stage::circuit: return "circuit";
    case Stage::train: return "train";
  }
  return "";
}

std::string diagram_to_text(const PregroupDiagram& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.tokens.size(); ++i)
    os << "  " << i << ' ' << d.tokens[i].word << " [" << to_string(d.tokens[i].type) << "]\n";
  os << "  cups";
  for (const auto& c : d.cups) os << " (" << c.left << ' ' << c.right << ')';
  os << '\n';
  return os.str();
}

json tree_json(const PregroupTreeNode& n) {
  json j{{"word", n.word}, {"token", n.token_index}, {"type", to_string(n.out_type)}};
  if (!n.free_slots.empty()) j["free_slots"] = n.free_slots;
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(tree_json(c));
  return j;
}

std::string parse_stage(const PipelineConfig& cfg, InputKind kind, const std::string& content) {
  if (cfg.format == Format::dot) throw UsageError("dot output is not available for the parse stage");
  if (cfg.all_parses) {
    if (kind != InputKind::plain) throw UsageError("--all-parses needs plain text input");
    auto lex = lexicon_of(cfg);
    std::istringstream in(content);
    std::string line;
    json all = json::array();
    std::ostringstream text;
    int si = 0;
    while (std::getline(in, line)) {
      std::istringstream words(line);
      std::vector<std::string> tokens;
      for (std::string w; words >> w;) tokens.push_back(w);
      if (tokens.empty()) continue;
      auto parses = lexicon_parse_all(tokens, lex);
      if (parses.empty()) throw NoParse("sentence " + std::to_string(si) + ": no parse for '" + line + "'");
      json js = json::array();
      for (std::size_t p = 0; p < parses.size(); ++p) {
        Document one;
        one.sentences.push_back(parses[p]);
        js.push_back(json::parse(document_to_json(one))["sentences"][0]);
        text << "sentence " << si << " parse " << p << '\n' << diagram_to_text(parses[p]);
      }
      all.push_back(std::move(js));
      ++si;
    }
    return cfg.format == Format::json ? all.dump(2) + "\n" : text.str();
  }
  const Document doc = document_of(cfg, kind, content);
  if (cfg.format == Format::json) return document_to_json(doc) + "\n";
  std::ostringstream os;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) os << "sentence " << i << '\n' << diagram_to_text(doc.sentences[i]);
  for (std::size_t c = 0; c < doc.corefs.chains.size(); ++c) {
    os << "chain " << c;
    for (const auto& m : doc.corefs.chains[c]) os << ' ' << m.sentence << ':' << m.token;
    os << '\n';
  }
  return os.str();
}

std::string tree_stage(const PipelineConfig& cfg, const Document& doc) {
  const auto rules = resolve_rules(cfg.rewrites);
  json j = json::array();
  std::ostringstream text, dot;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    auto forest = build_trees(doc.sentences[i]).forest;
    rewrite_forest(forest, rules);
    if (cfg.format == Format::json) {
      json s = json::array();
      for (const auto& t : forest) s.push_back(tree_json(t));
      j.push_back(std::move(s));
    } else if (cfg.format == Format::text) {
      if (doc.sentences.size() > 1) text << "sentence " << i << '\n';
      text << forest_to_text(forest);
    } else {
      dot << forest_to_dot(forest, "sentence" + std::to_string(i));
    }
  }
  if (cfg.format == Format::json) return j.dump(2) + "\n";
  return cfg.format == Format::text ? text.str() : dot.str();
}

TextOptions text_options(const PipelineConfig& cfg, const Lexicon* lex) {
  TextOptions o;
  o.rules = resolve_rules(cfg.rewrites);
  o.min_noun_frequency = cfg.min_noun_frequency;
  o.remove_words = cfg.remove_nouns;
  o.split_coordination = cfg.split_coordination;
  o.lexicon = lex;
  return o;
}

TextDiagram composed(const PipelineConfig& cfg, InputKind kind, const std::string& content) {
  if (kind == InputKind::diagram) return text_from_json(content);
  const Document doc = document_of(cfg, kind, content);
  std::optional<Lexicon> lex;
  if (!cfg.lexicon.empty()) lex = load_lexicon_file(cfg.lexicon);
  return text_diagram(doc, text_options(cfg, lex ? &*lex : nullptr)).diagram;
}

std::string emit_diagram(const TextDiagram& t, Format f) {
  switch (f) {
    case Format::json: return text_to_json(t) + "\n";
    case Format::text: return text_to_text(t);
    case Format::dot: return text_to_dot(t);
  }
  return "";
}

std::string circuit_stage(const PipelineConfig& cfg, InputKind kind, const std::string& content) {
  if (cfg.format == Format::dot) throw UsageError("dot output is not available for circuits");
  Circuit c;
  if (kind == InputKind::circuit) {
    c = circuit_from_json(content);
  } else {
    auto t = expand_frames(composed(cfg, kind, content), {cfg.sandwich});
    if (cfg.merge_box) t = append_merge_box(t);
    c = compile(t, cfg.ansatz);
  }
  return cfg.format == Format::json ? circuit_to_json(c) + "\n" : circuit_to_text(c);
}

std::string train_stage(const PipelineConfig& cfg, InputKind kind) {
  if (kind != InputKind::dataset) throw UsageError("train needs a .jsonl dataset");
  auto data = load_dataset(cfg.input);
  TrainResult res;
  try {
    res = train(data, cfg.train);
  } catch (const ZeroNorm& e) {
    throw TrainingError(std::string("simulation failed: ") + e.what());
  }
  json params = json::object();
  for (const auto& [s, v] : res.params) params[s] = v;
  if (!cfg.params_out.empty()) {
    std::ofstream out(cfg.params_out);
    if (!out) throw UsageError("cannot write " + cfg.params_out);
    out << params.dump(2) << '\n';
  }
  if (cfg.format != Format::json) return history_csv(res.history);
  json j;
  j["history"] = json::array();
  for (const auto& e : res.history)
    j["history"].push_back(
        {{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"train_acc", e.train_acc}, {"test_acc", e.test_acc}});
  j["params"] = params;
  return j.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty()) {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << data;
}

std::string extension(Stage s, Format f) {
  if (s == Stage::train && f != Format::json) return ".csv";
  switch (f) {
    case Format::json: return ".json";
    case Format::text: return ".txt";
    case Format::dot: return ".dot";
  }
  return "";
}

void report(const std::exception& e, const std::string& where, std::ostream& err) {
  if (const auto* de = dynamic_cast<const Error*>(&e))
    err << de->kind() << ": " << where << ": " << de->what() << '\n';
  else if (dynamic_cast<const UsageError*>(&e))
    err << "usage: " << e.what() << '\n';
  else
    err << "error: " << where << ": " << e.what() << '\n';
}

int run_batch(const PipelineConfig& cfg, const std::string& dir, const std::string& out_dir, int jobs,
              std::ostream& err) {
  if (out_dir.empty()) throw UsageError("--batch needs --out DIR");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && (e.path().extension() == ".json" || e.path().extension() == ".txt"))
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  fs::create_directories(out_dir);

  std::vector<int> codes(files.size(), Exit::ok);
  std::vector<std::string> logs(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      PipelineConfig one = cfg;
      one.input = files[i].string();
      std::ostringstream log;
      try {
        const auto data = run_stage(one);
        const auto target = fs::path(out_dir) / (files[i].stem().string() + "." + stage_name(cfg.stage) +
                                                 extension(cfg.stage, cfg.format));
        std::ofstream(target, std::ios::binary) << data;
        log << "ok " << files[i].filename().string() << " -> " << target.filename().string() << '\n';
      } catch (const std::exception& e) {
        report(e, files[i].filename().string(), log);
        codes[i] = exit_code_for(e);
      }
      logs[i] = log.str();
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
  std::vector<std::thread> pool;
  for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = Exit::ok;
  for (std::size_t i = 0; i < files.size(); ++i) {
    err << logs[i];
    if (code == Exit::ok) code = codes[i];
  }
  return code;
}

}  // namespace

std::string run_stage(const PipelineConfig& cfg) {
  const std::string content = cfg.stage == Stage::train ? std::string() : read_file(cfg.input);
  const InputKind kind = cfg.stage == Stage::train ? sniff(cfg.input, "") : sniff(cfg.input, content);
  switch (cfg.stage) {
    case Stage::parse:
      return parse_stage(cfg, kind, content);
    case Stage::tree:
      return tree_stage(cfg, document_of(cfg, kind, content));
    case Stage::diagram:
      return emit_diagram(composed(cfg, kind, content), cfg.format);
    case Stage::circuit:
      return circuit_stage(cfg, kind, content);
    case Stage::train:
      return train_stage(cfg, kind);
  }
  return "";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e)) return Exit::format_error;
  if (dynamic_cast<const NoParse*>(&e)) return Exit::no_parse;
  if (dynamic_cast<const CapExceeded*>(&e)) return Exit::cap_exceeded;
  if (dynamic_cast<const TrainingError*>(&e)) return Exit::training_failure;
  return Exit::other;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compiles pregroup-parsed text into parameterised quantum circuits."};
  app.name("discocirc");
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string format, ansatz = "sim4", gradient = "parameter_shift", out_path, batch;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool no_split = false, foliated = false, no_share = false;
  int min_freq = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "Input file (document JSON, plain text, diagram JSON, circuit JSON)");
    sub->add_option("--lexicon", cfg.lexicon, "Lexicon JSON for plain text input")->check(CLI::ExistingFile);
    sub->add_option("--rewrites", cfg.rewrites, "Rewrite rules: builtin names or rule files")->delimiter(',');
    sub->add_option("--min-noun-frequency", min_freq, "Drop noun chains with fewer mentions")
        ->check(CLI::PositiveNumber);
    sub->add_option("--remove-nouns", cfg.remove_nouns, "Nouns to drop")->delimiter(',');
    sub->add_flag("--no-coordination", no_split, "Keep conjunctions unsplit");
    sub->add_flag("--foliated", foliated, "Foliated sandwich expansion");
    sub->add_option("--ansatz", ansatz, "iqp or sim4")->check(CLI::IsMember({"iqp", "sim4"}));
    sub->add_option("--qubits-per-wire", cfg.ansatz.qubits_per_wire)->check(CLI::PositiveNumber);
    sub->add_option("--layers", cfg.ansatz.layers)->check(CLI::PositiveNumber);
    sub->add_flag("--no-share", no_share, "Separate parameters for every box occurrence");
    sub->add_option("--seed", cfg.ansatz.seed, "Seed for initial values, splits and shuffles");
    sub->add_option("--qubit-cap", cfg.ansatz.qubit_cap, "0 disables the cap");
    sub->add_flag("--merge-box", cfg.merge_box, "Append a merge box reducing the output to one wire");
    sub->add_option("--format", format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
    sub->add_option("-o,--out", out_path, "Output file (directory with --batch)");
    sub->add_option("--batch", batch, "Process every .json/.txt file of a directory")->check(CLI::ExistingDirectory);
    sub->add_option("-j,--jobs", jobs, "Workers for --batch")->check(CLI::PositiveNumber);
  };

  const std::vector<std::pair<Stage, std::string>> stages{{Stage::parse, "Parse or validate the input"},
                                                          {Stage::tree, "Pregroup trees, after rewrites"},
                                                          {Stage::diagram, "Composed text diagram"},
                                                          {Stage::circuit, "Parameterised circuit"},
                                                          {Stage::train, "Train on a circuit dataset"}};
  std::vector<std::pair<Stage, CLI::App*>> subs;
  for (const auto& [stage, help] : stages) {
    auto* sub = app.add_subcommand(stage_name(stage), help);
    common(sub);
    subs.emplace_back(stage, sub);
    if (stage == Stage::parse) sub->add_flag("--all-parses", cfg.all_parses, "Every parse of each sentence");
    if (stage == Stage::train) {
      sub->add_option("--epochs", cfg.train.epochs)->check(CLI::PositiveNumber);
      sub->add_option("--batch-size", cfg.train.batch_size)->check(CLI::PositiveNumber);
      sub->add_option("--learning-rate", cfg.train.learning_rate);
      sub->add_option("--gradient", gradient)->check(CLI::IsMember({"parameter_shift", "finite_diff"}));
      sub->add_option("--threads", cfg.train.threads);
      sub->add_option("--params-out", cfg.params_out, "Write trained parameters as JSON");
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int rc = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return rc == 0 ? Exit::ok : Exit::other;
  }

  for (const auto& [stage, sub] : subs)
    if (sub->parsed()) cfg.stage = stage;
  if (format.empty())
    cfg.format = cfg.stage == Stage::train ? Format::text : Format::json;
  else
    cfg.format = format == "json" ? Format::json : format == "text" ? Format::text : Format::dot;
  if (min_freq > 0) cfg.min_noun_frequency = min_freq;
  cfg.split_coordination = !no_split;
  cfg.sandwich = foliated ? SandwichMode::foliated : SandwichMode::shared;
  cfg.ansatz.kind = parse_ansatz(ansatz);
  cfg.ansatz.share_parameters = !no_share;
  cfg.train.seed = cfg.ansatz.seed;
  cfg.train.gradient = gradient == "finite_diff" ? GradientMethod::finite_diff : GradientMethod::parameter_shift;

  try {
    if (!batch.empty()) return run_batch(cfg, batch, out_path, jobs, err);
    if (cfg.input.empty()) throw UsageError("--input is required");
    write_output(out_path, run_stage(cfg), out);
  } catch (const std::exception& e) {
    report(e, cfg.input, err);
    return exit_code_for(e);
  }
  return Exit::ok;
}

}  // namespace discocirc::cli
