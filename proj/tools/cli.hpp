#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "discocirc/ansatz.hpp"
#include "discocirc/sandwich.hpp"
#include "discocirc/sim.hpp"

namespace discocirc::cli {

enum class Stage { parse, tree, diagram, circuit, train };
enum class Format { json, text, dot };

struct PipelineConfig {
  Stage stage = Stage::diagram;
  std::string input;
  std::string lexicon;
  std::vector<std::string> rewrites;
  std::optional<int> min_noun_frequency;
  std::vector<std::string> remove_nouns;
  bool split_coordination = true;
  SandwichMode sandwich = SandwichMode::shared;
  AnsatzConfig ansatz;
  bool merge_box = false;
  bool all_parses = false;
  Format format = Format::json;
  TrainConfig train;
  std::string params_out;
};

/// Exit codes.
enum Exit { ok = 0, other = 1, format_error = 2, no_parse = 3, cap_exceeded = 4, training_failure = 5 };

/// Runs one stage on cfg.input and returns the artifact.  Throws the module
/// errors unchanged.
std::string run_stage(const PipelineConfig& cfg);

/// Exit code for an exception thrown by run_stage.
int exit_code_for(const std::exception& e);

/// Full command line: `discocirc <stage> [flags]`.  argv[0] is skipped.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discocirc::cli
