#include "eas/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "eas/backend.hpp"
#include "eas/chunker.hpp"
#include "eas/parser.hpp"
#include "eas/pipeline.hpp"
#include "eas/scorer.hpp"
#include "eas/taxonomy.hpp"

namespace eas {

namespace {

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int cmd_validate(const std::string& taxonomy_path, std::ostream& out) {
  const Taxonomy tax = load_taxonomy_file(taxonomy_path);
  const auto diagnostics = validate(tax);
  for (const auto& d : diagnostics) {
    out << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.subject
        << ": " << d.message << "\n";
  }
  return diagnostics.empty() ? 0 : 1;
}

int cmd_chunk(const std::string& input_path, std::ostream& out) {
  const std::string document = read_file_or_throw(input_path);
  for (const auto& chunk : chunk_text(document)) {
    out << chunk.index << "\t" << chunk.speaker.value_or("-") << "\t" << chunk.text << "\n";
  }
  return 0;
}

struct AnalyzeArgs {
  std::string taxonomy;
  std::string input;
  std::string out_path;
  std::string backend;
  std::string fixtures;
  std::string base_url;
  std::string model;
  std::string api_key_env{"EAS_API_KEY"};
  int max_retries{3};
  int parallelism{1};
  std::string report;
  double temperature{0.0};
  double timeout{30.0};
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  RunConfig config;
  config.taxonomy_path = args.taxonomy;
  config.input_path = args.input;
  config.output_path = args.out_path;
  if (!args.report.empty()) config.report_path = args.report;
  config.max_sentence_retries = args.max_retries;
  config.parallelism = args.parallelism;
  config.temperature = args.temperature;
  config.request_timeout = std::chrono::duration<double>(args.timeout);

  if (args.backend == "http") {
    config.backend.kind = BackendKind::Http;
    config.backend.base_url = args.base_url;
    config.backend.model = args.model;
    config.backend.api_key_env = args.api_key_env;
  } else {
    config.backend.kind = BackendKind::Fixture;
    config.backend.fixture_path = args.fixtures;
  }

  const RunReport report = analyze_document(config);
  out << "analyzed " << report.chunks.size() << " chunk(s), " << report.abandoned_count()
      << " abandoned, " << report.suppressed.size() << " suppressed, "
      << report.label_drift.size() << " label drift\n";
  return report.abandoned_count() == 0 ? 0 : 1;
}

int cmd_score(const std::string& pred_path, const std::string& gold_path,
              const std::string& format, bool three_class, std::ostream& out) {
  const auto predictions = parse_response(read_file_or_throw(pred_path));
  const auto gold = load_gold(gold_path);
  const ScoreReport report = score_run(predictions, gold);
  out << (format == "json" ? render_score_json(report, three_class)
                           : render_score_text(report, three_class));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxonomy-coded error analysis for English writing"};
  app.require_subcommand(1);

  std::string taxonomy_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a taxonomy file");
  validate_cmd->add_option("taxonomy", taxonomy_path, "taxonomy JSON file")->required();

  std::string chunk_input;
  auto* chunk_cmd = app.add_subcommand("chunk", "Split an input file into sentences");
  chunk_cmd->add_option("input", chunk_input, "plain text input file")->required();

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the analysis pipeline");
  analyze_cmd->add_option("--taxonomy", analyze_args.taxonomy)->required();
  analyze_cmd->add_option("--input", analyze_args.input)->required();
  analyze_cmd->add_option("--out", analyze_args.out_path)->required();
  analyze_cmd->add_option("--backend", analyze_args.backend, "http or fixture")
      ->required()
      ->check(CLI::IsMember({"http", "fixture"}));
  analyze_cmd->add_option("--fixtures", analyze_args.fixtures, "fixture responses file");
  analyze_cmd->add_option("--base-url", analyze_args.base_url, "chat completion endpoint");
  analyze_cmd->add_option("--model", analyze_args.model);
  analyze_cmd->add_option("--api-key-env", analyze_args.api_key_env,
                          "environment variable holding the API key");
  analyze_cmd->add_option("--max-retries", analyze_args.max_retries,
                          "re-sends per missing sentence");
  analyze_cmd->add_option("--parallelism", analyze_args.parallelism,
                          "chunks in flight at once")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--report", analyze_args.report, "run report JSON file");
  analyze_cmd->add_option("--temperature", analyze_args.temperature,
                          "sampling temperature (0.0 = deterministic)");
  analyze_cmd->add_option("--timeout", analyze_args.timeout, "request timeout in seconds");

  std::string pred_path;
  std::string gold_path;
  std::string format{"text"};
  bool three_class = false;
  auto* score_cmd = app.add_subcommand("score", "Compare predictions against gold annotations");
  score_cmd->add_option("--pred", pred_path)->required();
  score_cmd->add_option("--gold", gold_path)->required();
  score_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  score_cmd->add_flag("--three-class", three_class,
                      "fold T1 matches into outliers (three-outcome view)");

  std::vector<const char*> c_args;
  c_args.push_back("eas");
  for (const auto& arg : argv) c_args.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(c_args.size()), c_args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(taxonomy_path, out);
    if (chunk_cmd->parsed()) return cmd_chunk(chunk_input, out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_args, out);
    if (score_cmd->parsed()) return cmd_score(pred_path, gold_path, format, three_class, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace eas
