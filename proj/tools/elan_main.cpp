// Command-line front end: sentiment scoring, trajectory analysis and charts,
// provider-backed conversation generation, expert questionnaires, and the
// discordance report contrasting the two evaluation tracks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elan/chart.hpp"
#include "elan/corpus.hpp"
#include "elan/errors.hpp"
#include "elan/harness.hpp"
#include "elan/lexicon.hpp"
#include "elan/manifest.hpp"
#include "elan/prompt.hpp"
#include "elan/provider.hpp"
#include "elan/questionnaire.hpp"
#include "elan/sentiment.hpp"
#include "elan/trajectory.hpp"
#include "elan/version.hpp"

namespace {

struct GlobalOptions {
  std::string lexicon_path;
  std::string out_dir = ".";
  double trend_threshold = elan::kDefaultTrendThreshold;
  double convergence_threshold = elan::kDefaultConvergenceThreshold;
};

struct ScoreOptions {
  std::vector<std::string> words;
  std::string input_path;
};

struct AnalyzeOptions {
  std::string corpus_path;
  int smooth_window = 0;
  int x_start = 0;
  std::string extent_color = "#1f77b4";
  std::string mean_color = "#d62728";
};

struct GenerateOptions {
  std::string seed_path;  // extend only
  int count = 1;          // control only
  std::string provider = "chatgpt";
  std::string providers_file;
  std::string template_path;
  std::string replay_path;
  std::string record_path;
  bool live = false;
  int target_turns = elan::kMaxTurns;
  std::string mode = "oneshot";
};

struct QuestionnaireOptions {
  std::string store_path;
  std::string dataset_id;
  std::string rater = "expert";
  int friendly = 0;
  int nice = 0;
  int sensible = 0;
  int empathetic = 0;
  std::string free_text;
  bool export_responses = false;
  std::string import_path;
};

struct DiscordanceOptions {
  std::string responses_path;
  std::vector<std::string> dataset_specs;  // <id>=<corpus path>
  int max_rating = 2;
  std::string required_trend = "growing";
};

std::string default_lexicon_path() {
  const char* env = std::getenv("ELAN_LEXICON");
  if (env != nullptr && *env != '\0') return env;
  return "data/vader_lexicon.txt";
}

std::string read_text_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw elan::MissingFileError(path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::istringstream stream(content);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
}

std::string format_real(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

const char* bool_word(bool value) { return value ? "true" : "false"; }

elan::TrendLabel trend_from_string(const std::string& name) {
  if (name == "growing") return elan::TrendLabel::kGrowing;
  if (name == "steady") return elan::TrendLabel::kSteady;
  if (name == "declining") return elan::TrendLabel::kDeclining;
  throw elan::UsageError("unknown trend label: " + name);
}

elan::GenerationMode mode_from_string(const std::string& name) {
  if (name == "oneshot") return elan::GenerationMode::kOneShot;
  if (name == "turns") return elan::GenerationMode::kTurnByTurn;
  throw elan::UsageError("unknown generation mode: " + name);
}

// ---- score ----

void run_score(const GlobalOptions& global, const ScoreOptions& opts) {
  const elan::Lexicon lexicon = elan::Lexicon::load(global.lexicon_path);

  std::vector<std::string> texts;
  if (!opts.words.empty()) {
    std::string joined;
    for (const std::string& word : opts.words) {
      if (!joined.empty()) joined += ' ';
      joined += word;
    }
    texts.push_back(std::move(joined));
  }
  if (!opts.input_path.empty()) {
    for (std::string& line : split_lines(read_text_file(opts.input_path))) {
      if (!line.empty()) texts.push_back(std::move(line));
    }
  }
  if (opts.words.empty() && opts.input_path.empty()) {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    for (std::string& line : split_lines(buffer.str())) {
      if (!line.empty()) texts.push_back(std::move(line));
    }
  }
  if (texts.empty()) throw elan::UsageError("no text to score");

  for (const std::string& text : texts) {
    if (elan::mostly_non_ascii(text)) {
      std::cerr << "warning: input is mostly non-ASCII; lexicon coverage "
                   "will be poor\n";
    }
    const elan::SentimentScores scores = elan::polarity_scores(text, lexicon);
    const nlohmann::json row = {{"compound", scores.compound},
                                {"negative", scores.negative},
                                {"neutral", scores.neutral},
                                {"positive", scores.positive},
                                {"text", text}};
    std::cout << row.dump() << "\n";
  }
}

// ---- analyze ----

std::string smoothed_csv(const elan::TrajectorySummary& speaker,
                         const std::vector<double>& speaker_smoothed,
                         const elan::TrajectorySummary& listener,
                         const std::vector<double>& listener_smoothed) {
  std::string csv = "role,index,smoothed_mean\n";
  const auto append_rows = [&csv](const elan::TrajectorySummary& summary,
                                  const std::vector<double>& smoothed) {
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
      csv += to_string(summary.role);
      csv += ',';
      csv += std::to_string(i);
      csv += ',';
      csv += format_real(smoothed[i]);
      csv += '\n';
    }
  };
  append_rows(speaker, speaker_smoothed);
  append_rows(listener, listener_smoothed);
  return csv;
}

void run_analyze(const GlobalOptions& global, const AnalyzeOptions& opts) {
  const elan::Lexicon lexicon = elan::Lexicon::load(global.lexicon_path);
  std::vector<std::string> warnings;
  const elan::CorpusSet corpus = elan::load_corpus(opts.corpus_path, &warnings);
  print_warnings(warnings);

  const std::vector<elan::ConversationEnergies> energies =
      elan::score_corpus(corpus, lexicon);
  std::vector<elan::EnergySeries> speaker_series;
  std::vector<elan::EnergySeries> listener_series;
  speaker_series.reserve(energies.size());
  listener_series.reserve(energies.size());
  for (const elan::ConversationEnergies& conversation : energies) {
    speaker_series.push_back(conversation.speaker);
    listener_series.push_back(conversation.listener);
  }

  const elan::TrajectorySummary speaker =
      elan::aggregate(speaker_series, global.trend_threshold);
  const elan::TrajectorySummary listener =
      elan::aggregate(listener_series, global.trend_threshold);
  const elan::HypothesisReport hypothesis = elan::hypothesis_check(
      speaker, listener, {global.convergence_threshold});

  std::optional<std::vector<double>> speaker_smoothed;
  std::optional<std::vector<double>> listener_smoothed;
  if (opts.smooth_window > 0) {
    speaker_smoothed =
        elan::moving_average(speaker.per_index_mean, opts.smooth_window);
    listener_smoothed =
        elan::moving_average(listener.per_index_mean, opts.smooth_window);
  }

  elan::RunManifest manifest;
  manifest.tool_version = std::string(elan::kVersion);
  manifest.command = "analyze";
  manifest.add_input(opts.corpus_path);
  manifest.add_input(global.lexicon_path);
  manifest.thresholds["trend"] = global.trend_threshold;
  manifest.thresholds["convergence"] = global.convergence_threshold;
  manifest.settings["smooth_window"] = std::to_string(opts.smooth_window);
  manifest.settings["x_start"] = std::to_string(opts.x_start);
  const std::string digest = manifest.digest();

  const nlohmann::json hypothesis_json = {
      {"starts_negative", hypothesis.starts_negative},
      {"first_speaker_mean", hypothesis.first_speaker_mean},
      {"equalization_gap", hypothesis.equalization_gap},
      {"ends_positive", hypothesis.ends_positive},
      {"convergence_gap", hypothesis.convergence_gap},
      {"converged", hypothesis.converged},
      {"speaker",
       {{"trend", std::string(to_string(speaker.trend))},
        {"slope", speaker.slope}}},
      {"listener",
       {{"trend", std::string(to_string(listener.trend))},
        {"slope", listener.slope}}},
      {"manifest_digest", digest},
  };

  elan::ChartStyle style;
  style.extent_color = opts.extent_color;
  style.mean_color = opts.mean_color;

  elan::OutputStage stage;
  stage.add("trajectory.csv", elan::summary_csv(speaker, listener));
  if (opts.smooth_window > 0) {
    stage.add("trajectory_smoothed.csv",
              smoothed_csv(speaker, *speaker_smoothed, listener,
                           *listener_smoothed));
  }
  stage.add("hypothesis.json", hypothesis_json.dump(2) + "\n");
  stage.add("speaker.svg",
            elan::trajectory_chart_svg(speaker, "Speaker energy trajectory",
                                       style, opts.x_start, speaker_smoothed,
                                       digest));
  stage.add("listener.svg",
            elan::trajectory_chart_svg(listener, "Listener energy trajectory",
                                       style, opts.x_start, listener_smoothed,
                                       digest));
  stage.add("manifest.json", manifest.to_json());
  const std::vector<std::filesystem::path> written =
      stage.commit(global.out_dir);

  std::cout << "speaker: trend=" << to_string(speaker.trend)
            << " slope=" << format_real(speaker.slope) << "\n";
  std::cout << "listener: trend=" << to_string(listener.trend)
            << " slope=" << format_real(listener.slope) << "\n";
  std::cout << "hypothesis: starts_negative="
            << bool_word(hypothesis.starts_negative)
            << " ends_positive=" << bool_word(hypothesis.ends_positive)
            << " converged=" << bool_word(hypothesis.converged) << "\n";
  for (const std::filesystem::path& path : written) {
    std::cout << "wrote " << path.string() << "\n";
  }
}

// ---- extend / control ----

// Owns the replay/record logs and the HTTP transport for one harness run so
// the HarnessOptions pointers stay valid for its duration.
struct HarnessSetup {
  std::optional<elan::ExchangeLog> replay;
  std::optional<elan::ExchangeLog> record;
  elan::HttpCompletionTransport http;
  elan::HarnessOptions options;
};

void configure_harness(const GenerateOptions& opts, HarnessSetup& setup) {
  if (opts.replay_path.empty() && !opts.live) {
    throw elan::UsageError(
        "provider exchanges need --replay <log> and/or --live");
  }
  setup.options.target_turns = opts.target_turns;
  setup.options.mode = mode_from_string(opts.mode);
  if (!opts.replay_path.empty()) {
    setup.replay = elan::ExchangeLog::open_replay(opts.replay_path);
    setup.options.replay = &*setup.replay;
  }
  if (!opts.record_path.empty()) {
    setup.record = elan::ExchangeLog::open_record(opts.record_path);
    setup.options.record = &*setup.record;
  }
  if (opts.live) setup.options.transport = &setup.http;
}

elan::ProviderConfig resolve_provider_for(const GenerateOptions& opts) {
  std::optional<std::filesystem::path> providers_file;
  if (!opts.providers_file.empty()) providers_file = opts.providers_file;
  return elan::resolve_provider(opts.provider, providers_file);
}

elan::RunManifest harness_manifest(const GenerateOptions& opts,
                                   const elan::ProviderConfig& provider,
                                   const std::string& command) {
  elan::RunManifest manifest;
  manifest.tool_version = std::string(elan::kVersion);
  manifest.command = command;
  manifest.add_input(opts.template_path);
  if (!opts.replay_path.empty()) manifest.add_input(opts.replay_path);
  if (!opts.providers_file.empty()) manifest.add_input(opts.providers_file);
  manifest.settings["provider"] = provider.name;
  manifest.settings["model"] = provider.model;
  manifest.settings["mode"] = opts.mode;
  manifest.settings["target_turns"] = std::to_string(opts.target_turns);
  manifest.settings["live"] = opts.live ? "true" : "false";
  return manifest;
}

void run_extend(const GlobalOptions& global, const GenerateOptions& opts) {
  std::vector<std::string> warnings;
  const elan::CorpusSet seeds = elan::load_corpus(opts.seed_path, &warnings);
  print_warnings(warnings);
  const elan::PromptTemplate prompt_template =
      elan::PromptTemplate::load(opts.template_path);
  const elan::ProviderConfig provider = resolve_provider_for(opts);
  HarnessSetup setup;
  configure_harness(opts, setup);

  elan::CorpusSet extended;
  extended.kind = elan::DatasetKind::extended(provider.name);
  extended.conversations.reserve(seeds.conversations.size());
  for (const elan::Conversation& seed : seeds.conversations) {
    extended.conversations.push_back(elan::extend_conversation(
        seed, provider, prompt_template, setup.options));
  }

  elan::RunManifest manifest = harness_manifest(opts, provider, "extend");
  manifest.add_input(opts.seed_path);

  elan::OutputStage stage;
  stage.add("extended_" + provider.name + ".jsonl",
            elan::corpus_to_jsonl(extended));
  stage.add("manifest.json", manifest.to_json());
  const std::vector<std::filesystem::path> written =
      stage.commit(global.out_dir);

  for (const elan::Conversation& conversation : extended.conversations) {
    std::cout << "extended " << conversation.id << " to "
              << conversation.turns.size() << " turns\n";
  }
  for (const std::filesystem::path& path : written) {
    std::cout << "wrote " << path.string() << "\n";
  }
}

void run_control(const GlobalOptions& global, const GenerateOptions& opts) {
  const elan::PromptTemplate prompt_template =
      elan::PromptTemplate::load(opts.template_path);
  const elan::ProviderConfig provider = resolve_provider_for(opts);
  HarnessSetup setup;
  configure_harness(opts, setup);

  const elan::CorpusSet corpus = elan::generate_control(
      provider, prompt_template, opts.count, setup.options);

  elan::RunManifest manifest = harness_manifest(opts, provider, "control");
  manifest.settings["count"] = std::to_string(opts.count);

  elan::OutputStage stage;
  stage.add("control_" + provider.name + ".jsonl",
            elan::corpus_to_jsonl(corpus));
  stage.add("manifest.json", manifest.to_json());
  const std::vector<std::filesystem::path> written =
      stage.commit(global.out_dir);

  std::cout << "generated " << corpus.conversations.size()
            << " control conversation(s)\n";
  for (const std::filesystem::path& path : written) {
    std::cout << "wrote " << path.string() << "\n";
  }
}

// ---- questionnaire ----

int prompt_scale(const elan::QuestionSpec& question) {
  std::cout << question.question << "\n";
  for (;;) {
    std::cout << "  " << question.field << " [1 = " << question.low_anchor
              << " ... 5 = " << question.high_anchor << "]: " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      throw elan::UsageError("input ended before the form was complete");
    }
    try {
      std::size_t consumed = 0;
      const int value = std::stoi(line, &consumed);
      while (consumed < line.size() &&
             (line[consumed] == ' ' || line[consumed] == '\t')) {
        ++consumed;
      }
      if (consumed == line.size() && value >= 1 && value <= 5) return value;
    } catch (const std::exception&) {
    }
    std::cout << "  please answer with a whole number from 1 to 5\n";
  }
}

int* rating_slot(elan::QuestionnaireResponse& response,
                 std::string_view field) {
  if (field == "friendly") return &response.friendly;
  if (field == "nice") return &response.nice;
  if (field == "sensible") return &response.sensible;
  return &response.empathetic_listening;
}

void run_questionnaire(const QuestionnaireOptions& opts) {
  if (opts.export_responses && !opts.import_path.empty()) {
    throw elan::UsageError("--export and --import are mutually exclusive");
  }

  if (opts.export_responses) {
    if (!std::filesystem::exists(opts.store_path)) {
      throw elan::MissingFileError(opts.store_path);
    }
    const elan::ResponseStore store(opts.store_path);
    std::cout << elan::responses_to_jsonl(store.all());
    return;
  }

  elan::ResponseStore store(opts.store_path);
  if (!opts.import_path.empty()) {
    const std::vector<elan::QuestionnaireResponse> responses =
        elan::responses_from_jsonl(read_text_file(opts.import_path),
                                   opts.import_path);
    std::vector<std::string> warnings;
    for (const elan::QuestionnaireResponse& response : responses) {
      store.record(response, &warnings);
    }
    print_warnings(warnings);
    std::cout << "imported " << responses.size() << " response(s) into "
              << opts.store_path << "\n";
    return;
  }

  if (opts.dataset_id.empty()) {
    throw elan::UsageError("--dataset is required to record a response");
  }
  elan::QuestionnaireResponse response;
  response.dataset_id = opts.dataset_id;
  response.rater = opts.rater;
  response.free_text = opts.free_text;

  const int given = (opts.friendly != 0) + (opts.nice != 0) +
                    (opts.sensible != 0) + (opts.empathetic != 0);
  if (given == 4) {
    response.friendly = opts.friendly;
    response.nice = opts.nice;
    response.sensible = opts.sensible;
    response.empathetic_listening = opts.empathetic;
  } else if (given != 0) {
    throw elan::UsageError(
        "provide all four ratings as flags, or none for the interactive "
        "form");
  } else {
    for (const elan::QuestionSpec& question : elan::questionnaire_questions()) {
      *rating_slot(response, question.field) = prompt_scale(question);
    }
    std::cout << "Anything else you noticed? (optional, Enter to skip): "
              << std::flush;
    std::string line;
    if (std::getline(std::cin, line) && !line.empty()) {
      response.free_text = line;
    }
  }

  std::vector<std::string> warnings;
  const std::string key = store.record(response, &warnings);
  print_warnings(warnings);
  std::cout << "recorded " << key << " in " << opts.store_path << "\n";
}

// ---- discordance ----

void run_discordance(const GlobalOptions& global,
                     const DiscordanceOptions& opts) {
  if (!std::filesystem::exists(opts.responses_path)) {
    throw elan::MissingFileError(opts.responses_path);
  }
  const elan::ResponseStore store(opts.responses_path);
  const std::vector<elan::QuestionnaireResponse> responses = store.all();

  const elan::Lexicon lexicon = elan::Lexicon::load(global.lexicon_path);
  std::map<std::string, elan::TrajectorySummary> listener_summaries;
  std::vector<std::string> corpus_paths;
  for (const std::string& spec : opts.dataset_specs) {
    const std::size_t separator = spec.find('=');
    if (separator == std::string::npos || separator == 0 ||
        separator + 1 >= spec.size()) {
      throw elan::UsageError("--dataset expects <id>=<corpus path>, got: " +
                             spec);
    }
    const std::string dataset_id = spec.substr(0, separator);
    const std::string corpus_path = spec.substr(separator + 1);
    std::vector<std::string> warnings;
    const elan::CorpusSet corpus = elan::load_corpus(corpus_path, &warnings);
    print_warnings(warnings);
    const std::vector<elan::ConversationEnergies> energies =
        elan::score_corpus(corpus, lexicon);
    std::vector<elan::EnergySeries> listener_series;
    listener_series.reserve(energies.size());
    for (const elan::ConversationEnergies& conversation : energies) {
      listener_series.push_back(conversation.listener);
    }
    listener_summaries[dataset_id] =
        elan::aggregate(listener_series, global.trend_threshold);
    corpus_paths.push_back(corpus_path);
  }

  elan::DiscordanceConfig config;
  config.required_trend = trend_from_string(opts.required_trend);
  config.max_rating = opts.max_rating;
  const std::vector<elan::DiscordanceEntry> entries =
      elan::discordance_report(responses, listener_summaries, config);
  const std::string csv = elan::discordance_csv(entries);

  elan::RunManifest manifest;
  manifest.tool_version = std::string(elan::kVersion);
  manifest.command = "discordance";
  manifest.add_input(opts.responses_path);
  manifest.add_input(global.lexicon_path);
  for (const std::string& corpus_path : corpus_paths) {
    manifest.add_input(corpus_path);
  }
  manifest.thresholds["trend"] = global.trend_threshold;
  manifest.thresholds["max_rating"] = static_cast<double>(opts.max_rating);
  manifest.settings["required_trend"] = opts.required_trend;

  elan::OutputStage stage;
  stage.add("discordance.csv", csv);
  stage.add("manifest.json", manifest.to_json());
  const std::vector<std::filesystem::path> written =
      stage.commit(global.out_dir);

  std::cout << csv;
  for (const std::filesystem::path& path : written) {
    std::cout << "wrote " << path.string() << "\n";
  }
}

void add_harness_options(CLI::App* command, GenerateOptions& opts) {
  command->add_option("--provider", opts.provider,
                      "provider name (chatgpt, gemini, or one defined in "
                      "--providers)")
      ->capture_default_str();
  command->add_option("--providers", opts.providers_file,
                      "JSON array of provider configs overriding built-ins");
  command->add_option("--template", opts.template_path,
                      "prompt template file")
      ->capture_default_str();
  command->add_option("--replay", opts.replay_path,
                      "exchange log to resolve responses from");
  command->add_flag("--live", opts.live, "allow live provider calls");
  command->add_option("--record", opts.record_path,
                      "exchange log to append live responses to");
  command->add_option("--target-turns", opts.target_turns,
                      "turn count to generate up to")
      ->capture_default_str();
  command->add_option("--mode", opts.mode,
                      "completion mode: one request per conversation or per "
                      "turn")
      ->check(CLI::IsMember({"oneshot", "turns"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dialogue energy toolkit: lexicon sentiment scoring, trajectory "
      "aggregation, provider-backed conversation generation, and expert "
      "evaluation forms"};
  app.set_version_flag("--version", std::string(elan::kVersion));
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions global;
  global.lexicon_path = default_lexicon_path();
  app.add_option("--lexicon", global.lexicon_path, "sentiment lexicon file")
      ->capture_default_str();
  app.add_option("--out", global.out_dir, "directory for output files")
      ->capture_default_str();
  app.add_option("--threshold-trend", global.trend_threshold,
                 "slope magnitude below which a trend counts as steady")
      ->capture_default_str();
  app.add_option("--threshold-converge", global.convergence_threshold,
                 "final role gap below which energies count as converged")
      ->capture_default_str();

  ScoreOptions score_opts;
  CLI::App* score = app.add_subcommand(
      "score", "score text: valence proportions and compound energy");
  score->add_option("text", score_opts.words,
                    "text to score (multiple words are joined)");
  score->add_option("--input", score_opts.input_path,
                    "file with one utterance per line");
  score->callback([&] { run_score(global, score_opts); });

  AnalyzeOptions analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze",
      "aggregate a corpus into trajectory CSV, charts, and a hypothesis "
      "report");
  analyze->add_option("corpus", analyze_opts.corpus_path,
                      "line-delimited conversation corpus")
      ->required();
  analyze->add_option("--smooth", analyze_opts.smooth_window,
                      "odd moving-average window for a smoothed overlay "
                      "(0 = off)")
      ->capture_default_str();
  analyze->add_option("--x-start", analyze_opts.x_start,
                      "axis label for the first turn index")
      ->capture_default_str();
  analyze->add_option("--extent-color", analyze_opts.extent_color,
                      "chart color for the min and max series")
      ->capture_default_str();
  analyze->add_option("--mean-color", analyze_opts.mean_color,
                      "chart color for the mean series")
      ->capture_default_str();
  analyze->callback([&] { run_analyze(global, analyze_opts); });

  GenerateOptions extend_opts;
  extend_opts.template_path = "data/templates/empathetic_listener.txt";
  CLI::App* extend = app.add_subcommand(
      "extend",
      "continue 5-turn expert conversations to 12 turns via a provider");
  extend->add_option("seed", extend_opts.seed_path, "expert corpus to extend")
      ->required();
  add_harness_options(extend, extend_opts);
  extend->callback([&] { run_extend(global, extend_opts); });

  GenerateOptions control_opts;
  control_opts.template_path = "data/templates/casual_control.txt";
  CLI::App* control = app.add_subcommand(
      "control",
      "generate control conversations with no empathy instruction");
  control->add_option("--count", control_opts.count,
                      "number of conversations to generate")
      ->capture_default_str();
  add_harness_options(control, control_opts);
  control->callback([&] { run_control(global, control_opts); });

  QuestionnaireOptions questionnaire_opts;
  CLI::App* questionnaire = app.add_subcommand(
      "questionnaire", "record or transfer expert evaluation forms");
  questionnaire
      ->add_option("--store", questionnaire_opts.store_path,
                   "response store file")
      ->required();
  questionnaire->add_option("--dataset", questionnaire_opts.dataset_id,
                            "dataset the form evaluates");
  questionnaire->add_option("--rater", questionnaire_opts.rater,
                            "rater identifier")
      ->capture_default_str();
  questionnaire->add_option("--friendly", questionnaire_opts.friendly,
                            "Unfriendly(1) to Friendly(5)");
  questionnaire->add_option("--nice", questionnaire_opts.nice,
                            "Awful(1) to Nice(5)");
  questionnaire->add_option("--sensible", questionnaire_opts.sensible,
                            "Foolish(1) to Sensible(5)");
  questionnaire->add_option("--empathetic", questionnaire_opts.empathetic,
                            "Very unsatisfied(1) to Very satisfied(5)");
  questionnaire->add_option("--free-text", questionnaire_opts.free_text,
                            "free-form comment");
  questionnaire->add_flag("--export", questionnaire_opts.export_responses,
                          "print stored responses as JSON lines");
  questionnaire->add_option("--import", questionnaire_opts.import_path,
                            "merge responses from a JSON-lines file");
  questionnaire->callback([&] { run_questionnaire(questionnaire_opts); });

  DiscordanceOptions discordance_opts;
  CLI::App* discordance = app.add_subcommand(
      "discordance",
      "contrast expert empathy ratings with automated listener trends");
  discordance
      ->add_option("--responses", discordance_opts.responses_path,
                   "questionnaire response store")
      ->required();
  discordance
      ->add_option("--dataset", discordance_opts.dataset_specs,
                   "dataset mapping <id>=<corpus path> (repeatable)")
      ->required();
  discordance
      ->add_option("--max-rating", discordance_opts.max_rating,
                   "empathy ratings at or below this count as low")
      ->capture_default_str();
  discordance
      ->add_option("--required-trend", discordance_opts.required_trend,
                   "listener trend that triggers discordance")
      ->check(CLI::IsMember({"growing", "steady", "declining"}))
      ->capture_default_str();
  discordance->callback([&] { run_discordance(global, discordance_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForVersion& version) {
    return app.exit(version);
  } catch (const CLI::ParseError& parse_error) {
    app.exit(parse_error);
    return static_cast<int>(elan::ExitCode::kUsage);
  } catch (const elan::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return static_cast<int>(error.exit_code());
  } catch (const std::exception& unexpected) {
    std::cerr << "error: " << unexpected.what() << "\n";
    return static_cast<int>(elan::ExitCode::kFailure);
  }
  return 0;
}
