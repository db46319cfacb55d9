//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eagqa/bayes.hpp"
#include "eagqa/eag.hpp"
#include "eagqa/error.hpp"
#include "eagqa/evalkit.hpp"
#include "eagqa/matcher.hpp"
#include "eagqa/query.hpp"
#include "eagqa/scene.hpp"
#include "eagqa/synth.hpp"
#include "eagqa/training.hpp"

namespace eagqa::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct RunConfig {
  std::vector<std::string> scenes;
  std::string eag;
  std::string model;
  std::string query;
  std::string template_id;
  std::string target = "role";
  double alpha = 1.0;
  std::string prior = "learned";
  std::string registration = "auto";
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::string out;
  std::string format = "table";
  std::string predictions;
  std::string gold;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o || !(o << text)) throw Error(ErrorCode::kIo, "cannot write " + path);
}

// Writes to --out when given, otherwise to stdout.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
}

void warn(std::ostream& err, const std::string& message) {
  err << ordered_json{{"warning", message}}.dump() << '\n';
}

std::vector<std::string> expand_scenes(const std::vector<std::string>& inputs) {
  std::vector<std::string> paths;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
          found.push_back(e.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.push_back(in);
    }
  }
  if (paths.empty()) throw Error(ErrorCode::kIo, "no scene files given");
  return paths;
}

BayesNet load_model(const std::string& path) {
  if (path.empty()) return default_role_net();
  return parse_model(read_file(path));
}

EAG load_eag(const std::string& path) { return parse_eag(read_file(path)); }

// --- subcommands -----------------------------------------------------------

int cmd_build_eag(const RunConfig& cfg, std::ostream& out) {
  if (cfg.scenes.size() != 1) {
    throw Error(ErrorCode::kConfiguration, "build-eag takes exactly one --scene");
  }
  auto scene = parse_scene_annotation(read_file(cfg.scenes.front()));
  auto reg = cfg.registration == "image" ? Registration::kForceImageFrame
                                         : Registration::kAuto;
  emit(cfg, out, serialize_eag(build_eag(scene, reg)));
  return kExitOk;
}

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<LabeledRecord> records;
  for (const auto& path : expand_scenes(cfg.scenes)) {
    auto scene = parse_scene_annotation(read_file(path));
    std::vector<LabeledRecord> more;
    if (cfg.target == "role") {
      more = role_records(scene);
    } else {
      std::string skipped;
      more = team_records(scene, &skipped);
      if (!skipped.empty()) warn(err, scene.scene_id + ": skipped, " + skipped);
    }
    records.insert(records.end(), more.begin(), more.end());
  }
  BayesNet net = cfg.target == "role"
                     ? learn_naive_bayes(records, role_class_variable(),
                                         role_feature_variables(), cfg.alpha)
                     : learn_naive_bayes(records, team_class_variable(),
                                         team_feature_variables(), cfg.alpha);
  if (cfg.prior == "uniform") net = with_uniform_prior(net);
  emit(cfg, out, serialize_model(net));
  return kExitOk;
}

bool role_is_blank(const EAG& g, const EntityRef& person) {
  for (const auto& t : g.triples_matching({person, std::string(predicates::kRole), {}})) {
    if (const auto* v = std::get_if<Value>(&t.object); v && v->is_blank()) return true;
  }
  return false;
}

ordered_json posterior_json(const Posterior& p) {
  ordered_json j = ordered_json::object();
  for (const auto& [cls, prob] : p.probabilities) j[cls] = prob;
  return j;
}

int cmd_infer(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EAG g = load_eag(cfg.eag);
  const BayesNet net = load_model(cfg.model);
  std::vector<EntityRef> blanks;
  for (const auto& e : g.entities()) {
    if (e.type == EntityType::kPerson && role_is_blank(g, e)) blanks.push_back(e);
  }
  if (blanks.empty()) {
    warn(err, "no blank role to infer; graph unchanged");
    emit(cfg, out, serialize_eag(g));
    return kExitOk;
  }
  const auto inferred = infer_roles(g, net);
  std::map<FillKey, Value> fills;
  ordered_json report;
  report["posteriors"] = ordered_json::object();
  for (const auto& e : blanks) {
    const auto& r = inferred.at(e.id);
    fills.emplace(FillKey{e.id, std::string(predicates::kRole)}, Value::label(r.role));
    report["posteriors"][e.id] = {{"role", r.role}, {"posterior", posterior_json(r.posterior)}};
  }
  const std::string completed = serialize_eag(complete_eag(g, fills));
  if (cfg.out.empty()) {
    out << completed;
  } else {
    write_file(cfg.out, completed);
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

std::map<std::string, std::string> complete_roles(const EAG& g) {
  for (const auto& e : g.entities()) {
    if (e.type == EntityType::kPerson && role_is_blank(g, e)) {
      throw Error(ErrorCode::kIncompleteScene,
                  "person " + e.id + " has no role; run infer first");
    }
  }
  return roles_in(g);
}

// Q5: answered by team-status inference alone.
Answer defending_team(const EAG& g, const BayesNet& net) {
  const auto teams = infer_team_status(g, complete_roles(g), net);
  std::optional<std::pair<std::string, double>> best;
  for (const auto& [color, t] : teams) {
    double p = t.posterior.at("defending");
    if (!best || p > best->second) best = {color, p};
  }
  if (!best) return Answer::none();
  return Answer::label(best->first);
}

int cmd_query(const RunConfig& cfg, std::ostream& out) {
  const EAG g = load_eag(cfg.eag);
  Answer answer = Answer::none();
  if (!cfg.template_id.empty()) {
    auto id = parse_template_id(cfg.template_id);
    if (!id) {
      throw Error(ErrorCode::kConfiguration,
                  "unknown template \"" + cfg.template_id + "\"; expected Q1..Q7");
    }
    const QueryTemplate t = query_template(*id);
    if (t.dispatch == Dispatch::kTeamStatusInference) {
      if (cfg.model.empty()) {
        throw Error(ErrorCode::kConfiguration, "Q5 needs a team model (--model)");
      }
      answer = defending_team(g, parse_model(read_file(cfg.model)));
    } else {
      answer = answer_query(*t.graph, g);
      if (t.hook == PostHook::kGoalkeeperTeam && answer.kind() == Answer::Kind::kLabel) {
        answer = Answer::label(assign_team(g, complete_roles(g), answer.label_value()));
      }
    }
  } else {
    answer = answer_query(parse_query(read_file(cfg.query)), g);
  }
  emit(cfg, out, serialize_answer(answer) + "\n");
  return kExitOk;
}

json load_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                path + ": malformed document at byte " + std::to_string(e.byte));
  }
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = *parse_report_format(cfg.format);
  const json pred = load_json(cfg.predictions);
  const json gold = load_json(cfg.gold);
  try {
    if (gold.contains("labels")) {
      // Attribute inference: {"attribute": A, "labels": [{"id", "value"}]}.
      std::map<std::string, std::string> predicted;
      for (const auto& r : pred.at("labels")) {
        predicted[r.at("id").get<std::string>()] = r.at("value").get<std::string>();
      }
      std::vector<std::string> g, p;
      for (const auto& r : gold.at("labels")) {
        const auto id = r.at("id").get<std::string>();
        g.push_back(r.at("value").get<std::string>());
        auto it = predicted.find(id);
        p.push_back(it == predicted.end() ? "" : it->second);
      }
      const std::string attribute = gold.value("attribute", "value");
      emit(cfg, out, format_inference_report(inference_report(g, p), attribute, fmt));
      return kExitOk;
    }
    // Answers: predictions {"records": [{"scene", "query", "answer"}]},
    // gold {"records": [{"scene", "query", "references"}]}.
    std::map<std::pair<std::string, std::string>, Answer> predicted;
    for (const auto& r : pred.at("records")) {
      predicted.insert_or_assign({r.at("scene").get<std::string>(), r.at("query").get<std::string>()},
                                 parse_answer(r.at("answer").dump()));
    }
    std::vector<AnswerRecord> records;
    for (const auto& r : gold.at("records")) {
      AnswerRecord rec{r.at("scene").get<std::string>(), r.at("query").get<std::string>(),
                       Answer::none(), r.at("references").get<std::vector<std::string>>()};
      if (auto it = predicted.find({rec.scene_id, rec.query_id}); it != predicted.end()) {
        rec.predicted = it->second;
      }
      records.push_back(std::move(rec));
    }
    emit(cfg, out, format_accuracy_report(answer_accuracy(records), fmt));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("eval: ") + e.what());
  }
  return kExitOk;
}

int cmd_report_cpt(const RunConfig& cfg, std::ostream& out) {
  emit(cfg, out, export_cpt_report(load_model(cfg.model)));
  return kExitOk;
}

int cmd_gen_fixtures(const RunConfig& cfg, std::ostream& out) {
  fs::create_directories(cfg.out);
  synth::Rng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth-%04zu", i);
    const auto s = synth::scene(rng, name);
    const auto path = (fs::path(cfg.out) / (std::string(name) + ".json")).string();
    write_file(path, render_scene_annotation(s));
    out << path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Entity-attribute graph question answering over soccer scenes", "eagqa"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-eag", "Scene annotation to entity-attribute graph");
  build->add_option("--scene", cfg.scenes, "Scene annotation file")->required();
  build->add_option("--registration", cfg.registration, "auto or image")
      ->check(CLI::IsMember({"auto", "image"}));
  build->add_option("--out", cfg.out, "Output path (default stdout)");

  auto* learn = app.add_subcommand("learn", "Learn a Naive Bayes model from labeled scenes");
  learn->add_option("--scene", cfg.scenes, "Scene files or directories")->required();
  learn->add_option("--target", cfg.target, "role or team")
      ->check(CLI::IsMember({"role", "team"}));
  learn->add_option("--alpha", cfg.alpha, "Laplace smoothing")->check(CLI::NonNegativeNumber);
  learn->add_option("--prior", cfg.prior, "learned or uniform")
      ->check(CLI::IsMember({"learned", "uniform"}));
  learn->add_option("--out", cfg.out, "Model output path (default stdout)");

  auto* infer = app.add_subcommand("infer", "Fill blank roles by posterior inference");
  infer->add_option("--eag", cfg.eag, "Graph file")->required();
  infer->add_option("--model", cfg.model, "Role model (default: built-in table)");
  infer->add_option("--out", cfg.out, "Completed graph path; posteriors then go to stdout");

  auto* query = app.add_subcommand("query", "Answer a template or DSL query");
  query->add_option("--eag", cfg.eag, "Completed graph file")->required();
  auto* tmpl = query->add_option("--template", cfg.template_id, "Q1..Q7");
  auto* qfile = query->add_option("--query", cfg.query, "Query file");
  tmpl->excludes(qfile);
  query->add_option("--model", cfg.model, "Team model, used by Q5");
  query->add_option("--out", cfg.out, "Output path (default stdout)");

  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("--predictions", cfg.predictions)->required();
  eval->add_option("--gold", cfg.gold)->required();
  eval->add_option("--format", cfg.format)->check(CLI::IsMember({"table", "machine"}));
  eval->add_option("--out", cfg.out, "Output path (default stdout)");

  auto* report = app.add_subcommand("report-cpt", "Print conditional probabilities in percent");
  report->add_option("--model", cfg.model, "Model file (default: built-in table)");
  report->add_option("--out", cfg.out, "Output path (default stdout)");

  auto* gen = app.add_subcommand("gen-fixtures", "Write seeded synthetic scenes");
  gen->add_option("--seed", cfg.seed);
  gen->add_option("--count", cfg.count)->check(CLI::PositiveNumber);
  gen->add_option("--out", cfg.out, "Output directory")->required();

  std::vector<std::string> argv_store{"eagqa"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (query->parsed() && cfg.template_id.empty() && cfg.query.empty()) {
    err << "query needs --template or --query\n" << query->help();
    return kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build_eag(cfg, out);
    if (learn->parsed()) return cmd_learn(cfg, out, err);
    if (infer->parsed()) return cmd_infer(cfg, out, err);
    if (query->parsed()) return cmd_query(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (report->parsed()) return cmd_report_cpt(cfg, out);
    if (gen->parsed()) return cmd_gen_fixtures(cfg, out);
    throw Error(ErrorCode::kInternal, "no subcommand dispatched");
  } catch (const Error& e) {
    ordered_json j;
    j["error"] = {{"code", to_string(e.code())},
                  {"family", to_string(e.family())},
                  {"message", e.what()}};
    err << j.dump() << '\n';
    return static_cast<int>(e.family());
  } catch (const fs::filesystem_error& e) {
    err << ordered_json{{"error", {{"code", "io"}, {"family", "io"}, {"message", e.what()}}}}
               .dump()
        << '\n';
    return static_cast<int>(ErrorFamily::kIo);
  }
}

}  // namespace eagqa::cli
