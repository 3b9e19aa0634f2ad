// Copyright 2026 The layoutvqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "layoutvqa/checkpoint.hpp"
#include "layoutvqa/error.hpp"
#include "layoutvqa/layout_hash.hpp"
#include "log.hpp"

namespace layoutvqa::cli {

using json = nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const SchemaError*>(&e)) return kExitSchema;
  if (dynamic_cast<const DivergenceError*>(&e)) return kExitDivergence;
  return kExitUsage;
}

ModelConfig ModelOptions::to_config() const {
  if (text_only && no_ratio) {
    throw std::invalid_argument("--text-only and --no-ratio are mutually exclusive");
  }
  ModelConfig c;
  c.levels = levels;
  c.max_input_len = max_input_len;
  c.rho_init = rho_init;
  c.layout = text_only ? LayoutMode::TextOnly : no_ratio ? LayoutMode::NoRatio : LayoutMode::Ratio;
  c.d_model = d_model;
  c.heads = heads;
  c.d_ff = d_ff;
  c.encoder_layers = encoder_layers;
  c.decoder_layers = decoder_layers;
  c.max_answer_len = max_answer_len;
  c.init_std = init_std;
  c.seed = seed;
  c.validate();
  return c;
}

std::string percent(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", as_percent(score));
  return buf;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void to_reading_order(Dataset& ds) {
  for (auto& d : ds.documents) d.tokens = serialize_reading_order(std::move(d.tokens));
}

json report_json(const EvalReport& r) {
  return {{"anls", as_percent(r.anls)},
          {"f1", as_percent(r.f1)},
          {"accuracy", as_percent(r.accuracy)},
          {"n", r.n}};
}

void print_report(std::ostream& table, const EvalReport& r) {
  table << "ANLS " << percent(r.anls) << "  F1 " << percent(r.f1) << "  Accuracy "
        << percent(r.accuracy) << "  (n=" << r.n << ")\n";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void cmd_hash(const fs::path& documents, int levels, const Output& out) {
  const auto docs = load_documents(documents);
  for (const auto& d : docs) {
    json letters = json::array();
    if (!d.tokens.empty()) {
      std::vector<BoundingBox> boxes;
      for (const auto& t : d.tokens) boxes.push_back(t.box);
      const auto grid = layout_hash(boxes, levels);
      for (const auto& code : grid.codes) {
        const auto l = code_letters(code);
        letters.push_back(std::string(l.begin(), l.end()));
      }
    }
    out.records << json{{"id", d.id}, {"levels", levels}, {"letters", letters}}.dump() << '\n';
    out.table << d.id << ":";
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      out.table << ' ' << d.tokens[i].text << '/' << letters[i].get<std::string>();
    }
    out.table << '\n';
  }
}

void cmd_classify(const fs::path& samples_in, const fs::path& samples_out, const Output& out) {
  auto samples = load_samples(samples_in);
  std::vector<std::size_t> qcount(8, 0);
  std::vector<std::size_t> acount(3, 0);
  for (auto& s : samples) {
    s.qa.question_type = classify_question(s.qa.question);
    s.qa.answer_type = classify_answer_type(s.qa.answer);
    ++qcount[static_cast<std::size_t>(*s.qa.question_type)];
    ++acount[static_cast<std::size_t>(*s.qa.answer_type)];
  }
  if (!samples_out.empty()) save_samples(samples_out, samples);
  json q = json::object();
  json a = json::object();
  for (std::size_t i = 0; i < qcount.size(); ++i) {
    q[std::string(to_string(static_cast<QuestionType>(i)))] = qcount[i];
  }
  for (std::size_t i = 0; i < acount.size(); ++i) {
    a[std::string(to_string(static_cast<AnswerType>(i)))] = acount[i];
  }
  out.records << json{{"samples", samples.size()}, {"question_types", q}, {"answer_types", a}}.dump()
              << '\n';
  out.table << "question types:";
  for (auto& [k, v] : q.items()) out.table << ' ' << k << '=' << v.get<std::size_t>();
  out.table << "\nanswer types:";
  for (auto& [k, v] : a.items()) out.table << ' ' << k << '=' << v.get<std::size_t>();
  out.table << '\n';
}

CoverageStats cmd_align(const fs::path& documents, const fs::path& samples_in,
                        const fs::path& samples_out, bool reading_order, const Output& out) {
  Dataset ds = load_dataset(documents, samples_in);
  if (reading_order) to_reading_order(ds);
  const auto idx = ds.index();
  std::vector<OcrContext> contexts;
  contexts.reserve(ds.documents.size());
  for (const auto& d : ds.documents) contexts.push_back(build_context(d));
  for (auto& s : ds.samples) s.span = align_answer(s.qa.answer, contexts[idx.at(s.document_id)]);
  if (!samples_out.empty()) save_samples(samples_out, ds.samples);
  const auto stats = coverage_stats(ds);
  out.records << json{{"samples", stats.n},
                      {"fully_matched", as_percent(stats.fully_matched)},
                      {"with_deletion", as_percent(stats.with_deletion)}}
                     .dump()
              << '\n';
  out.table << "fully matched " << percent(stats.fully_matched) << "%  with deletion "
            << percent(stats.with_deletion) << "%  (n=" << stats.n << ")\n";
  return stats;
}

EvalReport cmd_eval(const fs::path& predictions, const fs::path& gold_samples, double tau,
                    const Output& out) {
  const auto gold = load_samples(gold_samples);
  std::ifstream in(predictions, std::ios::binary);
  if (!in) throw IoError("cannot open '" + predictions.string() + "' for reading");
  std::vector<AnswerPair> pairs;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(n) + ": malformed record: " + e.what());
    }
    if (!j.is_object() || !j.contains("prediction") || !j["prediction"].is_string()) {
      throw SchemaError("line " + std::to_string(n) + ": field 'prediction' must be a string");
    }
    if (pairs.size() >= gold.size()) break;
    pairs.push_back({j["prediction"].get<std::string>(), gold[pairs.size()].qa.answer});
  }
  if (pairs.size() != gold.size()) {
    throw SchemaError("predictions: " + std::to_string(pairs.size()) + " records for " +
                      std::to_string(gold.size()) + " gold samples");
  }
  EvalConfig ec;
  ec.tau = tau;
  const auto report = evaluate(pairs, ec);
  out.records << report_json(report).dump() << '\n';
  print_report(out.table, report);
  return report;
}

Dataset cmd_synth(const SynthConfig& config, std::size_t documents, const fs::path& documents_out,
                  const fs::path& samples_out, const Output& out) {
  const Dataset ds = gen_dataset(config, documents);
  if (!documents_out.empty()) save_documents(documents_out, ds.documents);
  if (!samples_out.empty()) save_samples(samples_out, ds.samples);
  out.records << json{{"task", std::string(to_string(config.task))},
                      {"documents", ds.documents.size()},
                      {"samples", ds.samples.size()},
                      {"seed", config.seed}}
                     .dump()
              << '\n';
  out.table << ds.documents.size() << " documents, " << ds.samples.size() << " samples ("
            << to_string(config.task) << ")\n";
  return ds;
}

Model cmd_train(const fs::path& documents, const fs::path& samples, const ModelOptions& model,
                const TrainConfig& train_config, const fs::path& checkpoint, bool reading_order,
                const Output& out) {
  Dataset ds = load_dataset(documents, samples);
  if (reading_order) to_reading_order(ds);
  const ModelConfig mc = model.to_config();
  const auto t0 = std::chrono::steady_clock::now();
  double last = 0.0;
  Model m = train(mc, train_config, ds, [&](const StepInfo& s) {
    last = s.loss;
    if (s.step % 100 == 0 || s.step == train_config.steps) {
      log::info("step ", s.step, " loss ", s.loss, " lr ", s.learning_rate, " omega ", s.omega);
    }
  });
  if (!checkpoint.empty()) save_checkpoint(checkpoint, m);
  const double omega = mean_omega(m);
  out.records << json{{"steps", train_config.steps},
                      {"final_loss", last},
                      {"omega", omega},
                      {"parameters", parameter_count(m.params)},
                      {"layout", std::string(to_string(mc.layout))},
                      {"levels", mc.levels}}
                     .dump()
              << '\n';
  out.table << "trained " << train_config.steps << " steps, final loss " << last << ", omega "
            << omega << ", " << parameter_count(m.params) << " parameters, "
            << std::fixed << std::setprecision(1) << seconds_since(t0) << "s\n"
            << std::defaultfloat << std::setprecision(6);
  return m;
}

Evaluation cmd_infer(const fs::path& checkpoint, const fs::path& documents,
                     const fs::path& samples, const fs::path& predictions_out, double tau,
                     bool reading_order, const Output& out) {
  const Model m = load_checkpoint(checkpoint);
  Dataset ds = load_dataset(documents, samples);
  if (reading_order) to_reading_order(ds);
  EvalConfig ec;
  ec.tau = tau;
  auto ev = evaluate_model(m, ds, ec);
  if (!predictions_out.empty()) {
    auto f = open_out(predictions_out);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      f << json{{"document_id", ds.samples[i].document_id},
                {"question", ds.samples[i].qa.question},
                {"prediction", ev.predictions[i]}}
               .dump()
        << '\n';
    }
    if (!f) throw IoError("error while writing '" + predictions_out.string() + "'");
  }
  out.records << report_json(ev.report).dump() << '\n';
  print_report(out.table, ev.report);
  return ev;
}

GradCheckOptions default_gradcheck_options() {
  GradCheckOptions o;
  o.model.d_model = 16;
  o.model.heads = 2;
  o.model.d_ff = 32;
  o.model.max_input_len = 16;
  o.model.max_answer_len = 4;
  o.model.init_std = 0.3;
  return o;
}

GradCheckReport cmd_gradcheck(const GradCheckOptions& options, const Output& out) {
  SynthConfig sc;
  sc.rows = 2;
  sc.cols = 3;
  sc.vocab_size = 12;
  sc.duplicate_fraction = 0.4;
  sc.shuffle = true;
  sc.seed = options.model.seed;
  const Dataset ds = gen_dataset(sc, options.examples, "gradcheck");
  const ModelConfig mc = options.model.to_config();
  const Model m = init_model(mc, Vocabulary::build(ds));
  auto examples = build_examples(ds, m.vocab, mc);
  if (examples.size() > options.examples) examples.resize(options.examples);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = grad_check(m, examples, options.h);
  const double secs = seconds_since(t0);
  const bool pass = rep.max_relative_error < options.threshold;
  for (const auto& t : rep.tensors) {
    out.records << json{{"tensor", t.name},
                        {"size", t.size},
                        {"relative_error", t.relative_error},
                        {"max_abs_error", t.max_abs_error},
                        {"analytic_norm", t.analytic_norm}}
                       .dump()
                << '\n';
    out.table << std::left << std::setw(36) << t.name << std::right << std::setw(8) << t.size
              << "  rel " << std::scientific << std::setprecision(3) << t.relative_error
              << std::defaultfloat << '\n';
  }
  out.records << json{{"max_relative_error", rep.max_relative_error},
                      {"parameters", rep.parameters},
                      {"seconds", secs},
                      {"pass", pass}}
                     .dump()
              << '\n';
  out.table << "max relative error " << std::scientific << std::setprecision(3)
            << rep.max_relative_error << std::defaultfloat << " over " << rep.parameters
            << " parameters: " << (pass ? "PASS" : "FAIL") << '\n';
  return rep;
}

std::vector<AblationRow> cmd_ablate(const std::vector<int>& levels, const Dataset& train_set,
                                    const Dataset& test_set, const ModelOptions& model,
                                    const TrainConfig& train_config, double tau,
                                    const Output& out) {
  if (levels.empty()) throw std::invalid_argument("ablate: empty level list");
  EvalConfig ec;
  ec.tau = tau;
  std::vector<AblationRow> rows;
  out.table << " L  setting    ANLS     F1       Accuracy  omega\n";
  for (int level : levels) {
    for (LayoutMode mode : {LayoutMode::Ratio, LayoutMode::NoRatio}) {
      ModelOptions o = model;
      o.levels = level;
      o.text_only = false;
      o.no_ratio = mode == LayoutMode::NoRatio;
      const auto t0 = std::chrono::steady_clock::now();
      const Model m = train(o.to_config(), train_config, train_set);
      AblationRow row;
      row.levels = level;
      row.mode = mode;
      row.report = evaluate_model(m, test_set, ec).report;
      row.omega = mean_omega(m);
      row.seconds = seconds_since(t0);
      log::info("ablate L=", level, " ", to_string(mode), " done in ", row.seconds, "s");
      json rec = report_json(row.report);
      rec["levels"] = level;
      rec["setting"] = std::string(to_string(mode));
      rec["omega"] = row.omega;
      out.records << rec.dump() << '\n';
      char line[128];
      std::snprintf(line, sizeof line, "%2d  %-9s  %7s  %7s  %8s  %.4f\n", level,
                    std::string(to_string(mode)).c_str(), percent(row.report.anls).c_str(),
                    percent(row.report.f1).c_str(), percent(row.report.accuracy).c_str(),
                    row.omega);
      out.table << line;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace layoutvqa::cli
