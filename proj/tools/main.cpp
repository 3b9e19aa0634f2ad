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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "layoutvqa/error.hpp"

using namespace layoutvqa;
using namespace layoutvqa::cli;

namespace {

void add_model_flags(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--levels", m.levels, "Hashing levels")->capture_default_str();
  cmd->add_option("--max-input-len", m.max_input_len, "Encoder length cap")->capture_default_str();
  cmd->add_option("--rho-init", m.rho_init, "Initial ratio logit")->capture_default_str();
  cmd->add_flag("--text-only", m.text_only, "Drop the layout embedding");
  cmd->add_flag("--no-ratio", m.no_ratio, "Add the layout embedding without the learned ratio");
  cmd->add_option("--d-model", m.d_model)->capture_default_str();
  cmd->add_option("--heads", m.heads)->capture_default_str();
  cmd->add_option("--d-ff", m.d_ff)->capture_default_str();
  cmd->add_option("--encoder-layers", m.encoder_layers)->capture_default_str();
  cmd->add_option("--decoder-layers", m.decoder_layers)->capture_default_str();
  cmd->add_option("--max-answer-len", m.max_answer_len)->capture_default_str();
  cmd->add_option("--init-std", m.init_std)->capture_default_str();
  cmd->add_option("--seed", m.seed, "Initialization seed")->capture_default_str();
}

void add_train_flags(CLI::App* cmd, TrainConfig& t) {
  cmd->add_option("--steps", t.steps)->capture_default_str();
  cmd->add_option("--batch-size", t.batch_size)->capture_default_str();
  cmd->add_option("--lr", t.learning_rate)->capture_default_str();
  cmd->add_option("--warmup", t.warmup_steps)->capture_default_str();
  cmd->add_option("--clip", t.max_grad_norm, "Gradient norm cap, 0 disables")->capture_default_str();
  cmd->add_option("--threads", t.threads)->capture_default_str();
}

void add_synth_flags(CLI::App* cmd, SynthConfig& s, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "rows", s.rows)->capture_default_str();
  cmd->add_option("--" + prefix + "cols", s.cols)->capture_default_str();
  cmd->add_option("--" + prefix + "vocab-size", s.vocab_size)->capture_default_str();
  cmd->add_option("--" + prefix + "duplicate-fraction", s.duplicate_fraction)->capture_default_str();
  cmd->add_option_function<std::string>(
         "--" + prefix + "task",
         [&s](const std::string& name) {
           const auto task = parse_synth_task(name);
           if (!task) throw CLI::ValidationError("--task", "unknown task " + name);
           s.task = *task;
         },
         "quadrant-lookup, right-neighbor or region-value")
      ->default_str(std::string(to_string(s.task)));
  cmd->add_flag("--" + prefix + "shuffle", s.shuffle, "Store tokens in random order");
  cmd->add_option("--" + prefix + "jitter", s.jitter)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layout-hashed document VQA toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress the summary table");

  std::string docs, samples, samples_out, preds, ckpt, out_docs, out_samples;
  double tau = 0.5;
  bool reading_order = false;
  ModelOptions model;
  TrainConfig train;

  auto* hash = app.add_subcommand("hash", "Print layout letters of every token");
  int hash_levels = 4;
  hash->add_option("--docs", docs)->required();
  hash->add_option("--levels", hash_levels)->check(CLI::Range(1, kMaxHashLevels))->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Annotate question and answer types");
  classify->add_option("--samples", samples)->required();
  classify->add_option("--out", samples_out);

  auto* align = app.add_subcommand("align", "Align answers to OCR spans and report coverage");
  align->add_option("--docs", docs)->required();
  align->add_option("--samples", samples)->required();
  align->add_option("--out", samples_out);
  align->add_flag("--reading-order", reading_order, "Serialize documents in reading order first");

  auto* eval = app.add_subcommand("eval", "Score predictions against gold answers");
  eval->add_option("--predictions", preds)->required();
  eval->add_option("--gold", samples)->required();
  eval->add_option("--tau", tau)->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  SynthConfig sc;
  std::size_t n_docs = 100;
  add_synth_flags(synth, sc);
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--documents", n_docs)->capture_default_str();
  synth->add_option("--out-docs", out_docs)->required();
  synth->add_option("--out-samples", out_samples)->required();

  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  train_cmd->add_option("--docs", docs)->required();
  train_cmd->add_option("--samples", samples)->required();
  train_cmd->add_option("--checkpoint", ckpt)->required();
  train_cmd->add_flag("--reading-order", reading_order);
  add_model_flags(train_cmd, model);
  add_train_flags(train_cmd, train);

  auto* infer = app.add_subcommand("infer", "Decode answers with a checkpoint");
  infer->add_option("--checkpoint", ckpt)->required();
  infer->add_option("--docs", docs)->required();
  infer->add_option("--samples", samples)->required();
  infer->add_option("--out", preds);
  infer->add_option("--tau", tau)->capture_default_str();
  infer->add_flag("--reading-order", reading_order);

  auto* gradcheck = app.add_subcommand("gradcheck", "Compare analytic and numeric gradients");
  GradCheckOptions gc = default_gradcheck_options();
  add_model_flags(gradcheck, gc.model);
  gradcheck->add_option("--examples", gc.examples)->capture_default_str();
  gradcheck->add_option("--step", gc.h, "Finite-difference step")->capture_default_str();
  gradcheck->add_option("--threshold", gc.threshold)->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "Sweep hashing levels with and without the ratio");
  std::vector<int> sweep = {2, 3, 4, 5};
  std::string test_docs, test_samples;
  SynthConfig ablate_sc;
  ablate_sc.shuffle = true;
  ablate_sc.duplicate_fraction = 0.125;
  std::size_t train_docs = 2000, eval_docs = 500;
  ablate->add_option("--sweep", sweep, "Levels to sweep")->delimiter(',')->capture_default_str();
  ablate->add_option("--docs", docs, "Train documents (synthetic data when omitted)");
  ablate->add_option("--samples", samples);
  ablate->add_option("--test-docs", test_docs);
  ablate->add_option("--test-samples", test_samples);
  ablate->add_option("--tau", tau)->capture_default_str();
  ablate->add_option("--train-documents", train_docs)->capture_default_str();
  ablate->add_option("--test-documents", eval_docs)->capture_default_str();
  add_synth_flags(ablate, ablate_sc, "synth-");
  add_model_flags(ablate, model);
  add_train_flags(ablate, train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::ofstream devnull;
  if (quiet) devnull.open("/dev/null");
  const Output o{std::cout, quiet ? static_cast<std::ostream&>(devnull) : std::cerr};

  try {
    if (*hash) {
      cmd_hash(docs, hash_levels, o);
    } else if (*classify) {
      cmd_classify(samples, samples_out, o);
    } else if (*align) {
      cmd_align(docs, samples, samples_out, reading_order, o);
    } else if (*eval) {
      cmd_eval(preds, samples, tau, o);
    } else if (*synth) {
      cmd_synth(sc, n_docs, out_docs, out_samples, o);
    } else if (*train_cmd) {
      cmd_train(docs, samples, model, train, ckpt, reading_order, o);
    } else if (*infer) {
      cmd_infer(ckpt, docs, samples, preds, tau, reading_order, o);
    } else if (*gradcheck) {
      const auto rep = cmd_gradcheck(gc, o);
      if (!(rep.max_relative_error < gc.threshold)) return kExitDivergence;
    } else if (*ablate) {
      Dataset tr, te;
      if (!docs.empty()) {
        if (samples.empty() || test_docs.empty() || test_samples.empty()) {
          throw std::invalid_argument("ablate: --docs needs --samples, --test-docs, --test-samples");
        }
        tr = load_dataset(docs, samples);
        te = load_dataset(test_docs, test_samples);
      } else {
        ablate_sc.seed = model.seed;
        tr = gen_dataset(ablate_sc, train_docs, "train");
        ablate_sc.seed = model.seed + 1;
        te = gen_dataset(ablate_sc, eval_docs, "test");
      }
      cmd_ablate(sweep, tr, te, model, train, tau, o);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}
