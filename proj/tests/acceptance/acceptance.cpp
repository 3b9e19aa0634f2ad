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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "layoutvqa/annotator.hpp"
#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/metrics.hpp"
#include "layoutvqa/model.hpp"
#include "layoutvqa/synth.hpp"
#include "layoutvqa/text.hpp"
#include "layoutvqa/train.hpp"
#include "oracles.hpp"

using namespace layoutvqa;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool bitwise_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.data()[i]) != std::bit_cast<std::uint64_t>(b.data()[i])) {
      return false;
    }
  }
  return true;
}

// 1. Recursive hash against digit extraction.
Outcome hash_oracle() {
  constexpr std::size_t kSets = 10000;
  constexpr std::size_t kMaxBoxes = 200;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> count(1, kMaxBoxes);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::uniform_real_distribution<double> ext(0.0, 60.0);

  std::vector<std::vector<BoundingBox>> sets;
  sets.reserve(kSets);
  for (std::size_t s = 0; s < kSets; ++s) {
    const std::size_t n = count(rng);
    if (s % 2 == 0) {
      sets.push_back(oracle::random_boxes(rng, n));
    } else {
      std::vector<BoundingBox> boxes;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        boxes.push_back({x, y, x + ext(rng), y + ext(rng)});
      }
      sets.push_back(std::move(boxes));
    }
  }

  std::size_t mismatches = 0;
  std::size_t checked = 0;
  const auto t0 = Clock::now();
  for (const auto& boxes : sets) {
    const Rect root = oracle::bounding_rect(boxes);
    for (int levels = 1; levels <= 5; ++levels) {
      const HashGrid grid = layout_hash(boxes, levels);
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const Point c = boxes[i].center();
        const auto want = oracle::quadrants(c.x, c.y, root, levels);
        const auto& got = grid.codes[i].symbols;
        bool same = got.size() == want.size();
        for (std::size_t k = 0; same && k < want.size(); ++k) {
          same = got[k].level == static_cast<int>(k) + 1 && got[k].quadrant == want[k];
        }
        mismatches += same ? 0 : 1;
        ++checked;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          fmt("mismatches=%zu of %zu codes, %.2fs (limit 5s)", mismatches, checked, secs)};
}

// 2. Letter map.
Outcome letter_map() {
  bool ok = symbol_to_letter({1, 1}) == 'A' && symbol_to_letter({2, 4}) == 'H';
  std::set<char> seen;
  std::string all;
  for (int l = 1; l <= 5; ++l) {
    for (int q = 1; q <= 4; ++q) {
      const char c = symbol_to_letter({l, q});
      ok = ok && c == oracle::letter(l, q);
      seen.insert(c);
      all.push_back(c);
    }
  }
  ok = ok && all == "ABCDEFGHIJKLMNOPQRST" && seen.size() == 20;

  // Property: distinct random symbols give distinct letters.
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> lev(1, 5);
  std::uniform_int_distribution<int> quad(1, 4);
  std::size_t violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const QuadSymbol a{lev(rng), quad(rng)};
    const QuadSymbol b{lev(rng), quad(rng)};
    if ((a == b) != (symbol_to_letter(a) == symbol_to_letter(b))) ++violations;
  }
  ok = ok && violations == 0;
  return {ok, fmt("map=%s distinct=%zu injectivity_violations=%zu", all.c_str(), seen.size(),
                  violations)};
}

// 3. Metric oracles.
Outcome metric_oracles() {
  std::mt19937_64 rng(3);
  const std::u32string alphabet = U"ab0. đàêố";
  std::uniform_int_distribution<std::size_t> len(0, 14);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  const EvalConfig raw{0.5, false};
  double worst = 0.0;
  std::size_t zeroing_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::u32string a, b;
    for (std::size_t k = len(rng); k > 0; --k) a.push_back(alphabet[pick(rng)]);
    // Half the pairs are near copies so the 1 - NL branch is exercised.
    if (i % 2 == 0) {
      b = a;
      if (!b.empty()) b[pick(rng) % b.size()] = alphabet[pick(rng)];
      if (pick(rng) % 2 == 0) b.push_back(alphabet[pick(rng)]);
    } else {
      for (std::size_t k = len(rng); k > 0; --k) b.push_back(alphabet[pick(rng)]);
    }
    const double got = anls_pair({text::to_utf8(a), text::to_utf8(b)}, raw);
    const double want = oracle::anls_score(a, b, 0.5);
    worst = std::max(worst, std::abs(got - want));
    const std::size_t longest = std::max(a.size(), b.size());
    if (longest > 0) {
      const double nl = static_cast<double>(oracle::levenshtein(a, b)) / longest;
      if (nl >= 0.5 && got != 0.0) ++zeroing_violations;
    }
  }
  const double worked_anls = anls_pair({"50.000", "50 000"});
  const double worked_f1 = f1_pair({"50", "50 000"});
  const bool ok = worst <= 1e-12 && zeroing_violations == 0 && worked_anls == 5.0 / 6.0 &&
                  worked_f1 == 2.0 / 3.0 && anls_pair({"ab", "cd"}) == 0.0 &&
                  anls_pair({"ab", "cb"}) == 0.0;
  return {ok, fmt("max|anls-oracle|=%.3g (tol 1e-12), ANLS(50.000,50 000)=%.17g, "
                  "F1(50,50 000)=%.17g, zeroing_violations=%zu",
                  worst, worked_anls, worked_f1, zeroing_violations)};
}

// 4. Gradient verification through the CLI entry point.
Outcome gradients() {
  std::ostringstream rec, table;
  const auto opts = cli::default_gradcheck_options();
  const auto t0 = Clock::now();
  const auto rep = cli::cmd_gradcheck(opts, {rec, table});
  const double secs = seconds_since(t0);
  bool has_rho = false;
  bool all_nonzero = true;
  for (const auto& t : rep.tensors) {
    has_rho |= t.name == "rho";
    all_nonzero = all_nonzero && t.analytic_norm > 0.0;
  }
  const int d = opts.model.d_model;
  const bool ok = rep.max_relative_error < 1e-4 && rep.parameters <= 50000 && d >= 8 && d <= 32 &&
                  has_rho && all_nonzero && secs < 120.0;
  return {ok, fmt("max_rel_err=%.3g (tol 1e-4) over %zu tensors, rho=%s, d=%d, params=%zu, %.1fs",
                  rep.max_relative_error, rep.tensors.size(), has_rho ? "yes" : "no", d,
                  rep.parameters, secs)};
}

// 5. Ablation identities.
Outcome ablation_identities() {
  SynthConfig sc;
  sc.rows = 3;
  sc.cols = 3;
  sc.duplicate_fraction = 0.3;
  sc.shuffle = true;
  sc.seed = 5;
  const Dataset ds = gen_dataset(sc, 20, "abl");
  const auto vocab = Vocabulary::build(ds);
  ModelConfig base;
  base.d_model = 16;
  base.d_ff = 32;
  base.max_input_len = 32;
  base.max_answer_len = 4;
  base.init_std = 0.3;

  ModelConfig no_ratio = base;
  no_ratio.layout = LayoutMode::NoRatio;
  ModelConfig forced = base;
  forced.forced_omega = 1.0;
  const Model a = init_model(no_ratio, vocab);
  const Model b = init_model(forced, vocab);
  std::size_t ratio_diffs = 0;
  for (const auto& e : build_examples(ds, vocab, base)) {
    if (!bitwise_equal(forward(a, e.input, e.decoder_input), forward(b, e.input, e.decoder_input))) {
      ++ratio_diffs;
    }
  }

  ModelConfig text_only = base;
  text_only.layout = LayoutMode::TextOnly;
  const Model t = init_model(text_only, vocab);
  const Model r = init_model(base, vocab);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  std::size_t text_diffs = 0;
  std::size_t ratio_moved = 0;
  std::size_t trials = 0;
  for (const auto& s : ds.samples) {
    Document doc = ds.document(s.document_id);
    const auto before = make_example(s.qa.question, doc, s.qa.answer, vocab, text_only);
    for (int rep = 0; rep < 5; ++rep) {
      for (auto& tok : doc.tokens) {
        const double x = u(rng);
        const double y = u(rng);
        tok.box = {x, y, x + u(rng) / 20, y + u(rng) / 20};
      }
      const auto after = make_example(s.qa.question, doc, s.qa.answer, vocab, text_only);
      if (!bitwise_equal(forward(t, before.input, before.decoder_input),
                         forward(t, after.input, after.decoder_input))) {
        ++text_diffs;
      }
      if (!bitwise_equal(forward(r, before.input, before.decoder_input),
                         forward(r, after.input, after.decoder_input))) {
        ++ratio_moved;
      }
      ++trials;
    }
  }
  // The ratio model reacting to the same perturbations shows they are not vacuous.
  const bool ok = ratio_diffs == 0 && text_diffs == 0 && ratio_moved > 0;
  return {ok, fmt("no-ratio vs omega=1: %zu differing outputs; text-only under %zu box "
                  "perturbations: %zu differing (ratio model: %zu)",
                  ratio_diffs, trials, text_diffs, ratio_moved)};
}

// 6. Behavioral separation on the shuffled right-neighbor task.
struct BehaviorSetup {
  SynthConfig synth;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
  ModelConfig model;
  TrainConfig train;
};

BehaviorSetup behavior_setup() {
  BehaviorSetup s;
  s.synth.task = SynthTask::RightNeighbor;
  s.synth.rows = 2;
  s.synth.cols = 2;
  s.synth.vocab_size = 32;
  s.synth.duplicate_fraction = 0.125;
  s.synth.shuffle = true;
  s.synth.seed = 7;
  s.train_docs = 20000;
  s.test_docs = 500;
  s.model.levels = 4;
  s.model.max_input_len = 40;
  s.model.max_answer_len = 4;
  s.model.init_std = 0.1;
  s.train.steps = 6000;
  s.train.batch_size = 16;
  return s;
}

Outcome behavior() {
  const BehaviorSetup s = behavior_setup();
  const auto t0 = Clock::now();
  SynthConfig sc = s.synth;
  const Dataset train = gen_dataset(sc, s.train_docs, "train");
  sc.seed += 1;
  const Dataset test = gen_dataset(sc, s.test_docs, "test");

  double chance = 0.0;
  for (const auto& smp : test.samples) {
    chance += right_neighbor_text_only_chance(test.document(smp.document_id),
                                              *right_neighbor_anchor(smp.qa.question));
  }
  chance /= static_cast<double>(test.samples.size());

  ModelConfig ratio_cfg = s.model;
  const Model ratio_model = layoutvqa::train(ratio_cfg, s.train, train);
  const double ratio_acc = evaluate_model(ratio_model, test).report.accuracy;

  ModelConfig text_cfg = s.model;
  text_cfg.layout = LayoutMode::TextOnly;
  const Model text_model = layoutvqa::train(text_cfg, s.train, train);
  const double text_acc = evaluate_model(text_model, test).report.accuracy;
  const double secs = seconds_since(t0);

  const bool ok = train.samples.size() >= 2000 && test.samples.size() >= 500 &&
                  ratio_acc >= 0.90 && std::abs(text_acc - chance) <= 0.10 && secs < 600.0;
  return {ok, fmt("%dx%d grid, L=%d, train=%zu test=%zu: ratio acc=%.2f%% (min 90), text-only "
                  "acc=%.2f%% vs chance %.2f%% (within 10 points), %.0fs (limit 600s)",
                  s.synth.rows, s.synth.cols, s.model.levels, train.samples.size(),
                  test.samples.size(), as_percent(ratio_acc), as_percent(text_acc),
                  as_percent(chance), secs)};
}

// 7. Level sweep harness.
Outcome level_sweep() {
  SynthConfig sc;
  sc.rows = 2;
  sc.cols = 2;
  sc.duplicate_fraction = 0.125;
  sc.shuffle = true;
  sc.seed = 11;
  const Dataset train = gen_dataset(sc, 300, "train");
  sc.seed = 12;
  const Dataset test = gen_dataset(sc, 100, "test");
  cli::ModelOptions m;
  m.max_input_len = 40;
  m.max_answer_len = 4;
  m.init_std = 0.1;
  TrainConfig t;
  t.steps = 150;
  t.batch_size = 8;
  t.warmup_steps = 10;
  std::ostringstream rec, table;
  const std::vector<int> sweep = {2, 3, 4, 5};
  const auto rows = cli::cmd_ablate(sweep, train, test, m, t, 0.5, {rec, table});

  bool ok = rows.size() == 8;
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool ratio = i % 2 == 0;
    ok = r.levels == sweep[i / 2] && r.mode == (ratio ? LayoutMode::Ratio : LayoutMode::NoRatio) &&
         (ratio ? (r.omega > 0.0 && r.omega < 1.0) : r.omega == 1.0) && r.report.n == 100;
  }
  std::size_t records = 0;
  std::istringstream lines(rec.str());
  for (std::string line; std::getline(lines, line); ++records) {
    const auto j = nlohmann::json::parse(line);
    ok = ok && j.contains("levels") && j.contains("setting") && j.contains("omega") &&
         j.contains("anls") && j.contains("f1") && j.contains("accuracy");
  }
  ok = ok && records == 8;
  std::fputs(table.str().c_str(), stdout);
  return {ok, fmt("%zu rows, %zu records (levels {2,3,4,5} x {ratio, no-ratio})", rows.size(),
                  records)};
}

// 8. Classifier conformance.
Outcome classifier() {
  using QT = QuestionType;
  using AT = AnswerType;
  struct Q {
    const char* text;
    QT want;
  };
  const Q questions[] = {
      {"Khách hàng đã mua gì?", QT::Object},
      {"Ai là nhân viên phụ trách hóa đơn này?", QT::Person},
      {"Sản phẩm đầu tiên trong hóa đơn này có tên là gì và số lượng mua bao nhiêu?", QT::Other},
      {"Số tham chiếu của hóa đơn này là?", QT::Other},
      {"Hóa đơn in vào ngày nào?", QT::Time},
  };
  struct A {
    const char* text;
    AT want;
  };
  const A answers[] = {
      {"50.000", AT::Numeric},       {"30/04/2024", AT::Numeric},
      {"tiền mặt", AT::NonNumeric},  {"Trà đào (L)", AT::NonNumeric},
      {"50.000 VND", AT::Hybrid},    {"24/12/2022(Thứ bảy)", AT::Hybrid},
  };
  std::size_t wrong = 0;
  std::string bad;
  for (const auto& q : questions) {
    if (classify_question(q.text) != q.want) {
      ++wrong;
      bad += std::string(" [") + q.text + "]";
    }
  }
  for (const auto& a : answers) {
    if (classify_answer_type(a.text) != a.want) {
      ++wrong;
      bad += std::string(" [") + a.text + "]";
    }
  }
  // "ngày nào" holds a Time keyword and, inside it, the Object keyword "nào".
  const auto& table = KeywordTable::standard();
  bool object_nao = false;
  bool time_ngay_nao = false;
  for (const auto& kw : table.single_syllable()) {
    object_nao |= kw.type == QT::Object && kw.syllables == std::vector<std::string>{"nào"};
  }
  for (const auto& kw : table.multi_syllable()) {
    time_ngay_nao |= kw.type == QT::Time && kw.syllables == std::vector<std::string>{"ngày", "nào"};
  }
  const bool conflict = object_nao && time_ngay_nao;
  const std::size_t total = std::size(questions) + std::size(answers);
  return {wrong == 0 && conflict,
          fmt("%zu/%zu examples correct, ngay-nao conflict present=%s%s", total - wrong, total,
              conflict ? "yes" : "no", bad.c_str())};
}

// 9. Alignment contract.
Outcome alignment() {
  std::size_t order_violations = 0;
  double worst_synth = 1.0;
  double worst_gap = 0.0;
  std::size_t corpora = 0;
  for (auto task : {SynthTask::RightNeighbor, SynthTask::QuadrantLookup, SynthTask::RegionValue}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      SynthConfig c;
      c.task = task;
      c.seed = seed;
      c.rows = 2 + static_cast<int>(seed);
      c.cols = 4;
      if (task == SynthTask::QuadrantLookup) c.rows = c.cols = 2;
      c.shuffle = seed % 2 == 0;
      c.duplicate_fraction = 0.25;
      const Dataset ds = gen_dataset(c, 200);
      if (ds.samples.empty()) ++order_violations;
      const auto clean = coverage_stats(ds);
      worst_synth = std::min(worst_synth, clean.fully_matched);
      order_violations += clean.with_deletion >= clean.fully_matched ? 0 : 1;

      const double del = 0.02 * static_cast<double>(seed + 1);
      const double miss = 0.01 * static_cast<double>(seed);
      const Dataset planted = plant_ocr_errors(ds, del, miss, seed + 100);
      const auto cov = coverage_stats(planted);
      order_violations += cov.with_deletion >= cov.fully_matched ? 0 : 1;
      const double n = static_cast<double>(planted.samples.size());
      worst_gap = std::max({worst_gap,
                            std::abs(cov.with_deletion - cov.fully_matched - std::round(del * n) / n),
                            std::abs(1.0 - cov.with_deletion - std::round(miss * n) / n)});
      corpora += 2;
    }
  }
  const bool ok = order_violations == 0 && worst_synth == 1.0 && worst_gap <= 1e-12;
  return {ok, fmt("%zu corpora: ordering violations=%zu, min synthetic fully_matched=%.2f%%, "
                  "max planted-gap error=%.3g",
                  corpora, order_violations, as_percent(worst_synth), worst_gap)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"hash-oracle-equivalence", hash_oracle},
      {"letter-map-fidelity", letter_map},
      {"metric-oracles", metric_oracles},
      {"gradient-verification", gradients},
      {"ablation-identities", ablation_identities},
      {"behavioral-separation", behavior},
      {"level-sweep-harness", level_sweep},
      {"classifier-conformance", classifier},
      {"alignment-contract", alignment},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed;
}
