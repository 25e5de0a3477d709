// tools/latrescore.cc

// Copyright 2026  The latrescore Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Batch front end: validate, decode, expand, prune and rescore lattices, train
// n-gram models, score WER and run LM-scale x WIP sweeps.
//
// Exit status: 0 on success, 1 on data errors, 2 on usage errors.
// Hypotheses are printed as `utterance-id w1 w2 ...`, the transcript format
// read by `wer`.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "latrescore/error.h"
#include "latrescore/lattice-algo.h"
#include "latrescore/lattice-io.h"
#include "latrescore/ngram-lm.h"
#include "latrescore/rescore.h"
#include "latrescore/scorer-client.h"
#include "latrescore/sweep.h"
#include "latrescore/wer.h"

namespace latrescore {
namespace {

enum class LogLevel { kError = 0, kWarning = 1, kInfo = 2, kDebug = 3 };

LogLevel VerbosityFromEnv() {
  const char *env = std::getenv("LATRESCORE_LOG");
  if (env == nullptr) return LogLevel::kWarning;
  std::string v(env);
  if (v == "error" || v == "0") return LogLevel::kError;
  if (v == "info" || v == "2") return LogLevel::kInfo;
  if (v == "debug" || v == "3") return LogLevel::kDebug;
  return LogLevel::kWarning;
}

void Log(LogLevel level, const std::string &msg) {
  static const LogLevel verbosity = VerbosityFromEnv();
  if (level > verbosity) return;
  static const char *kNames[] = {"ERROR", "WARNING", "LOG", "VLOG"};
  std::cerr << kNames[static_cast<int>(level)] << " (latrescore) " << msg
            << '\n';
}

struct Options {
  std::string lattices;
  std::string out;
  std::string lm;
  std::string scorer_command;
  int scorer_timeout_ms = 30000;
  std::string refs;
  std::string hyps;
  std::string corpus;
  std::string key;
  std::string format = "text";
  std::string csv;
  std::vector<std::string> test_sets;
  std::vector<double> scales = {7, 10, 13};
  std::vector<double> wips = {0, 0.5, 1};
  // Defaults follow the best reported cell: LM scale 7, WIP 0.5.
  RescoreConfig cfg{7.0, 0.5, 1.0};
  int k = 50;
  int order = 3;
  std::int64_t min_count = 0;
  double beam = 10.0;
  bool unique = false;
  int jobs = 1;
};

// Runs fn(i, worker) for i in [0, n) on `jobs` threads and returns the
// outputs in input order.  The first exception is rethrown after all workers
// finish.
std::vector<std::string> ParallelMap(
    size_t n, int jobs,
    const std::function<std::string(size_t index, int worker)> &fn) {
  std::vector<std::string> out(n);
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; i++) out[i] = fn(i, 0);
    return out;
  }
  std::mutex mu;
  size_t next = 0;
  std::exception_ptr error;
  auto work = [&](int worker) {
    while (true) {
      size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= n || error) return;
        i = next++;
      }
      try {
        out[i] = fn(i, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < jobs; w++) threads.emplace_back(work, w);
  for (std::thread &t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

void EmitAll(const std::vector<std::string> &chunks) {
  for (const std::string &c : chunks) std::cout << c;
  std::cout.flush();
}

std::vector<Lattice> LoadLattices(const Options &o, bool validate = true) {
  std::vector<Lattice> lats = ReadLattices(o.lattices, validate);
  Log(LogLevel::kInfo, "read " + std::to_string(lats.size()) +
                           " lattices from " + o.lattices);
  return lats;
}

// Writes lattices to an ark (plus .scp next to it) or as text to stdout.
void OutputLattices(const Options &o, const std::vector<Lattice> &lats) {
  if (o.out.empty()) {
    for (const Lattice &lat : lats) std::cout << WriteLatticeText(lat);
    return;
  }
  ScpIndex index = WriteArk(o.out, lats);
  std::string scp = std::filesystem::path(o.out).replace_extension(".scp").string();
  WriteScp(scp, index);
  Log(LogLevel::kInfo, "wrote " + std::to_string(lats.size()) + " lattices to " +
                           o.out + " and " + scp);
}

std::vector<std::unique_ptr<ExternalScorer>> SpawnScorers(const Options &o,
                                                          int count) {
  std::vector<std::unique_ptr<ExternalScorer>> scorers;
  for (int i = 0; i < count; i++) {
    scorers.push_back(std::make_unique<ExternalScorer>(
        o.scorer_command, std::chrono::milliseconds(o.scorer_timeout_ms)));
  }
  Log(LogLevel::kInfo, "started " + std::to_string(count) + " scorer process(es)");
  return scorers;
}

std::string FormatNBest(const Options &o, const std::string &utt,
                        const NBestList &list) {
  std::ostringstream os;
  for (const Hypothesis &h : list.hypotheses) {
    if (o.format == "tsv") {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s\t%d\t%d\t%.6f\t%.6f\t%.6f\t%.6f\t",
                    utt.c_str(), h.rank_after, h.rank_before, h.combined,
                    h.acoustic_total, h.original_lm_total, h.new_lm_total);
      os << buf;
      for (size_t i = 0; i < h.words.size(); i++)
        os << (i ? " " : "") << h.words[i];
      os << '\n';
    } else {
      os << FormatTranscriptLine(utt + "-" + std::to_string(h.rank_after),
                                 h.words)
         << '\n';
    }
  }
  return os.str();
}

int RunValidate(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o, false);
  int bad = 0;
  for (const Lattice &lat : lats) {
    ValidationReport report = Validate(lat);
    if (!report.ok()) bad++;
    std::cout << lat.meta().utterance_id << ' '
              << (report.ok() ? "OK" : "INVALID " + report.ToString()) << '\n';
  }
  return bad == 0 ? 0 : 1;
}

int RunBestPath(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o);
  EmitAll(ParallelMap(lats.size(), o.jobs, [&](size_t i, int) {
    LatticePath best = BestPath(lats[i], o.cfg);
    return FormatTranscriptLine(lats[i].meta().utterance_id, best.words) + "\n";
  }));
  return 0;
}

int RunNBest(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o);
  EmitAll(ParallelMap(lats.size(), o.jobs, [&](size_t i, int) {
    std::vector<LatticePath> paths = NBest(lats[i], o.k, o.cfg, o.unique);
    NBestList list;
    for (size_t r = 0; r < paths.size(); r++) {
      Hypothesis h;
      h.words = paths[r].words;
      h.acoustic_total = paths[r].score.acoustic_total;
      h.original_lm_total = h.new_lm_total = paths[r].score.lm_total;
      h.combined = paths[r].score.combined;
      h.rank_before = h.rank_after = static_cast<std::int32_t>(r + 1);
      list.hypotheses.push_back(std::move(h));
    }
    return FormatNBest(o, lats[i].meta().utterance_id, list);
  }));
  return 0;
}

int RunExpand(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o);
  std::vector<Lattice> out;
  for (const Lattice &lat : lats) out.push_back(ExpandForOrder(lat, o.order));
  OutputLattices(o, out);
  return 0;
}

int RunPrune(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o);
  std::vector<Lattice> out;
  for (const Lattice &lat : lats) out.push_back(Prune(lat, o.beam, o.cfg));
  OutputLattices(o, out);
  return 0;
}

int RunDot(const Options &o) {
  std::vector<Lattice> lats = LoadLattices(o);
  bool found = o.key.empty();
  for (const Lattice &lat : lats) {
    if (!o.key.empty() && lat.meta().utterance_id != o.key) continue;
    found = true;
    std::cout << ToDot(lat);
  }
  if (!found) throw Error(ErrorCode::kKeyNotFound, "key '" + o.key + "'");
  return 0;
}

int RunTrainLm(const Options &o) {
  std::vector<Sentence> corpus = ReadCorpusFile(o.corpus);
  VocabPolicy policy;
  if (o.min_count > 0) {
    policy.kind = VocabPolicy::Kind::kMinCount;
    policy.min_count = o.min_count;
  }
  NGramLM lm = TrainNGram(corpus, o.order, policy);
  lm.WriteFile(o.out);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "perplexity %.4f", Perplexity(lm, corpus));
  std::cout << "sentences " << corpus.size() << "\nvocab " << lm.vocab().size()
            << "\norder " << lm.order() << '\n'
            << buf << '\n';
  return 0;
}

int RunRescore(const Options &o) {
  NGramLM lm = NGramLM::ReadFile(o.lm);
  std::vector<Lattice> lats = LoadLattices(o);
  std::vector<Lattice> rescored(lats.size(), Lattice(1, 0, {}, {}));
  EmitAll(ParallelMap(lats.size(), o.jobs, [&](size_t i, int) {
    rescored[i] = RescoreLattice(lats[i], lm, o.cfg);
    LatticePath best = BestPath(rescored[i], o.cfg);
    return FormatTranscriptLine(lats[i].meta().utterance_id, best.words) + "\n";
  }));
  if (!o.out.empty()) OutputLattices(o, rescored);
  return 0;
}

int RunRescoreNBest(const Options &o) {
  if (o.lm.empty() && o.scorer_command.empty())
    throw CLI::ValidationError("rescore-nbest needs --lm or --scorer-command");
  std::vector<Lattice> lats = LoadLattices(o);
  std::optional<NGramLM> ngram;
  std::vector<std::unique_ptr<ExternalScorer>> scorers;
  int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(lats.size())));
  if (!o.scorer_command.empty()) {
    scorers = SpawnScorers(o, jobs);
  } else {
    ngram = NGramLM::ReadFile(o.lm);
  }
  EmitAll(ParallelMap(lats.size(), jobs, [&](size_t i, int worker) {
    const LmScorer &scorer =
        ngram ? static_cast<const LmScorer &>(*ngram) : *scorers[worker];
    NBestList list = RescoreNBest(lats[i], scorer, o.k, o.cfg);
    const std::string &utt = lats[i].meta().utterance_id;
    if (o.format == "tsv") return FormatNBest(o, utt, list);
    return FormatTranscriptLine(utt, list.hypotheses.front().words) + "\n";
  }));
  return 0;
}

int RunWer(const Options &o) {
  Transcripts refs = ReadTranscripts(o.refs);
  Transcripts hyps = ReadTranscripts(o.hyps);
  std::cout << FormatWerLine(CorpusWer(refs, hyps)) << '\n';
  return 0;
}

int RunSweep(const Options &o) {
  std::vector<TestSet> sets;
  for (const std::string &spec : o.test_sets) {
    size_t eq = spec.find('=');
    TestSet set;
    std::string path;
    if (eq == std::string::npos) {
      path = spec;
      set.name = std::filesystem::path(spec).stem().string();
    } else {
      set.name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    }
    set.lattices = ReadLattices(path);
    sets.push_back(std::move(set));
  }
  if (!o.lattices.empty()) {
    sets.push_back({std::filesystem::path(o.lattices).stem().string(),
                    ReadLattices(o.lattices)});
  }
  if (sets.empty())
    throw CLI::ValidationError("--lattices or --test-set is required");
  Transcripts refs = ReadTranscripts(o.refs);
  std::optional<NGramLM> ngram;
  std::vector<std::unique_ptr<ExternalScorer>> scorers;
  SweepLm lm;
  lm.nbest_k = o.k;
  if (!o.scorer_command.empty()) {
    scorers = SpawnScorers(o, 1);
    lm.scorer = scorers.front().get();
  } else if (!o.lm.empty()) {
    ngram = NGramLM::ReadFile(o.lm);
    lm.ngram = &*ngram;
  }
  SweepReport report = Sweep(sets, refs, o.scales, o.wips, lm, o.cfg);
  std::cout << report.ToTable();
  if (!o.csv.empty()) {
    std::ofstream os(o.csv, std::ios::binary);
    if (!os) throw Error(ErrorCode::kIoError, "cannot write " + o.csv);
    os << report.ToCsv();
  }
  return 0;
}

void AddLattices(CLI::App *cmd, Options *o, bool required = true) {
  auto *opt = cmd->add_option("--lattices", o->lattices,
                              "Lattice .scp index or text ark");
  if (required) opt->required();
}

void AddScoreConfig(CLI::App *cmd, Options *o, bool interp) {
  cmd->add_option("--lm-scale", o->cfg.lm_scale, "LM scale")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--wip", o->cfg.wip, "Word insertion penalty")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  if (interp) {
    cmd->add_option("--lm-interp", o->cfg.lm_interp,
                    "Weight of the new LM against the lattice LM scores")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }
}

void AddJobs(CLI::App *cmd, Options *o) {
  cmd->add_option("--jobs", o->jobs, "Utterances processed in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void AddOutput(CLI::App *cmd, Options *o) {
  cmd->add_option("--out", o->out,
                  "Output ark (an .scp is written beside it); default stdout");
}

void AddScorer(CLI::App *cmd, Options *o) {
  cmd->add_option("--scorer-command", o->scorer_command,
                  "External scorer command speaking the stdio JSON protocol");
  cmd->add_option("--scorer-timeout-ms", o->scorer_timeout_ms,
                  "Scorer silence before giving up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int Main(int argc, char **argv) {
  CLI::App app{"latrescore: word-lattice rescoring toolkit"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options &)> handler;
  auto bind = [&](CLI::App *cmd, int (*fn)(const Options &)) {
    cmd->callback([&handler, fn] { handler = fn; });
  };

  auto *validate = app.add_subcommand("validate", "Check lattices for structural problems");
  AddLattices(validate, &o);
  bind(validate, RunValidate);

  auto *best = app.add_subcommand("best-path", "Print the best hypothesis per lattice");
  AddLattices(best, &o);
  AddScoreConfig(best, &o, false);
  AddJobs(best, &o);
  bind(best, RunBestPath);

  auto *nbest = app.add_subcommand("nbest", "Print the k best paths per lattice");
  AddLattices(nbest, &o);
  AddScoreConfig(nbest, &o, false);
  AddJobs(nbest, &o);
  nbest->add_option("--k", o.k, "Number of paths")->check(CLI::PositiveNumber)->capture_default_str();
  nbest->add_flag("--unique", o.unique, "Skip repeated word sequences");
  nbest->add_option("--format", o.format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}))->capture_default_str();
  bind(nbest, RunNBest);

  auto *expand = app.add_subcommand("expand", "Expand lattices to unique n-gram histories");
  AddLattices(expand, &o);
  AddOutput(expand, &o);
  expand->add_option("--order", o.order, "N-gram order")->check(CLI::PositiveNumber)->capture_default_str();
  bind(expand, RunExpand);

  auto *prune = app.add_subcommand("prune", "Beam-prune lattices");
  AddLattices(prune, &o);
  AddOutput(prune, &o);
  AddScoreConfig(prune, &o, false);
  prune->add_option("--beam", o.beam, "Beam width (log)")->check(CLI::NonNegativeNumber)->capture_default_str();
  bind(prune, RunPrune);

  auto *dot = app.add_subcommand("dot", "Export lattices as Graphviz DOT");
  AddLattices(dot, &o);
  dot->add_option("--key", o.key, "Only this utterance");
  bind(dot, RunDot);

  auto *train = app.add_subcommand("train-lm", "Train a Witten-Bell n-gram model");
  train->add_option("--corpus", o.corpus, "One sentence per line")->required();
  train->add_option("--out", o.out, "Model file (NGLM v1)")->required();
  train->add_option("--order", o.order, "N-gram order")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--min-count", o.min_count, "Map rarer words to <unk> (0: closed vocabulary)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  bind(train, RunTrainLm);

  auto *rescore = app.add_subcommand("rescore", "Rescore lattices exactly with an n-gram model");
  AddLattices(rescore, &o);
  AddScoreConfig(rescore, &o, true);
  AddJobs(rescore, &o);
  AddOutput(rescore, &o);
  rescore->add_option("--lm", o.lm, "N-gram model (NGLM v1)")->required();
  bind(rescore, RunRescore);

  auto *rnbest = app.add_subcommand("rescore-nbest", "Rescore n-best lists with an n-gram model or an external scorer");
  AddLattices(rnbest, &o);
  AddScoreConfig(rnbest, &o, true);
  AddJobs(rnbest, &o);
  AddScorer(rnbest, &o);
  auto *rn_lm = rnbest->add_option("--lm", o.lm, "N-gram model (NGLM v1)");
  rnbest->add_option("--k", o.k, "N-best size")->check(CLI::PositiveNumber)->capture_default_str();
  rnbest->add_option("--format", o.format, "text (best hypothesis) or tsv (full list)")
      ->check(CLI::IsMember({"text", "tsv"}))->capture_default_str();
  rn_lm->excludes(rnbest->get_option("--scorer-command"));
  bind(rnbest, RunRescoreNBest);

  auto *wer = app.add_subcommand("wer", "Corpus word error rate");
  wer->add_option("--refs", o.refs, "Reference transcripts")->required();
  wer->add_option("--hyps", o.hyps, "Hypothesis transcripts")->required();
  bind(wer, RunWer);

  auto *sweep = app.add_subcommand("sweep", "WER over an LM-scale x WIP grid");
  AddLattices(sweep, &o, false);
  sweep->add_option("--test-set", o.test_sets, "name=lattices (repeatable)");
  sweep->add_option("--refs", o.refs, "Reference transcripts")->required();
  auto *sw_lm = sweep->add_option("--lm", o.lm, "N-gram model; omit for raw decoding only");
  AddScorer(sweep, &o);
  sw_lm->excludes(sweep->get_option("--scorer-command"));
  sweep->add_option("--scales", o.scales, "LM scales")->delimiter(',')->capture_default_str();
  sweep->add_option("--wips", o.wips, "Word insertion penalties")->delimiter(',')->capture_default_str();
  sweep->add_option("--lm-interp", o.cfg.lm_interp, "Weight of the new LM")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sweep->add_option("--k", o.k, "N-best size for external scorers")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--csv", o.csv, "Also write the grid as CSV");
  bind(sweep, RunSweep);

  try {
    app.parse(argc, argv);
    if (!handler) throw CLI::CallForHelp();
    return handler(o);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "ERROR: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error &e) {
    Log(LogLevel::kError, e.what());
    return e.code() == ErrorCode::kInvalidArgument ? 2 : 1;
  } catch (const std::exception &e) {
    Log(LogLevel::kError, e.what());
    return 1;
  }
}

}  // namespace
}  // namespace latrescore

int main(int argc, char **argv) { return latrescore::Main(argc, argv); }
