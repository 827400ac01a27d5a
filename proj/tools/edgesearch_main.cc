// Copyright 2026 The edgesearch Authors.
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

// edgesearch: command line front end for the edge search tier.
//
//   edgesearch --config site.json ingest [--mode plain|encrypted]
//   edgesearch --config site.json search --query "river bank" --user u1
//   edgesearch --config site.json serve [--host H] [--port P]
//   edgesearch --config site.json eval --suite bbc --variant both
//   edgesearch --config site.json train-interest
//   edgesearch --config site.json encrypt-corpus --out index.json
//
// Exit status: 0 success, 1 usage, 2 configuration or resources, 3 runtime.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgesearch/config.h"
#include "edgesearch/error.h"
#include "edgesearch/evalharness.h"
#include "edgesearch/service.h"

namespace {

using namespace edgesearch;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct GlobalFlags {
  std::string config = "edgesearch.json";
  std::string mode;
  std::string user = "anonymous";
  std::size_t top = 0;
};

AppConfig load_config(const GlobalFlags& g) {
  AppConfig cfg = AppConfig::load(g.config);
  cfg.apply_environment([](const char* name) { return std::getenv(name); });
  if (!g.mode.empty()) {
    auto m = parse_mode(g.mode);
    if (!m) throw ConfigError("--mode must be plain or encrypted");
    cfg.mode = *m;
  }
  if (g.top > 0) cfg.cutoff = g.top;
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << text;
}

void print_outcome(const SearchOutcome& out) {
  std::printf("%-4s %-24s %-10s %s\n", "#", "doc_id", "score", "title");
  int rank = 0;
  for (const ResultRow& r : out.rows) {
    std::printf("%-4d %-24s %-10.6f %s\n", ++rank, r.doc_id.c_str(), r.score,
                r.title.c_str());
  }
  std::printf("\n%zu retrieved, %zu shown\n", out.retrieved, out.rows.size());
  if (out.context) {
    std::printf("\ncontext:");
    for (const auto& c : out.context->context) std::printf(" %s", c.c_str());
    std::printf("\nentities:");
    for (const auto& n : out.context->name_entities) std::printf(" %s", n.c_str());
    std::printf("\n");
  }
  if (out.expanded && out.expanded->mu) std::printf("mu: %.6f\n", *out.expanded->mu);
  if (out.theta) std::printf("interest: %s\n", out.theta->theta.c_str());
  std::printf("\n%-28s %-12s %s\n", "term", "provenance", "weight");
  for (const ExpandedTerm& t : out.dispatched) {
    std::printf("%-28s %-12s %.6f\n", t.term.c_str(),
                std::string(provenance_name(t.provenance)).c_str(), t.weight);
  }
}

std::pair<std::filesystem::path, std::filesystem::path> suite_paths(
    const AppConfig& cfg, const std::string& suite, const std::string& judgments) {
  std::filesystem::path s = suite;
  if (!std::filesystem::exists(s)) s = cfg.suites_dir / (suite + ".json");
  std::filesystem::path j = judgments;
  if (j.empty()) {
    j = s.parent_path() / (s.stem().string() + ".judgments.json");
  }
  return {s, j};
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-tier semantic search over a pattern-matching backend"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "configuration file")->capture_default_str();
  app.add_option("--mode", g.mode, "override the index mode (plain|encrypted)");
  app.add_option("--user", g.user, "user id for personalisation");
  app.add_option("--top", g.top, "number of results to show");
  app.fallthrough();

  auto* ingest_cmd = app.add_subcommand("ingest", "rebuild the index from the corpus");

  auto* search_cmd = app.add_subcommand("search", "run one query and print the ranking");
  std::string query, variant_name_arg = "saed";
  search_cmd->add_option("--query,-q", query, "query text")->required();
  search_cmd->add_option("--variant", variant_name_arg, "saed or pass-through");

  auto* serve_cmd = app.add_subcommand("serve", "serve the HTTP API");
  std::string host;
  int port = -1;
  serve_cmd->add_option("--host", host, "listen address");
  serve_cmd->add_option("--port", port, "listen port (0 picks one)");

  auto* eval_cmd = app.add_subcommand("eval", "run a benchmark suite");
  std::string suite, judgments, eval_variant = "both", out_dir;
  eval_cmd->add_option("--suite", suite, "suite name or path")->required();
  eval_cmd->add_option("--judgments", judgments, "judgment file");
  eval_cmd->add_option("--variant", eval_variant, "pass-through, saed or both");
  eval_cmd->add_option("--out", out_dir, "report directory");

  auto* train_cmd = app.add_subcommand("train-interest", "train the interest predictor");

  auto* encrypt_cmd = app.add_subcommand("encrypt-corpus", "write an encrypted index");
  std::string encrypt_out;
  encrypt_cmd->add_option("--out", encrypt_out, "output index file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest_cmd->parsed()) {
      const AppConfig cfg = load_config(g);
      IngestSummary s = ingest_corpus(cfg);
      std::printf("indexed %zu documents (%zu index tokens, %s) into %s\n",
                  s.documents, s.tokens, std::string(mode_name(s.mode)).c_str(),
                  cfg.index_path().string().c_str());
      return 0;
    }
    if (encrypt_cmd->parsed()) {
      AppConfig cfg = load_config(g);
      cfg.mode = IndexMode::kEncrypted;
      cfg.validate();
      const auto key = cfg.secret_key();
      InvertedIndex idx = ingest(cfg.corpus_dir, IndexMode::kEncrypted, &*key);
      const std::filesystem::path out =
          encrypt_out.empty() ? cfg.index_path() : std::filesystem::path(encrypt_out);
      idx.save(out);
      std::printf("encrypted %zu documents into %s\n", idx.doc_count(),
                  out.string().c_str());
      return 0;
    }
    if (search_cmd->parsed()) {
      auto variant = parse_variant(variant_name_arg);
      if (!variant) {
        std::fprintf(stderr, "error: --variant must be saed or pass-through\n");
        return kExitUsage;
      }
      EdgeService service(load_config(g));
      print_outcome(service.search(g.user, query, *variant));
      return 0;
    }
    if (serve_cmd->parsed()) {
      AppConfig cfg = load_config(g);
      if (!host.empty()) cfg.host = host;
      if (port >= 0) cfg.port = port;
      EdgeService service(cfg);
      HttpServer server(service);
      if (!server.bind(cfg.host, cfg.port)) {
        std::fprintf(stderr, "error: cannot listen on %s:%d\n", cfg.host.c_str(),
                     cfg.port);
        return kExitConfig;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::printf("listening on http://%s:%d\n", cfg.host.c_str(), server.port());
      std::fflush(stdout);
      server.listen();
      return 0;
    }
    if (eval_cmd->parsed()) {
      std::vector<Variant> variants;
      if (eval_variant == "both") {
        variants = {Variant::kPassThrough, Variant::kSemantic};
      } else if (auto v = parse_variant(eval_variant)) {
        variants = {*v};
      } else {
        std::fprintf(stderr, "error: --variant must be pass-through, saed or both\n");
        return kExitUsage;
      }
      EdgeService service(load_config(g));
      const AppConfig& cfg = service.config();
      auto [suite_path, judgment_path] = suite_paths(cfg, suite, judgments);
      const BenchmarkSuite bench = BenchmarkSuite::load(suite_path);
      JudgmentFile judged;
      if (std::filesystem::exists(judgment_path)) {
        judged = JudgmentFile::load(judgment_path);
      } else {
        std::fprintf(stderr, "note: no judgments at %s; scores left empty\n",
                     judgment_path.string().c_str());
      }
      const std::filesystem::path dir =
          out_dir.empty() ? cfg.data_dir / "reports" : std::filesystem::path(out_dir);
      const auto theta = service.interest(g.user);

      std::vector<ScoreReport> reports;
      for (Variant v : variants) {
        ScoreReport r = run_benchmark(bench, service.searcher(), v, judged, theta);
        const std::string stem = r.dataset + "-" + std::string(mode_name(r.mode)) +
                                 "-" + std::string(variant_name(v));
        write_file(dir / (stem + ".json"), r.to_json());
        write_file(dir / (stem + ".txt"), r.to_table());
        std::printf("%s\n", r.to_table().c_str());
        reports.push_back(std::move(r));
      }
      if (reports.size() > 1) {
        const std::string cmp = comparison_table(reports);
        write_file(dir / (bench.dataset + "-" + std::string(mode_name(cfg.mode)) +
                          "-comparison.txt"),
                   cmp);
        std::printf("%s", cmp.c_str());
      }
      return 0;
    }
    if (train_cmd->parsed()) {
      EdgeService service(load_config(g));
      TrainSummary s = service.train_interest();
      std::printf("trained on %zu examples from %zu users, mean loss %.6f\n",
                  s.examples, s.users, s.mean_loss);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  std::cerr << app.help();
  return kExitUsage;
}
