/*
 * Copyright 2026 The boundql Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Command-line front end. A database is a directory with schema.json and a
// store snapshot (store.bin).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "boundql/error.h"
#include "boundql/executor.h"
#include "boundql/insight.h"
#include "boundql/latency_store.h"
#include "boundql/operator_bench.h"
#include "boundql/slo_model.h"
#include "boundql/workloads.h"

namespace fs = std::filesystem;
using namespace boundql;

namespace {

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

struct Db {
  fs::path dir;
  Schema schema;
  std::shared_ptr<MemoryStore> store = std::make_shared<MemoryStore>();

  static Db open(const std::string& dir) {
    Db db;
    db.dir = dir;
    if (!fs::exists(db.dir / "schema.json")) throw Error("no database at " + dir + " (run load-schema --db first)");
    db.schema = schemaFromJson(readFile((db.dir / "schema.json").string()));
    if (fs::exists(db.dir / "store.bin")) db.store->loadFrom((db.dir / "store.bin").string());
    return db;
  }

  void save(const Schema& s) const {
    fs::create_directories(dir);
    writeFile((dir / "schema.json").string(), schemaToJson(s) + "\n");
    store->saveTo((dir / "store.bin").string());
  }
};

// Schema from --db or --schema; the latter is parsed DDL without data.
struct SchemaSource {
  std::string db;
  std::string ddl;

  void attach(CLI::App* cmd) {
    cmd->add_option("--db", db, "database directory");
    cmd->add_option("--schema", ddl, "DDL file (no data)");
  }

  Schema load() const {
    if (!db.empty()) return Db::open(db).schema;
    if (!ddl.empty()) return parseDdl(readFile(ddl));
    throw CLI::ValidationError("--db or --schema", "one of them is required");
  }
};

Params parseParams(const std::vector<std::string>& raw, const BoundQuery& q) {
  Params params;
  for (const auto& kv : raw) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected name=value, got '" + kv + "'");
    std::string name = kv.substr(0, eq), value = kv.substr(eq + 1);
    const ParamInfo* info = q.findParam(name);
    if (!info) throw QueryError("query has no parameter named '" + name + "'");
    if (info->list) {
      std::vector<Value> values;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) values.push_back(parseValue(item, info->type));
      params.setList(name, std::move(values));
    } else {
      params.set(name, parseValue(value, info->type));
    }
  }
  return params;
}

LatencyProfile loadProfile(const std::string& path) {
  return LatencyProfile::fromJson(readFile(path), fs::path(path).parent_path().string());
}

std::shared_ptr<KvStore> withLatency(std::shared_ptr<KvStore> store, double constantMs, const std::string& profile) {
  if (!profile.empty()) return std::make_shared<LatencyStore>(store, loadProfile(profile));
  if (constantMs > 0) return std::make_shared<LatencyStore>(store, LatencyProfile::constant(constantMs));
  return store;
}

void printRows(const std::vector<std::string>& columns, const std::vector<Tuple>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) std::cout << (i ? "\t" : "") << columns[i];
  std::cout << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "\t" : "") << r[i].toDisplay();
    std::cout << "\n";
  }
}

int64_t percentile99(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(v.size()))) - 1;
  return static_cast<int64_t>(std::ceil(v[std::min(idx, v.size() - 1)]));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-independent query compiler and executor over an ordered key/value store"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output where supported");

  // load-schema
  auto* load = app.add_subcommand("load-schema", "parse a DDL file; optionally create a database from it");
  std::string loadDdl, loadDb;
  load->add_option("ddl", loadDdl, "DDL file")->required();
  load->add_option("--db", loadDb, "database directory to create");

  // explain / check
  auto* explain = app.add_subcommand("explain", "show the physical plan, its bound and scaling class");
  std::string explainFile;
  bool explainUnsafe = false;
  SchemaSource explainSchema;
  explain->add_option("query", explainFile, "query file")->required();
  explain->add_flag("--unsafe", explainUnsafe, "allow unbounded plans");
  explainSchema.attach(explain);

  auto* check = app.add_subcommand("check", "exit 0 if the query is scale-independent");
  std::string checkFile;
  SchemaSource checkSchema;
  check->add_option("query", checkFile, "query file")->required();
  checkSchema.attach(check);

  // run
  auto* run = app.add_subcommand("run", "execute a query against a database");
  std::string runFile, runDb, runStrategy = "simple", runCursor, runProfile;
  std::vector<std::string> runParams;
  double runLatency = 0.0;
  run->add_option("query", runFile, "query file")->required();
  run->add_option("--db", runDb, "database directory")->required();
  run->add_option("--param", runParams, "name=value (lists: name=a,b,c)");
  run->add_option("--strategy", runStrategy, "lazy|simple|parallel")
      ->check(CLI::IsMember({"lazy", "simple", "parallel"}));
  run->add_option("--cursor", runCursor, "resume a paginated query");
  run->add_option("--latency-ms", runLatency, "inject a constant per-request latency");
  run->add_option("--profile", runProfile, "inject latency from a profile file");

  // write
  auto* write = app.add_subcommand("write", "insert (or delete) a tuple through the write protocol");
  std::string writeTable, writeDb;
  std::vector<std::string> writeValues;
  bool writeDelete = false;
  write->add_option("table", writeTable, "table name")->required();
  write->add_option("--db", writeDb, "database directory")->required();
  write->add_option("--values", writeValues, "column values in table order (primary key only with --delete)")
      ->required();
  write->add_flag("--delete", writeDelete, "delete by primary key");

  // seed
  auto* seed = app.add_subcommand("seed", "populate a database with the microblog workload");
  std::string seedDb;
  workloads::ScadrConfig seedCfg;
  seed->add_option("--db", seedDb, "database directory")->required();
  seed->add_option("--users", seedCfg.users, "number of users");
  seed->add_option("--thoughts", seedCfg.thoughtsPerUser, "thoughts per user");
  seed->add_option("--subscriptions", seedCfg.subscriptionsPerUser, "subscriptions per user");
  seed->add_option("--seed", seedCfg.seed, "random seed");

  // train-model
  auto* train = app.add_subcommand("train-model", "benchmark remote operators and write a model file");
  std::string trainProfile, trainOut = "model.json", trainTrace;
  OperatorBenchConfig trainCfg;
  train->add_option("--profile", trainProfile, "latency profile (JSON)")->required();
  train->add_option("--minutes", trainCfg.minutes, "simulated minutes of load");
  train->add_option("--interval", trainCfg.intervalMinutes, "interval length in minutes");
  train->add_option("--runs", trainCfg.runsPerInterval, "runs per configuration and interval");
  train->add_option("--alpha-c", trainCfg.childCardinalities, "child cardinalities")->delimiter(',');
  train->add_option("--alpha-j", trainCfg.perKeyLimits, "per-key limits")->delimiter(',');
  train->add_option("--out", trainOut, "model file to write");
  train->add_option("--trace", trainTrace, "also write the raw trace as CSV");

  // predict
  auto* predict = app.add_subcommand("predict", "predict per-interval latency quantiles and check an SLO");
  std::string predictFile, predictModel, predictSlo = "q=0.99,t=500ms,interval=10m";
  SchemaSource predictSchema;
  predict->add_option("query", predictFile, "query file")->required();
  predict->add_option("--model", predictModel, "model file")->required();
  predict->add_option("--slo", predictSlo, "e.g. q=0.99,t=500ms,interval=10m");
  predictSchema.attach(predict);

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "predicted quantile over a grid of limits");
  std::string heatFile, heatModel, heatSlo;
  std::vector<std::string> heatGrid;
  double heatQuantile = 0.99;
  bool heatCsv = false;
  SchemaSource heatSchema;
  heat->add_option("query", heatFile, "query template file")->required();
  heat->add_option("--grid", heatGrid, "two axes: limit=1..100:10 Table(attr)=1..200:20")->expected(2)->required();
  heat->add_option("--model", heatModel, "model file")->required();
  heat->add_option("--quantile", heatQuantile, "quantile to report");
  heat->add_option("--slo", heatSlo, "also recommend limits meeting this SLO");
  heat->add_flag("--csv", heatCsv, "CSV output");
  heatSchema.attach(heat);

  // bench
  auto* bench = app.add_subcommand("bench", "desk-scale workload benchmark");
  auto* scadr = bench->add_subcommand("scadr", "microblog queries at several data scales");
  bench->require_subcommand(1);
  int64_t benchUsers = 1000, benchRequests = 200, benchWorkers = 4;
  std::vector<int64_t> benchScales{1};
  std::string benchStrategy = "parallel";
  double benchLatency = 0.0;
  scadr->add_option("--users", benchUsers, "users at scale 1");
  scadr->add_option("--scale", benchScales, "scale factors, e.g. 1,4,10")->delimiter(',');
  scadr->add_option("--strategy", benchStrategy, "lazy|simple|parallel")
      ->check(CLI::IsMember({"lazy", "simple", "parallel"}));
  scadr->add_option("--requests", benchRequests, "simulated page requests per worker");
  scadr->add_option("--workers", benchWorkers, "concurrent client workers");
  scadr->add_option("--latency-ms", benchLatency, "inject a constant per-request latency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*load) {
      Schema s = parseDdl(readFile(loadDdl));
      if (!loadDb.empty()) {
        Db db;
        db.dir = loadDb;
        Engine engine(s, db.store);  // registers constraint-supporting indexes
        db.save(engine.schema());
        s = engine.schema();
      }
      if (json) {
        std::cout << schemaToJson(s) << "\n";
      } else {
        std::cout << renderDdl(s);
        for (const auto& idx : s.indexes()) std::cout << "-- index " << idx.table << idx.fieldList()
                                                 << (idx.primary ? " primary" : idx.covering ? " covering" : "") << "\n";
      }
      return 0;
    }

    if (*explain) {
      CompileOptions opts;
      opts.unsafe = explainUnsafe;
      auto cq = compile(readFile(explainFile), explainSchema.load(), opts);
      std::cout << (json ? cq.physical.toJson(&cq.bound) + "\n" : cq.explain());
      return 0;
    }

    if (*check) {
      Schema s = checkSchema.load();
      try {
        auto cq = compile(readFile(checkFile), s);
        if (json) {
          nlohmann::ordered_json j{{"scale_independent", true},
                                   {"class", std::string(toString(cq.report.scalingClass))},
                                   {"max_requests", cq.bound.maxRequests},
                                   {"max_tuples", cq.bound.maxTuples}};
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << "scale-independent: class " << toString(cq.report.scalingClass) << " (" << cq.report.reason
                    << "); requests<=" << cq.bound.maxRequests << " tuples<=" << cq.bound.maxTuples << "\n";
        }
        return 0;
      } catch (const NotScaleIndependent& e) {
        Diagnosis d = diagnose(e, s);
        if (json) {
          std::cout << d.toJson() << "\n";
        } else {
          std::cerr << checkFile << ": error: " << e.what() << "\n" << d.toText();
        }
        return kExitReject;
      }
    }

    if (*run) {
      Db db = Db::open(runDb);
      auto store = withLatency(db.store, runLatency, runProfile);
      Engine engine(db.schema, store);
      auto cq = engine.prepare(readFile(runFile));
      Params params = parseParams(runParams, cq.query());
      ExecuteOptions opts;
      opts.strategy = *strategyFromString(runStrategy);
      ExecutionStats stats;
      std::optional<PageCursor> next;
      if (cq.physical.paginated()) {
        std::optional<PageCursor> cursor;
        if (!runCursor.empty()) cursor = PageCursor::deserialize(runCursor);
        auto page = engine.executePage(cq, params, cursor, opts);
        printRows(page.columns, page.rows);
        stats = page.stats;
        next = page.cursor;
      } else {
        if (!runCursor.empty()) throw QueryError("--cursor needs a query with PAGINATE");
        auto result = engine.execute(cq, params, opts);
        printRows(result.columns, result.rows);
        stats = result.stats;
      }
      std::cerr << "-- " << stats.summary() << " rounds=" << stats.rounds << " bound: requests<=" << cq.bound.maxRequests
                << " tuples<=" << cq.bound.maxTuples << "\n";
      if (next) std::cerr << "-- next cursor: " << next->serialize() << "\n";
      if (engine.schema().indexes().size() != db.schema.indexes().size()) db.save(engine.schema());
      return 0;
    }

    if (*write) {
      Db db = Db::open(writeDb);
      Engine engine(db.schema, db.store);
      const TableDef& t = db.schema.table(writeTable);
      Tuple tuple;
      if (writeDelete) {
        auto pk = t.primaryKeyIndexes();
        if (writeValues.size() != pk.size()) throw TypeError("expected " + std::to_string(pk.size()) + " key values");
        for (std::size_t i = 0; i < pk.size(); ++i) tuple.push_back(parseValue(writeValues[i], t.columns[pk[i]].type));
      } else {
        if (writeValues.size() != t.columns.size())
          throw TypeError("expected " + std::to_string(t.columns.size()) + " values for " + t.name);
        for (std::size_t i = 0; i < t.columns.size(); ++i) tuple.push_back(parseValue(writeValues[i], t.columns[i].type));
      }
      WriteResult r = writeDelete ? engine.deleteTuple(t.name, tuple) : engine.insertTuple(t.name, tuple);
      if (!r.ok()) {
        std::cerr << "write rejected: " << toString(r.status) << ": " << r.message << "\n";
        return kExitRuntime;
      }
      db.save(engine.schema());
      std::cout << "ok\n";
      return 0;
    }

    if (*seed) {
      Db db = Db::open(seedDb);
      Engine engine(db.schema, db.store);
      workloads::seedScadr(engine, seedCfg);
      db.save(engine.schema());
      std::cout << "seeded " << seedCfg.users << " users, " << db.store->size() << " records\n";
      return 0;
    }

    if (*train) {
      trainCfg.profile = loadProfile(trainProfile);
      auto trace = benchmarkOperators(trainCfg);
      if (!trainTrace.empty()) {
        std::ofstream out(trainTrace);
        writeTraceCsv(out, trace);
      }
      ModelSet models = trainModels(trace, trainCfg.intervalMinutes * 60'000);
      models.save(trainOut);
      std::size_t keys = models.intervals.empty() ? 0 : models.intervals.front().models.size();
      std::cout << "wrote " << trainOut << ": " << models.intervals.size() << " intervals, " << keys
                << " operator models each, " << trace.size() << " samples\n";
      return 0;
    }

    if (*predict) {
      auto cq = compile(readFile(predictFile), predictSchema.load());
      ModelSet models = ModelSet::load(predictModel);
      SloSpec slo = SloSpec::parse(predictSlo);
      SloVerdict v = checkSlo(cq, models, slo);
      for (const auto& w : v.series.warnings) std::cerr << "warning: " << w << "\n";
      if (json) {
        nlohmann::ordered_json j;
        j["quantile"] = slo.quantile;
        j["threshold_ms"] = slo.thresholdMs;
        j["intervals"] = nlohmann::ordered_json::array();
        for (const auto& iq : v.series.values) j["intervals"].push_back({{"interval", iq.interval}, {"ms", iq.valueMs}});
        j["max_ms"] = v.series.maxMs();
        j["verdict"] = v.pass ? "PASS" : "FAIL";
        j["margin_ms"] = v.marginMs;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "interval\tq" << slo.quantile << "_ms\n";
        for (const auto& iq : v.series.values) std::cout << iq.interval << "\t" << iq.valueMs << "\n";
        std::cout << "max " << v.series.maxMs() << " ms; " << v.intervalsMeeting << "/" << v.intervals
                  << " intervals within " << slo.thresholdMs << " ms; " << (v.pass ? "PASS" : "FAIL") << " (margin "
                  << v.marginMs << " ms)\n";
      }
      return 0;
    }

    if (*heat) {
      Schema s = heatSchema.load();
      QueryAst ast = parseQuery(readFile(heatFile));
      ModelSet models = ModelSet::load(heatModel);
      auto rows = HeatmapAxis::parse(heatGrid.at(0));
      auto cols = HeatmapAxis::parse(heatGrid.at(1));
      if (!heatSlo.empty()) {
        SloSpec slo = SloSpec::parse(heatSlo);
        slo.quantile = heatQuantile;
        auto rec = recommendLimits(ast, s, rows, cols, models, slo);
        std::cout << (heatCsv ? rec.grid.toCsv() : rec.toText());
      } else {
        auto h = heatmap(ast, s, rows, cols, models, heatQuantile);
        std::cout << (heatCsv ? h.toCsv() : h.toTable());
      }
      return 0;
    }

    if (*scadr) {
      const Strategy strategy = *strategyFromString(benchStrategy);
      std::cout << "scale\tusers\tquery\texecutions\trequests_min\trequests_max\ttuples_max\tp99_ms\tthroughput_qps\n";
      for (int64_t scale : benchScales) {
        auto memory = std::make_shared<MemoryStore>();
        Schema schema = workloads::scadrSchema();
        workloads::ScadrConfig cfg;
        cfg.users = benchUsers * scale;
        {
          Engine loader(schema, memory);
          workloads::seedScadr(loader, cfg);
        }
        Engine engine(schema, withLatency(memory, benchLatency, ""));
        struct Q {
          std::string name;
          CompiledQuery cq;
          std::vector<double> ms;
          int64_t reqMin = INT64_MAX, reqMax = 0, tupMax = 0;
        };
        std::vector<Q> queries;
        for (auto& nq : workloads::scadrQueries()) queries.push_back({nq.name, engine.prepare(nq.text), {}});
        std::mutex mu;
        int64_t posts = 0;
        auto t0 = std::chrono::steady_clock::now();
        std::vector<std::thread> workers;
        for (int64_t w = 0; w < benchWorkers; ++w) {
          workers.emplace_back([&, w] {
            std::mt19937_64 rng(1000 + static_cast<uint64_t>(w));
            std::uniform_int_distribution<int64_t> pick(0, cfg.users - 1);
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            ExecuteOptions opts;
            opts.strategy = strategy;
            for (int64_t r = 0; r < benchRequests; ++r) {
              Params p;
              int64_t user = pick(rng);
              p.set("user", Value::string(workloads::userName(user)));
              for (auto& q : queries) {
                auto s = std::chrono::steady_clock::now();
                auto res = q.cq.physical.paginated() ? engine.executePage(q.cq, p, std::nullopt, opts).stats
                                                     : engine.execute(q.cq, p, opts).stats;
                double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s).count();
                std::lock_guard lock(mu);
                q.ms.push_back(ms);
                q.reqMin = std::min(q.reqMin, res.requests);
                q.reqMax = std::max(q.reqMax, res.requests);
                q.tupMax = std::max(q.tupMax, res.tuples);
              }
              if (coin(rng) < 0.01) {
                std::lock_guard lock(mu);
                workloads::postThought(engine, user, 2'000'000'000'000 + posts++, "posted during the benchmark");
              }
            }
          });
        }
        for (auto& t : workers) t.join();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        int64_t total = 0;
        for (const auto& q : queries) total += static_cast<int64_t>(q.ms.size());
        for (const auto& q : queries)
          std::cout << scale << "\t" << cfg.users << "\t" << q.name << "\t" << q.ms.size() << "\t" << q.reqMin << "\t"
                    << q.reqMax << "\t" << q.tupMax << "\t" << percentile99(q.ms) << "\t"
                    << static_cast<int64_t>(static_cast<double>(total) / secs) << "\n";
      }
      return 0;
    }
  } catch (const NotScaleIndependent& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitReject;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
