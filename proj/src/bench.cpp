#include "pdqp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "pdqp/errors.hpp"

namespace pdqp {

using ordered_json = nlohmann::ordered_json;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<ManifestEntry> make_split(const std::vector<std::string>& files,
                                      const std::vector<std::string>& names) {
  if (files.size() != names.size()) throw ContractViolation("make_split: size mismatch");
  std::vector<ManifestEntry> out(files.size());
  for (std::size_t i = 0; i < files.size(); ++i)
    out[i] = {files[i], names[i], (i % 10) == 9};
  return out;
}

std::string write_manifest_json(const std::vector<ManifestEntry>& entries) {
  ordered_json j;
  j["format"] = "pdqp-manifest";
  ordered_json arr = ordered_json::array();
  for (const ManifestEntry& e : entries) {
    ordered_json o;
    o["file"] = e.file;
    o["name"] = e.name;
    o["split"] = e.is_test ? "test" : "train";
    arr.push_back(o);
  }
  j["instances"] = arr;
  return j.dump();
}

std::vector<ManifestEntry> read_manifest_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    std::vector<ManifestEntry> out;
    for (const auto& o : j.at("instances")) {
      ManifestEntry e;
      e.file = o.at("file").get<std::string>();
      e.name = o.at("name").get<std::string>();
      e.is_test = o.at("split").get<std::string>() == "test";
      out.push_back(e);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

BenchReport warmstart_bench(const std::vector<QpInstance>& instances, const NetParams& params,
                            double tol, int workers, int repeats,
                            const SolverConfig& base_cfg) {
  BenchReport report;
  report.rows.resize(instances.size());

  parallel_for(instances.size(), workers, [&](std::size_t i) {
    const QpInstance& inst = instances[i];
    BenchRow& row = report.rows[i];
    row.name = inst.name;
    row.n = inst.n;
    row.m = inst.m;
    row.nnz = inst.nnz();
    try {
      // Inference, median-of-repeats timing.
      std::vector<double> inf_times;
      PrimalDualPoint prediction;
      for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        prediction = forward(inst, params);
        inf_times.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      row.inference_seconds = median(inf_times);

      SolverConfig cfg = base_cfg;
      cfg.tol = tol;
      cfg.warm_start.reset();
      std::vector<double> cold_times, warm_times;
      for (int r = 0; r < repeats; ++r) {
        row.cold = solve(inst, cfg);
        cold_times.push_back(row.cold.wall_seconds);
      }
      cfg.warm_start = prediction;
      for (int r = 0; r < repeats; ++r) {
        row.warm = solve(inst, cfg);
        warm_times.push_back(row.warm.wall_seconds);
      }
      row.cold.wall_seconds = median(cold_times);
      row.warm.wall_seconds = median(warm_times);

      row.improv_time = improvement_ratio(row.cold, row.warm, Metric::WallSeconds);
      row.improv_iters = improvement_ratio(row.cold, row.warm, Metric::Iterations);
      row.inf_sol_ratio =
          row.cold.wall_seconds > 0.0 ? row.inference_seconds / row.cold.wall_seconds : 0.0;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return report;
}

namespace {

const char* kBenchHeader =
    "name,n,m,nnz,cold_iters,cold_seconds,warm_iters,warm_seconds,improv_time,improv_iters,"
    "inference_seconds,inf_sol_ratio,error\n";

std::string bench_row_csv(const BenchRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%zu,%zu,%zu,%zu,%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                r.name.c_str(), r.n, r.m, r.nnz, r.cold.iterations, r.cold.wall_seconds,
                r.warm.iterations, r.warm.wall_seconds, r.improv_time, r.improv_iters,
                r.inference_seconds, r.inf_sol_ratio, r.error.c_str());
  return buf;
}

std::string aggregate_csv(const char* tag, const std::vector<const BenchRow*>& ok,
                          bool ratio_of_means, bool use_median) {
  auto pick = [&](auto getter) {
    std::vector<double> v;
    v.reserve(ok.size());
    for (const BenchRow* r : ok) v.push_back(getter(*r));
    if (use_median) return median(v);
    double s = 0.0;
    for (double e : v) s += e;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  const double cold_iters = pick([](const BenchRow& r) { return double(r.cold.iterations); });
  const double cold_secs = pick([](const BenchRow& r) { return r.cold.wall_seconds; });
  const double warm_iters = pick([](const BenchRow& r) { return double(r.warm.iterations); });
  const double warm_secs = pick([](const BenchRow& r) { return r.warm.wall_seconds; });
  double improv_time, improv_iters;
  if (ratio_of_means) {
    improv_time = cold_secs != 0.0 ? (cold_secs - warm_secs) / cold_secs : 0.0;
    improv_iters = cold_iters != 0.0 ? (cold_iters - warm_iters) / cold_iters : 0.0;
  } else {
    improv_time = pick([](const BenchRow& r) { return r.improv_time; });
    improv_iters = pick([](const BenchRow& r) { return r.improv_iters; });
  }
  const double inf = pick([](const BenchRow& r) { return r.inference_seconds; });
  const double ratio = pick([](const BenchRow& r) { return r.inf_sol_ratio; });
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,,,,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,\n",
                tag, cold_iters, cold_secs, warm_iters, warm_secs, improv_time, improv_iters,
                inf, ratio);
  return buf;
}

}  // namespace

std::string bench_csv(const BenchReport& report) {
  std::string out = kBenchHeader;
  std::vector<const BenchRow*> ok;
  for (const BenchRow& r : report.rows) {
    out += bench_row_csv(r);
    if (r.error.empty()) ok.push_back(&r);
  }
  if (!ok.empty()) {
    out += aggregate_csv("__mean__", ok, false, false);
    out += aggregate_csv("__median__", ok, false, true);
    out += aggregate_csv("__ratio_of_means__", ok, true, false);
  }
  return out;
}

std::string report_json(const SolveReport& report) {
  ordered_json j;
  j["termination"] = report.termination == Termination::Converged ? "converged" : "max_iter";
  j["iterations"] = report.iterations;
  j["outer_restarts"] = report.outer_restarts;
  j["wall_seconds"] = report.wall_seconds;
  j["residuals"] = {{"primal", report.final_residuals.rel_primal},
                    {"dual", report.final_residuals.rel_dual},
                    {"gap", report.final_residuals.rel_gap}};
  j["x"] = report.point.x;
  j["y"] = report.point.y;
  return j.dump();
}

std::string bench_json(const BenchReport& report) {
  ordered_json rows = ordered_json::array();
  for (const BenchRow& r : report.rows) {
    ordered_json o;
    o["name"] = r.name;
    o["n"] = r.n;
    o["m"] = r.m;
    o["nnz"] = r.nnz;
    o["cold_iters"] = r.cold.iterations;
    o["cold_seconds"] = r.cold.wall_seconds;
    o["warm_iters"] = r.warm.iterations;
    o["warm_seconds"] = r.warm.wall_seconds;
    o["improv_time"] = r.improv_time;
    o["improv_iters"] = r.improv_iters;
    o["inference_seconds"] = r.inference_seconds;
    o["inf_sol_ratio"] = r.inf_sol_ratio;
    o["error"] = r.error;
    rows.push_back(o);
  }
  ordered_json j;
  j["rows"] = rows;
  return j.dump();
}

EvalRow eval_predictions(const std::string& dataset, const std::string& method,
                         const std::vector<QpInstance>& instances,
                         const std::vector<PrimalDualPoint>& predictions) {
  if (instances.size() != predictions.size())
    throw ContractViolation("eval: instance/prediction count mismatch");
  std::vector<double> rp, rd, rg;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const KktResiduals r = full_residuals(instances[i], predictions[i]);
    rp.push_back(r.rel_primal);
    rd.push_back(r.rel_dual);
    rg.push_back(r.rel_gap);
  }
  return {dataset, method, median(rp), median(rd), median(rg)};
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out = "dataset,method,r_primal,r_dual,r_gap\n";
  char buf[320];
  for (const EvalRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g\n", r.dataset.c_str(),
                  r.method.c_str(), r.rel_primal, r.rel_dual, r.rel_gap);
    out += buf;
  }
  return out;
}

}  // namespace pdqp
