#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdqp/instance.hpp"
#include "pdqp/net.hpp"
#include "pdqp/solver.hpp"

namespace pdqp {

/// Manifest entry for a generated instance family; instances are assigned to
/// the test split 9:1 by seed order (every tenth instance).
struct ManifestEntry {
  std::string file;
  std::string name;
  bool is_test = false;
};

std::vector<ManifestEntry> make_split(const std::vector<std::string>& files,
                                      const std::vector<std::string>& names);
std::string write_manifest_json(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest_json(const std::string& text);

/// One warm-start benchmark row. Wall-time columns are medians of `repeats`
/// runs; iteration counts are deterministic and come from a single run.
struct BenchRow {
  std::string name;
  std::size_t n = 0, m = 0, nnz = 0;
  SolveReport cold;
  SolveReport warm;
  double improv_time = 0.0;
  double improv_iters = 0.0;
  double inference_seconds = 0.0;
  double inf_sol_ratio = 0.0;  ///< inference_seconds / cold wall time
  std::string error;           ///< non-empty if this instance failed
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

BenchReport warmstart_bench(const std::vector<QpInstance>& instances, const NetParams& params,
                            double tol, int workers = 1, int repeats = 3,
                            const SolverConfig& base_cfg = {});

/// CSV with per-instance rows followed by "__mean__", "__median__" (both use
/// mean/median of the per-row improvement ratios) and "__ratio_of_means__"
/// (improvement recomputed from column means). Timing columns are the only
/// non-deterministic ones.
std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);

/// Median residuals of a method's predictions over a dataset split.
struct EvalRow {
  std::string dataset;
  std::string method;
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double rel_gap = 0.0;
};

EvalRow eval_predictions(const std::string& dataset, const std::string& method,
                         const std::vector<QpInstance>& instances,
                         const std::vector<PrimalDualPoint>& predictions);
std::string eval_csv(const std::vector<EvalRow>& rows);

/// Runs fn(i) for i in [0, count) on `workers` threads; exceptions propagate.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

std::string report_json(const SolveReport& report);

double median(std::vector<double> v);

}  // namespace pdqp
