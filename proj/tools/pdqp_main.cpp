// pdqp command-line front end: instance generation, solving, training,
// evaluation tables, warm-start benchmarks, perturbation studies, and the
// gradient self-check.
//
// Exit codes: 0 success, 1 usage or input error, 2 solve hit the iteration
// limit without converging.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdqp/autodiff.hpp"
#include "pdqp/bench.hpp"
#include "pdqp/checkpoint.hpp"
#include "pdqp/errors.hpp"
#include "pdqp/gap_bound.hpp"
#include "pdqp/generator.hpp"
#include "pdqp/json_io.hpp"
#include "pdqp/net.hpp"
#include "pdqp/solver.hpp"
#include "pdqp/trainer.hpp"

namespace fs = std::filesystem;
using namespace pdqp;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int workers = 1;
  double tol = 1e-6;
  std::string format = "csv";
};

std::vector<QpInstance> load_split(const std::string& manifest_path, bool test_split) {
  const fs::path base = fs::path(manifest_path).parent_path();
  const auto entries = read_manifest_json(read_text_file(manifest_path));
  std::vector<QpInstance> out;
  for (const ManifestEntry& e : entries)
    if (e.is_test == test_split) out.push_back(load_instance_file((base / e.file).string()));
  return out;
}

NetConfig net_config_from_file(const std::string& path) {
  NetConfig cfg;
  if (path.empty()) return cfg;
  const auto j = nlohmann::ordered_json::parse(read_text_file(path));
  if (j.contains("layers")) cfg.layers = j.at("layers").get<std::size_t>();
  if (j.contains("width")) cfg.width = j.at("width").get<std::size_t>();
  if (j.contains("mlp_hidden")) cfg.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
  if (j.contains("mlp_depth")) cfg.mlp_depth = j.at("mlp_depth").get<std::size_t>();
  cfg.validate();
  return cfg;
}

TrainConfig train_config_from_file(const std::string& path) {
  TrainConfig cfg;
  if (path.empty()) return cfg;
  const auto j = nlohmann::ordered_json::parse(read_text_file(path));
  if (j.contains("lr")) cfg.lr = j.at("lr").get<double>();
  if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<std::size_t>();
  if (j.contains("batch")) cfg.batch = j.at("batch").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("loss_mode")) {
    const std::string mode = j.at("loss_mode").get<std::string>();
    if (mode == "unsupervised") cfg.loss_mode = LossMode::Unsupervised;
    else if (mode == "supervised") cfg.loss_mode = LossMode::Supervised;
    else throw ParseError("train config: loss_mode must be unsupervised|supervised");
  }
  if (j.contains("init_noise")) cfg.init_noise = j.at("init_noise").get<double>();
  cfg.validate();
  return cfg;
}

int cmd_generate(const GlobalOpts& g, const std::string& config_path, std::size_t count,
                 const std::string& out_dir) {
  GeneratorConfig base = config_path.empty() ? GeneratorConfig{10, 8, 0.5, 0.7, {4, 2}, {3, 1}, {2, 1}, 10.0, 0}
                                             : read_generator_config_json(read_text_file(config_path));
  fs::create_directories(out_dir);
  std::vector<std::string> files, names;
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorConfig cfg = base;
    cfg.seed = g.seed + i;
    const QpInstance inst = generate_synthetic(cfg);
    char fname[64];
    std::snprintf(fname, sizeof(fname), "%04zu.json", i);
    save_instance_file(inst, (fs::path(out_dir) / fname).string());
    files.emplace_back(fname);
    names.push_back(inst.name);
  }
  const auto manifest = make_split(files, names);
  write_text_file((fs::path(out_dir) / "manifest.json").string(), write_manifest_json(manifest));
  std::size_t n_test = 0;
  for (const auto& e : manifest) n_test += e.is_test ? 1 : 0;
  std::cout << "wrote " << count << " instances (" << count - n_test << " train, " << n_test
            << " test) to " << out_dir << "\n";
  return 0;
}

int cmd_solve(const GlobalOpts& g, const std::string& instance_path,
              const std::string& warm_path, std::size_t max_outer, std::size_t check_every) {
  const QpInstance inst = load_instance_file(instance_path);
  SolverConfig cfg;
  cfg.tol = g.tol;
  cfg.max_outer = max_outer;
  cfg.check_every = check_every;
  if (!warm_path.empty()) cfg.warm_start = read_point_json(read_text_file(warm_path));
  const SolveReport report = solve(inst, cfg);
  std::cout << report_json(report) << "\n";
  return report.termination == Termination::Converged ? 0 : 2;
}

int cmd_train(const GlobalOpts& g, const std::string& manifest_path, const std::string& net_path,
              const std::string& train_path, const std::string& out_ckpt,
              const std::string& out_history) {
  const NetConfig net_cfg = net_config_from_file(net_path);
  TrainConfig cfg = train_config_from_file(train_path);
  if (g.seed != 0) cfg.seed = g.seed;
  const std::vector<QpInstance> instances = load_split(manifest_path, false);

  std::vector<PrimalDualPoint> labels;
  const std::vector<PrimalDualPoint>* labels_ptr = nullptr;
  if (cfg.loss_mode == LossMode::Supervised) {
    // Reference points come from high-accuracy solves of the training split.
    SolverConfig s;
    s.tol = 1e-9;
    labels.resize(instances.size());
    parallel_for(instances.size(), g.workers,
                 [&](std::size_t i) { labels[i] = solve(instances[i], s).point; });
    labels_ptr = &labels;
  }

  const TrainResult result = train(instances, cfg, net_cfg, labels_ptr);
  save_checkpoint(result.params, out_ckpt);
  if (!out_history.empty()) write_text_file(out_history, history_csv(result.history));
  std::cout << "trained " << result.steps_run << " steps"
            << (result.early_stopped ? " (early stop)" : "") << ", final loss "
            << (result.history.empty() ? 0.0 : result.history.back().total) << "\n";
  return 0;
}

int cmd_eval(const GlobalOpts& g, const std::string& manifest_path, const std::string& ckpt_path,
             const std::string& mode, const std::string& out_csv) {
  const std::vector<QpInstance> test = load_split(manifest_path, true);
  std::vector<PrimalDualPoint> predictions(test.size());
  if (mode == "oracle") {
    // Testing hook: feeds near-exact solver points through the metrics.
    SolverConfig s;
    s.tol = 1e-9;
    parallel_for(test.size(), g.workers,
                 [&](std::size_t i) { predictions[i] = solve(test[i], s).point; });
  } else {
    const NetParams params = load_checkpoint(ckpt_path);
    parallel_for(test.size(), g.workers,
                 [&](std::size_t i) { predictions[i] = forward(test[i], params); });
  }
  const EvalRow row = eval_predictions(fs::path(manifest_path).parent_path().filename().string(),
                                       mode, test, predictions);
  const std::string csv = eval_csv({row});
  if (!out_csv.empty()) write_text_file(out_csv, csv);
  std::cout << csv;
  return 0;
}

int cmd_warmstart_bench(const GlobalOpts& g, const std::string& manifest_path,
                        const std::string& ckpt_path, const std::string& out_path) {
  const std::vector<QpInstance> test = load_split(manifest_path, true);
  const NetParams params = load_checkpoint(ckpt_path);
  const BenchReport report = warmstart_bench(test, params, g.tol, g.workers);
  const std::string body = g.format == "json" ? bench_json(report) : bench_csv(report);
  if (!out_path.empty()) write_text_file(out_path, body);
  std::cout << body;
  return 0;
}

int cmd_perturb(const GlobalOpts& g, const std::string& instance_path,
                const std::string& oracle_path, std::size_t samples, double max_radius,
                const std::string& out_csv) {
  const QpInstance inst = load_instance_file(instance_path);
  const PrimalDualPoint oracle = read_point_json(read_text_file(oracle_path));
  const auto table = perturbation_study(inst, oracle, samples, max_radius, g.seed);
  const std::string csv = perturbation_csv(table);
  if (!out_csv.empty()) write_text_file(out_csv, csv);
  std::cout << csv;
  return 0;
}

int cmd_gradcheck(const GlobalOpts& g, std::size_t n, std::size_t m, std::size_t layers,
                  std::size_t width) {
  GeneratorConfig gen;
  gen.n = n;
  gen.m = m;
  gen.density = 0.6;
  gen.feasibility = 0.5;
  gen.seed = g.seed;
  const QpInstance inst = generate_synthetic(gen);
  NetConfig cfg;
  cfg.layers = layers;
  cfg.width = width;
  const double err = gradcheck(cfg, inst, g.seed);
  std::printf("max relative gradient error: %.3e\n", err);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pdqp: restarted accelerated primal-dual QP solver, its unrolled network, "
      "and the warm-start benchmark harness"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global random seed");
  app.add_option("--workers", g.workers, "instance-level parallelism");
  app.add_option("--tol", g.tol, "termination tolerance on the max KKT residual");
  app.add_option("--format", g.format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* generate = app.add_subcommand(
      "generate", "write synthetic instances plus a manifest with a 9:1 train/test split");
  std::string gen_config, gen_out = "instances";
  std::size_t gen_count = 10;
  generate->add_option("--config", gen_config, "generator config JSON");
  generate->add_option("--count", gen_count, "number of instances");
  generate->add_option("--out", gen_out, "output directory");

  auto* solve_cmd = app.add_subcommand(
      "solve", "solve one instance (.json or .qps); prints a SolveReport as JSON");
  std::string solve_instance, solve_warm;
  std::size_t solve_max_outer = 1000, solve_check_every = 40;
  solve_cmd->add_option("instance", solve_instance, "instance path")->required();
  solve_cmd->add_option("--warm-start", solve_warm, "PrimalDualPoint JSON file");
  solve_cmd->add_option("--max-outer", solve_max_outer, "outer restart limit");
  solve_cmd->add_option("--check-every", solve_check_every, "residual check cadence");

  auto* train_cmd = app.add_subcommand(
      "train", "train on the manifest's train split; writes a checkpoint and a history CSV "
               "with header step,total,r_primal,r_dual,r_gap");
  std::string train_manifest, train_net_cfg, train_train_cfg, train_out = "model.ckpt",
                                                              train_history;
  train_cmd->add_option("--manifest", train_manifest)->required();
  train_cmd->add_option("--net-config", train_net_cfg, "net config JSON");
  train_cmd->add_option("--train-config", train_train_cfg, "train config JSON");
  train_cmd->add_option("--out", train_out, "checkpoint path");
  train_cmd->add_option("--history", train_history, "history CSV path");

  auto* eval_cmd = app.add_subcommand(
      "eval", "median residuals of checkpoint predictions on the test split; CSV header "
              "dataset,method,r_primal,r_dual,r_gap");
  std::string eval_manifest, eval_ckpt, eval_mode = "unsupervised-ckpt", eval_out;
  eval_cmd->add_option("--manifest", eval_manifest)->required();
  eval_cmd->add_option("--checkpoint", eval_ckpt, "parameter checkpoint");
  eval_cmd->add_option("--mode", eval_mode, "unsupervised-ckpt|supervised-ckpt|oracle")
      ->check(CLI::IsMember({"unsupervised-ckpt", "supervised-ckpt", "oracle"}));
  eval_cmd->add_option("--out", eval_out, "CSV path");

  auto* bench_cmd = app.add_subcommand(
      "warmstart-bench",
      "cold vs warm-started solves on the test split; CSV header "
      "name,n,m,nnz,cold_iters,cold_seconds,warm_iters,warm_seconds,improv_time,improv_iters,"
      "inference_seconds,inf_sol_ratio,error plus __mean__/__median__/__ratio_of_means__ rows");
  std::string bench_manifest, bench_ckpt, bench_out;
  bench_cmd->add_option("--manifest", bench_manifest)->required();
  bench_cmd->add_option("--checkpoint", bench_ckpt)->required();
  bench_cmd->add_option("--out", bench_out, "output path");

  auto* perturb_cmd = app.add_subcommand(
      "perturb", "perturbation study around an optimum; CSV header distance,gap");
  std::string pert_instance, pert_oracle, pert_out;
  std::size_t pert_samples = 200;
  double pert_radius = 1.0;
  perturb_cmd->add_option("instance", pert_instance)->required();
  perturb_cmd->add_option("--oracle", pert_oracle, "optimal point JSON")->required();
  perturb_cmd->add_option("--samples", pert_samples);
  perturb_cmd->add_option("--max-radius", pert_radius);
  perturb_cmd->add_option("--out", pert_out, "CSV path");

  auto* gradcheck_cmd =
      app.add_subcommand("gradcheck", "finite-difference check of the training gradients");
  std::size_t gc_n = 6, gc_m = 4, gc_layers = 3, gc_width = 4;
  gradcheck_cmd->add_option("--n", gc_n);
  gradcheck_cmd->add_option("--m", gc_m);
  gradcheck_cmd->add_option("--layers", gc_layers);
  gradcheck_cmd->add_option("--width", gc_width);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(g, gen_config, gen_count, gen_out);
    if (solve_cmd->parsed())
      return cmd_solve(g, solve_instance, solve_warm, solve_max_outer, solve_check_every);
    if (train_cmd->parsed())
      return cmd_train(g, train_manifest, train_net_cfg, train_train_cfg, train_out,
                       train_history);
    if (eval_cmd->parsed()) return cmd_eval(g, eval_manifest, eval_ckpt, eval_mode, eval_out);
    if (bench_cmd->parsed()) return cmd_warmstart_bench(g, bench_manifest, bench_ckpt, bench_out);
    if (perturb_cmd->parsed())
      return cmd_perturb(g, pert_instance, pert_oracle, pert_samples, pert_radius, pert_out);
    if (gradcheck_cmd->parsed()) return cmd_gradcheck(g, gc_n, gc_m, gc_layers, gc_width);
  } catch (const DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
