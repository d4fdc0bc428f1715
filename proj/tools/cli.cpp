#include "cli.h"

#include "bdsdp/cycle.h"
#include "bdsdp/io.h"
#include "bdsdp/problems.h"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace bdsdp::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct SolveFlags {
  long long p1 = 0;
  long long pmax = 0;
  std::uint64_t seed = 1;
  double kkt_tol = kKktTol;
  double grad_tol = 1e-6;
  bool absolute_tol = false;
  int max_outer = 1000;
  bool postprocess = false;
  bool fd_hessian = false;
  bool no_hessian_check = false;
};

void add_solve_flags(CLI::App *sub, SolveFlags &f) {
  sub->add_option("--p1", f.p1, "First rank of the staircase (default d+1)");
  sub->add_option("--pmax", f.pmax, "Largest rank (default: cap of the cost class)");
  sub->add_option("--seed", f.seed, "Seed of the initial point");
  sub->add_option("--kkt-tol", f.kkt_tol, "Relative tolerance on lambda_min(S)");
  sub->add_option("--grad-tol", f.grad_tol, "Relative gradient tolerance of RTR");
  sub->add_flag("--absolute-grad-tol", f.absolute_tol,
                "Use --grad-tol as an absolute threshold");
  sub->add_option("--max-outer", f.max_outer, "RTR outer iteration cap");
  sub->add_flag("--postprocess", f.postprocess,
                "Run in-face rank reduction at the rank cap (concave costs)");
  sub->add_flag("--fd-hessian", f.fd_hessian,
                "Finite-difference Hessian-vector products");
  sub->add_flag("--no-hessian-check", f.no_hessian_check,
                "Skip the smallest Hessian eigenvalue per stage");
}

StaircaseOptions make_options(const SolveFlags &f, const BlockSpec &spec) {
  StaircaseOptions o;
  o.seed = f.seed;
  o.kkt_tol = f.kkt_tol;
  o.rtr.grad_tol = f.grad_tol;
  o.rtr.absolute_tol = f.absolute_tol;
  o.rtr.max_outer = f.max_outer;
  o.rtr.fd_hessian = f.fd_hessian;
  o.concave_postprocess = f.postprocess;
  o.hessian_check = !f.no_hessian_check;
  const Index lo = std::min<Index>(spec.d + 1, spec.n());
  if (f.p1 != 0) {
    if (f.p1 < lo || f.p1 > spec.n())
      throw InvalidArgument("invalid schedule: --p1 must lie in [d+1, n]");
    o.p1 = f.p1;
  }
  if (f.pmax != 0) {
    if (f.pmax < lo || f.pmax > spec.n())
      throw InvalidArgument("invalid schedule: --pmax must lie in [d+1, n]");
    if (f.p1 != 0 && f.pmax < f.p1)
      throw InvalidArgument("invalid schedule: --pmax below --p1");
    o.p_cap = f.pmax;
  }
  return o;
}

json options_json(const SolveFlags &f) {
  return {{"p1", f.p1},
          {"pmax", f.pmax},
          {"seed", f.seed},
          {"kkt_tol", f.kkt_tol},
          {"grad_tol", f.grad_tol},
          {"absolute_grad_tol", f.absolute_tol},
          {"max_outer", f.max_outer},
          {"postprocess", f.postprocess},
          {"fd_hessian", f.fd_hessian}};
}

void print_report(std::ostream &out, const SolveReport &rep) {
  out << "kkt: " << (rep.kkt ? "true" : "false") << '\n'
      << "cost: " << fmt(rep.cost) << '\n'
      << "p: " << rep.p << " (cap " << rep.p_cap << ")\n"
      << "numerical_rank: " << rep.numerical_rank << '\n'
      << "lambda_min_S: " << fmt(rep.lambda_min_S) << '\n'
      << "kkt_threshold: " << fmt(rep.kkt_threshold) << '\n'
      << "grad_norm: " << fmt(rep.grad_norm) << '\n';
  if (rep.bounds)
    out << "bounds: lower " << fmt(rep.bounds->lower) << " upper "
        << fmt(rep.bounds->upper) << " gap " << fmt(rep.bounds->gap) << '\n';
  if (rep.face)
    out << "face: dim " << rep.face->dim_face << " delta " << rep.face->delta
        << " upper_bound " << fmt(rep.face->upper_bound) << '\n';
  out << "stages: " << rep.stages.size() << '\n'
      << "message: " << rep.message << '\n'
      << "wall_time: " << fmt(rep.wall_time) << '\n';
}

void write_json(const std::string &path, const json &j) {
  std::ofstream f(path);
  if (!f)
    throw InvalidArgument("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

// ------------------------------------------------------------------ solve

int cmd_solve(const std::string &file, const SolveFlags &flags,
              const std::string &report_path, const std::string &trace_path,
              const std::string &factor_path, std::ostream &out) {
  const ProblemFile pf = read_problem_file(file);
  const auto cost = pf.make_cost();
  StaircaseOptions opts = make_options(flags, pf.spec);

  std::ofstream trace;
  std::optional<TraceWriter> writer;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace)
      throw InvalidArgument("cannot write '" + trace_path + "'");
    writer.emplace(trace);
    opts.rtr.callback = [&](const RtrProgress &p) { (*writer)(p); };
  }

  const SolveReport rep = solve(*cost, opts);
  print_report(out, rep);
  if (!report_path.empty()) {
    json j = report_to_json(rep);
    j["environment"] = {{"version", kVersion},
                        {"problem", file},
                        {"options", options_json(flags)}};
    write_json(report_path, j);
  }
  if (!factor_path.empty())
    write_factor_file(factor_path, rep.Y);
  return rep.kkt ? kExitKkt : kExitNotCertified;
}

// ---------------------------------------------------------------- certify

int cmd_certify(const std::string &file, const std::string &factor,
                double kkt_tol, const std::string &report_path,
                std::ostream &out) {
  const ProblemFile pf = read_problem_file(file);
  const auto cost = pf.make_cost();
  const StiefelPoint Y = read_factor_file(factor);
  if (Y.manifold().spec != pf.spec)
    throw InvalidArgument("factor dimensions do not match the problem");
  const Certificate cert = build_certificate(*cost, Y, kkt_tol);
  const RankInfo info = rank_deficiency(Y);
  json j;
  j["lambda_min_S"] = number_to_json(cert.lambda_min);
  j["kkt_threshold"] = number_to_json(cert.threshold);
  j["kkt"] = cert.kkt;
  j["cost"] = number_to_json(g(*cost, Y));
  j["residual"] = number_to_json(critical_point_residual(*cost, Y));
  j["numerical_rank"] = info.numerical_rank;
  out << "lambda_min_S: " << fmt(cert.lambda_min) << '\n'
      << "kkt: " << (cert.kkt ? "true" : "false") << '\n'
      << "cost: " << fmt(g(*cost, Y)) << '\n'
      << "residual: " << fmt(critical_point_residual(*cost, Y)) << '\n'
      << "numerical_rank: " << info.numerical_rank << '\n';
  if (cost->convexity() == ConvexityClass::Linear) {
    const SdpBounds b = sdp_bounds(*cost, Y, cert);
    out << "bounds: lower " << fmt(b.lower) << " upper " << fmt(b.upper)
        << " gap " << fmt(b.gap) << '\n';
    j["bounds"] = {{"lower", number_to_json(b.lower)},
                   {"upper", number_to_json(b.upper)},
                   {"gap", number_to_json(b.gap)}};
  }
  if (info.numerical_rank <= kFaceDenseLimit) {
    const StiefelPoint Yr =
        info.deficient ? compress_to_rank(Y, info.numerical_rank) : Y;
    const FaceReport f = face_dimension(Yr);
    out << "face: dim " << f.dim_face << " delta " << f.delta
        << " upper_bound " << fmt(f.upper_bound) << " budget "
        << negative_eigenvalue_budget(f) << '\n';
    j["face"] = {{"dim_face", f.dim_face}, {"delta", f.delta}};
  }
  if (!report_path.empty())
    write_json(report_path, j);
  return cert.kkt ? kExitKkt : kExitNotCertified;
}

// ------------------------------------------------------------------ synth

struct SynthFlags {
  std::string kind;
  long long m = 10;
  long long d = 3;
  long long n = 8;
  double sigma = 0;
  double fraction = 0;
  double eps = 1;
  double density = 0.5;
  std::string cost = "";
  std::string graph = "random";
  std::uint64_t seed = 1;
  std::string output;
};

SymBlockMatrix make_graph(const SynthFlags &f) {
  const Index n = f.n;
  if (n < 2)
    throw InvalidArgument("graph needs n >= 2");
  std::vector<Edge> edges;
  if (f.graph == "cycle") {
    for (Index i = 0; i < n; ++i)
      edges.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n), 1});
    if (n == 2)
      edges.resize(1);
  } else if (f.graph == "complete") {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        edges.push_back({i, j, 1});
  } else if (f.graph == "random") {
    if (!(f.density >= 0 && f.density <= 1))
      throw InvalidArgument("--density must lie in [0, 1]");
    std::mt19937_64 rng(f.seed);
    std::bernoulli_distribution coin(f.density);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (coin(rng))
          edges.push_back({i, j, 1});
  } else {
    throw InvalidArgument("unknown graph '" + f.graph + "'");
  }
  return graph_adjacency(n, edges);
}

int cmd_synth(const SynthFlags &f, std::ostream &out) {
  if (f.output.empty())
    throw InvalidArgument("synth needs -o FILE");
  ProblemFile pf;
  std::optional<StiefelPoint> truth;
  if (f.kind == "rotsync" || f.kind == "permsync") {
    const SyncInstance inst = f.kind == "rotsync"
                                  ? gen_rotation_sync(f.m, f.d, f.sigma, f.seed)
                                  : gen_permutation_sync(f.m, f.d, f.fraction, f.seed);
    const std::string cost =
        f.cost.empty() ? (f.kind == "rotsync" ? "linear" : "pseudo-huber") : f.cost;
    if (cost == "linear")
      pf = make_problem_file("linear", 0, inst.linear_cost().C());
    else if (cost == "pseudo-huber" || cost == "smoothed-lud")
      pf = make_problem_file(cost, f.eps, inst.H);
    else
      throw InvalidArgument("unknown cost '" + cost + "'");
    truth = inst.truth;
  } else if (f.kind == "maxcut") {
    pf = make_problem_file("linear", 0, gen_maxcut(make_graph(f)).C());
  } else if (f.kind == "cycle") {
    const CycleInstance inst = random_cycle(f.m, f.d, f.seed);
    pf = make_problem_file("linear", 0, cycle_cost(inst).C());
    truth = closed_form_solution(inst).Y;
  } else {
    throw InvalidArgument("unknown kind '" + f.kind + "'");
  }
  write_problem_file(f.output, pf);
  out << "wrote " << f.output << '\n';
  if (truth) {
    write_factor_file(f.output + ".truth", *truth);
    out << "wrote " << f.output << ".truth\n";
  }
  return kExitKkt;
}

// ------------------------------------------------------------------ bench

struct BenchFlags {
  std::string kind;
  std::vector<double> values;
  long long m = 20;
  long long d = 3;
  double sigma = 0.3;
  double density = 0.5;
  int trials = 1;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::string output;
  std::vector<double> eps_schedule{1, 1e-1, 1e-2, 1e-3};
};

struct BenchRow {
  std::string param;
  double value = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Index m = 0, d = 0, p = 0;
  double wall_time = 0;
  double cost = NAN, gap = NAN, block_mse = NAN, eig_block_mse = NAN,
         rounded_block_mse = NAN;
  Index rank = 0;
  bool kkt = false;
  std::string error;
};

const char *kBenchHeader =
    "kind,param,value,trial,seed,m,d,p,wall_time,cost,gap,block_mse,"
    "eig_block_mse,rounded_block_mse,rank,kkt,error";

std::string csv_num(double v) { return std::isnan(v) ? "" : fmt(v); }

void run_bench_row(const BenchFlags &f, BenchRow &row) {
  StaircaseOptions opts;
  opts.seed = row.seed;
  opts.hessian_check = false;
  if (f.kind == "rotsync") {
    row.param = "m";
    const SyncInstance inst = gen_rotation_sync(static_cast<Index>(row.value), f.d,
                                                f.sigma, row.seed);
    const LinearCost cost = inst.linear_cost();
    const SolveReport rep = solve(cost, opts);
    row.m = inst.spec.m;
    row.d = inst.spec.d;
    row.p = rep.p;
    row.wall_time = rep.wall_time;
    row.cost = rep.cost;
    row.gap = rep.bounds ? rep.bounds->gap : NAN;
    row.block_mse = recovery_metrics(rep.Y, inst.truth).block_mse;
    row.eig_block_mse =
        recovery_metrics(eig_baseline(inst.H, inst.spec.d), inst.truth).block_mse;
    row.rank = rep.numerical_rank;
    row.kkt = rep.kkt;
  } else if (f.kind == "permsync") {
    row.param = "fraction";
    const SyncInstance inst =
        gen_permutation_sync(f.m, f.d, row.value, row.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const ContinuationReport cr = epsilon_continuation(
        inst.H, f.eps_schedule, opts, inst.truth, /*round_permutations=*/true);
    const auto &last = cr.stages.back();
    row.m = inst.spec.m;
    row.d = inst.spec.d;
    row.p = last.report.p;
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.cost = last.report.cost;
    row.block_mse = last.metrics->block_mse;
    row.rounded_block_mse = last.rounded_metrics->block_mse;
    row.eig_block_mse =
        recovery_metrics(eig_baseline(inst.H, inst.spec.d), inst.truth).block_mse;
    row.rank = last.report.numerical_rank;
    row.kkt = last.report.kkt;
  } else if (f.kind == "maxcut") {
    row.param = "n";
    SynthFlags sf;
    sf.n = static_cast<long long>(row.value);
    sf.density = f.density;
    sf.seed = row.seed;
    const LinearCost cost = gen_maxcut(make_graph(sf));
    const SolveReport rep = solve(cost, opts);
    row.m = cost.spec().m;
    row.d = 1;
    row.p = rep.p;
    row.wall_time = rep.wall_time;
    row.cost = rep.cost;
    row.gap = rep.bounds ? rep.bounds->gap : NAN;
    row.rank = rep.numerical_rank;
    row.kkt = rep.kkt;
  } else if (f.kind == "cycle") {
    row.param = "m";
    const CycleInstance inst =
        random_cycle(static_cast<Index>(row.value), f.d, row.seed);
    const LinearCost cost = cycle_cost(inst);
    const SolveReport rep = solve(cost, opts);
    const CycleSolution sol = closed_form_solution(inst);
    row.m = inst.m;
    row.d = inst.d;
    row.p = rep.p;
    row.wall_time = rep.wall_time;
    row.cost = rep.cost;
    row.gap = rep.bounds ? rep.bounds->gap : NAN;
    row.block_mse = recovery_metrics(rep.Y, sol.Y).block_mse;
    row.rank = rep.numerical_rank;
    row.kkt = rep.kkt;
  } else {
    throw InvalidArgument("unknown bench kind '" + f.kind + "'");
  }
}

int cmd_bench(const BenchFlags &f, std::ostream &out) {
  if (f.kind != "rotsync" && f.kind != "permsync" && f.kind != "maxcut" &&
      f.kind != "cycle")
    throw InvalidArgument("unknown bench kind '" + f.kind + "'");
  if (f.values.empty())
    throw InvalidArgument("bench needs --values");
  if (f.trials < 1 || f.jobs < 1)
    throw InvalidArgument("--trials and --jobs must be positive");

  std::vector<BenchRow> rows;
  for (double v : f.values)
    for (int t = 0; t < f.trials; ++t) {
      BenchRow r;
      r.value = v;
      r.trial = t;
      r.seed = derive_seed(f.seed, rows.size());
      rows.push_back(r);
    }

  // Rows run concurrently; kernels inside a row stay serial.
  const int saved_levels = omp_get_max_active_levels();
  omp_set_max_active_levels(1);
  const auto count = static_cast<long long>(rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(f.jobs)
  for (long long k = 0; k < count; ++k) {
    BenchRow &r = rows[static_cast<std::size_t>(k)];
    try {
      run_bench_row(f, r);
    } catch (const std::exception &e) {
      r.error = e.what();
    }
  }
  omp_set_max_active_levels(saved_levels);

  std::ofstream file;
  std::ostream *csv = &out;
  if (!f.output.empty()) {
    file.open(f.output);
    if (!file)
      throw InvalidArgument("cannot write '" + f.output + "'");
    csv = &file;
  }
  *csv << kBenchHeader << '\n';
  bool failed = false;
  for (const BenchRow &r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    failed = failed || !r.error.empty();
    *csv << f.kind << ',' << r.param << ',' << fmt(r.value) << ',' << r.trial
         << ',' << r.seed << ',' << r.m << ',' << r.d << ',' << r.p << ','
         << fmt(r.wall_time) << ',' << csv_num(r.cost) << ',' << csv_num(r.gap)
         << ',' << csv_num(r.block_mse) << ',' << csv_num(r.eig_block_mse) << ','
         << csv_num(r.rounded_block_mse) << ',' << r.rank << ','
         << (r.kkt ? 1 : 0) << ',' << err << '\n';
  }
  return failed ? kExitNotCertified : kExitKkt;
}

// ------------------------------------------------------------------ cycle

int cmd_cycle(long long m, long long d, std::uint64_t seed,
              const std::vector<double> &signs, std::ostream &out) {
  CycleInstance inst;
  if (!signs.empty()) {
    std::vector<Matrix> H;
    for (double s : signs) {
      if (s != 1 && s != -1)
        throw InvalidArgument("--signs entries must be +1 or -1");
      H.push_back(Matrix::Constant(1, 1, s));
    }
    inst = make_cycle_instance(std::move(H));
  } else {
    inst = random_cycle(m, d, seed);
  }
  const CycleSolution sol = closed_form_solution(inst);
  const CycleSpectrum spec = certificate_spectrum(inst, sol);
  const LinearCost cost = cycle_cost(inst);
  StaircaseOptions opts;
  opts.seed = seed;
  opts.rtr.grad_tol = 1e-10;
  const SolveReport rep = solve(cost, opts);
  const Matrix Xs = rep.Y.matrix() * rep.Y.matrix().transpose();
  const double dx = (Xs - sol.X).norm();
  out << "m: " << inst.m << " d: " << inst.d << '\n'
      << "phases:";
  for (Index k = 0; k < inst.phases.size(); ++k)
    out << ' ' << fmt(inst.phases(k));
  out << '\n'
      << "closed_form_cost: " << fmt(g(cost, sol.Y)) << '\n'
      << "solver_cost: " << fmt(rep.cost) << '\n'
      << "delta_X: " << fmt(dx) << '\n'
      << "zero_eigenvalues: " << spec.zero_count << '\n'
      << "lambda_min_S: " << fmt(spec.lambda_min) << '\n'
      << "analytic_floor: " << fmt(spec.floor) << '\n'
      << "kkt: " << (rep.kkt ? "true" : "false") << '\n';
  return rep.kkt && dx <= 1e-6 ? kExitKkt : kExitNotCertified;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  kernels::init_from_env();
  CLI::App app{"Low-rank solver for block-diagonally constrained SDPs", "bdsdp-cli"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SolveFlags sflags;
  std::string solve_file, report_path, trace_path, factor_out;
  auto *solve_cmd = app.add_subcommand("solve", "Run the staircase on a problem file");
  solve_cmd->add_option("problem", solve_file, "Problem file")->required();
  add_solve_flags(solve_cmd, sflags);
  solve_cmd->add_option("--report", report_path, "Write the JSON report here");
  solve_cmd->add_option("--trace", trace_path, "Write the per-iteration CSV here");
  solve_cmd->add_option("--factor", factor_out, "Write the final factor here");

  SynthFlags syn;
  auto *synth_cmd = app.add_subcommand("synth", "Generate a problem file");
  synth_cmd->add_option("kind", syn.kind, "rotsync | permsync | maxcut | cycle")
      ->required();
  synth_cmd->add_option("--m", syn.m, "Number of blocks");
  synth_cmd->add_option("--d", syn.d, "Block size");
  synth_cmd->add_option("--n", syn.n, "Number of graph nodes (maxcut)");
  synth_cmd->add_option("--sigma", syn.sigma, "Noise level (rotsync)");
  synth_cmd->add_option("--fraction", syn.fraction, "Outlier fraction (permsync)");
  synth_cmd->add_option("--cost", syn.cost, "linear | pseudo-huber | smoothed-lud");
  synth_cmd->add_option("--eps", syn.eps, "Smoothing parameter of the robust costs");
  synth_cmd->add_option("--graph", syn.graph, "random | cycle | complete (maxcut)");
  synth_cmd->add_option("--density", syn.density, "Edge probability (random graph)");
  synth_cmd->add_option("--seed", syn.seed, "Seed");
  synth_cmd->add_option("-o,--output", syn.output, "Output file")->required();

  BenchFlags bf;
  auto *bench_cmd = app.add_subcommand("bench", "Run a sweep and emit CSV");
  bench_cmd->add_option("kind", bf.kind, "rotsync | permsync | maxcut | cycle")
      ->required();
  bench_cmd
      ->add_option("--values", bf.values,
                   "Sweep values: m (rotsync, cycle), outlier fraction "
                   "(permsync) or n (maxcut)")
      ->delimiter(',');
  bench_cmd->add_option("--m", bf.m, "Number of blocks (permsync)");
  bench_cmd->add_option("--d", bf.d, "Block size");
  bench_cmd->add_option("--sigma", bf.sigma, "Noise level (rotsync)");
  bench_cmd->add_option("--density", bf.density, "Edge probability (maxcut)");
  bench_cmd->add_option("--eps-schedule", bf.eps_schedule, "Continuation (permsync)")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bf.trials, "Trials per sweep value");
  bench_cmd->add_option("--jobs", bf.jobs, "Rows solved concurrently");
  bench_cmd->add_option("--seed", bf.seed,
                        "Master seed; row k uses splitmix64(seed + k)");
  bench_cmd->add_option("-o,--output", bf.output, "CSV file (default stdout)");

  std::string cert_file, cert_factor, cert_report;
  double cert_tol = kKktTol;
  auto *cert_cmd = app.add_subcommand("certify", "Check a factor for KKT optimality");
  cert_cmd->add_option("problem", cert_file, "Problem file")->required();
  cert_cmd->add_option("factor", cert_factor, "Factor file")->required();
  cert_cmd->add_option("--kkt-tol", cert_tol, "Relative tolerance on lambda_min(S)");
  cert_cmd->add_option("--report", cert_report, "Write a JSON summary here");

  long long cyc_m = 5, cyc_d = 2;
  std::uint64_t cyc_seed = 1;
  std::vector<double> cyc_signs;
  auto *cycle_cmd =
      app.add_subcommand("cycle", "Compare the solver with the closed form on a cycle");
  cycle_cmd->add_option("--m", cyc_m, "Cycle length");
  cycle_cmd->add_option("--d", cyc_d, "Block size");
  cycle_cmd->add_option("--seed", cyc_seed, "Seed");
  cycle_cmd->add_option("--signs", cyc_signs, "Explicit d = 1 measurements, e.g. 1,1,-1")
      ->delimiter(',');

  std::vector<const char *> argv;
  for (const std::string &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (*solve_cmd)
      return cmd_solve(solve_file, sflags, report_path, trace_path, factor_out, out);
    if (*synth_cmd)
      return cmd_synth(syn, out);
    if (*bench_cmd)
      return cmd_bench(bf, out);
    if (*cert_cmd)
      return cmd_certify(cert_file, cert_factor, cert_tol, cert_report, out);
    if (*cycle_cmd)
      return cmd_cycle(cyc_m, cyc_d, cyc_seed, cyc_signs, out);
  } catch (const ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const UnsolvableError &e) {
    err << "error: unsolvable: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidArgument &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DimensionError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitNotCertified;
  }
  return kExitInvalid;
}

} // namespace bdsdp::cli
