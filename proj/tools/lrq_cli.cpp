// Command-line front end. Every subcommand reads a flat settings map (config file, then
// flags), writes its outputs plus a manifest, and can be replayed from that manifest.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "lrq/bounds.hpp"
#include "lrq/config.hpp"
#include "lrq/contour.hpp"
#include "lrq/enumeration.hpp"
#include "lrq/numfmt.hpp"
#include "lrq/randomfield.hpp"
#include "lrq/sampler.hpp"

using namespace lrq;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2;

struct Run {
  std::string sub;
  Settings s;
  std::string hash;
  std::vector<std::string> outputs;
};

std::string csv_header(const Run& r, const std::string& columns) {
  return "# lrq-csv v" + std::to_string(kCsvSchema) + " " + r.sub + " manifest=" + r.hash + "\n" + columns + "\n";
}

// Writes text to run.out, or stdout when no output path is set.
void emit(Run& r, const std::string& text) {
  const std::string out = r.s.get("run.out", "");
  if (out.empty()) {
    std::cout << text;
    return;
  }
  write_file(out, text);
  r.outputs.push_back(out);
}

MaParams ma_params(const ModelSettings& ms) {
  const int d = static_cast<int>(ms.sides.size());
  MaParams p;
  const double alpha = ms.alpha == kNearestNeighbor ? d + 1.0 : ms.alpha;
  p.a = ms.a > 0 ? ms.a : MaParams::default_a(d, alpha);
  if (ms.M > 0) {
    p.M = ms.M;
  } else {
    const InteractionSpec spec = InteractionSpec::preset(ms.interaction, ms.q);
    p.M = compute_constants(d, alpha, ms.J, ms.q, spec.m(), ms.c1, ms.norm).M_min;
  }
  return p;
}

std::vector<double> alphas_of(const Settings& s) {
  return parse_grid(s.get("run.alphas", s.get("model.alpha", "3")));
}

int cmd_contours(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const SpinConfig cfg = load_spin_config(r.s.get("run.input", ""));
  const auto fam = extract_contours(cfg, ma_params(ms));
  json j = to_json(fam, cfg);
  j["manifest_hash"] = r.hash;
  emit(r, j.dump(2) + "\n");
  std::fprintf(stderr, "contours: %zu (external %zu)\n", fam.contours.size(), external_indices(fam).size());
  return kExitOk;
}

int cmd_verify(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const InteractionSpec spec = InteractionSpec::preset(ms.interaction, ms.q);
  const int d = static_cast<int>(ms.sides.size());
  std::ostringstream out;
  out << json{{"manifest_hash", r.hash}, {"kind", "header"}}.dump() << "\n";
  bool failed = false;
  if (r.s.get("run.exhaustive", "0") == "1") {
    ExhaustiveOptions opt;
    opt.sides = ms.sides;
    opt.q = ms.q;
    opt.alphas = alphas_of(r.s);
    opt.J = ms.J;
    opt.interaction = spec;
    opt.c1 = ms.c1;
    opt.M_used = ms.M;
    const bool records = r.s.get("run.records", "0") == "1";
    if (records)
      opt.sink = [&](const ExhaustiveRecord& rec) {
        out << json{{"kind", "record"},
                    {"config_index", rec.config_index},
                    {"alpha", opt.alphas[rec.alpha_index]},
                    {"gamma_size", rec.gamma_size},
                    {"lhs", rec.lhs},
                    {"rhs", rec.rhs},
                    {"margin", rec.lhs - rec.rhs},
                    {"holds", rec.lhs >= rec.rhs - kBoundSlack}}
                   .dump()
            << "\n";
      };
    for (const auto& sum : verify_exhaustive(opt)) {
      const bool holds = sum.violations == 0;
      if (!holds && sum.mode == BoundMode::theorem) failed = true;
      json j{{"kind", "summary"},         {"alpha", sum.alpha},
             {"configurations", sum.configurations}, {"violations", sum.violations},
             {"min_margin", sum.min_margin}, {"min_ratio", sum.min_ratio},
             {"mode", to_string(sum.mode)}, {"holds", holds}};
      out << j.dump() << "\n";
      std::printf("alpha=%s configurations=%llu violations=%llu min_margin=%s mode=%s\n", num(sum.alpha).c_str(),
                  static_cast<unsigned long long>(sum.configurations),
                  static_cast<unsigned long long>(sum.violations), num(sum.min_margin).c_str(),
                  to_string(sum.mode).c_str());
    }
  } else {
    const SpinConfig cfg = load_spin_config(r.s.get("run.input", ""));
    if (ms.alpha == kNearestNeighbor) throw std::invalid_argument("verify: needs a finite alpha");
    const CouplingKernel k(ms.J, ms.alpha, cfg.window(), ms.norm);
    const auto c = compute_constants(d, ms.alpha, ms.J, ms.q, spec.m(), ms.c1, ms.norm);
    const MaParams p = ma_params(ms);
    const auto fam = extract_contours(cfg, p);
    std::size_t n = 0, bad = 0;
    for (std::size_t idx : external_indices(fam)) {
      const auto rep = verify_energy_bound(cfg, fam, idx, k, spec, p.M, c);
      ++n;
      if (!rep.holds) {
        ++bad;
        if (rep.mode == BoundMode::theorem) failed = true;
      }
      out << json{{"kind", "record"},   {"contour", idx},       {"gamma_size", rep.gamma_size},
                  {"lhs", rep.lhs},     {"rhs", rep.rhs},       {"margin", rep.margin},
                  {"holds", rep.holds}, {"mode", to_string(rep.mode)}}
                 .dump()
          << "\n";
    }
    std::printf("external contours=%zu violations=%zu\n", n, bad);
  }
  if (r.s.has("run.out")) emit(r, out.str());
  return failed ? kExitFail : kExitOk;
}

int cmd_constants(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const InteractionSpec spec = InteractionSpec::preset(ms.interaction, ms.q);
  const int d = static_cast<int>(r.s.get_int("run.d", static_cast<long long>(ms.sides.size())));
  json rows = json::array();
  for (double alpha : alphas_of(r.s)) {
    const auto c = compute_constants(d, alpha, ms.J, ms.q, spec.m(), ms.c1, ms.norm);
    rows.push_back({{"d", d},          {"alpha", alpha},     {"J", c.J},       {"q", c.q},
                    {"m", c.m},        {"a", c.a},           {"c_alpha", c.c_alpha},
                    {"kappa2", c.kappa2}, {"M_min", c.M_min}, {"c2", c.c2}, {"c1", c.c1},
                    {"beta0", c.beta0}, {"peierls_tail_at_beta0", peierls_tail(c.beta0, c, ms.q)}});
  }
  emit(r, json{{"manifest_hash", r.hash}, {"constants", rows}}.dump(2) + "\n");
  return kExitOk;
}

int cmd_enumerate(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const ModelInstance m = ms.instance();
  const auto res = exact_partition(m, ms.exterior);
  std::string text = csv_header(r, "site,color,marginal,log_marginal");
  for (std::size_t i = 0; i < res.window.size(); ++i)
    for (int c = 0; c < res.q; ++c)
      text += "\"" + to_string(res.window[i]) + "\"," + std::to_string(c) + "," + num(res.marginal(i, c)) + "," +
              num(res.log_marginal[i * res.q + c]) + "\n";
  emit(r, text);
  std::printf("log_Z=%s\n", num(res.log_Z).c_str());
  return kExitOk;
}

int cmd_census(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const int d = static_cast<int>(ms.sides.size());
  for (int side : ms.sides)
    if (side != ms.sides.front()) throw std::invalid_argument("census: window must be a cube");
  const int n_max = static_cast<int>(r.s.get_int("run.n_max", 8));
  const auto res = contour_census(d, ms.q, n_max, ms.sides.front(), ma_params(ms), ms.c1);
  std::string text = csv_header(r, "n,count,rate,bound_rate,within");
  for (const auto& row : res.rows)
    text += std::to_string(row.n) + "," + std::to_string(row.count) + "," + num(row.rate) + "," +
            num(row.bound_rate) + "," + (row.within ? "1" : "0") + "\n";
  emit(r, text);
  std::printf("classes=%zu c1_required=%s adequate=%d\n", res.classes, num(res.c1_required).c_str(),
              res.c1_adequate ? 1 : 0);
  return kExitOk;
}

int cmd_simulate(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  SweepOptions o;
  o.d = static_cast<int>(r.s.get_int("run.d", 2));
  o.L = static_cast<int>(r.s.get_int("run.L", 32));
  o.q = ms.q;
  o.alpha = ms.alpha;
  o.J = ms.J;
  o.interaction = ms.interaction;
  o.field = ms.field;
  o.field_params = ms.field_params;
  o.betas = parse_grid(r.s.get("run.beta_grid", num(ms.beta)));
  o.replicas = static_cast<int>(r.s.get_int("run.replicas", 8));
  o.sweeps = static_cast<int>(r.s.get_int("run.sweeps", 2000));
  o.burn_in = static_cast<int>(r.s.get_int("run.burn_in", o.sweeps / 10));
  o.seed = r.s.get_u64("run.seed", 1);
  o.algorithm = parse_algorithm(r.s.get("run.algorithm", "heat_bath"));
  o.ground_above = r.s.get_double("run.ground_above", 0.0);
  if (ms.field == FieldKind::gaussian) {
    o.disorder_seeds.clear();
    for (double v : parse_grid(r.s.get("run.disorder_seeds", "1"))) o.disorder_seeds.push_back(static_cast<std::uint64_t>(v));
  }
  std::string text = csv_header(r, "beta,L,alpha,q,field,disorder_seed,mu_hat,stderr,ess,acceptance");
  for (const auto& row : phase_sweep(o))
    text += num(row.beta) + "," + std::to_string(row.L) + "," + num(row.alpha) + "," + std::to_string(row.q) + ",\"" +
            row.field + "\"," + std::to_string(row.disorder_seed) + "," + num(row.mu_hat) + "," + num(row.stderr_) +
            "," + num(row.ess) + "," + num(row.acceptance) + "\n";
  emit(r, text);
  return kExitOk;
}

int cmd_randomfield(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const ModelInstance m = ms.instance();
  TailOptions t;
  t.beta = ms.beta;
  t.epsilon = r.s.get_double("run.epsilon", r.s.get_double("field.epsilon", 0.1));
  t.draws = static_cast<int>(r.s.get_int("run.draws", 10000));
  t.seed = r.s.get_u64("run.seed", 1);
  t.lambdas = parse_grid(r.s.get("run.lambda_grid", "0:0.05:1"));
  const int instances = static_cast<int>(r.s.get_int("run.instances", 1));
  std::string text = csv_header(r, "instance,lambda,empirical,bound,slack,within");
  bool ok = true;
  for (int inst = 0; inst < instances; ++inst) {
    // A from a seeded random configuration of the window
    std::mt19937_64 gen(replica_seed(t.seed, 1000003u + inst));
    std::vector<Color> spins(m.window().size());
    for (auto& c : spins) c = static_cast<Color>(gen() % ms.q);
    const auto A = partition_from_config(SpinConfig(m.window(), ms.q, 0, spins));
    TailOptions ti = t;
    ti.seed = replica_seed(t.seed, inst);
    const auto rep = delta_tail_check(A, m.kernel, m.interaction, ti);
    for (const auto& row : rep.rows)
      text += std::to_string(inst) + "," + num(row.lambda) + "," + num(row.empirical) + "," + num(row.bound) + "," +
              num(row.slack) + "," + (row.within ? "1" : "0") + "\n";
    ok = ok && rep.all_within();
    std::printf("instance %d: mean Delta=%s (se %s) tails within bound: %s\n", inst, num(rep.mean).c_str(),
                num(rep.mean_se).c_str(), rep.all_within() ? "yes" : "no");
  }
  emit(r, text);
  return ok ? kExitOk : kExitFail;
}

int cmd_griffiths(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  GriffithsOptions g;
  g.interaction = InteractionSpec::preset(ms.interaction, ms.q);
  g.J = ms.J;
  g.alpha = ms.alpha;
  g.trials = static_cast<int>(r.s.get_int("run.trials", 50));
  g.seed = r.s.get_u64("run.seed", 1);
  const auto rep = griffiths_checks(g);
  json j{{"manifest_hash", r.hash}, {"skipped", rep.skipped}, {"reason", rep.reason}, {"cases", rep.cases},
         {"violations", std::vector<int>(rep.violations, rep.violations + 4)},
         {"worst", std::vector<double>(rep.worst, rep.worst + 4)}};
  emit(r, j.dump(2) + "\n");
  if (rep.skipped) {
    std::printf("skipped: %s\n", rep.reason.c_str());
    return kExitOk;
  }
  std::printf("cases=%d violations=%d,%d,%d,%d\n", rep.cases, rep.violations[0], rep.violations[1], rep.violations[2],
              rep.violations[3]);
  return rep.all_hold() ? kExitOk : kExitFail;
}

int cmd_peierls(Run& r) {
  const ModelSettings ms = ModelSettings::from(r.s);
  const InteractionSpec spec = InteractionSpec::preset(ms.interaction, ms.q);
  const int d = static_cast<int>(ms.sides.size());
  const CouplingKernel k(ms.J, ms.alpha, ms.window(), ms.norm);
  const auto c = compute_constants(d, ms.alpha, ms.J, ms.q, spec.m(), ms.c1, ms.norm);
  std::vector<double> betas;
  if (r.s.has("run.beta_grid")) {
    betas = parse_grid(r.s.get("run.beta_grid", ""));
  } else {
    for (double f : {1.0, 1.5, 2.0, 4.0}) betas.push_back(f * c.beta0);
  }
  std::string text = csv_header(r, "beta,exact,log_exact,bound,log_bound,holds");
  bool ok = true;
  for (const auto& row : peierls_comparison(k, spec, c, betas)) {
    text += num(row.beta) + "," + num(row.exact) + "," + num(row.log_exact) + "," + num(row.bound) + "," +
            num(row.log_bound) + "," + (row.holds ? "1" : "0") + "\n";
    ok = ok && row.holds;
  }
  emit(r, text);
  return ok ? kExitOk : kExitFail;
}

const std::map<std::string, std::function<int(Run&)>> kCommands = {
    {"contours", cmd_contours}, {"verify", cmd_verify},   {"constants", cmd_constants},
    {"enumerate", cmd_enumerate}, {"census", cmd_census}, {"simulate", cmd_simulate},
    {"randomfield", cmd_randomfield}, {"griffiths", cmd_griffiths}, {"peierls", cmd_peierls}};

int execute(Run& r, int threads) {
  r.hash = Manifest{r.sub, r.s.to_json()}.hash();
  const auto t0 = std::chrono::steady_clock::now();
  const int code = kCommands.at(r.sub)(r);
  Manifest man{r.sub, r.s.to_json(), r.outputs, threads,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
  const std::string out = r.s.get("run.out", "");
  if (!out.empty()) write_file(out + ".manifest.json", man.to_json().dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range q-state spin models: contours, energy bounds, enumeration, sampling"};
  app.require_subcommand(0, 1);
  int threads = omp_get_max_threads();
  std::string replay;
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_option("--replay", replay, "re-run from a manifest file")->check(CLI::ExistingFile);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::string> overrides;
  std::map<std::string, std::string> config_path;
  auto key = [&](CLI::App* sub, const std::string& flag, const std::string& k, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&overrides, k](const std::string& v) { overrides[k] = v; }, help);
  };
  auto flag = [&](CLI::App* sub, const std::string& f, const std::string& k, const std::string& help) {
    sub->add_flag_function(f, [&overrides, k](std::int64_t) { overrides[k] = "1"; }, help);
  };
  auto model_flags = [&](CLI::App* sub) {
    sub->add_option_function<std::string>("--config", [&config_path](const std::string& v) { config_path["path"] = v; },
                                          "INI or JSON settings")
        ->check(CLI::ExistingFile);
    key(sub, "--window", "model.window", "window sides, e.g. 4x4");
    key(sub, "--q", "model.q", "number of colors");
    key(sub, "--interaction", "model.interaction", "potts or clock");
    key(sub, "--J", "model.J", "coupling strength");
    key(sub, "--alpha", "model.alpha", "decay exponent (list allowed where noted), or nn");
    key(sub, "--norm", "model.norm", "l1, l2 or linf");
    key(sub, "--beta", "model.beta", "inverse temperature");
    key(sub, "--M", "model.M", "partition scale M (default M_min)");
    key(sub, "--a", "model.a", "partition exponent a");
    key(sub, "--c1", "model.c1", "contour entropy constant");
    key(sub, "--field", "field.kind", "zero, decaying, truncated or gaussian");
    key(sub, "--h-star", "field.h_star", "field amplitude");
    key(sub, "--delta", "field.delta", "field decay exponent");
    key(sub, "--R", "field.R", "truncation radius");
    key(sub, "--epsilon", "field.epsilon", "random field strength");
    key(sub, "--field-seed", "field.seed", "random field seed");
    key(sub, "--out", "run.out", "output file");
    key(sub, "--seed", "run.seed", "seed");
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : kCommands) {
    (void)fn;
    subs[name] = app.add_subcommand(name);
    model_flags(subs[name]);
  }
  subs["contours"]->description("extract contours of a configuration");
  key(subs["contours"], "--input", "run.input", "configuration JSON");
  subs["verify"]->description("energy bound checks");
  key(subs["verify"], "--input", "run.input", "configuration JSON");
  flag(subs["verify"], "--exhaustive", "run.exhaustive", "every configuration of the window");
  flag(subs["verify"], "--records", "run.records", "one JSONL record per configuration");
  key(subs["verify"], "--alphas", "run.alphas", "alpha list");
  subs["constants"]->description("constants of the energy bound and Peierls argument");
  key(subs["constants"], "--d", "run.d", "dimension");
  key(subs["constants"], "--alphas", "run.alphas", "alpha list");
  subs["enumerate"]->description("exact marginals by enumeration");
  subs["census"]->description("contour counts by size");
  key(subs["census"], "--n-max", "run.n_max", "largest contour size");
  subs["simulate"]->description("Monte Carlo sweep over beta");
  key(subs["simulate"], "--beta-grid", "run.beta_grid", "a:step:b or list");
  key(subs["simulate"], "--L", "run.L", "side length");
  key(subs["simulate"], "--d", "run.d", "dimension");
  key(subs["simulate"], "--replicas", "run.replicas", "replicas per beta");
  key(subs["simulate"], "--sweeps", "run.sweeps", "sweeps per replica");
  key(subs["simulate"], "--burn-in", "run.burn_in", "burn-in sweeps");
  key(subs["simulate"], "--algorithm", "run.algorithm", "metropolis or heat_bath");
  key(subs["simulate"], "--ground-above", "run.ground_above", "start from the ground state at or above this beta");
  key(subs["simulate"], "--disorder-seeds", "run.disorder_seeds", "random field seeds");
  subs["randomfield"]->description("tail check of the field-permutation statistic");
  key(subs["randomfield"], "--draws", "run.draws", "field draws per instance");
  key(subs["randomfield"], "--lambda-grid", "run.lambda_grid", "a:step:b or list");
  key(subs["randomfield"], "--instances", "run.instances", "number of partitions");
  subs["griffiths"]->description("correlation inequality checks by enumeration");
  key(subs["griffiths"], "--trials", "run.trials", "sampled cases");
  subs["peierls"]->description("exact disagreement probability against the Peierls tail");
  key(subs["peierls"], "--beta-grid", "run.beta_grid", "a:step:b or list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  omp_set_num_threads(threads);

  Run run;
  try {
    if (!replay.empty()) {
      const Manifest m = Manifest::from_json(json::parse(read_file(replay)));
      if (!kCommands.count(m.subcommand)) throw std::invalid_argument("manifest: unknown subcommand");
      run.sub = m.subcommand;
      for (const auto& [k, v] : m.config.items()) run.s.set(k, v.get<std::string>());
    } else {
      for (const auto& [name, sub] : subs)
        if (sub->parsed()) run.sub = name;
      if (run.sub.empty()) {
        std::cerr << app.help();
        return kExitUsage;
      }
      if (config_path.count("path")) run.s = Settings::load(config_path["path"]);
      for (const auto& [k, v] : overrides) run.s.set(k, v);
    }
    return execute(run, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
