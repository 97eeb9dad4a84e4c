// Command-line front end: dataset generation, training, model conversion,
// verification suites, and inference queries. Every run writes exactly one
// JSON manifest next to its primary artifact.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnprob/data.hpp"
#include "tnprob/serialize.hpp"
#include "tnprob/train.hpp"
#include "tnprob/transforms.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

/// One manifest per run: the subcommand, every flag with defaults
/// materialized, and the produced artifact paths.
struct Manifest {
  std::string command;
  json config = json::object();
  std::vector<std::string> artifacts;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void write(const std::string& path) {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["artifacts"] = artifacts;
    j["version"] = kVersion;
    j["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_file(path, j.dump(2) + "\n");
  }
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

void check_known_vars(const Distribution& d,
                      const std::vector<std::string>& names) {
  for (const auto& n : names) {
    bool found = false;
    for (const auto& v : d.variables) found |= v.name == n;
    if (!found) throw ModelError("unknown variable: " + n);
  }
}

/// Sums named variables out of a dense distribution table.
Distribution marginalize_table(const Distribution& d,
                               const std::set<std::string>& vars) {
  std::vector<Distribution::Variable> kept;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < d.variables.size(); ++i)
    if (!vars.count(d.variables[i].name)) {
      kept.push_back(d.variables[i]);
      kept_pos.push_back(i);
    }
  std::size_t out_size = 1;
  for (const auto& v : kept) out_size *= v.dim;
  Distribution out;
  out.variables = std::move(kept);
  out.table.assign(out_size, 0.0);
  out.log_z = d.log_z;
  out.min_entry_raw = d.min_entry_raw;
  std::vector<std::size_t> idx(d.variables.size(), 0);
  for (double p : d.table) {
    std::size_t lin = 0;
    for (std::size_t k : kept_pos) lin = lin * d.variables[k].dim + idx[k];
    out.table[lin] += p;
    for (std::size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < d.variables[i].dim) break;
      idx[i] = 0;
    }
  }
  return out;
}

int cmd_gen_data(std::size_t rows, std::size_t cols, std::size_t segment_len,
                 std::uint64_t seed, const std::string& out) {
  Manifest man;
  man.command = "gen-data";
  man.config = {{"rows", rows},
                {"cols", cols},
                {"segment_len", segment_len},
                {"seed", seed},
                {"out", out}};
  auto imgs = bars_and_stripes(rows, cols);
  SequenceDataset ds = make_sequence_dataset(imgs, segment_len);
  ds.seed = seed;
  save_dataset(ds, out);
  std::cout << "wrote " << ds.sequences.size() << " sequences of length "
            << ds.seq_len << " (" << imgs.size() << " images) to " << out
            << "\n";
  man.artifacts = {out};
  man.write(out + ".manifest.json");
  return 0;
}

std::string metrics_csv(Family fam, std::size_t hidden_dim, std::size_t rep,
                        const TrainResult& r) {
  std::ostringstream os;
  os << "family,N,replication,epoch,train_nll,test_nll,wall_seconds\n";
  os.precision(17);
  for (const auto& rec : r.trajectory)
    os << family_name(fam) << "," << hidden_dim << "," << rep << ","
       << rec.epoch << "," << rec.train_nll << "," << rec.test_nll << ","
       << r.wall_seconds << "\n";
  return os.str();
}

/// Best-epoch parameters in the model file format, one entry per mixture
/// component, plus the scalar mixture logit.
std::string best_model_json(const HmmMixtureParams& p) {
  json j;
  j["mixture_family"] = family_name(p.family);
  j["hidden_dim"] = p.hidden_dim;
  j["seq_len"] = p.seq_len;
  j["mix_logit"] = p.mix_logit;
  json comps = json::array();
  if (p.family == Family::UgmMixture) {
    comps.push_back(json::parse(model_to_json(build_hmm_ugm(p, 1))));
    comps.push_back(json::parse(model_to_json(build_hmm_ugm(p, 2))));
  } else {
    comps.push_back(json::parse(model_to_json(build_hmm_ugm(p, 1))));
    comps.push_back(json::parse(model_to_json(build_hmm_bm(p))));
  }
  j["components"] = std::move(comps);
  return j.dump(2) + "\n";
}

int cmd_train(const std::string& family, std::size_t hidden_dim,
              std::size_t epochs, std::size_t replications, double lr,
              const std::string& data, const std::string& out_dir,
              std::uint64_t seed, double split_fraction) {
  Manifest man;
  man.command = "train";
  man.config = {{"family", family},           {"hidden_dim", hidden_dim},
                {"epochs", epochs},           {"replications", replications},
                {"lr", lr},                   {"data", data},
                {"out_dir", out_dir},         {"seed", seed},
                {"split_fraction", split_fraction}};
  const Family fam = family_from_name(family);
  SequenceDataset all = load_dataset(data);
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.lr = lr;

  std::vector<TrainResult> results;
  std::size_t diverged = 0;
  const std::string stem =
      out_dir + "/" + family + "_N" + std::to_string(hidden_dim);
  for (std::size_t rep = 0; rep < replications; ++rep) {
    const std::uint64_t split_seed = Rng::mix(seed, rep);
    auto [tr, te] = split(all, split_fraction, split_seed);
    const std::uint64_t init_seed =
        Rng::mix(split_seed, fam == Family::UgmMixture ? 1 : 2);
    HmmMixtureParams init =
        init_params(fam, hidden_dim, all.alphabet, all.seq_len, init_seed);
    TrainResult r = train(init, tr, te, cfg);
    if (r.diverged) ++diverged;
    const std::string base = stem + "_rep" + std::to_string(rep);
    write_file(base + ".csv", metrics_csv(fam, hidden_dim, rep, r));
    write_file(base + "_best.json", best_model_json(r.best_params));
    man.artifacts.push_back(base + ".csv");
    man.artifacts.push_back(base + "_best.json");
    std::cout << "replication " << rep << ": best epoch " << r.best_epoch
              << ", held-out NLL " << r.best_test_nll
              << (r.diverged ? " (diverged)" : "") << "\n";
    results.push_back(std::move(r));
  }

  // Aggregate over replications: mean and one standard deviation per epoch.
  std::ostringstream agg;
  agg << "epoch,mean_train_nll,std_train_nll,mean_test_nll,std_test_nll\n";
  agg.precision(17);
  for (std::size_t e = 0; e <= epochs; ++e) {
    double m[2] = {0, 0}, s[2] = {0, 0};
    std::size_t n = 0;
    for (const auto& r : results) {
      if (e >= r.trajectory.size()) continue;
      const double v[2] = {r.trajectory[e].train_nll, r.trajectory[e].test_nll};
      ++n;
      for (int k = 0; k < 2; ++k) m[k] += v[k];
    }
    if (n == 0) continue;
    for (int k = 0; k < 2; ++k) m[k] /= static_cast<double>(n);
    for (const auto& r : results) {
      if (e >= r.trajectory.size()) continue;
      const double v[2] = {r.trajectory[e].train_nll, r.trajectory[e].test_nll};
      for (int k = 0; k < 2; ++k) s[k] += (v[k] - m[k]) * (v[k] - m[k]);
    }
    for (int k = 0; k < 2; ++k)
      s[k] = n > 1 ? std::sqrt(s[k] / static_cast<double>(n - 1)) : 0.0;
    agg << e << "," << m[0] << "," << s[0] << "," << m[1] << "," << s[1]
        << "\n";
  }
  write_file(stem + "_aggregate.csv", agg.str());
  man.artifacts.push_back(stem + "_aggregate.csv");
  man.config["diverged_replications"] = diverged;
  man.write(stem + ".manifest.json");
  if (diverged == replications) {
    std::cerr << "all " << replications << " replications diverged\n";
    return 1;
  }
  return 0;
}

int cmd_convert(const std::string& from, const std::string& to,
                const std::string& out, std::uint64_t phase_seed,
                bool phase_seed_given, const std::string& assignment) {
  Manifest man;
  man.command = "convert";
  man.config = {{"from", from},
                {"to", to},
                {"out", out},
                {"phase_seed", phase_seed_given ? json(phase_seed) : json()},
                {"assignment", assignment}};
  if (assignment != "default")
    throw TransformError("unknown assignment policy: " + assignment);
  Model m = load_model(from);
  Model result;
  if (to == "ugm") {
    if (const auto* u = std::get_if<Ugm>(&m))
      result = *u;
    else if (const auto* d = std::get_if<DecoheredBM>(&m))
      result = fdbm_to_ugm(*d);
    else
      throw TransformError("cannot convert a " + model_family_name(m) +
                           " to ugm: fully-decohered required (Theorem 1)");
  } else if (to == "fdbm") {
    const auto* u = std::get_if<Ugm>(&m);
    if (!u)
      throw TransformError("fdbm conversion needs a ugm input (Theorem 1)");
    PhaseAssignment phases;
    if (phase_seed_given) {
      Rng rng(phase_seed);
      phases = random_phases(rng, u->net);
    }
    result = ugm_to_fdbm(*u, phases);
  } else if (to == "dbm") {
    if (const auto* l = std::get_if<Lps>(&m))
      result = lps_to_dbm(*l);
    else if (const auto* b = std::get_if<BornMachine>(&m))
      result = DecoheredBM{*b, {}};
    else if (const auto* d = std::get_if<DecoheredBM>(&m))
      result = *d;
    else
      throw TransformError("cannot convert a ugm to dbm directly; "
                           "convert to fdbm instead (Theorem 1)");
  } else if (to == "lps") {
    const auto* d = std::get_if<DecoheredBM>(&m);
    if (!d)
      throw TransformError(
          "lps conversion needs a dbm input (Theorem dbm_as_lps)");
    result = dbm_to_lps(*d);
  } else {
    throw TransformError("unknown target family: " + to);
  }
  save_model(result, out);
  std::cout << "wrote " << model_family_name(result) << " model to " << out
            << "\n";
  man.artifacts = {out};
  man.write(out + ".manifest.json");
  return 0;
}

int cmd_verify(const std::string& suite, std::size_t trials, bool trials_given,
               std::uint64_t seed, double tol, const std::string& report) {
  Manifest man;
  man.command = "verify";
  man.config = {{"suite", suite},
                {"trials", trials_given ? json(trials) : json("per-suite")},
                {"seed", seed},
                {"tol", tol},
                {"report", report}};
  std::vector<SuiteResult> results;
  if (trials_given) {
    results = run_suites(suite, trials, seed, tol);
  } else {
    for (const auto& name :
         suite == "all" ? suite_names() : std::vector<std::string>{suite})
      results.push_back(
          run_suite(name, default_suite_trials(name), seed, tol));
  }
  std::ostringstream os;
  bool ok = true;
  for (const auto& r : results) {
    os << r.to_string() << "\n";
    ok &= r.ok();
  }
  std::cout << os.str();
  if (!report.empty()) {
    write_file(report, os.str());
    man.artifacts = {report};
    man.write(report + ".manifest.json");
  }
  return ok ? 0 : 1;
}

int cmd_query(const std::string& model_path, const std::string& marg,
              const std::vector<std::string>& cond, const std::string& out) {
  Manifest man;
  man.command = "query";
  man.config = {{"model", model_path},
                {"marginalize", marg},
                {"condition", cond},
                {"out", out}};
  Model m = load_model(model_path);
  std::map<std::string, std::size_t> assignment;
  for (const auto& kv : cond) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ModelError("--condition expects var=outcome, got: " + kv);
    assignment[kv.substr(0, eq)] = std::stoull(kv.substr(eq + 1));
  }
  const auto marg_vars = split_commas(marg);
  Distribution d;
  if (!assignment.empty()) {
    d = condition(m, assignment);
    check_known_vars(d, marg_vars);
    if (!marg_vars.empty())
      d = marginalize_table(d, {marg_vars.begin(), marg_vars.end()});
  } else if (!marg_vars.empty()) {
    d = marginalize(m, {marg_vars.begin(), marg_vars.end()});
  } else {
    d = model_prob(m);
  }
  write_file(out, d.to_csv());
  std::cout << "wrote distribution over " << d.variables.size()
            << " variable(s) to " << out << "\n";
  man.artifacts = {out};
  man.write(out + ".manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete probabilistic modeling with tensor networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // gen-data
  std::size_t rows = 8, cols = 8, segment_len = 16;
  std::uint64_t seed = 0;
  std::string out;
  auto* gen = app.add_subcommand("gen-data", "generate a Bars and Stripes dataset");
  gen->add_option("--rows", rows, "image rows")->capture_default_str();
  gen->add_option("--cols", cols, "image cols")->capture_default_str();
  gen->add_option("--segment-len", segment_len, "raster segment length (0 = whole image)")
      ->capture_default_str();
  gen->add_option("--seed", seed, "recorded dataset seed")->capture_default_str();
  gen->add_option("--out", out, "output CSV path")->required();

  // train
  std::string family = "ugm", data, out_dir = ".";
  std::size_t hidden_dim = 4, epochs = 30, replications = 15;
  double lr = 0.01, split_fraction = 0.7;
  auto* tr = app.add_subcommand("train", "train a matched mixture model");
  tr->add_option("--family", family, "ugm or dbm")
      ->check(CLI::IsMember({"ugm", "dbm"}))
      ->capture_default_str();
  tr->add_option("--hidden-dim", hidden_dim, "hidden dimension N")->capture_default_str();
  tr->add_option("--epochs", epochs, "training epochs")->capture_default_str();
  tr->add_option("--replications", replications, "independent replications")
      ->capture_default_str();
  tr->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
  tr->add_option("--data", data, "dataset CSV")->required();
  tr->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  tr->add_option("--seed", seed, "base seed for splits and inits")->capture_default_str();
  tr->add_option("--split-fraction", split_fraction, "train fraction")
      ->capture_default_str();

  // convert
  std::string from, to, assignment = "default";
  std::uint64_t phase_seed = 0;
  auto* cv = app.add_subcommand("convert", "convert between model families");
  cv->add_option("--from", from, "input model file")->required();
  cv->add_option("--to", to, "target family")
      ->check(CLI::IsMember({"ugm", "fdbm", "lps", "dbm"}))
      ->required();
  cv->add_option("--out", out, "output model file")->required();
  auto* ps = cv->add_option("--phase-seed", phase_seed,
                            "random phases for ugm -> fdbm (default: zero phases)");
  cv->add_option("--assignment", assignment, "decohered-edge assignment policy")
      ->capture_default_str();

  // verify
  std::string suite = "all", report;
  std::size_t trials = 0;
  double tol = 0.0;
  auto* vf = app.add_subcommand("verify", "run property suites");
  vf->add_option("--suite", suite, "suite name or all")->capture_default_str();
  auto* tro = vf->add_option("--trials", trials,
                             "trials per suite (default: per-suite strength)");
  vf->add_option("--seed", seed, "suite seed")->capture_default_str();
  vf->add_option("--tol", tol, "residual tolerance (0 = suite default)")
      ->capture_default_str();
  vf->add_option("--report", report, "also write the report to this file");

  // query
  std::string model_path, marg;
  std::vector<std::string> cond;
  auto* qr = app.add_subcommand("query", "marginal / conditional queries");
  qr->add_option("--model", model_path, "model file")->required();
  qr->add_option("--marginalize", marg, "comma-separated variables to sum out");
  qr->add_option("--condition", cond, "var=outcome (1-based), repeatable");
  qr->add_option("--out", out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_gen_data(rows, cols, segment_len, seed, out);
    if (tr->parsed())
      return cmd_train(family, hidden_dim, epochs, replications, lr, data,
                       out_dir, seed, split_fraction);
    if (cv->parsed())
      return cmd_convert(from, to, out, phase_seed, ps->count() > 0,
                         assignment);
    if (vf->parsed())
      return cmd_verify(suite, trials, tro->count() > 0, seed, tol, report);
    if (qr->parsed()) return cmd_query(model_path, marg, cond, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
