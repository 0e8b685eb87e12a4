#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sympcoh/applications.hpp"
#include "sympcoh/coherence.hpp"
#include "sympcoh/discord_map.hpp"
#include "sympcoh/ensembles.hpp"
#include "sympcoh/io.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh::cli {
namespace {

struct Options {
  int threads = 1;
  double tol = kDefaultTol;

  std::string cm_path;
  std::optional<int> csv_m;  // --m on subcommands that read a covariance file
  std::string out_path;
  std::string csv_path;
  std::string gate_path;
  std::string config_path;

  double E = 0.0;
  int m = 1;
  double eta = 1.0;
  std::string kind = "orthogonal";
  std::size_t samples = 1000;
  std::size_t trials = 10000;
  std::uint64_t seed = kDefaultSeed;
};

struct Result {
  json body;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
};

GaussianState load(const Options& o) { return load_state(o.cm_path, o.csv_m, o.tol); }

json cm_parameters(const Options& o) {
  json p{{"cm", o.cm_path}};
  if (o.csv_m) p["csv_m"] = *o.csv_m;
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write '" + path + "'");
  f << text;
  if (!f) throw FormatError("error writing '" + path + "'");
}

json vec(const std::vector<double>& xs) { return json(xs); }

Result cmd_validate(const Options& o) {
  Result r{{}, cm_parameters(o), {}};
  try {
    const GaussianState s = load(o);
    r.body = {{"valid", true},
              {"m", s.modes()},
              {"symplectic_eigenvalues", vec(symplectic_eigenvalues(s.cov()))},
              {"pure", is_pure(s.cov())}};
  } catch (const InvalidCovariance& e) {
    json violations = json::array();
    for (const auto& v : e.report().violations) {
      violations.push_back({{"invariant", std::string(invariant_name(v.invariant))}, {"magnitude", v.magnitude}});
    }
    r.body = {{"valid", false}, {"violations", violations}};
  }
  return r;
}

Result cmd_coherence(const Options& o) {
  const GaussianState s = load(o);
  const CoherenceReport rep = coherence_report(s.cov());
  Result r{{}, cm_parameters(o), {}};
  r.body = {{"c", rep.c},
            {"hs_distance_sq_to_free", rep.hs_distance_sq_to_free},
            {"free", is_free(s.cov(), o.tol)},
            {"closest_free", state_to_json(GaussianState(rep.closest_free))}};
  return r;
}

Result cmd_maxsc(const Options& o) {
  Result r{{}, {{"E", o.E}, {"m", o.m}}, {}};
  r.body = {{"E", o.E}, {"m", o.m}, {"c_max", max_symplectic_coherence(o.E, o.m)}};
  return r;
}

Result cmd_msc(const Options& o) {
  const MscSpec spec = MscSpec::canonical(o.E, o.m);
  const GaussianState s = msc_state(spec);
  json doc = state_to_json(s);
  json summary{{"E", o.E},
               {"m", o.m},
               {"r", spec.r},
               {"trace", s.cov().trace()},
               {"c", symplectic_coherence(s.cov())},
               {"c_max", max_symplectic_coherence(o.E, o.m)}};
  Result r{{}, {{"E", o.E}, {"m", o.m}}, {}};
  if (!o.out_path.empty()) {
    write_file(o.out_path, doc.dump(2) + "\n");
    r.parameters["output"] = o.out_path;
    summary["file"] = o.out_path;
    r.body = std::move(summary);
  } else {
    doc["msc"] = std::move(summary);
    r.body = std::move(doc);
  }
  return r;
}

Result emit_state(const Options& o, Result r, const GaussianState& s) {
  json doc = state_to_json(s);
  doc["c"] = symplectic_coherence(s.cov());
  if (!o.out_path.empty()) {
    write_file(o.out_path, state_to_json(s).dump(2) + "\n");
    r.parameters["output"] = o.out_path;
  }
  r.body = std::move(doc);
  return r;
}

Result cmd_apply(const Options& o) {
  const GaussianState s = load(o);
  const json gate_doc = parse_json(read_text(o.gate_path), o.gate_path);
  const GateOrLoss gate = gate_from_json(gate_doc, s.modes());
  const GaussianState out = std::holds_alternative<SympGate>(gate)
                                ? apply(std::get<SympGate>(gate), s)
                                : apply_loss_state(s, std::get<LossSpec>(gate).eta);
  json params = cm_parameters(o);
  params["gate"] = gate_doc;
  return emit_state(o, Result{{}, params, {}}, out);
}

Result cmd_loss(const Options& o) {
  const GaussianState s = load(o);
  json params = cm_parameters(o);
  params["eta"] = o.eta;
  return emit_state(o, Result{{}, params, {}}, apply_loss_state(s, o.eta));
}

Result cmd_discord(const Options& o) {
  const GaussianState s = load(o);
  const DiscordImage img = to_density(s.cov());
  const DiscordRelation rel = coherence_discord_relation_check(s.cov());
  Result r{{}, cm_parameters(o), {}};
  r.body = {{"c", rel.c},
            {"D_G", rel.discord},
            {"relation_residual", rel.residual},
            {"classical_quantum", is_classical_quantum(img, o.tol)},
            {"c_scale", img.c_scale}};
  return r;
}

Result cmd_ensemble(const Options& o) {
  EnsembleConfig cfg{o.m, o.E, o.samples, o.seed, parse_ensemble_kind(o.kind), o.threads};
  const bool keep = !o.csv_path.empty();
  const EnsembleStats st = ensemble_nu_sq(cfg, keep);
  if (keep) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "index,nu_sq,c\n";
    for (std::size_t i = 0; i < st.samples.size(); ++i) csv << i << ',' << st.samples[i].nu_sq << ',' << st.samples[i].c << '\n';
    write_file(o.csv_path, csv.str());
  }
  Result r{{}, {{"m", o.m}, {"E", o.E}, {"kind", o.kind}, {"samples", o.samples}}, o.seed};
  if (keep) r.parameters["csv"] = o.csv_path;
  r.body = {{"kind", o.kind},
            {"mean_nu_sq", st.mean_nu_sq},
            {"std_error", st.std_error},
            {"S1_hat", st.s1_hat},
            {"S2_hat", st.s2_hat},
            {"analytic_mean", st.analytic_mean},
            {"formula_residual", st.formula_residual},
            {"formula_residual_std_error", st.formula_residual_std_error}};
  return r;
}

Result cmd_discriminate(const Options& o) {
  const json doc = parse_json(read_text(o.config_path), o.config_path);
  const std::filesystem::path base =
      o.config_path == "-" ? std::filesystem::path() : std::filesystem::path(o.config_path).parent_path();
  DiscriminationConfig cfg = discrimination_config_from_json(doc, base);
  cfg.threads = o.threads;
  cfg.keep_trials = !o.csv_path.empty();
  const DiscriminationReport rep = run_discrimination(cfg);
  if (cfg.keep_trials) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "trial,true_channel,predicted,estimate\n";
    for (std::size_t t = 0; t < rep.per_trial.size(); ++t) {
      const auto& x = rep.per_trial[t];
      csv << t << ',' << x.true_channel << ',' << x.predicted << ',' << x.estimate << '\n';
    }
    write_file(o.csv_path, csv.str());
  }
  Result r{report_to_json(rep), {{"config", doc}}, cfg.seed};
  r.body["delta"] = cfg.delta;
  r.body["channels"] = {describe(cfg.channels[0]), describe(cfg.channels[1])};
  return r;
}

Result cmd_qfi(const Options& o) {
  const GaussianState s = load(o);
  const QfiResult q = qfi_displacement(s.cov());
  Result r{{}, cm_parameters(o), {}};
  r.body = {{"qfi", q.value}, {"exact", q.exact}, {"bound_kind", q.exact ? "exact" : "upper_bound"}};
  return r;
}

Result cmd_tvd(const Options& o) {
  const json doc = parse_json(read_text(o.config_path), o.config_path);
  if (!doc.is_object()) throw FormatError("tvd config: expected a JSON object");
  Result r{json::object(), {{"config", doc}}, {}};
  auto num = [&](const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) throw FormatError(std::string("tvd config: missing number '") + key + "'");
    return it->get<double>();
  };
  if (doc.contains("var1") || doc.contains("var2")) {
    r.body["tvd_exact"] = tvd_exact_zero_mean_normals(num(doc, "var1"), num(doc, "var2"));
  }
  if (const auto it = doc.find("ppmm"); it != doc.end()) {
    const json& p = *it;
    Matrix v(2, 2);
    v << num(p, "sigma_x"), 0.0, 0.0, num(p, "sigma_p");
    const CovMat cov(v, o.tol);
    const double sxp1 = num(p, "sxp1");
    const double sxp2 = num(p, "sxp2");
    const double theta = num(p, "theta");
    const TvdBound b = tvd_bound_ppmm(cov, sxp1, sxp2, theta);
    const double c = std::cos(theta), s = std::sin(theta);
    const double diag = v(0, 0) * c * c + v(1, 1) * s * s;
    const double var1 = diag + sxp1 * std::sin(2.0 * theta);
    const double var2 = diag + sxp2 * std::sin(2.0 * theta);
    json out{{"bound_stated", b.stated}, {"bound_inflated", b.inflated}, {"var1", var1}, {"var2", var2}};
    if (var1 > 0.0 && var2 > 0.0) out["tvd_exact"] = tvd_exact_zero_mean_normals(var1, var2);
    r.body["ppmm"] = std::move(out);
  }
  if (r.body.empty()) throw FormatError("tvd config: give var1/var2 and/or a ppmm object");
  return r;
}

Result cmd_maxsearch(const Options& o) {
  const MaxSearchResult res = numeric_max_search(o.E, o.m, o.trials, o.seed, o.threads);
  Result r{{}, {{"E", o.E}, {"m", o.m}, {"trials", o.trials}}, o.seed};
  r.body = {{"best_c", res.best_c},
            {"best_sample_c", res.best_sample_c},
            {"c_max", res.c_max},
            {"excess_over_formula", res.best_c - res.c_max},
            {"argmax",
             {{"trial", res.best_trial},
              {"theta", vector_to_json(res.theta)},
              {"d", vector_to_json(res.d)},
              {"passive", matrix_to_json(res.passive)},
              {"state", state_to_json(GaussianState(res.cov))}}}};
  return r;
}

void add_cm_input(CLI::App* sub, Options& o) {
  sub->add_option("cm", o.cm_path, "Covariance-matrix file (JSON, or CSV with --m); '-' reads stdin")->required();
  sub->add_option("--m", o.csv_m, "Read the input as CSV with this many modes");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Symplectic coherence toolkit for Gaussian covariance matrices (qqpp ordering, hbar = 2)", "sympcoh"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(SYMPCOH_VERSION));
  app.add_option("--threads", o.threads, "Worker threads for Monte-Carlo subcommands")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "Validation tolerance")->check(CLI::NonNegativeNumber);

  std::map<CLI::App*, std::function<Result(const Options&)>> handlers;
  auto sub = [&](const char* name, const char* help, Result (*fn)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    handlers[s] = fn;
    return s;
  };

  add_cm_input(sub("validate", "Check every covariance-matrix invariant", cmd_validate), o);
  add_cm_input(sub("coherence", "Symplectic coherence and closest free state", cmd_coherence), o);

  auto* maxsc = sub("maxsc", "Maximal symplectic coherence at fixed trace", cmd_maxsc);
  maxsc->add_option("--E", o.E, "Trace of the covariance matrix")->required();
  maxsc->add_option("--m", o.m, "Mode count")->required()->check(CLI::PositiveNumber);

  auto* msc = sub("msc", "Write the canonical maximally coherent state", cmd_msc);
  msc->add_option("--E", o.E, "Trace of the covariance matrix")->required();
  msc->add_option("--m", o.m, "Mode count")->required()->check(CLI::PositiveNumber);
  msc->add_option("-o,--output", o.out_path, "Output state file");

  auto* ap = sub("apply", "Apply a gate or loss channel", cmd_apply);
  add_cm_input(ap, o);
  ap->add_option("--gate", o.gate_path, "Gate JSON file")->required();
  ap->add_option("-o,--output", o.out_path, "Also write the output state to this file");

  auto* loss = sub("loss", "Apply a pure-loss channel", cmd_loss);
  add_cm_input(loss, o);
  loss->add_option("--eta", o.eta, "Transmissivity in [0, 1]")->required();
  loss->add_option("-o,--output", o.out_path, "Also write the output state to this file");

  add_cm_input(sub("discord", "Geometric discord of the normalized covariance matrix", cmd_discord), o);

  auto* ens = sub("ensemble", "Micro-canonical ensemble average of the first-mode nu^2", cmd_ensemble);
  ens->add_option("--m", o.m, "Mode count")->required()->check(CLI::PositiveNumber);
  ens->add_option("--E", o.E, "Trace of the covariance matrix")->required();
  ens->add_option("--kind", o.kind, "orthogonal or unitary")->check(CLI::IsMember({"orthogonal", "unitary"}));
  ens->add_option("--samples", o.samples, "Number of samples")->check(CLI::PositiveNumber);
  ens->add_option("--seed", o.seed, "RNG seed");
  ens->add_option("--csv", o.csv_path, "Write per-sample (nu^2, c) to this CSV file");

  auto* disc = sub("discriminate", "Simulate the median-of-means discrimination protocol", cmd_discriminate);
  disc->add_option("--config", o.config_path, "Discrimination config JSON")->required();
  disc->add_option("--csv", o.csv_path, "Write per-trial outcomes to this CSV file");

  add_cm_input(sub("qfi", "Quantum Fisher information for displacement sensing", cmd_qfi), o);

  auto* tvd = sub("tvd", "Total variation distance between zero-mean normals and its PP-MM bound", cmd_tvd);
  tvd->add_option("--config", o.config_path, "TVD config JSON")->required();

  auto* ms = sub("maxsearch", "Random search for the maximal symplectic coherence", cmd_maxsearch);
  ms->add_option("--E", o.E, "Trace of the covariance matrix")->required();
  ms->add_option("--m", o.m, "Mode count")->required()->check(CLI::PositiveNumber);
  ms->add_option("--trials", o.trials, "Number of random samples")->check(CLI::PositiveNumber);
  ms->add_option("--seed", o.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    Result r = handlers.at(chosen)(o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.parameters["threads"] = o.threads;
    r.parameters["tol"] = o.tol;
    json manifest{{"subcommand", chosen->get_name()},
                  {"parameters", r.parameters},
                  {"seed", r.seed ? json(*r.seed) : json(nullptr)},
                  {"version", SYMPCOH_VERSION},
                  {"wall_time_s", wall}};
    r.body["manifest"] = std::move(manifest);
    out << r.body.dump(2) << '\n';
    if (chosen->get_name() == "validate" && !r.body.at("valid").get<bool>()) {
      err << "error: invalid covariance matrix\n";
      return kExitInvalid;
    }
    return kExitOk;
  } catch (const InvalidCovariance& e) {
    err << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
  }
  return kExitInvalid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sympcoh");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sympcoh::cli
