#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vg/catalog.hpp"
#include "vg/lagrange.hpp"
#include "vg/parser.hpp"

using namespace vg;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitSampling = 3;

struct CommonOpts {
  std::string format = "text";
  std::uint64_t seed = 1905;
  int trials = 100;
  int n = 0;  // 0: catalog default
};

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("VG_SEED")) return std::strtoull(env, nullptr, 10);
  return flag_seed;
}

bool is_catalog(const std::string& source) { return source.rfind("catalog:", 0) == 0; }

struct LoadedStructure {
  PathStructure P;
  std::optional<CatalogEntry> entry;
};

LoadedStructure load_structure(const std::string& source, int n) {
  if (is_catalog(source)) {
    CatalogEntry e = catalog_get(source.substr(8), n);
    if (e.structure) return {*e.structure, e};
    if (e.christoffel)
      return {homog_to_inhomog(christoffel_to_homog(*e.christoffel)), e};
    if (e.homogeneous) return {homog_to_inhomog(*e.homogeneous), e};
    throw std::invalid_argument("catalog entry '" + e.id + "' has no structure");
  }
  ParsedStructure s = parse_structure_file(source);
  if (auto* p = std::get_if<PathStructure>(&s)) return {*p, std::nullopt};
  if (auto* h = std::get_if<HomogeneousStructure>(&s))
    return {homog_to_inhomog(*h), std::nullopt};
  if (auto* g = std::get_if<ChristoffelTable>(&s))
    return {homog_to_inhomog(christoffel_to_homog(*g)), std::nullopt};
  throw std::invalid_argument(source + " does not define a path structure");
}

Lagrangian load_lagrangian(const std::string& spec_arg, const LoadedStructure& ctx) {
  if (spec_arg == "catalog") {
    if (!ctx.entry || !ctx.entry->lagrangian)
      throw std::invalid_argument("no companion Lagrangian in the catalog for this input");
    return *ctx.entry->lagrangian;
  }
  if (is_catalog(spec_arg)) {
    CatalogEntry e = catalog_get(spec_arg.substr(8), ctx.P.n);
    if (!e.lagrangian)
      throw std::invalid_argument("catalog entry '" + e.id + "' has no Lagrangian");
    return *e.lagrangian;
  }
  ParsedStructure s = parse_structure_file(spec_arg);
  if (auto* l = std::get_if<Lagrangian>(&s)) return *l;
  throw std::invalid_argument(spec_arg + " is not a first-order Lagrangian file");
}

HomLagrangian load_hom_lagrangian(const std::string& source, int n, Sampler& sampler) {
  if (is_catalog(source)) {
    std::string id = source.substr(8);
    if (id.rfind("egorov-psi-family", 0) == 0) {
      // catalog:egorov-psi-family[k] selects a pair, default 0.
      int index = 0;
      if (auto b = id.find('['); b != std::string::npos) index = std::stoi(id.substr(b + 1));
      return egorov_psi_lagrangian(n > 0 ? n : 2, index);
    }
    CatalogEntry e = catalog_get(id, n);
    if (!e.lagrangian)
      throw std::invalid_argument("catalog entry '" + e.id + "' has no Lagrangian");
    return homogenize(*e.lagrangian);
  }
  ParsedStructure s = parse_structure_file(source);
  if (auto* l = std::get_if<Lagrangian>(&s)) return homogenize(*l);
  if (auto* l2 = std::get_if<SecondOrderLagrangian>(&s)) {
    if (depends_on_class(l2->L, VarClass::HAcc))
      throw std::invalid_argument("expected a first-order homogeneous Lagrangian");
    return dehomogenize(HomLagrangian{l2->n, l2->L}, sampler), HomLagrangian{l2->n, l2->L};
  }
  throw std::invalid_argument(source + " is not a Lagrangian file");
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

ordered_json point_json(const EvalPoint& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [var, val] : p.values) {
    if (std::holds_alternative<mpq_class>(val))
      out[name(var)] = q_str(std::get<mpq_class>(val));
    else
      out[name(var)] = std::get<double>(val);
  }
  return out;
}

std::string point_text(const EvalPoint& p) {
  std::string out;
  for (const auto& [var, val] : p.values) {
    if (!out.empty()) out += " ";
    out += name(var) + "=";
    out += std::holds_alternative<mpq_class>(val) ? q_str(std::get<mpq_class>(val))
                                                  : std::to_string(std::get<double>(val));
  }
  return out;
}

ordered_json zero_json(const ZeroVerdict& v) {
  ordered_json out;
  switch (v.kind) {
    case ZeroKind::SymbolicZero: out["kind"] = "symbolic_zero"; break;
    case ZeroKind::NumericZero:
      out["kind"] = "numeric_zero";
      out["trials"] = v.trials;
      break;
    case ZeroKind::Nonzero:
      out["kind"] = "nonzero";
      out["value"] = v.witness_value;
      if (v.witness) out["witness"] = point_json(*v.witness);
      break;
  }
  return out;
}

struct Reporter {
  CommonOpts opts;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ordered_json doc = ordered_json::object();

  void echo(const std::string& command, ordered_json inputs) {
    doc["command"] = command;
    inputs["seed"] = opts.seed;
    doc["input"] = std::move(inputs);
  }

  // Timing is reported in the text format only; the json format is
  // byte-stable for a fixed seed.
  void emit() {
    if (opts.format == "json") {
      std::cout << doc.dump(2) << "\n";
      return;
    }
    std::cout << "command: " << doc["command"].get<std::string>() << "\n";
    std::cout << "input:   " << doc["input"].dump() << "\n";
    for (auto& [key, value] : doc.items()) {
      if (key == "command" || key == "input") continue;
      std::cout << key << ": " << value.dump(2) << "\n";
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << "timing_ms: " << ms << "\n";
  }
};

int run_check(const std::string& source, CommonOpts opts, int levels_flag) {
  LoadedStructure in = load_structure(source, opts.n);
  int levels = levels_flag > 0 ? levels_flag : default_levels(in.P.n);
  Sampler sampler(opts.seed);

  Reporter rep;
  rep.opts = opts;
  rep.echo("check", {{"source", source},
                     {"n", in.P.n},
                     {"levels", levels},
                     {"trials", opts.trials}});

  Verdict v = decide_variationality(in.P, levels, sampler, opts.trials);
  ordered_json r;
  r["verdict"] = to_string(v.kind);
  r["scope"] = v.scope;
  r["levels"] = v.levels;
  if (v.full_rank_witness) {
    r["rank"] = v.full_rank_witness->rank;
    r["max_possible"] = v.full_rank_witness->max_possible;
    r["witness"] = point_json(v.full_rank_witness->point);
  } else {
    r["generic_kernel_dim"] = v.generic_kernel_dim;
    if (v.kind == Verdict::Kind::NotVariationalForcedDegenerate) {
      r["degenerate_points_tested"] = v.degenerate_points_tested;
      r["combinations_per_point"] = v.combinations_per_point;
    }
    if (v.kernel_sample) {
      r["rank"] = v.kernel_sample->rank;
      r["max_possible"] = v.kernel_sample->max_possible;
      r["witness"] = point_json(v.kernel_sample->point);
    }
  }
  rep.doc["result"] = std::move(r);
  rep.emit();
  return kExitOk;
}

int run_verify(const std::string& source, const std::string& lagrangian_arg, CommonOpts opts,
               double tol, bool extremal) {
  LoadedStructure in = load_structure(source, opts.n);
  Lagrangian L = load_lagrangian(lagrangian_arg, in);
  if (L.n != in.P.n)
    throw std::invalid_argument("Lagrangian dimension does not match the structure");
  SampleDomain domain = in.entry ? in.entry->domain : SampleDomain{};
  Sampler sampler(opts.seed);

  Reporter rep;
  rep.opts = opts;
  rep.echo("verify", {{"source", source},
                      {"lagrangian", lagrangian_arg},
                      {"n", in.P.n},
                      {"trials", opts.trials},
                      {"tol", tol}});

  EquivalenceReport eq = verify_equivalence(L, in.P, sampler, opts.trials, tol, domain);
  ordered_json r;
  r["pass"] = eq.pass;
  ordered_json residuals = ordered_json::array();
  for (const auto& v : eq.residuals) residuals.push_back(zero_json(v));
  r["el_residuals"] = std::move(residuals);
  r["det_phi"] = zero_json(eq.det_phi);

  HessianField H = hessian_phi(L);
  CandidatePhiReport phi_rep = check_candidate_phi(in.P, H.phi, sampler, opts.trials, tol);
  r["fundamental_system"] = ordered_json{{"pass", phi_rep.all_zero()}};

  bool pass = eq.pass && phi_rep.all_zero();
  if (extremal) {
    std::vector<double> y0(in.P.n, 0.0), dy0(in.P.n, 1.0);
    if (in.entry && in.entry->domain.ranges.size()) {
      for (auto& [var, range] : in.entry->domain.ranges)
        if (var.cls == VarClass::FiberVel)
          dy0[var.idx - 1] = (range.first.get_d() + range.second.get_d()) / 2;
    }
    auto ext = numeric_extremal_check(L, in.P, 0.0, y0, dy0, 1.0);
    ordered_json e;
    e["max_residual"] = ext.max_residual;
    e["singular_exit"] = ext.singular_exit;
    if (ext.singular_exit) e["exit_time"] = ext.exit_time;
    r["extremal_check"] = std::move(e);
    pass = pass && !ext.singular_exit && ext.max_residual < 1e-8;
  }
  r["pass"] = pass;
  rep.doc["result"] = std::move(r);
  rep.emit();
  return pass ? kExitOk : kExitFail;
}

int run_homogenize(const std::string& source, CommonOpts opts) {
  Sampler sampler(opts.seed);
  Reporter rep;
  rep.opts = opts;
  rep.echo("homogenize", {{"source", source}, {"n", opts.n}});
  Lagrangian L = load_lagrangian(source, LoadedStructure{PathStructure{}, is_catalog(source)
                                                             ? std::optional<CatalogEntry>(
                                                                   catalog_get(source.substr(8), opts.n))
                                                             : std::nullopt});
  HomLagrangian hat = homogenize(L);
  rep.doc["result"] = ordered_json{{"n", hat.n}, {"lagrangian", to_string(hat.L)}};
  rep.emit();
  return kExitOk;
}

int run_dehomogenize(const std::string& source, CommonOpts opts) {
  Sampler sampler(opts.seed);
  Reporter rep;
  rep.opts = opts;
  rep.echo("dehomogenize", {{"source", source}, {"n", opts.n}});
  HomLagrangian hat = load_hom_lagrangian(source, opts.n, sampler);
  Lagrangian L = dehomogenize(hat, sampler);
  rep.doc["result"] = ordered_json{{"n", L.n}, {"lagrangian", to_string(L.L)}};
  rep.emit();
  return kExitOk;
}

int run_hessian(const std::string& source, CommonOpts opts) {
  Reporter rep;
  rep.opts = opts;
  rep.echo("hessian", {{"source", source}, {"n", opts.n}});
  Lagrangian L = load_lagrangian(source, LoadedStructure{PathStructure{}, is_catalog(source)
                                                             ? std::optional<CatalogEntry>(
                                                                   catalog_get(source.substr(8), opts.n))
                                                             : std::nullopt});
  HessianField H = hessian_phi(L);
  ordered_json phi = ordered_json::array();
  for (int i = 1; i <= H.n; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 1; j <= H.n; ++j) row.push_back(to_string(H.at(i, j)));
    phi.push_back(std::move(row));
  }
  rep.doc["result"] = ordered_json{{"phi", std::move(phi)}, {"det", to_string(H.det)}};
  rep.emit();
  return kExitOk;
}

int run_convexity(const std::string& source, CommonOpts opts) {
  Sampler sampler(opts.seed);
  Reporter rep;
  rep.opts = opts;
  rep.echo("convexity", {{"source", source}, {"n", opts.n}, {"trials", opts.trials}});
  HomLagrangian hat = load_hom_lagrangian(source, opts.n, sampler);
  ConvexityReport report = convexity_probe(hat, sampler, opts.trials);
  ordered_json r;
  r["samples"] = report.samples.size();
  r["positive_definite_everywhere"] = report.positive_definite_everywhere;
  if (report.indefinite_witness) {
    ordered_json w;
    w["point"] = point_json(report.indefinite_witness->point);
    w["eigenvalues"] = report.indefinite_witness->eigenvalues;
    r["indefinite_witness"] = std::move(w);
  }
  rep.doc["result"] = std::move(r);
  rep.emit();
  return kExitOk;
}

int run_reduce2(const std::string& source, CommonOpts opts) {
  Sampler sampler(opts.seed);
  Reporter rep;
  rep.opts = opts;
  rep.echo("reduce2", {{"source", source}});
  ParsedStructure s = parse_structure_file(source);
  auto* l2 = std::get_if<SecondOrderLagrangian>(&s);
  if (!l2) throw std::invalid_argument(source + " is not a second-order Lagrangian file");
  ReduceResult r = reduce_second_order(*l2, sampler);
  rep.doc["result"] = ordered_json{{"n", r.n},
                                   {"reduced", to_string(r.reduced)},
                                   {"potential", to_string(r.potential)},
                                   {"certificate", zero_json(r.certificate)}};
  rep.emit();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic variationality toolkit for path structures"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string source, lagrangian_arg = "catalog";
  int levels = 0;
  double tol = 1e-9;
  bool extremal = false;

  auto add_common = [&](CLI::App* cmd, bool with_trials = true) {
    cmd->add_option("source", source, "catalog:<id> or a structure file")->required();
    cmd->add_option("--n", opts.n, "dimension for parametric catalog entries");
    cmd->add_option("--seed", opts.seed, "sampler seed (env VG_SEED overrides)");
    cmd->add_option("--format", opts.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_trials) cmd->add_option("--trials", opts.trials, "sample count");
  };

  auto* check = app.add_subcommand("check", "decide variationality of a path structure");
  add_common(check);
  check->add_option("--levels", levels, "prolongation levels (default 1, 2 for n=2)");

  auto* verify = app.add_subcommand("verify", "verify a candidate Lagrangian");
  add_common(verify);
  verify->add_option("--lagrangian", lagrangian_arg,
                     "'catalog', catalog:<id>, or a lagrangian file");
  verify->add_option("--tol", tol, "numeric zero tolerance");
  verify->add_flag("--extremal", extremal, "also integrate extremals numerically");

  auto* homog = app.add_subcommand("homogenize", "lift to a 1-homogeneous Lagrangian");
  add_common(homog, false);
  auto* dehomog = app.add_subcommand("dehomogenize", "restrict to the graph chart");
  add_common(dehomog, false);
  auto* hess = app.add_subcommand("hessian", "velocity Hessian and its determinant");
  add_common(hess, false);
  auto* conv = app.add_subcommand("convexity", "sample the signature of Hess(L^2)");
  add_common(conv);
  auto* red = app.add_subcommand("reduce2", "reduce a second-order Lagrangian");
  add_common(red, false);

  CLI11_PARSE(app, argc, argv);
  opts.seed = effective_seed(opts.seed);

  try {
    if (check->parsed()) return run_check(source, opts, levels);
    if (verify->parsed()) return run_verify(source, lagrangian_arg, opts, tol, extremal);
    if (homog->parsed()) return run_homogenize(source, opts);
    if (dehomog->parsed()) return run_dehomogenize(source, opts);
    if (hess->parsed()) return run_hessian(source, opts);
    if (conv->parsed()) return run_convexity(source, opts);
    if (red->parsed()) return run_reduce2(source, opts);
  } catch (const SamplerExhaustedError& e) {
    std::cerr << "sampling failure: " << e.what() << "\n";
    return kExitSampling;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
