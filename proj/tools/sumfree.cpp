// sumfree: command-line front end. Every successful run prints one JSON
// document on stdout; diagnostics go to stderr.
//
// Exit codes: 0 success, 1 domain/input error, 2 usage error.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumfree/sumfree.hpp"

#ifndef SUMFREE_VERSION
#define SUMFREE_VERSION "0.1.0"
#endif

using namespace sumfree;
using sumfree::Json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational flag_rational(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    throw UsageError("--" + flag + ": " + e.what());
  }
}

Json progression_json(const structure::Progression& p) {
  return Json{{"start", p.start}, {"step", p.step}, {"length", p.length}};
}

Json set_json(const IntegerSet& a) {
  Json j;
  j["name"] = a.name();
  j["size"] = a.size();
  j["elements"] = a.elements();
  return j;
}

Json report_json(const SolveReport& r) {
  Json j;
  j["input_size"] = r.input_size;
  j["convention"] = std::string(to_string(r.convention));
  j["optimum"] = r.optimum;
  j["exact"] = r.exact;
  j["nodes_explored"] = r.nodes_explored;
  j["witness"] = r.witness.elements();
  return j;
}

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json stats_json(const weights::WeightStats& s) {
  return Json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"lipschitz", s.lipschitz}};
}

Json params_json(const weights::IterationParams& p) {
  Json j{{"M", p.m}, {"eps_prime", p.eps_prime.str()}, {"t_samples", p.t_samples}};
  if (p.steps) j["steps"] = *p.steps;
  return j;
}

structure::AlphaGrid<double> load_alpha_grid(const std::string& path) {
  const Json j = Json::parse(read_file(path));
  structure::AlphaGrid<double> g;
  try {
    g.q = j.at("q").get<int>();
    g.m = j.at("M").get<int>();
    g.values = j.at("values").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    fail(Error::Kind::kParse, std::string("alpha grid: ") + e.what());
  }
  g.validate(1.0);
  return g;
}

structure::GridSet load_grid_set(const std::string& path) {
  const Json j = Json::parse(read_file(path));
  structure::GridSet g;
  try {
    g.q = j.at("q").get<int>();
    g.k = j.at("K").get<int>();
    const auto& cells = j.contains("values") ? j.at("values") : j.at("membership");
    for (int v : cells.get<std::vector<int>>()) g.membership.push_back(v != 0 ? 1 : 0);
  } catch (const Json::exception& e) {
    fail(Error::Kind::kParse, std::string("grid set: ") + e.what());
  }
  g.validate();
  return g;
}

/// Terms "coef:a:m:k1,k2,..." separated by ';', or "cos:k1,k2,...".
equidist::TestFunction parse_freq(const std::string& spec, std::int64_t q, std::size_t d,
                                  std::optional<double> lipschitz) {
  std::vector<equidist::Term> terms;
  std::stringstream all(spec);
  std::string item;
  auto ints = [](const std::string& s) {
    std::vector<std::int64_t> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoll(tok));
    return v;
  };
  try {
    while (std::getline(all, item, ';')) {
      if (item.empty()) continue;
      if (item.rfind("cos:", 0) == 0) {
        auto k = ints(item.substr(4));
        std::vector<std::int64_t> neg;
        for (auto x : k) neg.push_back(-x);
        terms.push_back({0.5, 0, 0, k});
        terms.push_back({0.5, 0, 0, neg});
        continue;
      }
      std::vector<std::string> parts;
      std::stringstream ss(item);
      std::string p;
      while (std::getline(ss, p, ':')) parts.push_back(p);
      if (parts.size() != 4) throw UsageError("--freq term '" + item + "' needs coef:a:m:k-vector");
      terms.push_back({std::stod(parts[0]), std::stoll(parts[1]), std::stoll(parts[2]), ints(parts[3])});
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("--freq: malformed number in '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw UsageError("--freq: number out of range in '" + spec + "'");
  }
  if (terms.empty()) throw UsageError("--freq needs at least one term");
  for (const auto& t : terms)
    if (t.k.size() != d) throw UsageError("--freq: k-vector length must equal the number of theta components");
  auto f = equidist::TestFunction::with_bound(q, std::move(terms));
  if (lipschitz) f.lipschitz = *lipschitz;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-free subsets, Fourier uniformity and weight iteration toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SUMFREE_VERSION);

  std::string command;
  Json result;
  std::optional<std::uint64_t> run_seed;
  int exit_code = 0;

  // solve
  auto* solve = app.add_subcommand("solve", "Maximum sum-free subset (exact up to 64 elements)");
  std::string solve_set, solve_conv = "allow-equal";
  std::uint64_t solve_budget = kDefaultNodeBudget;
  bool solve_heur = false;
  int solve_restarts = 4;
  std::uint64_t solve_seed = 1;
  solve->add_option("--set", solve_set, "set file (text or JSON)")->required();
  solve->add_option("--convention", solve_conv, "allow-equal or distinct")
      ->check(CLI::IsMember({"allow-equal", "distinct"}));
  solve->add_option("--budget", solve_budget, "node budget for the exact search");
  solve->add_flag("--heuristic", solve_heur, "use the heuristic even when exact search is possible");
  solve->add_option("--restarts", solve_restarts, "heuristic restarts per starting point");
  solve->add_option("--seed", solve_seed, "heuristic seed");
  solve->callback([&] {
    command = "solve";
    auto a = load_set(solve_set);
    auto conv = parse_convention(solve_conv);
    SolveReport r;
    if (!solve_heur && a.size() <= 64) {
      r = max_sum_free_subset(a, conv, solve_budget);
    } else {
      run_seed = solve_seed;
      r = heuristic_sum_free(a, conv, solve_restarts, Seed{solve_seed});
    }
    result = report_json(r);
    result["set"] = a.name();
    result["ratio"] = Rational(static_cast<std::int64_t>(r.optimum), static_cast<std::int64_t>(a.size())).str();
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Exact dilation sweep over theta");
  std::string sweep_set;
  sweep->add_option("--set", sweep_set, "set file")->required();
  sweep->callback([&] {
    command = "sweep";
    auto a = load_set(sweep_set);
    auto c = dilation_sweep(a);
    result["set"] = a.name();
    result["input_size"] = a.size();
    result["theta"] = c.theta.str();
    result["size"] = c.size;
    result["floor"] = (a.size() + 3) / 3;
    result["selected"] = c.selected.elements();
  });

  // compose
  auto* comp = app.add_subcommand("compose", "A ∪ M·B with M > 2 max(A)");
  std::string comp_a, comp_b, comp_out;
  std::optional<std::int64_t> comp_m;
  bool comp_solve = false;
  comp->add_option("--a", comp_a, "first set file")->required();
  comp->add_option("--b", comp_b, "second set file")->required();
  comp->add_option("--m", comp_m, "multiplier (default 2 max(A) + 1)");
  comp->add_option("--out", comp_out, "write the composed set here");
  comp->add_flag("--solve", comp_solve, "also solve A, B and the composition exactly");
  comp->callback([&] {
    command = "compose";
    auto a = load_set(comp_a), b = load_set(comp_b);
    auto c = compose(a, b, comp_m);
    result["multiplier"] = comp_m.value_or(2 * a.max() + 1);
    if (comp_out.empty())
      result["set"] = set_json(c);
    else {
      save_set(c, comp_out);
      result["out"] = comp_out;
      result["size"] = c.size();
    }
    if (comp_solve) {
      auto conv = SumFreeConvention::kAllowEqual;
      auto ra = max_sum_free_subset(a, conv), rb = max_sum_free_subset(b, conv), rc = max_sum_free_subset(c, conv);
      result["optimum_a"] = ra.optimum;
      result["optimum_b"] = rb.optimum;
      result["optimum_composed"] = rc.optimum;
      result["additive"] = rc.optimum == ra.optimum + rb.optimum;
    }
  });

  // catalog
  auto* cat = app.add_subcommand("catalog", "Historical small sets");
  bool cat_verify = false;
  cat->add_flag("--verify", cat_verify, "re-derive each bound with the exact solver");
  cat->callback([&] {
    command = "catalog";
    Json entries = Json::array();
    bool all_ok = true;
    for (const auto& e : catalog()) {
      Json j{{"name", e.name}, {"elements", e.set.elements()}, {"sigma_bound", e.sigma_bound.str()}};
      if (cat_verify) {
        auto r = max_sum_free_subset(e.set, SumFreeConvention::kAllowEqual);
        Rational ratio(static_cast<std::int64_t>(r.optimum), static_cast<std::int64_t>(e.set.size()));
        j["optimum"] = r.optimum;
        j["witness"] = r.witness.elements();
        j["verified"] = ratio == e.sigma_bound;
        all_ok = all_ok && ratio == e.sigma_bound;
      }
      entries.push_back(j);
    }
    result["entries"] = entries;
    if (cat_verify) {
      result["verified"] = all_ok;
      if (!all_ok) exit_code = 1;
    }
  });

  // spectral
  auto* spec = app.add_subcommand("spectral", "Fourier quantities");
  spec->require_subcommand(1);
  std::string sp_set;
  std::int64_t sp_n = 0;
  std::optional<std::size_t> sp_nprime;
  bool sp_direct = false;
  double sp_t = 0.5;
  auto* u2 = spec->add_subcommand("u2", "||1_A||_{U^2(N)}");
  u2->add_option("--set", sp_set, "set file")->required();
  u2->add_option("--n", sp_n, "N")->required()->check(CLI::PositiveNumber);
  u2->add_option("--nprime", sp_nprime, "group size N' > 4N");
  u2->add_flag("--direct", sp_direct, "also evaluate the defining average (N' <= 512)");
  u2->callback([&] {
    command = "spectral u2";
    auto s = embed_signal(load_set(sp_set), static_cast<std::size_t>(sp_n), sp_nprime);
    result["n"] = sp_n;
    result["nprime"] = s.nprime();
    result["u2"] = spectral::u2_norm(s);
    if (sp_direct) result["u2_direct"] = spectral::u2_norm_direct(s);
  });
  auto* tc = spec->add_subcommand("tcount", "T(1_A) on {1..N}");
  tc->add_option("--set", sp_set, "set file")->required();
  tc->add_option("--n", sp_n, "N")->required()->check(CLI::PositiveNumber);
  tc->callback([&] {
    command = "spectral tcount";
    auto a = load_set(sp_set);
    auto f = indicator(a, static_cast<std::size_t>(sp_n));
    result["n"] = sp_n;
    result["t_count"] = spectral::t_count(f);
    result["triples"] = std::llround(spectral::t_count(f) * static_cast<double>(sp_n) * static_cast<double>(sp_n));
  });
  auto* pd = spec->add_subcommand("popdiff", "Popular differences D_t(A)");
  pd->add_option("--set", sp_set, "set file")->required();
  pd->add_option("--n", sp_n, "N")->required()->check(CLI::PositiveNumber);
  pd->add_option("--t", sp_t, "threshold in (0, 1]");
  pd->callback([&] {
    command = "spectral popdiff";
    auto a = load_set(sp_set);
    auto d = spectral::popular_differences(a, static_cast<std::size_t>(sp_n), sp_t);
    result["n"] = sp_n;
    result["t"] = sp_t;
    result["count"] = d.size();
    result["differences"] = d;
  });

  // structure
  auto* st = app.add_subcommand("structure", "Doubling and grid structure");
  st->require_subcommand(1);
  std::string st_set, st_eps = "1/10", st_grid, st_min_interval = "1/4";
  std::int64_t st_n = 0;
  std::optional<std::int64_t> st_min_len;
  double st_delta = 0.1, st_eta = 0.0;
  int st_index = 1;
  std::int64_t lev_start = 1, lev_step = 1, lev_len = 0;
  auto* dbl = st->add_subcommand("doubling", "Popular-difference hypothesis and dense progression search");
  dbl->add_option("--set", st_set, "set file")->required();
  dbl->add_option("--n", st_n, "N")->required()->check(CLI::PositiveNumber);
  dbl->add_option("--eps", st_eps, "eps as p/q or decimal");
  dbl->add_option("--delta", st_delta, "popularity threshold");
  dbl->add_option("--min-length", st_min_len, "shortest progression considered (default max(1, N/8))");
  dbl->callback([&] {
    command = "structure doubling";
    auto a = load_set(st_set);
    const auto eps = flag_rational("eps", st_eps);
    const auto min_len = st_min_len.value_or(std::max<std::int64_t>(1, st_n / 8));
    auto r = structure::check_doubling_hypothesis(a, st_n, eps, st_delta, min_len);
    result["n"] = st_n;
    result["set_size"] = r.set_size;
    result["popular_count"] = r.popular_count;
    result["bound"] = r.bound.str();
    result["hypothesis_holds"] = r.hypothesis_holds;
    result["target_density"] = r.target.str();
    result["min_length"] = min_len;
    if (r.search && r.search->best) {
      const auto& b = *r.search->best;
      result["progression"] = progression_json(b.progression);
      result["count"] = b.count;
      result["density"] = b.density.str();
      result["meets_target"] = r.search->meets_target;
    } else {
      result["progression"] = nullptr;
    }
  });
  auto* at = st->add_subcommand("alphatilde", "Grid inequality sum alpha~ >= 4 sum alpha - 4 eta q M");
  at->add_option("--grid", st_grid, "alpha grid JSON {q, M, values}")->required();
  at->add_option("--eta", st_eta, "threshold eta >= 0");
  at->callback([&] {
    command = "structure alphatilde";
    auto g = load_alpha_grid(st_grid);
    auto r = structure::alpha_tilde(g, st_eta);
    result["q"] = r.q;
    result["M"] = r.m;
    result["eta"] = st_eta;
    result["sum_alpha"] = r.sum_alpha;
    result["sum_tilde"] = r.sum_tilde;
    result["rhs"] = r.rhs;
    result["holds"] = r.holds;
    result["tilde"] = r.values;
  });
  auto* az = st->add_subcommand("avoidzero", "Least mass on H x [0, l]");
  az->add_option("--gridset,--grid", st_grid, "grid set JSON {q, K, values} with 0/1 values")->required();
  az->add_option("--index-bound", st_index, "largest subgroup index");
  az->add_option("--min-interval", st_min_interval, "shortest interval length");
  az->callback([&] {
    command = "structure avoidzero";
    auto g = load_grid_set(st_grid);
    auto r = structure::avoid_zero_diagnostic(g, st_index, flag_rational("min-interval", st_min_interval));
    if (r.index_bound_clamped) std::cerr << "warning: index bound clamped to q=" << g.q << "\n";
    result["subgroup_index"] = r.subgroup_index;
    result["interval_cells"] = r.interval_cells;
    result["interval_length"] = r.interval_length.str();
    result["mass"] = r.mass.str();
    result["index_bound_clamped"] = r.index_bound_clamped;
  });
  auto* lev = st->add_subcommand("lev", "Check P ⊆ 5X - 4X");
  lev->add_option("--start", lev_start, "first term of P");
  lev->add_option("--step", lev_step, "common difference of P");
  lev->add_option("--length", lev_len, "|P|")->required();
  lev->add_option("--set", st_set, "X as a set file")->required();
  lev->callback([&] {
    command = "structure lev";
    structure::Progression p{lev_start, lev_step, lev_len};
    auto r = structure::lev_check(p, load_set(st_set));
    result["progression"] = progression_json(p);
    result["covers"] = r.covers;
    result["missing"] = r.missing;
  });

  // weight
  auto* wt = app.add_subcommand("weight", "Weight construction and sampling");
  wt->require_subcommand(1);
  std::string w_eps = "1/2", w_eps_prime = "1/2", w_out, w_file;
  weights::IterationParams w_params;
  std::optional<int> w_steps;
  int w_k = 16;
  std::int64_t w_n = 0;
  std::uint64_t w_seed = 1;
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--eps", w_eps, "eps in (0,1)");
    sub->add_option("--m", w_params.m, "multiplier M >= 2");
    sub->add_option("--eps-prime", w_eps_prime, "interval shrink eps' in (0,1]");
    sub->add_option("--t-samples", w_params.t_samples, "quadrature nodes on [1/2, 1]");
    sub->add_option("--k", w_k, "cells per residue");
  };
  auto resolved_params = [&] {
    auto p = w_params;
    p.eps_prime = flag_rational("eps-prime", w_eps_prime);
    p.steps = w_steps;
    return p;
  };
  auto* wb = wt->add_subcommand("build", "Iterate the pushforward from the uniform weight");
  add_params(wb);
  wb->add_option("--steps", w_steps, "iterations (default ceil(100 ln(1/eps)))");
  wb->add_option("--out", w_out, "write the weight JSON here");
  wb->callback([&] {
    command = "weight build";
    auto b = weights::build_weight(flag_rational("eps", w_eps), resolved_params(), w_k);
    Json hist = Json::array();
    for (const auto& a : b.alpha_history) hist.push_back(static_cast<double>(a));
    result["eps"] = b.eps.str();
    result["params"] = params_json(b.params);
    result["K"] = w_k;
    result["steps"] = b.steps;
    result["stats"] = stats_json(weights::weight_stats(b.weight));
    result["alpha_bound"] = b.weight.alpha_bound();
    result["alpha"] = weights::exact_str(b.weight.alpha);
    result["alpha_history"] = hist;
    if (w_out.empty()) {
      result["weight"] = weights::to_json(b.weight);
    } else {
      Json doc{{"schema_version", kSchemaVersion}, {"weight", weights::to_json(b.weight)}};
      doc["provenance"] = {{"eps", b.eps.str()}, {"params", params_json(b.params)}, {"alpha_history", hist}};
      write_file(w_out, doc.dump(1) + "\n");
      result["out"] = w_out;
    }
  });
  auto* ws = wt->add_subcommand("sample", "Bernoulli sample of {1..N} with p(n) = w/max w");
  ws->add_option("--weight", w_file, "weight JSON")->required();
  ws->add_option("--n", w_n, "N")->required()->check(CLI::PositiveNumber);
  ws->add_option("--seed", w_seed, "seed");
  ws->add_option("--out", w_out, "write the set here");
  ws->callback([&] {
    command = "weight sample";
    run_seed = w_seed;
    auto w = weights::load_weight(w_file);
    auto a = weights::sample_set(w, w_n, Seed{w_seed});
    double expected = 0.0;
    for (double p : weights::sample_probabilities(w, w_n)) expected += p;
    result["n"] = w_n;
    result["seed"] = w_seed;
    result["size"] = a.size();
    result["expected_size"] = expected;
    if (w_out.empty())
      result["elements"] = a.elements();
    else {
      save_set(a, w_out);
      result["out"] = w_out;
    }
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "Weight -> sampled sets -> sum-free lower bounds");
  std::int64_t ex_n = 10000;
  std::vector<std::uint64_t> ex_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int ex_steps = 2;
  add_params(ex);
  ex->add_option("--n", ex_n, "N")->check(CLI::PositiveNumber);
  ex->add_option("--seeds", ex_seeds, "comma-separated seeds")->delimiter(',');
  ex->add_option("--steps", ex_steps, "weight iterations");
  ex->callback([&] {
    command = "experiment";
    auto p = resolved_params();
    p.steps = ex_steps;
    std::vector<Seed> seeds;
    for (auto s : ex_seeds) seeds.push_back(Seed{s});
    auto rep = weights::density_experiment(flag_rational("eps", w_eps), p, w_k, ex_n, seeds);
    result["eps"] = rep.eps.str();
    result["params"] = params_json(rep.params);
    result["K"] = rep.k;
    result["n"] = rep.n;
    result["weight_stats"] = stats_json(rep.stats);
    result["alpha_bound"] = rep.alpha_bound;
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      Json j{{"seed", r.seed.value}, {"set_size", r.set_size}, {"heuristic_size", r.heuristic_size},
             {"floor_size", r.floor_size}};
      auto d = r.heuristic_density();
      j["heuristic_density"] = d ? Json(*d) : Json(nullptr);
      j["floor_density"] = r.set_size ? Json(static_cast<double>(r.floor_size) / static_cast<double>(r.set_size)) : Json(nullptr);
      j["sweep_size"] = r.sweep_size ? Json(*r.sweep_size) : Json(nullptr);
      j["exact_optimum"] = r.exact_optimum ? Json(*r.exact_optimum) : Json(nullptr);
      j["t_count"] = r.t_count;
      rows.push_back(j);
    }
    result["rows"] = rows;
  });

  // equidist
  auto* eq = app.add_subcommand("equidist", "Irrationality and equidistribution");
  eq->require_subcommand(1);
  std::vector<double> eq_theta;
  double eq_a = 1.0;
  std::int64_t eq_n = 1, eq_q = 1;
  std::string eq_freq, eq_prog;
  std::optional<double> eq_lip;
  auto* ec = eq->add_subcommand("check", "(A, N)-irrationality by exhaustive search");
  ec->add_option("--theta", eq_theta, "components, comma-separated")->required()->delimiter(',');
  ec->add_option("--a", eq_a, "A")->required();
  ec->add_option("--n", eq_n, "N")->required()->check(CLI::PositiveNumber);
  ec->callback([&] {
    command = "equidist check";
    auto r = equidist::irrationality_check({eq_theta}, eq_a, eq_n);
    result["theta"] = eq_theta;
    result["a"] = eq_a;
    result["n"] = eq_n;
    result["holds"] = r.holds;
    result["worst_q"] = r.worst_q;
    result["worst_distance"] = r.worst_distance;
    result["threshold"] = r.threshold;
    result["vectors_checked"] = r.vectors_checked;
  });
  auto* ee = eq->add_subcommand("error", "Empirical mean of F(n mod q, n/N, theta n) against its integral");
  ee->add_option("--theta", eq_theta, "components, comma-separated")->required()->delimiter(',');
  ee->add_option("--freq", eq_freq, "terms coef:a:m:k1,k2 joined by ';', or cos:k1,k2")->required();
  ee->add_option("--q", eq_q, "modulus of the residue coordinate")->check(CLI::PositiveNumber);
  ee->add_option("--n", eq_n, "N")->required()->check(CLI::PositiveNumber);
  ee->add_option("--lipschitz", eq_lip, "declared Lipschitz bound (default: computed)");
  ee->add_option("--progression", eq_prog, "start,step,length (default 1,1,N)");
  ee->callback([&] {
    command = "equidist error";
    auto f = parse_freq(eq_freq, eq_q, eq_theta.size(), eq_lip);
    std::optional<structure::Progression> p;
    if (!eq_prog.empty()) {
      std::vector<std::int64_t> v;
      std::stringstream ss(eq_prog);
      std::string tok;
      try {
        while (std::getline(ss, tok, ',')) v.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        throw UsageError("--progression: expected start,step,length");
      }
      if (v.size() != 3) throw UsageError("--progression: expected start,step,length");
      p = structure::Progression{v[0], v[1], v[2]};
    }
    auto r = equidist::equidist_error({eq_theta}, f, eq_n, p);
    result["theta"] = eq_theta;
    result["n"] = eq_n;
    result["count"] = r.count;
    result["lipschitz"] = f.lipschitz;
    result["empirical"] = complex_json(r.empirical);
    result["integral"] = complex_json(r.integral);
    result["error"] = r.error;
  });

  // check
  auto* ck = app.add_subcommand("check", "Randomized property suites");
  std::string ck_suite = "all";
  std::uint64_t ck_seed = 1;
  ck->add_option("--suite", ck_suite, "solver, spectral, structure, weights, equidist or all")
      ->check(CLI::IsMember({"solver", "spectral", "structure", "weights", "equidist", "all"}));
  ck->add_option("--seed", ck_seed, "master seed");
  ck->callback([&] {
    command = "check";
    run_seed = ck_seed;
    auto rs = check::run_suites(ck_suite, Seed{ck_seed});
    Json props = Json::array();
    std::size_t failed = 0;
    for (const auto& r : rs) {
      Json j{{"suite", r.suite}, {"property", r.name}, {"trials", r.trials}, {"failures", r.failures},
             {"passed", r.passed()}};
      if (r.first_failed_trial) {
        j["first_failed_trial"] = *r.first_failed_trial;
        j["first_failure"] = r.first_failure;
      }
      if (!r.passed()) {
        ++failed;
        std::cerr << "FAIL " << r.suite << "/" << r.name << " trial " << *r.first_failed_trial << ": "
                  << r.first_failure << "\n";
      }
      props.push_back(j);
    }
    result["suite"] = ck_suite;
    result["seed"] = ck_seed;
    result["properties"] = props;
    result["failed"] = failed;
    result["passed"] = failed == 0;
    if (failed) exit_code = 1;
  });

  const auto t0 = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  Json run;
  run["argv"] = std::vector<std::string>(argv, argv + argc);
  run["version"] = SUMFREE_VERSION;
  if (run_seed) run["seed"] = *run_seed;
  run["threads"] = thread_count();
  run["elapsed_seconds"] = elapsed;
  out["run"] = run;
  out["result"] = result;
  std::cout << out.dump(2) << "\n";
  return exit_code;
}
