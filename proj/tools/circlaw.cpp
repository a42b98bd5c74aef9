// circlaw: simulate eigenvalue point processes of rotation-invariant
// determinantal ensembles and verify central-limit predictions for linear
// statistics three ways: Monte Carlo, exact finite-n cumulants, and the
// analytic limiting variance.

#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circlaw/cumulants.hpp"
#include "circlaw/ensembles.hpp"
#include "circlaw/gff.hpp"
#include "circlaw/io.hpp"
#include "circlaw/kernels.hpp"
#include "circlaw/lemma_suite.hpp"
#include "circlaw/limits.hpp"
#include "circlaw/schur.hpp"
#include "circlaw/stats.hpp"
#include "circlaw/test_function.hpp"
#include "circlaw/verify_clt.hpp"

using namespace circlaw;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::vector<MonomialStat> parse_exponent_list(const std::string& s) {
  std::vector<MonomialStat> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto comma = item.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--exponents", "expected 'a,b;a,b;...'");
    out.emplace_back(std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1)));
  }
  if (out.empty()) throw CLI::ValidationError("--exponents", "empty exponent list");
  return out;
}

std::vector<PowerSumProfile> profiles_up_to_degree(int max_degree) {
  std::vector<PowerSumProfile> out;
  // partitions of d <= max_degree as multiplicity vectors
  std::vector<int> mult;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(mult);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      if (static_cast<int>(mult.size()) < part) mult.resize(static_cast<std::size_t>(part), 0);
      ++mult[static_cast<std::size_t>(part - 1)];
      self(self, remaining - part, part);
      --mult[static_cast<std::size_t>(part - 1)];
    }
  };
  for (int d = 1; d <= max_degree; ++d) {
    mult.clear();
    rec(rec, d, d);
  }
  return out;
}

std::string profile_name(const PowerSumProfile& p) {
  std::string s;
  for (std::size_t j = 0; j < p.mult.size(); ++j)
    for (int c = 0; c < p.mult[j]; ++c) s += "p" + std::to_string(j + 1) + " ";
  if (!s.empty()) s.pop_back();
  return s.empty() ? "1" : s;
}

json estimate_json(const MCEstimate& e, bool complex_value = false) {
  json j;
  if (complex_value)
    j["value"] = {e.value.real(), e.value.imag()};
  else
    j["value"] = e.value.real();
  j["se"] = e.std_error;
  j["replicas"] = e.replicas;
  return j;
}

int cmd_sample(const std::string& ensemble, int n, std::uint64_t seed, const std::string& out,
               const std::string& format, bool running_sums, bool moduli) {
  EnsembleSpec ens(family_from_name(ensemble), n);
  if (moduli) {
    ModuliSample ms = sample_moduli(ens, seed);
    std::ostringstream os;
    os << "# ensemble=" << ensemble << " n=" << n << " seed=" << seed << " kind=moduli\n";
    os << "k,radius\n";
    for (std::size_t k = 0; k < ms.radii.size(); ++k)
      os << k << "," << fmt_double(ms.radii[k]) << "\n";
    if (out.empty())
      std::cout << os.str();
    else
      write_text_file(out, os.str());
    return 0;
  }
  PointSample s = sample_ensemble(ens, seed);
  if (format == "json") {
    emit(sample_to_json(s), out);
    return 0;
  }
  std::ostringstream os;
  if (running_sums)
    write_running_sums_csv(os, s);
  else
    write_sample_csv(os, s);
  if (out.empty())
    std::cout << os.str();
  else
    write_text_file(out, os.str());
  return 0;
}

int cmd_verify_clt(const std::string& fspec, const std::string& ensemble, int n, int replicas,
                   std::uint64_t seed, int threads, const std::string& out,
                   const std::string& dump_replicas) {
  TestFunction f = parse_test_function(fspec);
  EnsembleSpec ens(family_from_name(ensemble), n);
  CltReport rep = verify_clt(f, ens, replicas, seed, threads, !dump_replicas.empty());
  json j;
  j["schema"] = 1;
  j["command"] = "verify-clt";
  j["f"] = fspec;
  j["ensemble"] = ensemble;
  j["n"] = n;
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["mc_variance"] = estimate_json(rep.mc_variance);
  j["predicted"] = {{"interior", rep.predicted_interior},
                    {"boundary", rep.predicted_boundary},
                    {"total", rep.predicted_total}};
  if (rep.exact_finite_n) j["exact_finite_n"] = *rep.exact_finite_n;
  j["z_score"] = rep.z_score;
  bool pass = std::abs(rep.z_score) <= 3.0;
  if (!rep.kstats.empty()) {
    json ks = json::array();
    for (std::size_t i = 0; i < rep.kstats.size(); ++i) {
      json e = estimate_json(rep.kstats[i]);
      e["order"] = i + 1;
      ks.push_back(e);
    }
    j["kstatistics"] = ks;
    for (std::size_t ord = 3; ord <= 4 && ord <= rep.kstats.size(); ++ord) {
      const auto& c = rep.kstats[ord - 1];
      if (c.std_error > 0 && std::abs(c.value.real()) > 3.0 * c.std_error) pass = false;
    }
  }
  j["pass"] = pass;
  if (!dump_replicas.empty()) {
    std::ostringstream os;
    os << "# f=" << fspec << " ensemble=" << ensemble << " n=" << n << " seed=" << seed << "\n";
    os << "replica,value\n";
    for (std::size_t i = 0; i < rep.replica_values.size(); ++i)
      os << i << "," << fmt_double(rep.replica_values[i]) << "\n";
    write_text_file(dump_replicas, os.str());
  }
  emit(j, out);
  return pass ? 0 : 1;
}

int cmd_lemmas(int max_k, int range, const std::string& out) {
  auto checks = run_lemma_suite(max_k, range);
  json rows = json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    json r;
    r["lemma"] = c.lemma;
    r["k"] = c.k;
    r["cases"] = c.cases;
    r["status"] = !c.note.empty() ? c.note : (c.pass ? "pass" : "fail");
    if (!c.pass) all_pass = false;
    rows.push_back(r);
  }
  json j;
  j["schema"] = 1;
  j["command"] = "lemmas";
  j["max_k"] = max_k;
  j["range"] = range;
  j["results"] = rows;
  j["pass"] = all_pass;
  emit(j, out);
  return all_pass ? 0 : 1;
}

int cmd_universality(const std::vector<int>& n_list, int max_degree,
                     const std::vector<std::string>& ensembles, const std::string& out) {
  auto profiles = profiles_up_to_degree(max_degree);
  json table = json::array();
  bool all_pass = true;
  for (const auto& ens_name : ensembles) {
    Family fam = family_from_name(ens_name);
    for (const auto& prof : profiles) {
      double limit = gaussian_limit_moment(prof, prof);
      json row;
      row["ensemble"] = ens_name;
      row["profile"] = profile_name(prof) + " x conj";
      row["limit"] = limit;
      json traj = json::array();
      double first_err = -1.0, last_err = -1.0;
      for (int n : n_list) {
        if (n < prof.degree()) continue;
        double v = exact_joint_moment(prof, prof, EnsembleSpec(fam, n), n);
        double err = std::abs(v - limit);
        if (first_err < 0) first_err = err;
        last_err = err;
        traj.push_back({{"n", n}, {"value", v}, {"abs_error", err}});
      }
      row["trajectory"] = traj;
      bool pass = last_err >= 0 && last_err <= first_err + 1e-12 &&
                  last_err <= 0.2 * std::max(1.0, std::abs(limit));
      row["pass"] = pass;
      all_pass = all_pass && pass;
      table.push_back(row);
    }
    // an unmatched profile vanishes identically
    PowerSumProfile a{1}, b{0, 1};
    json row;
    row["ensemble"] = ens_name;
    row["profile"] = "p1 x conj(p2)  (unmatched)";
    row["limit"] = 0.0;
    json traj = json::array();
    bool zero = true;
    for (int n : n_list) {
      if (n < 2) continue;
      double v = exact_joint_moment(a, b, EnsembleSpec(fam, n), n);
      zero = zero && v == 0.0;
      traj.push_back({{"n", n}, {"value", v}});
    }
    row["trajectory"] = traj;
    row["pass"] = zero;
    all_pass = all_pass && zero;
    table.push_back(row);
  }
  json cond = json::array();
  for (const auto& ens_name : ensembles) {
    for (int m : {1, 2}) {
      auto ratios = check_moment_condition(family_from_name(ens_name), m, n_list);
      json r;
      r["ensemble"] = ens_name;
      r["m"] = m;
      r["ratios"] = ratios;
      cond.push_back(r);
    }
  }
  json j;
  j["schema"] = 1;
  j["command"] = "universality";
  j["moment_condition"] = cond;
  j["moments"] = table;
  j["pass"] = all_pass;
  emit(j, out);
  return all_pass ? 0 : 1;
}

int cmd_gff(int n, int replicas, std::uint64_t seed, const std::string& fspec, int resolution,
            bool grid_only, int threads, const std::string& out) {
  EnsembleSpec ens(Family::ginibre, n);
  if (grid_only) {
    ExpectedLogAbs table(ens);
    PointSample s = sample_ensemble(ens, seed);
    GridSpec spec;
    spec.half_width = 1.5;
    spec.resolution = resolution;
    FieldGrid grid = field_grid(s, spec, table);
    std::ostringstream os;
    write_field_grid_csv(os, grid);
    if (out.empty()) {
      std::cout << os.str();
    } else {
      write_text_file(out, os.str());
      emit(field_grid_meta(grid), out + ".json");
    }
    return 0;
  }
  TestFunction f = parse_test_function(fspec);
  PairingReport rep = pair_with_test_function(f, ens, replicas, resolution, seed, threads);
  json j;
  j["schema"] = 1;
  j["command"] = "gff";
  j["f"] = fspec;
  j["n"] = n;
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["resolution"] = resolution;
  j["pairing_variance"] = estimate_json(rep.pairing_variance);
  j["predicted_total"] = rep.predicted_total;
  double ratio = rep.pairing_variance.value.real() / rep.predicted_total;
  j["ratio"] = ratio;
  j["identity_worst"] = rep.identity_worst;
  j["grid_tolerance"] = rep.grid_tolerance;
  j["mean_mask_fraction"] = rep.mean_mask_fraction;
  bool pass = rep.identity_worst <= rep.grid_tolerance;
  double tol = std::max(0.1 * rep.predicted_total, 3.0 * rep.pairing_variance.std_error);
  pass = pass && std::abs(rep.pairing_variance.value.real() - rep.predicted_total) <= tol;
  j["pass"] = pass;
  emit(j, out);
  return pass ? 0 : 1;
}

int cmd_cumulant(const std::string& exponents, int n, const std::string& out) {
  auto monomials = parse_exponent_list(exponents);
  Rational exact = upsilon_k(monomials, n);
  json j;
  j["schema"] = 1;
  j["command"] = "cumulant";
  json exps = json::array();
  for (const auto& m : monomials) exps.push_back({m.alpha, m.beta});
  j["exponents"] = exps;
  j["n"] = n;
  j["exact_value_as_fraction"] = to_string(exact);
  j["exact_value"] = exact.get_d();
  long sa = 0, sb = 0;
  for (const auto& m : monomials) {
    sa += m.alpha;
    sb += m.beta;
  }
  if (sa == sb && sa >= 1) {
    auto asym = asymptotic_cumulant(monomials);
    j["asymptotic"] = {{"n_coefficient", to_string(asym.n_coefficient)},
                       {"constant_term", to_string(asym.constant_term)}};
  } else {
    j["asymptotic"] = nullptr;  // unbalanced degrees: identically zero
  }
  emit(j, out);
  return 0;
}

int cmd_moments(const std::string& ensemble, int n, int max_ell, const std::string& out) {
  EnsembleSpec ens(family_from_name(ensemble), n);
  auto table = RadialMomentTable::build(ens, max_ell);
  emit(moment_table_to_json(table), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvalue point processes of rotation-invariant determinantal "
               "ensembles: samplers, exact cumulants, and limit-variance checks"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (results are unchanged)");

  std::string ensemble = "ginibre", fspec = "Re z", fspec_gff = "bump", out, format = "csv",
      dump_replicas;
  std::string exponents = "1,0;0,1";
  int n = 64, replicas = 1000, max_k = 5, range = 3, resolution = 256, max_degree = 4;
  int max_ell = 64;
  std::uint64_t seed = 0;
  bool running_sums = false, moduli = false, grid_only = false;
  std::vector<int> n_list = {16, 32, 64, 128};
  std::vector<std::string> ensembles = {"ginibre", "bergman", "unitary"};

  auto* sample = app.add_subcommand("sample", "draw one point configuration");
  sample->add_option("--ensemble", ensemble, "ginibre|bergman|unitary|iid_disk");
  sample->add_option("--n", n, "process size")->required();
  sample->add_option("--seed", seed, "rng seed (mandatory, never defaulted)")->required();
  sample->add_option("--out", out, "output path (stdout if omitted)");
  sample->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sample->add_flag("--running-sums", running_sums, "emit running sums ordered by argument");
  sample->add_flag("--moduli", moduli, "emit independent-radii moduli instead of points");

  auto* vclt = app.add_subcommand("verify-clt", "Monte Carlo vs analytic variance, side by side");
  vclt->add_option("--f", fspec, "test function expression or builtin");
  vclt->add_option("--ensemble", ensemble);
  vclt->add_option("--n", n)->required();
  vclt->add_option("--replicas", replicas);
  vclt->add_option("--seed", seed)->required();
  vclt->add_option("--out", out);
  vclt->add_option("--dump-replicas", dump_replicas, "CSV of per-replica statistic values");

  auto* lemmas = app.add_subcommand("lemmas", "brute-force vs closed-form surjection functionals");
  lemmas->add_option("--max-k", max_k)->check(CLI::Range(1, 8));
  lemmas->add_option("--range", range, "integer input range [-range, range]")
      ->check(CLI::Range(1, 4));
  lemmas->add_option("--out", out);

  auto* univ = app.add_subcommand("universality", "exact joint moments vs gaussian limits");
  univ->add_option("--n-list", n_list);
  univ->add_option("--degree", max_degree)->check(CLI::Range(1, 8));
  univ->add_option("--ensembles", ensembles);
  univ->add_option("--out", out);

  auto* gff = app.add_subcommand("gff", "fluctuation field of log|p_n|: grids and pairings");
  gff->add_option("--n", n)->required();
  gff->add_option("--replicas", replicas);
  gff->add_option("--seed", seed)->required();
  gff->add_option("--f", fspec_gff, "compactly supported test function (builtin bump)");
  gff->add_option("--resolution", resolution);
  gff->add_flag("--grid-only", grid_only, "emit one h_n grid as CSV and exit");
  gff->add_option("--out", out);

  auto* cum = app.add_subcommand("cumulant", "exact joint cumulant of monomial statistics");
  cum->add_option("--exponents", exponents, "list 'a,b;a,b;...'")->required();
  cum->add_option("--n", n)->required();
  cum->add_option("--out", out);

  auto* mom = app.add_subcommand("moments", "radial moment table as JSON");
  mom->add_option("--ensemble", ensemble);
  mom->add_option("--n", n)->required();
  mom->add_option("--max-ell", max_ell);
  mom->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return cmd_sample(ensemble, n, seed, out, format, running_sums, moduli);
    if (vclt->parsed())
      return cmd_verify_clt(fspec, ensemble, n, replicas, seed, threads, out, dump_replicas);
    if (lemmas->parsed()) return cmd_lemmas(max_k, range, out);
    if (univ->parsed()) return cmd_universality(n_list, max_degree, ensembles, out);
    if (gff->parsed())
      return cmd_gff(n, replicas, seed, fspec_gff, resolution, grid_only, threads, out);
    if (cum->parsed()) return cmd_cumulant(exponents, n, out);
    if (mom->parsed()) return cmd_moments(ensemble, n, max_ell, out);
  } catch (const std::exception& e) {
    json err;
    err["schema"] = 1;
    err["error"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 2;
  }
  return 2;
}
