// Command-line front end: generate ensembles, analyze single graphs, run
// neighborhood censuses, print limit values, and drive config sweeps.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diglab/census.hpp"
#include "diglab/components.hpp"
#include "diglab/degree_law.hpp"
#include "diglab/digraph.hpp"
#include "diglab/generators.hpp"
#include "diglab/reach.hpp"
#include "diglab/scc.hpp"
#include "diglab/sweep.hpp"
#include "diglab/theory.hpp"

namespace {

using nlohmann::json;

std::string base64_encode(const std::string& bytes) {
  static const char* table =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t chunk = static_cast<unsigned char>(bytes[i]) << 16;
    if (i + 1 < bytes.size())
      chunk |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    if (i + 2 < bytes.size()) chunk |= static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(table[(chunk >> 18) & 63]);
    out.push_back(table[(chunk >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? table[(chunk >> 6) & 63] : '=');
    out.push_back(i + 2 < bytes.size() ? table[chunk & 63] : '=');
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stoul(item));
  return out;
}

diglab::DegreeLaw load_law(const std::string& text) {
  if (text.rfind("file:", 0) == 0) {
    std::ifstream in(text.substr(5));
    if (!in) throw std::runtime_error("cannot open law file " + text.substr(5));
    json j;
    in >> j;
    std::vector<diglab::DegreeLaw::Atom> atoms;
    for (const auto& row : j)
      atoms.push_back({row.at(0).get<std::uint32_t>(),
                       row.at(1).get<std::uint32_t>(),
                       row.at(2).get<double>()});
    return diglab::DegreeLaw::explicit_joint(std::move(atoms));
  }
  return diglab::parse_degree_law(text);
}

diglab::Digraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return diglab::read_edge_list(in);
}

json census_to_json(const diglab::Census& c) {
  // sorted by descending frequency, ties by signature
  std::vector<std::pair<std::string, std::uint64_t>> entries(c.counts.begin(),
                                                             c.counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  json arr = json::array();
  for (const auto& [sig, count] : entries)
    arr.push_back({{"signature", base64_encode(sig)},
                   {"freq", static_cast<double>(count) / c.normalizer},
                   {"exact", !sig.empty() && sig[0] == 'E'}});
  return json{{"radius", c.radius},
              {"population", c.population},
              {"sample_size", c.sample_size},
              {"total_mass", c.total_mass()},
              {"exact_share", c.exact_share()},
              {"signatures", arr}};
}

int cmd_generate(const std::string& model, std::size_t n, double lambda,
                 const std::string& law_text, const std::string& fixture_name,
                 const std::string& fixture_params, std::uint64_t seed,
                 bool simple, const std::string& out_path) {
  diglab::Digraph g;
  if (model == "er") {
    g = diglab::gen_directed_er(n, lambda, seed);
  } else if (model == "cm") {
    auto law = load_law(law_text);
    auto seq = diglab::sample_degree_sequence(law, n, seed);
    if (seq.repair_count > 0)
      std::cerr << "note: degree-sum repair applied " << seq.repair_count
                << " unit increments\n";
    g = diglab::gen_directed_cm(seq.in_degrees, seq.out_degrees,
                                diglab::splitmix64(seed));
    if (simple) {
      std::size_t erased = 0;
      g = diglab::erase_to_simple(g, &erased);
      std::cerr << "note: erased " << erased
                << " self-loop/multi-edge pairs\n";
    }
  } else if (model == "fixture") {
    g = diglab::fixture(fixture_name, parse_size_list(fixture_params));
  } else {
    std::cerr << "unknown model: " << model << '\n';
    return 1;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << '\n';
    return 1;
  }
  diglab::write_edge_list(out, g);
  return 0;
}

int cmd_analyze(const std::string& in_path, const std::string& k_text,
                const std::string& pairs_text, const std::string& out_path) {
  diglab::Digraph g = load_graph(in_path);
  diglab::SccDecomposition scc = diglab::scc_decompose(g);
  diglab::GiantStats gs = diglab::giant_stats(g, scc);

  json report;
  report["n"] = gs.n;
  report["m"] = g.num_edges();
  report["size_lscc"] = gs.size_lscc;
  report["size_second"] = gs.size_second;
  report["k_n"] = gs.k_n;
  report["alpha1"] = gs.alpha1;
  report["giant_edge_count"] = gs.giant_edge_count;
  {
    json census = json::array();
    for (const auto& [deg, count] : gs.degree_census_in_giant)
      census.push_back({deg.first, deg.second, count});
    report["degree_census_in_giant"] = census;
  }

  diglab::PairSampling pairs = diglab::PairSampling::exact();
  if (pairs_text.rfind("montecarlo:", 0) == 0)
    pairs = diglab::PairSampling::monte_carlo(
        std::stoul(pairs_text.substr(11)), 12345);
  else if (pairs_text != "exact") {
    std::cerr << "pairs must be exact or montecarlo:S\n";
    return 1;
  }

  json counters = json::array();
  for (std::size_t k : parse_size_list(k_text)) {
    auto cc = diglab::condition_counters(g, scc, k, pairs);
    counters.push_back({{"k", k},
                        {"z_geq_k", cc.z_geq_k},
                        {"n_k", cc.n_k},
                        {"n_k_2", cc.n_k_2},
                        {"n_k_2_stderr", cc.n_k_2_stderr},
                        {"estimate_mode", cc.estimate_mode}});
  }
  report["condition_counters"] = counters;

  diglab::BowTie bt = diglab::bowtie(g, scc);
  json bowtie;
  for (auto part :
       {diglab::BowTiePart::LSCC, diglab::BowTiePart::IN,
        diglab::BowTiePart::OUT, diglab::BowTiePart::TENDRIL_IN,
        diglab::BowTiePart::TENDRIL_OUT, diglab::BowTiePart::TUBE,
        diglab::BowTiePart::OTHER})
    bowtie[diglab::bowtie_part_name(part)] = bt.count(part);
  report["bowtie"] = bowtie;

  std::optional<diglab::ReachClosure> closure;
  try {
    closure.emplace(scc);
  } catch (const std::exception& e) {
    report["closure_note"] = e.what();
  }
  diglab::WeakComponents wc =
      diglab::weak_components(g, scc, closure ? &*closure : nullptr);
  json weak;
  {
    std::uint32_t undirected = 0;
    for (std::uint32_t c : wc.undirected_comp_of)
      undirected = std::max(undirected, c + 1);
    weak["undirected_components"] = undirected;
  }
  if (wc.i_max) weak["i_max"] = *wc.i_max;
  if (wc.o_max) weak["o_max"] = *wc.o_max;
  if (wc.gkm_comp_of) {
    std::uint32_t gkm = 0;
    for (std::uint32_t c : *wc.gkm_comp_of) gkm = std::max(gkm, c + 1);
    weak["gkm_components"] = gkm;
  }
  report["weak_components"] = weak;

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << '\n';
    return 1;
  }
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_census(const std::string& in_path, const std::string& bp_law,
               std::size_t r, const std::string& sample_text, bool split_giant,
               std::size_t reps, std::uint64_t seed,
               const std::string& out_path) {
  json result;
  if (!bp_law.empty()) {
    auto law = load_law(bp_law);
    result = census_to_json(
        diglab::simulate_limit_census(law, r, reps, seed));
  } else {
    diglab::Digraph g = load_graph(in_path);
    std::size_t sample = 0;
    if (sample_text != "all") sample = std::stoul(sample_text);
    if (sample > g.num_vertices()) {
      std::cerr << "warning: sample exceeds n, clamped to all vertices\n";
      sample = 0;
    }
    if (split_giant) {
      diglab::SccDecomposition scc = diglab::scc_decompose(g);
      auto [giant, complement] = diglab::census_split(g, scc, r);
      result["giant"] = census_to_json(giant);
      result["complement"] = census_to_json(complement);
    } else {
      result = census_to_json(diglab::census(g, r, sample, seed));
    }
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << '\n';
    return 1;
  }
  out << result.dump(2) << '\n';
  return 0;
}

int cmd_limits(const std::string& law_text, const std::string& k_text,
               std::size_t reps, std::uint64_t seed) {
  auto law = load_law(law_text);
  diglab::LimitValues lim = diglab::solve_limits(law);
  json out;
  out["q_minus"] = lim.q_minus;
  out["q_plus"] = lim.q_plus;
  out["eta_minus"] = lim.eta_minus;
  out["eta_plus"] = lim.eta_plus;
  out["zeta"] = lim.zeta;
  out["scc_density_treelike"] = lim.scc_density_treelike;
  out["giant_edge_density"] = lim.giant_edge_density;
  out["solver_residual"] = lim.solver_residual;
  if (!k_text.empty()) {
    json proxies = json::array();
    for (std::size_t k : parse_size_list(k_text)) {
      auto proxy = diglab::zeta_geq_k_proxy(law, k, reps, seed);
      proxies.push_back({{"k", k},
                         {"estimate", proxy.estimate},
                         {"stderr", proxy.standard_error}});
    }
    out["zeta_geq_k"] = proxies;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, bool resume) {
  diglab::ExperimentConfig cfg = diglab::load_config(config_path);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream timing(cfg.out_dir + "/sweep.log", std::ios::app);
  diglab::run_sweep(cfg, cfg.out_dir + "/sweep.csv", resume, &timing);
  std::cout << "wrote " << cfg.out_dir << "/sweep.csv\n";
  return 0;
}

int cmd_verify(const std::string& config_path) {
  diglab::ExperimentConfig cfg = diglab::load_config(config_path);
  diglab::VerifyReport rep = diglab::verify(cfg);
  diglab::print_report(rep, std::cout);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digraph connectivity laboratory"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a digraph edge list");
  std::string model = "er", law_text = "poisson:2", fixture_name,
              fixture_params, out_path = "graph.txt";
  std::size_t n = 1000;
  double lambda = 2.0;
  std::uint64_t seed = 1;
  bool simple = false;
  gen->add_option("--model", model, "er | cm | fixture");
  gen->add_option("--n", n, "vertex count");
  gen->add_option("--lambda", lambda, "mean degree (er)");
  gen->add_option("--law", law_text, "poisson:L | regular:D | file:LAW.json");
  gen->add_option("--name", fixture_name, "fixture name");
  gen->add_option("--params", fixture_params, "fixture params, comma separated");
  gen->add_option("--seed", seed, "base seed");
  gen->add_flag("--simple", simple, "erase self-loops/multi-edges (cm)");
  gen->add_option("--out", out_path, "output file");

  // analyze
  auto* ana = app.add_subcommand("analyze", "component statistics report");
  std::string in_path, k_text = "1", pairs_text = "exact",
              report_path = "report.json";
  ana->add_option("--in", in_path, "edge-list file")->required();
  ana->add_option("--k", k_text, "comma-separated k thresholds");
  ana->add_option("--pairs", pairs_text, "exact | montecarlo:S");
  ana->add_option("--out", report_path, "report JSON path");

  // census
  auto* cen = app.add_subcommand("census", "neighborhood census");
  std::string census_in, bp_law, sample_text = "all",
              census_out = "census.json";
  std::size_t radius = 2, reps = 100000;
  bool split_giant = false;
  std::uint64_t census_seed = 1;
  cen->add_option("--in", census_in, "edge-list file");
  cen->add_option("--bp", bp_law, "simulate the limit for this law instead");
  cen->add_option("--r", radius, "ball radius");
  cen->add_option("--sample", sample_text, "all | K (uniform sample)");
  cen->add_flag("--split-giant", split_giant, "separate giant and complement");
  cen->add_option("--reps", reps, "branching-process replicates");
  cen->add_option("--seed", census_seed, "seed");
  cen->add_option("--out", census_out, "output JSON path");

  // limits
  auto* lim = app.add_subcommand("limits", "closed-form limit values");
  std::string limits_law = "poisson:2", k_list_text;
  std::size_t limit_reps = 100000;
  std::uint64_t limits_seed = 1;
  lim->add_option("--law", limits_law, "poisson:L | regular:D | file:LAW.json");
  lim->add_option("--k-list", k_list_text, "zeta_{>=k} proxy thresholds");
  lim->add_option("--reps", limit_reps, "proxy replicates");
  lim->add_option("--seed", limits_seed, "seed");

  // sweep / verify
  auto* swp = app.add_subcommand("sweep", "run a config-driven sweep");
  std::string sweep_config;
  bool resume = false;
  swp->add_option("--config", sweep_config, "config JSON")->required();
  swp->add_flag("--resume", resume, "continue an interrupted sweep");

  auto* ver = app.add_subcommand("verify", "check ensembles against theory");
  std::string verify_config;
  ver->add_option("--config", verify_config, "config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(model, n, lambda, law_text, fixture_name,
                          fixture_params, seed, simple, out_path);
    if (ana->parsed()) return cmd_analyze(in_path, k_text, pairs_text,
                                          report_path);
    if (cen->parsed())
      return cmd_census(census_in, bp_law, radius, sample_text, split_giant,
                        reps, census_seed, census_out);
    if (lim->parsed())
      return cmd_limits(limits_law, k_list_text, limit_reps, limits_seed);
    if (swp->parsed()) return cmd_sweep(sweep_config, resume);
    if (ver->parsed()) return cmd_verify(verify_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
