#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "diglab/census.hpp"
#include "diglab/components.hpp"
#include "diglab/degree_law.hpp"
#include "diglab/digraph.hpp"
#include "diglab/generators.hpp"
#include "diglab/rng.hpp"
#include "diglab/scc.hpp"
#include "diglab/theory.hpp"

namespace diglab {

struct ModelSpec {
  std::string kind;  // er | cm | fixture
  double lambda = 0;                    // er
  std::string law_text;                 // cm: "poisson:L" or "regular:D"
  std::string fixture_name;             // fixture
  std::vector<std::size_t> fixture_params;
  bool simple = false;  // cm: erase self-loops/multi-edges after matching

  std::string label() const {
    std::ostringstream os;
    if (kind == "er") {
      os << "er:lambda=" << lambda;
    } else if (kind == "cm") {
      os << "cm:" << law_text << (simple ? ":simple" : "");
    } else {
      os << "fixture:" << fixture_name;
      for (std::size_t p : fixture_params) os << ':' << p;
    }
    return os.str();
  }

  /// Limiting degree law, when the model has one (fixtures do not).
  std::optional<DegreeLaw> limit_law() const {
    if (kind == "er") {
      if (lambda <= 0) return std::nullopt;
      return DegreeLaw::poisson(lambda);
    }
    if (kind == "cm") return parse_degree_law(law_text);
    return std::nullopt;
  }

  Digraph generate(std::size_t n, std::uint64_t seed) const {
    if (kind == "er") return gen_directed_er(n, lambda, seed);
    if (kind == "cm") {
      DegreeLaw law = parse_degree_law(law_text);
      auto seq = sample_degree_sequence(law, n, seed);
      Digraph g = gen_directed_cm(seq.in_degrees, seq.out_degrees,
                                  splitmix64(seed));
      if (simple) g = erase_to_simple(g);
      return g;
    }
    if (kind == "fixture") return fixture(fixture_name, fixture_params);
    throw std::invalid_argument("unknown model kind: " + kind);
  }
};

struct ExperimentConfig {
  std::vector<ModelSpec> models;
  std::vector<std::size_t> n_ladder;
  std::size_t seeds = 1;
  std::uint64_t base_seed = 1;
  std::vector<std::size_t> k_list;
  std::vector<std::size_t> radii;
  std::size_t pair_budget = 100000;  // Monte Carlo samples for N^k(2)
  std::size_t bp_replicates = 100000;
  std::map<std::string, double> tolerances;
  std::string out_dir = "out";
  std::size_t threads = 1;

  double tolerance(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  for (const auto& jm : j.at("models")) {
    ModelSpec m;
    m.kind = jm.at("model").get<std::string>();
    if (m.kind == "er") {
      m.lambda = jm.at("lambda").get<double>();
    } else if (m.kind == "cm") {
      m.law_text = jm.at("law").get<std::string>();
      m.simple = jm.value("simple", false);
    } else if (m.kind == "fixture") {
      m.fixture_name = jm.at("name").get<std::string>();
      for (const auto& p : jm.value("params", nlohmann::json::array()))
        m.fixture_params.push_back(p.get<std::size_t>());
    } else {
      throw std::invalid_argument("config: unknown model " + m.kind);
    }
    cfg.models.push_back(std::move(m));
  }
  cfg.n_ladder = j.at("n_ladder").get<std::vector<std::size_t>>();
  for (std::size_t i = 1; i < cfg.n_ladder.size(); ++i)
    if (cfg.n_ladder[i] < cfg.n_ladder[i - 1])
      throw std::invalid_argument("config: n_ladder must be ascending");
  cfg.seeds = j.at("seeds").get<std::size_t>();
  if (cfg.seeds < 1) throw std::invalid_argument("config: seeds >= 1");
  cfg.base_seed = j.value("seed", std::uint64_t{1});
  cfg.k_list = j.value("k_list", std::vector<std::size_t>{});
  cfg.radii = j.value("radii", std::vector<std::size_t>{});
  cfg.pair_budget = j.value("pair_budget", std::size_t{100000});
  cfg.bp_replicates = j.value("bp_replicates", std::size_t{100000});
  if (j.contains("tolerances"))
    for (const auto& [key, value] : j.at("tolerances").items())
      cfg.tolerances[key] = value.get<double>();
  cfg.out_dir = j.value("out_dir", std::string("out"));
  cfg.threads = j.value("threads", std::size_t{1});
  if (const char* env = std::getenv("DIGLAB_THREADS"))
    cfg.threads = std::stoul(env);
  if (cfg.threads < 1) cfg.threads = 1;
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

struct ResultRow {
  std::string model;
  std::size_t n = 0;
  std::size_t seed_index = 0;
  double lscc_frac = 0;
  double second_frac = 0;
  double kn_frac = 0;
  double alpha1 = 0;
  double giant_edge_frac = 0;
  std::vector<double> z_frac;    // aligned with k_list
  std::vector<double> nk_frac;   // N^k / n^2
  std::vector<double> nk2_frac;  // N^k(2) / n^2
  std::vector<double> census_tv;  // aligned with radii
  double theory_zeta = std::nan("");
  double theory_scc_density = std::nan("");
};

namespace detail {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string csv_header(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "model,n,seed,lscc_frac,second_frac,kn_frac,alpha1,giant_edge_frac";
  for (std::size_t k : cfg.k_list) os << ",z_frac_k" << k;
  for (std::size_t k : cfg.k_list) os << ",nk_frac_k" << k;
  for (std::size_t k : cfg.k_list) os << ",nk2_frac_k" << k;
  for (std::size_t r : cfg.radii) os << ",census_tv_r" << r;
  os << ",theory_zeta,theory_scc_density";
  return os.str();
}

inline std::string csv_row(const ResultRow& row) {
  std::ostringstream os;
  os << row.model << ',' << row.n << ',' << row.seed_index << ','
     << format_double(row.lscc_frac) << ',' << format_double(row.second_frac)
     << ',' << format_double(row.kn_frac) << ',' << format_double(row.alpha1)
     << ',' << format_double(row.giant_edge_frac);
  for (double x : row.z_frac) os << ',' << format_double(x);
  for (double x : row.nk_frac) os << ',' << format_double(x);
  for (double x : row.nk2_frac) os << ',' << format_double(x);
  for (double x : row.census_tv) os << ',' << format_double(x);
  os << ',' << format_double(row.theory_zeta) << ','
     << format_double(row.theory_scc_density);
  return os.str();
}

}  // namespace detail

/// One fully analyzed replicate. The replicate seed is derived from
/// (base_seed, stream) via the SplitMix mix, so rows are independent of
/// scheduling.
inline ResultRow compute_row(const ExperimentConfig& cfg,
                             const ModelSpec& model, std::size_t n,
                             std::size_t seed_index, std::uint64_t stream,
                             const LimitValues* theory,
                             const std::vector<Census>* bp_censuses) {
  const std::uint64_t seed = derive_seed(cfg.base_seed, stream);
  Digraph g = model.generate(n, seed);
  SccDecomposition scc = scc_decompose(g);
  GiantStats gs = giant_stats(g, scc);

  ResultRow row;
  row.model = model.label();
  row.n = n;
  row.seed_index = seed_index;
  const double dn = static_cast<double>(n);
  row.lscc_frac = gs.size_lscc / dn;
  row.second_frac = gs.size_second / dn;
  row.kn_frac = gs.k_n / dn;
  row.alpha1 = gs.alpha1;
  row.giant_edge_frac = gs.giant_edge_count / dn;

  for (std::size_t i = 0; i < cfg.k_list.size(); ++i) {
    PairSampling pairs =
        scc.num_components() <= ReachClosure::kDefaultLimit
            ? PairSampling::exact()
            : PairSampling::monte_carlo(cfg.pair_budget,
                                        derive_seed(seed, 1000 + i));
    ConditionCounters cc = condition_counters(g, scc, cfg.k_list[i], pairs);
    row.z_frac.push_back(cc.z_geq_k / dn);
    row.nk_frac.push_back(cc.n_k / (dn * dn));
    row.nk2_frac.push_back(cc.n_k_2 / (dn * dn));
  }
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    Census full = census(g, cfg.radii[i], /*sample=*/0, 0);
    row.census_tv.push_back(
        bp_censuses ? tv_distance(full, (*bp_censuses)[i]) : std::nan(""));
  }
  if (theory) {
    row.theory_zeta = theory->zeta;
    row.theory_scc_density = theory->scc_density_treelike;
  }
  return row;
}

/// Runs the sweep, appending CSV rows incrementally in (model, n, seed)
/// order. With resume = true, an existing partial CSV is treated as a
/// completed prefix and only the remaining rows are computed. Wall-clock
/// timings go to a separate log so the CSV stays byte-reproducible.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                        const std::string& csv_path,
                                        bool resume = false,
                                        std::ostream* timing_log = nullptr) {
  struct Task {
    std::size_t model_idx, n, seed_idx, stream;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi)
    for (std::size_t ni = 0; ni < cfg.n_ladder.size(); ++ni)
      for (std::size_t si = 0; si < cfg.seeds; ++si)
        tasks.push_back({mi, cfg.n_ladder[ni], si,
                         (mi * cfg.n_ladder.size() + ni) * cfg.seeds + si});

  // Per-model theory values and branching-process censuses, computed once.
  std::vector<std::optional<LimitValues>> theories(cfg.models.size());
  std::vector<std::optional<std::vector<Census>>> bp(cfg.models.size());
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    auto law = cfg.models[mi].limit_law();
    if (!law) continue;
    theories[mi] = solve_limits(*law);
    std::vector<Census> censuses;
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri)
      censuses.push_back(simulate_limit_census(
          *law, cfg.radii[ri], cfg.bp_replicates,
          derive_seed(cfg.base_seed, 900000000 + mi * 100 + ri)));
    bp[mi] = std::move(censuses);
  }

  const std::string header = detail::csv_header(cfg);
  std::size_t done = 0;
  if (resume && std::filesystem::exists(csv_path)) {
    std::ifstream in(csv_path);
    std::string line;
    if (std::getline(in, line)) {
      if (line != header)
        throw std::runtime_error("resume: CSV header mismatch in " + csv_path);
      while (std::getline(in, line) && !line.empty()) {
        if (done >= tasks.size())
          throw std::runtime_error("resume: more rows than tasks");
        std::ostringstream key;
        const Task& t = tasks[done];
        key << cfg.models[t.model_idx].label() << ',' << t.n << ','
            << t.seed_idx << ',';
        if (line.rfind(key.str(), 0) != 0)
          throw std::runtime_error("resume: row " + std::to_string(done) +
                                   " does not match the expected task order");
        ++done;
      }
    }
  }

  std::ofstream out(csv_path, done > 0 ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + csv_path);
  if (done == 0) out << header << '\n';

  std::vector<std::optional<ResultRow>> results(tasks.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next_task{done};
  std::size_t next_write = done;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      auto t0 = std::chrono::steady_clock::now();
      ResultRow row = compute_row(
          cfg, cfg.models[t.model_idx], t.n, t.seed_idx, t.stream,
          theories[t.model_idx] ? &*theories[t.model_idx] : nullptr,
          bp[t.model_idx] ? &*bp[t.model_idx] : nullptr);
      auto dt = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      std::lock_guard lock(mu);
      results[i] = std::move(row);
      if (timing_log)
        *timing_log << results[i]->model << ',' << t.n << ',' << t.seed_idx
                    << ',' << dt << "s\n";
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);

  {
    std::unique_lock lock(mu);
    while (next_write < tasks.size()) {
      cv.wait(lock, [&] {
        return next_write >= tasks.size() || results[next_write].has_value();
      });
      while (next_write < tasks.size() && results[next_write]) {
        out << detail::csv_row(*results[next_write]) << '\n';
        out.flush();  // crash-safe incremental append
        ++next_write;
      }
    }
  }
  for (auto& th : pool) th.join();

  std::vector<ResultRow> rows;
  for (auto& r : results)
    if (r) rows.push_back(std::move(*r));
  return rows;
}

// --- verification -----------------------------------------------------------

struct VerifyCheck {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double value = 0;
  double target = 0;
  double margin = 0;  // tolerance - |value - target|, negative on failure
  std::string note;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass && !c.skipped) return false;
    return true;
  }
};

namespace detail {

inline void check_abs(VerifyReport& rep, const std::string& name, double value,
                      double target, double tol) {
  VerifyCheck c;
  c.name = name;
  c.value = value;
  c.target = target;
  c.margin = tol - std::abs(value - target);
  c.pass = c.margin >= 0;
  rep.checks.push_back(c);
}

inline void check_below(VerifyReport& rep, const std::string& name,
                        double value, double bound) {
  VerifyCheck c;
  c.name = name;
  c.value = value;
  c.target = bound;
  c.margin = bound - value;
  c.pass = c.margin >= 0;
  rep.checks.push_back(c);
}

inline void check_skip(VerifyReport& rep, const std::string& name,
                       const std::string& why) {
  VerifyCheck c;
  c.name = name;
  c.skipped = true;
  c.pass = true;
  c.note = why;
  rep.checks.push_back(c);
}

}  // namespace detail

/// Evaluates the theorem-level checks on every (model, n) ensemble of the
/// config: giant fraction against zeta, K_n/n against 1 - zeta, the exact
/// K_n identity, alpha1, degree census in the giant, giant edge density,
/// N^k decay, and census TV against the simulated limit. Tolerances come
/// from the config, with defaults matching this project's acceptance suite.
inline VerifyReport verify(const ExperimentConfig& cfg) {
  VerifyReport rep;
  const double tol_giant = cfg.tolerance("giant_frac", 0.01);
  const double tol_second = cfg.tolerance("second_frac", 0.005);
  const double tol_kn = cfg.tolerance("kn_frac", 0.01);
  const double tol_alpha1 = cfg.tolerance("alpha1", 0.01);
  const double tol_degree = cfg.tolerance("degree_mass", 0.01);
  const double tol_edge = cfg.tolerance("edge_density", 0.03);
  const double tol_nk = cfg.tolerance("nk_tail", 0.02);
  const double tol_tv = cfg.tolerance("census_tv", 0.05);

  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    const ModelSpec& model = cfg.models[mi];
    auto law = model.limit_law();
    std::optional<LimitValues> theory;
    if (law) theory = solve_limits(*law);

    std::vector<std::optional<Census>> bp_censuses(cfg.radii.size());
    if (law)
      for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri)
        bp_censuses[ri] = simulate_limit_census(
            *law, cfg.radii[ri], cfg.bp_replicates,
            derive_seed(cfg.base_seed, 900000000 + mi * 100 + ri));

    for (std::size_t ni = 0; ni < cfg.n_ladder.size(); ++ni) {
      const std::size_t n = cfg.n_ladder[ni];
      const double dn = static_cast<double>(n);
      std::string tag = model.label() + " n=" + std::to_string(n);

      double sum_lscc = 0, sum_kn = 0, sum_alpha1 = 0, sum_edge = 0;
      double max_second = 0;
      std::map<std::pair<std::uint32_t, std::uint32_t>, double> degree_mass;
      std::vector<double> sum_nk(cfg.k_list.size(), 0);
      std::vector<double> max_tv(cfg.radii.size(), 0);
      bool kn_identity_ok = true;

      for (std::size_t si = 0; si < cfg.seeds; ++si) {
        std::uint64_t stream = (mi * cfg.n_ladder.size() + ni) * cfg.seeds + si;
        std::uint64_t seed = derive_seed(cfg.base_seed, stream);
        Digraph g = model.generate(n, seed);
        SccDecomposition scc = scc_decompose(g);
        GiantStats gs = giant_stats(g, scc);
        sum_lscc += gs.size_lscc / dn;
        sum_kn += gs.k_n / dn;
        sum_alpha1 += gs.alpha1;
        sum_edge += gs.giant_edge_count / dn;
        max_second = std::max(max_second, gs.size_second / dn);
        for (const auto& [deg, count] : gs.degree_census_in_giant)
          degree_mass[deg] += count / dn;

        // K_n = sum_v 1/|C_v|, checked exactly: vertices with |C_v| = s
        // must come in groups of s.
        {
          std::map<std::uint32_t, std::uint64_t> by_size;
          for (std::uint32_t c = 0; c < scc.num_components(); ++c)
            by_size[scc.comp_sizes[c]] += scc.comp_sizes[c];
          std::uint64_t total = 0;
          for (auto [size, vertices] : by_size) {
            if (vertices % size != 0) kn_identity_ok = false;
            total += vertices / size;
          }
          if (total != gs.k_n) kn_identity_ok = false;
        }

        for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
          ConditionCounters cc = condition_counters(
              g, scc, cfg.k_list[ki],
              scc.num_components() <= ReachClosure::kDefaultLimit
                  ? PairSampling::exact()
                  : PairSampling::monte_carlo(cfg.pair_budget,
                                              derive_seed(seed, 1000 + ki)));
          sum_nk[ki] += cc.n_k / (dn * dn);
        }
        for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
          if (!bp_censuses[ri]) continue;
          Census full = census(g, cfg.radii[ri], 0, 0);
          max_tv[ri] =
              std::max(max_tv[ri], tv_distance(full, *bp_censuses[ri]));
        }
      }

      const double seeds = static_cast<double>(cfg.seeds);
      VerifyCheck identity;
      identity.name = tag + " K_n == sum_v 1/|C_v| (exact)";
      identity.pass = kn_identity_ok;
      identity.value = kn_identity_ok ? 1 : 0;
      identity.target = 1;
      identity.margin = kn_identity_ok ? 0 : -1;
      rep.checks.push_back(identity);

      if (theory) {
        detail::check_abs(rep, tag + " mean |C_max|/n vs zeta",
                          sum_lscc / seeds, theory->zeta, tol_giant);
        detail::check_below(rep, tag + " max |C_(2)|/n", max_second,
                            tol_second);
        detail::check_abs(rep, tag + " mean K_n/n vs 1-zeta", sum_kn / seeds,
                          theory->scc_density_treelike, tol_kn);
        detail::check_abs(rep, tag + " mean alpha1 vs 1-zeta",
                          sum_alpha1 / seeds, theory->scc_density_treelike,
                          tol_alpha1);
        if (theory->zeta > 0) {
          detail::check_abs(rep, tag + " |E(C_max)|/n vs theory",
                            sum_edge / seeds, theory->giant_edge_density,
                            tol_edge);
          for (std::uint32_t l = 0; l <= 4; ++l)
            for (std::uint32_t m = 0; m <= 4; ++m) {
              auto it = degree_mass.find({l, m});
              double value = it == degree_mass.end() ? 0 : it->second / seeds;
              detail::check_abs(
                  rep,
                  tag + " v1(" + std::to_string(l) + "," + std::to_string(m) +
                      ")/n vs theory",
                  value, giant_degree_mass(*theory, l, m), tol_degree);
            }
        }
      } else {
        detail::check_skip(rep, tag + " theory comparisons",
                           "model has no limiting degree law");
      }

      for (std::size_t ki = 0; ki + 1 < cfg.k_list.size(); ++ki)
        detail::check_below(
            rep,
            tag + " N^k/n^2 decreasing (k=" + std::to_string(cfg.k_list[ki]) +
                " -> " + std::to_string(cfg.k_list[ki + 1]) + ")",
            sum_nk[ki + 1] / seeds, sum_nk[ki] / seeds + 1e-12);
      if (!cfg.k_list.empty())
        detail::check_below(rep,
                            tag + " N^k/n^2 at k=" +
                                std::to_string(cfg.k_list.back()),
                            sum_nk.back() / seeds, tol_nk);

      for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        std::string name =
            tag + " census TV vs limit (r=" + std::to_string(cfg.radii[ri]) +
            ")";
        if (bp_censuses[ri])
          detail::check_below(rep, name, max_tv[ri], tol_tv);
        else
          detail::check_skip(rep, name, "model has no limiting degree law");
      }
    }
  }
  return rep;
}

inline void print_report(const VerifyReport& rep, std::ostream& os) {
  for (const auto& c : rep.checks) {
    if (c.skipped) {
      os << "SKIP " << c.name << " (" << c.note << ")\n";
      continue;
    }
    os << (c.pass ? "PASS " : "FAIL ") << c.name
       << ": value=" << detail::format_double(c.value)
       << " target=" << detail::format_double(c.target)
       << " margin=" << detail::format_double(c.margin) << '\n';
  }
}

}  // namespace diglab
