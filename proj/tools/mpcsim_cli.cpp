// Command-line front end: each subcommand reproduces one family of
// desk-scale experiments and writes a deterministic JSON report.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mpcsim/report.hpp"

namespace {

using mpcsim::ExperimentReport;

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  if (path.empty()) return kv;
  std::ifstream in(path);
  if (!in) throw mpcsim::SpecError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void emit(const ExperimentReport& rep, const std::string& out_path,
          double wall_seconds) {
  std::cout << rep.to_table(wall_seconds);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << rep.to_json();
    std::cout << "  report: " << out_path << "\n";
  }
}

template <typename F>
int timed(F&& f, const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  ExperimentReport rep = f();
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  emit(rep, out_path, secs);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale simulator for committee-based security uplifting"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  uint64_t seed = 1;
  int trials = 10000;
  std::string out_path;
  std::string config_path;
  app.add_option("--seed", seed, "root seed");
  app.add_option("--trials", trials, "Monte-Carlo trials");
  app.add_option("--out", out_path, "JSON report path");
  app.add_option("--config", config_path, "key=value config file");

  auto* elect = app.add_subcommand("elect", "lightest-bin election bound");
  int e_n = 2000, e_np = 100;
  double e_b = 0.3, e_bp = 0.6;
  bool e_csv = false;
  elect->add_option("--n", e_n);
  elect->add_option("--n-prime", e_np);
  elect->add_option("--beta", e_b);
  elect->add_option("--beta-prime", e_bp);
  elect->add_flag("--csv", e_csv, "emit per-trial rows");

  auto* uplift = app.add_subcommand("uplift", "full-security uplift runs");
  std::string u_f = "cf", u_adv = "none";
  int u_n = 40, u_np = 8, u_kappa = 256;
  double u_b = 0.25, u_bp = 0.5, u_phi = 2.0;
  uint64_t u_inputs = 0;
  uplift->add_option("--functionality", u_f, "cf | or");
  uplift->add_option("--adversary", u_adv);
  uplift->add_option("--n", u_n);
  uplift->add_option("--n-prime", u_np);
  uplift->add_option("--beta", u_b);
  uplift->add_option("--beta-prime", u_bp);
  uplift->add_option("--kappa", u_kappa);
  uplift->add_option("--phi", u_phi);
  uplift->add_option("--inputs", u_inputs, "input bit mask for OR");

  auto* attack = app.add_subcommand("attack", "lower-bound attack pipeline");
  std::string a_preset = "hybrid6", a_mode = "exact";
  attack->add_option("--preset", a_preset, "toy1|toy2|toy3|hybrid6|honest");
  attack->add_option("--mode", a_mode, "exact | mc");

  auto* subs = app.add_subcommand("subcommittees", "sub-committee combinatorics");
  int s_kappa = 256;
  double s_phi = 2.0, s_bp = 0.25;
  subs->add_option("--kappa", s_kappa);
  subs->add_option("--phi", s_phi);
  subs->add_option("--beta-prime", s_bp);

  auto* replay = app.add_subcommand("replay", "re-run a saved attack artifact");
  std::string r_path;
  replay->add_option("report", r_path, "saved JSON report")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load_config(config_path);
    auto get_int = [&cfg](const std::string& key, int& slot) {
      if (cfg.count(key)) slot = std::stoi(cfg[key]);
    };
    auto get_dbl = [&cfg](const std::string& key, double& slot) {
      if (cfg.count(key)) slot = std::stod(cfg[key]);
    };
    get_int("n", e_n);
    get_int("n", u_n);
    get_int("n_prime", e_np);
    get_int("n_prime", u_np);
    get_dbl("beta", e_b);
    get_dbl("beta", u_b);
    get_dbl("beta_prime", e_bp);
    get_dbl("beta_prime", u_bp);
    get_int("kappa", u_kappa);
    get_int("kappa", s_kappa);
    get_dbl("phi", u_phi);
    get_dbl("phi", s_phi);

    if (elect->parsed())
      return timed(
          [&] {
            return mpcsim::cmd_elect(e_n, e_np, e_b, e_bp, trials, seed, e_csv);
          },
          out_path);
    if (uplift->parsed()) {
      if (u_f == "cf")
        return timed(
            [&] {
              return mpcsim::cmd_uplift_cf(u_n, u_np, u_b, u_bp, u_adv, trials,
                                           seed);
            },
            out_path);
      if (u_f == "or")
        return timed(
            [&] {
              return mpcsim::cmd_uplift_or(u_n, u_kappa, u_phi, u_bp, u_inputs,
                                           u_adv, trials, seed);
            },
            out_path);
      throw mpcsim::SpecError("unknown functionality: " + u_f);
    }
    if (attack->parsed())
      return timed(
          [&] { return mpcsim::cmd_attack(a_preset, a_mode, trials, seed); },
          out_path);
    if (subs->parsed())
      return timed(
          [&] {
            return mpcsim::cmd_subcommittees(s_kappa, s_phi, s_bp, trials, seed);
          },
          out_path);
    if (replay->parsed()) {
      std::ifstream in(r_path, std::ios::binary);
      if (!in) throw mpcsim::SpecError("cannot open report: " + r_path);
      std::stringstream ss;
      ss << in.rdbuf();
      return timed([&] { return mpcsim::cmd_replay(ss.str()); }, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
