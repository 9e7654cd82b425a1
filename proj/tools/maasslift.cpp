// Command-line front end: one binary, subcommand per pipeline, with
// machine-readable JSON/CSV artifacts.
//
// Output contract:
//   - the primary JSON/CSV payload goes to stdout, or into --out DIR as
//     named artifact files (plus a manifest.json with config, versions,
//     and sha256 hashes) when a directory is given;
//   - human-readable progress and timing go to stderr;
//   - identical configuration on an identical build produces
//     byte-identical artifacts, including under --threads parallelism.
//
// Exit codes: 0 all checks pass, 2 a mathematical check failed,
// 3 usage or capability error, 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <maasslift/acceptance.hpp>
#include <maasslift/capability.hpp>
#include <maasslift/json_io.hpp>
#include <maasslift/lift.hpp>
#include <maasslift/modforms.hpp>
#include <maasslift/numbers.hpp>
#include <maasslift/parallel.hpp>
#include <maasslift/phi.hpp>
#include <maasslift/quadform.hpp>
#include <maasslift/sha256.hpp>
#include <maasslift/siegel.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ml::UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw ml::UsageError("cannot read file: " + path);
  return ss.str();
}

// Collects everything one subcommand produces; main() renders it once the
// parse has fully succeeded, so a flag error never leaves partial output.
struct RunResult {
  std::string subcommand;
  json flags = json::object();                              // resolved values
  std::vector<std::pair<std::string, std::string>> artifacts;  // name -> bytes
  std::string stdout_override;  // when set, printed instead of the payloads
  bool checks_pass = true;      // false => exit 2
  std::vector<std::string> notes;  // stderr summary lines
};

long require_even_weight(long two_k) {
  if (two_k <= 0 || two_k % 2 != 0)
    throw ml::UsageError("--twok must be a positive even integer");
  return two_k / 2;
}

// Internal self-check depth for the eigenform construction, scaled so the
// eigenvalue cross-checks fit inside the requested precision.
long eigen_check_depth(long precision) {
  if (precision >= 180) return 13;
  if (precision >= 60) return 7;
  return 3;
}

json param_entries_json(const std::map<ml::Int, ml::Rational>& values) {
  json arr = json::array();
  for (const auto& [m, c] : values) {
    if (c == 0) continue;
    arr.push_back(json{{"m", ml::to_long(m)}, {"c", ml::rational_str(c)}});
  }
  return arr;
}

// ---------------------------------------------------------------------
// Subcommand bodies.  Each fills the RunResult; none of them writes any
// output directly.
// ---------------------------------------------------------------------

void cmd_siegel(RunResult& run, const std::string& form, long p) {
  if (!ml::is_prime(ml::Int(p))) throw ml::UsageError("--p must be prime");
  ml::HalfIntegralForm h = ml::parse_form(form);
  ml::LocalSiegelData d = ml::local_siegel_data(h, p);
  std::vector<ml::Rational> phi = ml::phi_local(d);
  run.flags = {{"form", form}, {"p", p}};
  run.artifacts.emplace_back("siegel.json", ml::siegel_report_json(d, phi));
  std::ostringstream note;
  note << "form " << ml::encode_form(h) << ", p=" << p << ": conductor exponent "
       << d.fp << ", " << d.b.size() << " series coefficients cross-checked";
  run.notes.push_back(note.str());
}

void cmd_plus_space(RunResult& run, long k, long prec, const std::string& emit) {
  if (k <= 0) throw ml::UsageError("--k must be positive");
  if (prec < 4 * k + 10)
    throw ml::UsageError("--prec must be at least 4k+10 = " +
                         std::to_string(4 * k + 10) +
                         " (the determining bound for weight k+1/2)");
  std::vector<ml::QExpansion> basis = ml::plus_cusp_space(k, prec);
  run.flags = {{"k", k}, {"prec", prec}, {"emit", emit}};
  std::string payload;
  if (basis.empty()) {
    payload = emit == "csv" ? "m,c\n" : "[]\n";
  } else if (basis.size() == 1) {
    ml::EigenformHalf g = ml::plus_eigenform(k, prec, eigen_check_depth(prec));
    payload = emit == "csv" ? ml::qexp_to_csv(g.q) : ml::qexp_to_json(g.q);
  } else {
    throw ml::CapabilityError(
        "plus space has dimension " + std::to_string(basis.size()) +
        "; emitting a multi-dimensional eigenbasis is not supported");
  }
  run.artifacts.emplace_back(emit == "csv" ? "plus_space.csv" : "plus_space.json",
                             payload);
  run.notes.push_back("dimension " + std::to_string(basis.size()) +
                      ", coefficients below " + std::to_string(prec));
}

// Shared by lift: the eigenform of weight k+1/2 with coefficients
// covering every index a degree-2n table up to dmax can ask for.
ml::EigenformHalf eigenform_for_weight(long k, long min_prec) {
  long prec = std::max(4 * k + 12, min_prec);
  std::vector<ml::QExpansion> basis = ml::plus_cusp_space(k, 4 * k + 12);
  if (basis.empty())
    throw ml::CapabilityError("no cusp form of weight " + std::to_string(k) +
                              "+1/2 in the plus space");
  if (basis.size() > 1)
    throw ml::CapabilityError("plus space of weight " + std::to_string(k) +
                              "+1/2 is not one-dimensional");
  return ml::plus_eigenform(k, prec, eigen_check_depth(prec));
}

void cmd_lift(RunResult& run, long genus, long two_k, long dmax,
              const std::string& emit) {
  if (genus != 2 && genus != 4) throw ml::UsageError("--genus must be 2 or 4");
  long k = require_even_weight(two_k);
  long n = genus / 2;
  if ((k - n) % 2 != 0)
    throw ml::UsageError("weight/genus parity mismatch: need k = n mod 2 "
                         "(k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
  if (dmax < 1) throw ml::UsageError("--dmax must be at least 1");
  ml::EigenformHalf g = eigenform_for_weight(k, dmax + 2);
  ml::CoefficientTable t = ml::build_lift_table(g, genus, ml::Int(dmax));
  run.flags = {{"genus", genus}, {"twok", two_k}, {"dmax", dmax}, {"emit", emit}};
  run.artifacts.emplace_back(emit == "csv" ? "table.csv" : "table.json",
                             emit == "csv" ? ml::table_to_csv(t) : ml::table_to_json(t));
  // The source parameter, ready for verify-maass round trips.
  ml::MaassParameter c;
  c.k_parity = k % 2;
  c.M = ml::Int(dmax);
  for (long m = 1; m <= dmax; ++m)
    if (c.admissible(ml::Int(m))) c.values[ml::Int(m)] = g.q.coeff(m);
  run.artifacts.emplace_back("param.json", ml::param_to_json(c));
  run.notes.push_back(std::to_string(t.classes.size()) + " classes with D <= " +
                      std::to_string(dmax));
}

void cmd_verify(RunResult& run, const std::string& table_path,
                const std::string& param_path, long two_k) {
  long k = require_even_weight(two_k);
  ml::CoefficientTable t = ml::table_from_json(read_file(table_path), k);
  ml::MaassParameter c = ml::param_from_json(read_file(param_path), k % 2);
  ml::MaassVerifyReport rep = ml::maass_verify(t, c, k);
  run.flags = {{"table", table_path}, {"param", param_path}, {"twok", two_k}};
  json out = {{"holds", rep.all_hold},
              {"checked", rep.checked},
              {"failing", rep.failing}};
  run.artifacts.emplace_back("verify.json", out.dump(2) + "\n");
  run.checks_pass = rep.all_hold;
  run.notes.push_back(std::string(rep.all_hold ? "relation holds" : "relation FAILS") +
                      " on " + std::to_string(rep.checked) + " classes");
}

void cmd_solve(RunResult& run, const std::string& table_path, long two_k,
               long bound) {
  long k = require_even_weight(two_k);
  ml::CoefficientTable t = ml::table_from_json(read_file(table_path), k);
  ml::Int M = bound > 0 ? ml::Int(bound) : t.dmax;
  ml::MaassSolveResult res = ml::maass_solve(t, k, M);
  run.flags = {{"table", table_path}, {"twok", two_k}, {"bound", ml::to_long(M)}};
  json out = {{"consistent", res.consistent},
              {"equations", res.equations},
              {"unknowns", static_cast<long>(res.domain.size())},
              {"kernel_dimension", static_cast<long>(res.kernel.size())}};
  if (res.consistent) {
    out["solution"] = json::parse(ml::param_to_json(res.particular));
    json kernel = json::array();
    for (const auto& basis_vec : res.kernel) kernel.push_back(param_entries_json(basis_vec));
    out["kernel"] = kernel;
  } else {
    out["solution"] = nullptr;
    out["kernel"] = json::array();
  }
  run.artifacts.emplace_back("solve.json", out.dump(2) + "\n");
  if (res.consistent)
    run.artifacts.emplace_back("param.json", ml::param_to_json(res.particular));
  run.checks_pass = res.consistent;
  std::ostringstream note;
  note << (res.consistent ? "consistent" : "INCONSISTENT") << ", "
       << res.equations << " equations, " << res.domain.size() << " unknowns, kernel dim "
       << res.kernel.size()
       << (res.consistent && res.kernel.empty() ? " (unique solution)" : "");
  run.notes.push_back(note.str());
}

void cmd_fj(RunResult& run, const std::string& table_path, const std::string& index) {
  ml::CoefficientTable t = ml::table_from_json(read_file(table_path), 0);
  ml::HalfIntegralForm hS = ml::parse_form(index);
  if (static_cast<long>(hS.T.size()) != t.two_n - 1)
    throw ml::UsageError("--index must have size " + std::to_string(t.two_n - 1) +
                         " for this table (one below the class size)");
  ml::EvenLattice S = ml::make_even_lattice(hS.T);
  ml::JacobiTable jt = ml::fj_extract(t, S);
  ml::MTypeReport mt = ml::mtype_check(jt);
  run.flags = {{"table", table_path}, {"index", index}};
  run.artifacts.emplace_back("jacobi.json", ml::jacobi_to_json(jt, mt));
  run.checks_pass = mt.is_mtype;
  run.notes.push_back(std::to_string(jt.entries.size()) + " slice entries, " +
                      std::to_string(mt.C.size()) + " invariant fibers, constant on fibers: " +
                      (mt.is_mtype ? "yes" : "NO"));
}

void cmd_scan(RunResult& run, long n, long bound) {
  if (n != 1 && n != 2) throw ml::UsageError("--n must be 1 or 2");
  if (bound < 1) throw ml::UsageError("--bound must be at least 1");
  ml::DiscScanResult res = ml::disc_scan(n, ml::Int(bound));
  run.flags = {{"n", n}, {"bound", bound}};
  json achieved = json::array(), predicted = json::array();
  for (const auto& v : res.achieved) achieved.push_back(ml::to_long(v));
  for (const auto& v : res.predicted) predicted.push_back(ml::to_long(v));
  json out = {{"achieved", achieved}, {"predicted", predicted}, {"match", res.match}};
  run.artifacts.emplace_back("scan.json", out.dump(2) + "\n");
  run.checks_pass = res.match;
  run.notes.push_back(std::to_string(res.achieved.size()) + " discriminants achieved up to " +
                      std::to_string(bound) + ", prediction " +
                      (res.match ? "matches" : "DOES NOT match"));
}

void cmd_identities(RunResult& run, long mmax, long search_bound, long scan1,
                    long scan2) {
  if (mmax < 1 || search_bound < 1 || scan1 < 1 || scan2 < 1)
    throw ml::UsageError("bounds must be positive");
  run.flags = {{"mmax", mmax}, {"search-bound", search_bound},
               {"scan1", scan1}, {"scan2", scan2}};
  bool all = true;
  json eta_arr = json::array();
  json border_arr = json::array();
  long border_checked = 0;
  const long primes[] = {2, 3, 5, 7};
  for (long size : {1L, 3L}) {
    for (long p : primes) {
      ml::HalfIntegralForm B = ml::find_prime_disc_form(p, size);
      ml::EtaProductReport er = ml::eta_sign_product_check(B);
      all = all && er.holds;
      eta_arr.push_back(json{{"size", size},
                             {"p", p},
                             {"form", ml::encode_form(B)},
                             {"product", er.product},
                             {"expected", er.expected},
                             {"holds", er.holds}});
      // Border reachability: the residue criterion must agree with the
      // outcome of the explicit witness search for every m in range.
      for (long m = 1; m <= mmax; ++m) {
        ml::BorderReachResult br = ml::border_reach(B, ml::Int(m), search_bound);
        ++border_checked;
        if (br.criterion != br.witness_found) {
          all = false;
          border_arr.push_back(json{{"size", size}, {"p", p}, {"m", m},
                                    {"criterion", br.criterion},
                                    {"witness_found", br.witness_found}});
        }
      }
    }
  }
  json scans = json::array();
  for (auto [n, bound] : {std::pair<long, long>{1, scan1}, {2, scan2}}) {
    ml::DiscScanResult res = ml::disc_scan(n, ml::Int(bound));
    all = all && res.match;
    scans.push_back(json{{"n", n}, {"bound", bound}, {"match", res.match},
                         {"achieved_count", static_cast<long>(res.achieved.size())}});
  }
  json out = {{"eta_products", eta_arr},
              {"border_mismatches", border_arr},
              {"border_checked", border_checked},
              {"scans", scans},
              {"all_hold", all}};
  run.artifacts.emplace_back("identities.json", out.dump(2) + "\n");
  run.checks_pass = all;
  run.notes.push_back(std::string("sign products, ") + std::to_string(border_checked) +
                      " border criteria, 2 discriminant scans: " +
                      (all ? "all hold" : "FAILURES (see identities.json)"));
}

void cmd_accept(RunResult& run, const std::string& profile) {
  ml::AcceptanceReport rep = ml::acceptance_suite(profile);
  run.flags = {{"profile", profile}};
  json crit = json::array();
  for (const auto& c : rep.criteria)
    crit.push_back(json{{"number", c.number},
                        {"name", c.name},
                        {"passed", c.passed},
                        {"detail", c.detail}});
  json out = {{"all_passed", rep.all_passed}, {"criteria", crit}};
  run.artifacts.emplace_back("acceptance.json", out.dump(2) + "\n");
  run.stdout_override = ml::render_report(rep);
  run.checks_pass = rep.all_passed;
  run.notes.push_back(std::string("profile ") + profile + ": " +
                      (rep.all_passed ? "all criteria passed" : "criteria FAILED"));
}

// ---------------------------------------------------------------------
// Driver.
// ---------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"maasslift: exact Fourier coefficients of lifted Siegel cusp forms,\n"
               "their characterizing linear relations, and the local invariants\n"
               "behind them.  All arithmetic is exact; all artifacts are\n"
               "deterministic."};
  app.require_subcommand(1);

  long threads = 0;
  long seed = 1729;
  std::string out_dir;
  app.add_option("--threads", threads,
                 "worker threads (0 = all available); never affects results")
      ->capture_default_str();
  app.add_option("--seed", seed,
                 "seed recorded in the manifest for randomized extensions")
      ->capture_default_str();
  app.add_option("--out", out_dir,
                 "directory for artifacts plus manifest.json (default: payload to stdout)");

  RunResult run;

  // siegel
  auto* sc_siegel = app.add_subcommand(
      "siegel", "local series data of one class at one prime");
  std::string opt_form;
  long opt_p = 0;
  sc_siegel->add_option("--form", opt_form, "class, row-major doubled matrix, e.g. \"2,1;1,2\"")
      ->required();
  sc_siegel->add_option("--p", opt_p, "prime")->required();
  sc_siegel->fallthrough();
  sc_siegel->callback([&] { cmd_siegel(run, opt_form, opt_p); });

  // plus-space
  auto* sc_plus = app.add_subcommand(
      "plus-space", "plus-subspace eigenform coefficients at weight k+1/2");
  long opt_k = 0, opt_prec = 0;
  std::string opt_emit = "json";
  sc_plus->add_option("--k", opt_k, "weight parameter k")->required();
  sc_plus->add_option("--prec", opt_prec, "number of coefficients")->required();
  sc_plus->add_option("--emit", opt_emit, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sc_plus->fallthrough();
  sc_plus->callback([&] { cmd_plus_space(run, opt_k, opt_prec, opt_emit); });

  // lift
  auto* sc_lift = app.add_subcommand(
      "lift", "build the degree-2n coefficient table from the eigenform");
  long opt_genus = 0, opt_twok = 0, opt_dmax = 0;
  std::string opt_lift_emit = "json";
  sc_lift->add_option("--genus", opt_genus, "degree of the lifted form (2 or 4)")->required();
  sc_lift->add_option("--twok", opt_twok, "2k, the even weight parameter")->required();
  sc_lift->add_option("--dmax", opt_dmax, "cover all classes with D <= dmax")->required();
  sc_lift->add_option("--emit", opt_lift_emit, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sc_lift->fallthrough();
  sc_lift->callback([&] { cmd_lift(run, opt_genus, opt_twok, opt_dmax, opt_lift_emit); });

  // verify-maass
  auto* sc_verify = app.add_subcommand(
      "verify-maass", "check the characterizing relations of a table against a parameter");
  std::string opt_table, opt_param;
  long opt_vtwok = 0;
  sc_verify->add_option("--table", opt_table, "table JSON file")
      ->required()->check(CLI::ExistingFile);
  sc_verify->add_option("--param", opt_param, "parameter JSON file")
      ->required()->check(CLI::ExistingFile);
  sc_verify->add_option("--twok", opt_vtwok, "2k (not stored in table files)")->required();
  sc_verify->fallthrough();
  sc_verify->callback([&] { cmd_verify(run, opt_table, opt_param, opt_vtwok); });

  // solve-maass
  auto* sc_solve = app.add_subcommand(
      "solve-maass", "solve the relation system of a table for the parameter");
  std::string opt_stable;
  long opt_stwok = 0, opt_sbound = 0;
  sc_solve->add_option("--table", opt_stable, "table JSON file")
      ->required()->check(CLI::ExistingFile);
  sc_solve->add_option("--twok", opt_stwok, "2k (not stored in table files)")->required();
  sc_solve->add_option("--bound", opt_sbound, "domain bound M (default: table range)");
  sc_solve->fallthrough();
  sc_solve->callback([&] { cmd_solve(run, opt_stable, opt_stwok, opt_sbound); });

  // fj
  auto* sc_fj = app.add_subcommand(
      "fj", "extract one Fourier-Jacobi slice of a table and check its fiber structure");
  std::string opt_ftable, opt_index;
  sc_fj->add_option("--table", opt_ftable, "table JSON file")
      ->required()->check(CLI::ExistingFile);
  sc_fj->add_option("--index", opt_index, "index lattice, row-major, e.g. \"2\"")->required();
  sc_fj->fallthrough();
  sc_fj->callback([&] { cmd_fj(run, opt_ftable, opt_index); });

  // scan-disc
  auto* sc_scan = app.add_subcommand(
      "scan-disc", "compare achieved class discriminants with the predicted set");
  long opt_n = 0, opt_bound = 0;
  sc_scan->add_option("--n", opt_n, "half the class size (1 or 2)")->required();
  sc_scan->add_option("--bound", opt_bound, "discriminant bound")->required();
  sc_scan->fallthrough();
  sc_scan->callback([&] { cmd_scan(run, opt_n, opt_bound); });

  // check-identities
  auto* sc_id = app.add_subcommand(
      "check-identities", "sign products, border reachability, and discriminant scans");
  long opt_mmax = 60, opt_sb = 64, opt_scan1 = 100, opt_scan2 = 24;
  sc_id->add_option("--mmax", opt_mmax, "border targets m <= mmax")->capture_default_str();
  sc_id->add_option("--search-bound", opt_sb, "border witness search depth")
      ->capture_default_str();
  sc_id->add_option("--scan1", opt_scan1, "size-2 scan bound")->capture_default_str();
  sc_id->add_option("--scan2", opt_scan2, "size-4 scan bound")->capture_default_str();
  sc_id->fallthrough();
  sc_id->callback([&] { cmd_identities(run, opt_mmax, opt_sb, opt_scan1, opt_scan2); });

  // accept
  auto* sc_accept = app.add_subcommand(
      "accept", "run the full acceptance suite and print the per-criterion table");
  std::string opt_profile = "full";
  sc_accept->add_option("--profile", opt_profile, "bound profile")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  sc_accept->fallthrough();
  sc_accept->callback([&] { cmd_accept(run, opt_profile); });

  auto t0 = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  ml::set_thread_count(threads);
  run.subcommand = app.get_subcommands().front()->get_name();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0).count();

  // Render: artifacts to --out (with manifest) or payload to stdout.
  if (!out_dir.empty()) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, std::string>> hashes;
    for (const auto& [name, content] : run.artifacts) {
      std::ofstream f(dir / name, std::ios::binary);
      if (!f) throw ml::UsageError("cannot write artifact: " + (dir / name).string());
      f << content;
      hashes.emplace_back(name, ml::sha256_hex(content));
    }
    json config = {{"subcommand", run.subcommand},
                   {"flags", run.flags},
                   {"seed", seed},
                   {"threads", threads}};
    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    if (!mf) throw ml::UsageError("cannot write manifest in " + out_dir);
    mf << ml::manifest_json(config.dump(), hashes);
    std::cerr << "wrote " << run.artifacts.size() << " artifact(s) + manifest to "
              << out_dir << "\n";
  }
  if (!run.stdout_override.empty()) {
    std::cout << run.stdout_override;
  } else if (out_dir.empty()) {
    for (const auto& [name, content] : run.artifacts) {
      (void)name;
      std::cout << content;
    }
  }
  for (const auto& note : run.notes) std::cerr << note << "\n";
  std::cerr << run.subcommand << ": " << ms << " ms, exit "
            << (run.checks_pass ? 0 : 2) << "\n";
  return run.checks_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  try {
    return run_cli(argc, argv);
  } catch (const ml::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const ml::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 3;
  } catch (const ml::MathError& e) {
    std::cerr << "math check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
