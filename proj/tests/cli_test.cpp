// End-to-end runs of the command-line binary: payload formats, artifact
// layout, manifest hashing, exit-code contract, and byte-level
// determinism across repeated and reconfigured runs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <maasslift/sha256.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin_path() {
  if (const char* env = std::getenv("MAASSLIFT_BIN")) return env;
  return "./maasslift";
}

const fs::path& work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("maasslift_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunOutput {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " << p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOutput run(const std::string& args) {
  fs::path out_file = work_dir() / "stdout.txt";
  std::string cmd = bin_path() + " " + args + " > " + out_file.string() + " 2> " +
                    (work_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  RunOutput r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  return r;
}

}  // namespace

TEST_CASE("binary exists and prints help") {
  REQUIRE_MESSAGE(fs::exists(bin_path()),
                  "binary not found at " << bin_path()
                                         << "; set MAASSLIFT_BIN to override");
  RunOutput r = run("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Subcommands") != std::string::npos);
}

TEST_CASE("local series payload") {
  RunOutput r = run("siegel --form '2,1;1,2' --p 3");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["F"] == json::array({"1"}));
  CHECK(rep["b"] == json::array({"1", "-1", "-9"}));
  CHECK(rep["p"] == 3);
  CHECK(rep["phi_local"] == json::array({"1"}));

  RunOutput r16 = run("siegel --form '2,0;0,8' --p 2");
  REQUIRE(r16.exit_code == 0);
  json rep16 = json::parse(r16.out);
  CHECK(rep16["F"] == json::array({"1", "0", "8"}));
  CHECK(rep16["Ftilde"]["p"] == 2);
}

TEST_CASE("exit-code contract") {
  CHECK(run("--no-such-flag").exit_code == 3);          // unknown flag
  CHECK(run("lift --genus 3 --twok 18 --dmax 8").exit_code == 3);   // bad value
  CHECK(run("lift --genus 2 --twok 17 --dmax 8").exit_code == 3);   // odd weight
  CHECK(run("plus-space --k 9 --prec 10").exit_code == 3);          // low precision
  CHECK(run("verify-maass --table /nonexistent.json --param /nonexistent.json --twok 18")
            .exit_code == 3);                                       // missing file
  CHECK(run("lift --genus 4 --twok 12 --dmax 64").exit_code == 3);  // beyond local depth
  // An unknown flag writes nothing.
  fs::path probe = work_dir() / "no_partial";
  run("--out " + probe.string() + " --no-such-flag siegel --form 2 --p 2");
  CHECK_FALSE(fs::exists(probe / "manifest.json"));
}

TEST_CASE("plus-space payloads") {
  RunOutput r = run("plus-space --k 9 --prec 50");
  REQUIRE(r.exit_code == 0);
  json arr = json::parse(r.out);
  REQUIRE(arr.is_array());
  CHECK(arr[0] == json::array({1, "0"}));
  CHECK(arr[2] == json::array({3, "1"}));
  CHECK(arr[11] == json::array({12, "-272"}));

  RunOutput csv = run("plus-space --k 9 --prec 50 --emit csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.rfind("m,c\n", 0) == 0);

  // Empty space: valid empty payload.
  RunOutput empty = run("plus-space --k 7 --prec 60");
  REQUIRE(empty.exit_code == 0);
  CHECK(json::parse(empty.out).empty());
}

TEST_CASE("lift artifacts, manifest hashes, and the verification cycle") {
  fs::path d1 = work_dir() / "lift1";
  REQUIRE(run("lift --genus 2 --twok 18 --dmax 12 --out " + d1.string()).exit_code == 0);
  REQUIRE(fs::exists(d1 / "table.json"));
  REQUIRE(fs::exists(d1 / "param.json"));
  REQUIRE(fs::exists(d1 / "manifest.json"));

  // Manifest hashes are the actual digests of the artifact bytes.
  json manifest = json::parse(slurp(d1 / "manifest.json"));
  for (const auto& [name, hash] : manifest["artifacts"].items())
    CHECK(hash == ml::sha256_hex(slurp(d1 / name)));
  CHECK(manifest["config"]["subcommand"] == "lift");
  CHECK(manifest["config"]["flags"]["dmax"] == 12);
  CHECK(manifest["versions"]["toolkit"].is_string());

  // Table spot checks.
  json table = json::parse(slurp(d1 / "table.json"));
  REQUIRE(table.is_array());
  CHECK(table.size() == 7);
  bool found = false;
  for (const auto& e : table)
    if (e["form"] == "2,0;0,6") {
      CHECK(e["value"] == "-272");
      found = true;
    }
  CHECK(found);

  // The produced pair verifies; a perturbed parameter is rejected.
  CHECK(run("verify-maass --table " + (d1 / "table.json").string() + " --param " +
            (d1 / "param.json").string() + " --twok 18").exit_code == 0);
  json param = json::parse(slurp(d1 / "param.json"));
  param[1]["c"] = "999";
  fs::path bad = work_dir() / "bad_param.json";
  std::ofstream(bad) << param.dump(2) << "\n";
  CHECK(run("verify-maass --table " + (d1 / "table.json").string() + " --param " +
            bad.string() + " --twok 18").exit_code == 2);

  // Solving the same table recovers the parameter byte for byte.
  fs::path d2 = work_dir() / "solve1";
  REQUIRE(run("solve-maass --table " + (d1 / "table.json").string() + " --twok 18 --out " +
              d2.string()).exit_code == 0);
  json solve = json::parse(slurp(d2 / "solve.json"));
  CHECK(solve["consistent"] == true);
  CHECK(solve["kernel_dimension"] == 0);
  CHECK(slurp(d2 / "param.json") == slurp(d1 / "param.json"));
}

TEST_CASE("determinism: identical config gives identical bytes") {
  fs::path a = work_dir() / "det_a";
  fs::path b = work_dir() / "det_b";
  REQUIRE(run("--threads 1 lift --genus 2 --twok 18 --dmax 12 --out " + a.string())
              .exit_code == 0);
  REQUIRE(run("--threads 1 lift --genus 2 --twok 18 --dmax 12 --out " + b.string())
              .exit_code == 0);
  for (const char* name : {"table.json", "param.json", "manifest.json"})
    CHECK(slurp(a / name) == slurp(b / name));
  // A different thread count must not change any artifact payload.
  fs::path c = work_dir() / "det_c";
  REQUIRE(run("--threads 3 lift --genus 2 --twok 18 --dmax 12 --out " + c.string())
              .exit_code == 0);
  for (const char* name : {"table.json", "param.json"})
    CHECK(slurp(a / name) == slurp(c / name));
}

TEST_CASE("slice extraction and fiber report") {
  fs::path d1 = work_dir() / "lift1";  // produced above; rebuild if ordering changes
  if (!fs::exists(d1 / "table.json"))
    REQUIRE(run("lift --genus 2 --twok 18 --dmax 12 --out " + d1.string()).exit_code == 0);
  RunOutput r = run("fj --table " + (d1 / "table.json").string() + " --index 2");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["fibers"]["constant_on_disc"] == true);
  REQUIRE(rep["entries"].is_array());
  CHECK(rep["entries"].size() == 27);
  // Index size must match the table.
  CHECK(run("fj --table " + (d1 / "table.json").string() + " --index '2,0;0,2'").exit_code == 3);
}

TEST_CASE("discriminant scan subcommand") {
  RunOutput r = run("scan-disc --n 1 --bound 40");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["match"] == true);
  CHECK(rep["achieved"][0] == 3);
  CHECK(run("scan-disc --n 3 --bound 10").exit_code == 3);
}

TEST_CASE("identity corpus subcommand, trimmed bounds") {
  RunOutput r = run("check-identities --mmax 20 --search-bound 64 --scan1 40 --scan2 16");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["all_hold"] == true);
  CHECK(rep["eta_products"].size() == 8);
  CHECK(rep["border_mismatches"].empty());
}

TEST_CASE("acceptance subcommand, quick profile") {
  fs::path d = work_dir() / "accept_q";
  RunOutput r = run("accept --profile quick --out " + d.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("all criteria passed") != std::string::npos);
  json rep = json::parse(slurp(d / "acceptance.json"));
  CHECK(rep["all_passed"] == true);
  CHECK(rep["criteria"].size() == 9);
}
