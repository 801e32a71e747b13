#include <doctest.h>

#include <cli.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "wamls");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = wamls::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wamls_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help matches the golden file") {
  const Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(fs::path(WAMLS_TEST_DATA_DIR) / "golden" / "help.txt"));
  for (const char* flag : {"--alpha", "--preset", "--kind", "--oracle", "--suite", "--ledger", "--skip-check"}) {
    CHECK(r.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("bound") {
  const Result r = run({"bound", "--alpha", "1", "--c", "1.363", "--beta", "1.1", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"amls\":1.15") != std::string::npos);

  const Result brute = run({"bound", "--alpha", "1", "--beta", "1"});
  CHECK(brute.code == 0);
  CHECK(brute.out.find("brute = 2") != std::string::npos);

  CHECK(run({"bound", "--alpha", "0.5", "--beta", "1.5"}).code == 2);
  CHECK(run({"bound", "--alpha", "1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("table") {
  const Result vc = run({"table", "--preset", "vc"});
  CHECK(vc.code == 0);
  CHECK(vc.out.rfind("alpha,c,beta,brute,amls", 0) == 0);
  CHECK(vc.out.find("1,1.363,1.1,") != std::string::npos);

  const Result fvs = run({"table", "--preset", "fvs"});
  CHECK(fvs.code == 0);
  CHECK(fvs.out.find("1,3.618,1.5,") != std::string::npos);

  CHECK(run({"table", "--alpha", "1", "--beta", ""}).code == 2);
  CHECK(run({"table"}).code == 2);
  CHECK(run({"table", "--preset", "tsp"}).code == 2);
}

TEST_CASE("family build and verify round trip") {
  const fs::path dump = scratch("ext8.fam");
  const Result b = run({"family", "build", "--kind", "extension", "--n", "8", "--alpha", "1", "--c", "2", "--beta",
                        "1.5", "--eps", "0.1", "--out", dump.string()});
  REQUIRE(b.code == 0);
  const Result v = run({"family", "verify", "--in", dump.string(), "--n", "8"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("pass:", 0) == 0);

  // Drop every entry but the header and one full set: verification must fail.
  std::ifstream in(dump);
  std::string header;
  std::getline(in, header);
  in.close();
  const fs::path broken = scratch("broken.fam");
  std::ofstream(broken) << header << "\nff 0\n";
  const Result bad = run({"family", "verify", "--in", broken.string(), "--n", "8"});
  CHECK(bad.code == 1);
  CHECK(bad.out.rfind("fail: witness S=0 {}", 0) == 0);

  const fs::path cov = scratch("cov.fam");
  CHECK(run({"family", "build", "--kind", "covering", "--weights", "3,1,4,1,5", "--alpha", "1.5", "--out",
             cov.string()})
            .code == 0);
  CHECK(run({"family", "verify", "--in", cov.string(), "--weights", "3,1,4,1,5"}).code == 0);

  CHECK(run({"family", "build", "--kind", "covering", "--weights", "1,0,2", "--alpha", "1.5"}).code == 2);
  CHECK(run({"family", "build", "--kind", "covering", "--n", "30", "--alpha", "1.5", "--cap", "20"}).code == 3);
}

TEST_CASE("solve") {
  const fs::path inst = scratch("p3.txt");
  std::ofstream(inst) << "p wvc 3 2\nw 1 3\nw 2 1\nw 3 3\ne 1 2\ne 2 3\n";
  const Result r = run({"solve", "--instance", inst.string(), "--oracle", "local-ratio", "--beta", "1.9"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"output_weight\":1") != std::string::npos);
  CHECK(r.out.find("\"output_set\":[2]") != std::string::npos);

  const Result rnd = run({"solve", "--random", "wvc", "--n", "12", "--seed", "7", "--oracle", "local-ratio",
                          "--beta", "1.9"});
  CHECK(rnd.code == 0);
  CHECK(rnd.out.find("\"ratio\":") != std::string::npos);
  CHECK(rnd.out == run({"solve", "--random", "wvc", "--n", "12", "--seed", "7", "--oracle", "local-ratio", "--beta",
                        "1.9"})
                       .out);

  const fs::path done = scratch("done.txt");
  std::ofstream(done) << "p wvc 3 0\nw 1 3\nw 2 1\nw 3 3\n";
  CHECK(run({"solve", "--instance", done.string()}).out.find("\"output_weight\":0") != std::string::npos);

  CHECK(run({"solve", "--instance", inst.string(), "--oracle", "magic"}).code == 2);
  CHECK(run({"solve", "--random", "wfvs", "--n", "6", "--oracle", "branching"}).code == 2);
  CHECK(run({"solve", "--instance", scratch("missing.txt").string()}).code == 2);

  const Result member = run({"solve", "--random", "wpvc", "--n", "8", "--threshold", "3", "--model", "membership",
                             "--beta", "1.5"});
  CHECK(member.code == 0);
  CHECK(member.out.find("\"model\":\"membership\"") != std::string::npos);
}

TEST_CASE("verify") {
  const Result r = run({"verify", "--suite", "bounds"});
  CHECK(r.code == 0);
  CHECK(r.out.find("summary: 4/4 criteria passed") != std::string::npos);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
}

}  // TEST_SUITE
