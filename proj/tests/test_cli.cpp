// Drives the built CLI binary end to end. The binary path comes from the
// LNEC_CLI environment variable (ctest sets it); the suite is skipped when
// it is absent so the unit binary stays runnable on its own.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace lnec;
using namespace lnec::testing;

TEST_SUITE_BEGIN("cli");

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

const char* cli_path() { return std::getenv("LNEC_CLI"); }

RunResult run(const std::string& args) {
  fs::path out = fs::path("cli_tmp") / "stdout.txt";
  std::string cmd =
      std::string(cli_path()) + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  int code = status == -1 ? -1 : WEXITSTATUS(status);
  return {code, ss.str()};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

struct Workspace {
  Workspace() {
    fs::create_directories("cli_tmp");
    write("cli_tmp/butterfly.net", butterfly_net()->to_text());
    write("cli_tmp/parallel3.net", parallel_net(3)->to_text());
    write("cli_tmp/bottleneck.net", bottleneck_net()->to_text());
    write("cli_tmp/cyclic.net", "source s\nedge e1 s a\nedge e2 a b\nedge e3 b a\n");
  }
};

}  // namespace

TEST_CASE("cli workflows") {
  if (!cli_path()) {
    MESSAGE("LNEC_CLI not set; skipping CLI suite");
    return;
  }
  Workspace ws;

  SUBCASE("version flag") {
    RunResult r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("lnec") != std::string::npos);
  }

  SUBCASE("construct algorithm1 on the butterfly") {
    RunResult r = run(
        "construct --network cli_tmp/butterfly.net --field 2^5 --omega 2 "
        "--method algorithm1 --out cli_tmp/bf.code --report cli_tmp/bf.rep");
    CHECK(r.exit_code == 0);
    std::ifstream rep("cli_tmp/bf.rep");
    std::ostringstream ss;
    ss << rep.rdbuf();
    CHECK(ss.str().find("verdict-multicast-mds: yes") != std::string::npos);
    CHECK(ss.str().find("method: algorithm1") != std::string::npos);

    RunResult v = run("verify --code cli_tmp/bf.code --expect multicast-mds");
    CHECK(v.exit_code == 0);
    RunResult vd = run("verify --code cli_tmp/bf.code --expect dispersion-mds");
    CHECK(vd.exit_code == 0);  // every butterfly bound is 1 at rate 2
  }

  SUBCASE("construct rejects a cyclic network") {
    RunResult r = run(
        "construct --network cli_tmp/cyclic.net --field 2 --omega 1 "
        "--out cli_tmp/x.code");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("cycle detected") != std::string::npos);
  }

  SUBCASE("construct failure is structured") {
    // 3-parallel at rate 1 needs |F| > 3; GF(2) exhausts
    write("cli_tmp/par4.net", parallel_net(4)->to_text());
    RunResult r = run(
        "construct --network cli_tmp/par4.net --field 2 --omega 2 "
        "--method algorithm1 --out cli_tmp/x.code --report cli_tmp/x.rep");
    CHECK(r.exit_code == 1);
    std::ifstream rep("cli_tmp/x.rep");
    std::ostringstream ss;
    ss << rep.rdbuf();
    CHECK(ss.str().find("status: failed") != std::string::npos);
    CHECK(ss.str().find("blocked:") != std::string::npos);
    CHECK(ss.str().find("bound-multicast:") != std::string::npos);
  }

  SUBCASE("verify the all-zero code fails the multicast expectation") {
    Code zero(butterfly_net(), Field::make(2, 1), 2);
    write("cli_tmp/zero.code", zero.to_text());
    RunResult r = run("verify --code cli_tmp/zero.code --expect multicast-mds");
    CHECK(r.exit_code == 1);
    RunResult plain = run("verify --code cli_tmp/zero.code");
    CHECK(plain.exit_code == 0);
    CHECK(plain.out.find("regular: no") != std::string::npos);
  }

  SUBCASE("verify with a tiny collections cap flags partial results") {
    Code code = butterfly_standard_code();
    write("cli_tmp/std.code", code.to_text());
    RunResult r = run("verify --code cli_tmp/std.code --collections-cap 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("collections-examined:") != std::string::npos);
    CHECK(r.out.find("collections-total: 63") != std::string::npos);
  }

  SUBCASE("rank of the bottleneck pattern") {
    RunResult r = run(
        "rank --network cli_tmp/bottleneck.net --pattern e1,e2,e3 --at t");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1\n");
    RunResult empty = run("rank --network cli_tmp/bottleneck.net --at t");
    CHECK(empty.out == "0\n");
    RunResult bad = run("rank --network cli_tmp/bottleneck.net --pattern zz --at t");
    CHECK(bad.exit_code == 2);
  }

  SUBCASE("distance and simulate on the repetition code") {
    Code code(parallel_net(3), Field::make(2, 1), 1);
    for (int e = 0; e < 3; ++e) code.set_coef_msg(0, e, 1);
    write("cli_tmp/rep3.code", code.to_text());

    RunResult d = run("distance --code cli_tmp/rep3.code --at t");
    CHECK(d.exit_code == 0);
    CHECK(d.out == "3\n");

    RunResult s = run(
        "simulate --code cli_tmp/rep3.code --at t --message 1 --error e2=1 "
        "--tau 1 --trace");
    CHECK(s.exit_code == 0);
    CHECK(s.out.find("e1: U=1 Z=0 Ũ=1") != std::string::npos);
    CHECK(s.out.find("e2: U=1 Z=1 Ũ=0") != std::string::npos);
    CHECK(s.out.find("status: unique") != std::string::npos);
    CHECK(s.out.find("message: 1") != std::string::npos);
    CHECK(s.out.find("error: e2=1") != std::string::npos);

    RunResult sweep = run("simulate --code cli_tmp/rep3.code --at t --sweep 1");
    CHECK(sweep.exit_code == 0);
    CHECK(sweep.out.find("8/8 correct") != std::string::npos);

    RunResult sweep2 = run("simulate --code cli_tmp/rep3.code --at t --sweep 2");
    CHECK(sweep2.exit_code == 1);
    CHECK(sweep2.out.find("first-failure") != std::string::npos);
  }

  SUBCASE("bounds output") {
    RunResult r = run("bounds --network cli_tmp/butterfly.net --omega 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("multicast: 3\n") != std::string::npos);
    CHECK(r.out.find("broadcast: 6\n") != std::string::npos);
    CHECK(r.out.find("complete: yes") != std::string::npos);
  }
}

TEST_SUITE_END();
