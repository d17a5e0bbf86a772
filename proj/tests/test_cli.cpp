#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "sfde/cli.hpp"
#include "sfde/errors.hpp"
#include "sfde/noise.hpp"

using namespace sfde;

namespace {

int run_capture(const RunConfig& cfg, std::string& out, std::string& err) {
  std::ostringstream o, e;
  const int code = run(cfg, o, e);
  out = o.str();
  err = e.str();
  return code;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("subcommand names") {
  for (Subcommand c : all_subcommands()) CHECK(parse_subcommand(subcommand_name(c)) == c);
  CHECK(parse_subcommand("converge-time") == Subcommand::ConvergeTime);
  CHECK_THROWS_AS(parse_subcommand("plot"), ConfigError);
}

TEST_CASE("defaults") {
  const RunConfig c = parse_config(Subcommand::ConvergeTime, "", {});
  CHECK(c.real("alpha") == 0.5);
  CHECK(c.real("gamma") == 0.5);
  CHECK(c.real("m") == 2.0);
  CHECK(c.seed == 42);
  CHECK(c.integer("trajectories") == 100);
  CHECK(c.workers == std::max(1, static_cast<int>(std::thread::hardware_concurrency())));
  CHECK(c.output.empty());
  CHECK(c.int_list("levels") == std::vector<int>{40, 80, 160, 320, 640});
  CHECK_FALSE(c.has("s"));
}

TEST_CASE("alpha plus gamma must exceed one half") {
  CHECK_NOTHROW(parse_config(Subcommand::Rates, "alpha = 0.2\ngamma = 0.31\n", {}));
  try {
    parse_config(Subcommand::Rates, "alpha = 0.2\ngamma = 0.3\n", {});
    FAIL("accepted alpha + gamma = 1/2");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha + gamma > 1/2") != std::string::npos);
  }
}

TEST_CASE("flags override the file") {
  const RunConfig c = parse_config(Subcommand::Solve, "gamma = 0.9  # rough\n\n# comment only\nN=20\n", {{"gamma", "0.4"}});
  CHECK(c.real("gamma") == 0.4);
  CHECK(c.integer("N") == 20);
  const RunConfig h = parse_config(Subcommand::ConvergeTime, "t-star = 0.5\n", {{"zero-noise", "true"}});
  CHECK(h.real("t_star") == 0.5);
  CHECK(h.boolean("zero_noise"));
}

TEST_CASE("malformed input") {
  auto message = [](std::string_view text) {
    try {
      parse_config(Subcommand::Solve, text, {});
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("alpha = 0.6\ngamma = abc\n").find("line 2") != std::string::npos);
  CHECK(message("\n\nalpha 0.6\n").find("line 3") != std::string::npos);
  CHECK(message("beta = 0.3\n").find("unknown key") != std::string::npos);
  CHECK(message("N = 2.5\n").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(parse_config(Subcommand::Weights, "", {{"alpha", "0.5"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(Subcommand::ConvergeTime, "levels = 40,,80\n", {}), ConfigError);
  CHECK_THROWS_AS(parse_config(Subcommand::Rates, "", {{"workers", "0"}}), ConfigError);
}

TEST_CASE("worker count precedence") {
  CHECK(parse_config(Subcommand::Verify, "", {}, 3).workers == 3);
  CHECK(parse_config(Subcommand::Verify, "", {{"workers", "2"}}, 3).workers == 2);
  CHECK(parse_config(Subcommand::Verify, "workers = 5\n", {}, 3).workers == 5);
}

TEST_CASE("weights output") {
  std::string out, err;
  const RunConfig c = parse_config(Subcommand::Weights, "", {{"beta", "0.5"}, {"count", "2"}});
  CHECK(run_capture(c, out, err) == 0);
  CHECK(out == "1\n-0.5\n-0.125\n");
  const RunConfig bad = parse_config(Subcommand::Weights, "", {{"beta", "1.5"}});
  CHECK(run_capture(bad, out, err) == 2);
  CHECK(err.find("error") != std::string::npos);
}

TEST_CASE("rates output") {
  std::string out, err;
  const RunConfig c = parse_config(Subcommand::Rates, "", {{"alpha", "1"}, {"gamma", "0"}, {"s", "0"}});
  CHECK(run_capture(c, out, err) == 0);
  CHECK(out.find("strong_time 0.5-eps\n") != std::string::npos);
  CHECK(out.find("strong_space 1\n") != std::string::npos);
}

TEST_CASE("solve output") {
  std::string out, err;
  const std::string dump = "test_cli_increments.bin";
  const RunConfig c = parse_config(Subcommand::Solve, "M = 8\nN = 5\nu0 = sin\n", {{"increments", dump}});
  CHECK(run_capture(c, out, err) == 0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "t,x_1,x_2,x_3,x_4,x_5,x_6,x_7");
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(rows[6].rfind("1,", 0) == 0);

  std::ifstream in(dump, std::ios::binary);
  const IncrementMatrix incs = read_increments(in);
  CHECK(incs.modes() == 7);
  CHECK(incs.steps() == 5);
  CHECK(incs.key.seed == 42);
  std::remove(dump.c_str());

  std::string again;
  CHECK(run_capture(parse_config(Subcommand::Solve, "M = 8\nN = 5\nu0 = sin\n", {}), again, err) == 0);
  CHECK(again == out);

  CHECK(run_capture(parse_config(Subcommand::Solve, "M = 1\n", {}), out, err) == 2);
  CHECK(run_capture(parse_config(Subcommand::Solve, "u0 = cos\n", {}), out, err) == 2);
}

TEST_CASE("output file") {
  const std::string path = "test_cli_rates.txt";
  RunConfig c = parse_config(Subcommand::Rates, "", {{"output", path}});
  std::string out, err;
  CHECK(run_capture(c, out, err) == 0);
  CHECK(out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("weak_time") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("verify passes") {
  std::string out, err;
  CHECK(run_capture(parse_config(Subcommand::Verify, "", {}), out, err) == 0);
  for (const auto& l : lines(out)) {
    CHECK(l.rfind("CHECK ", 0) == 0);
    CHECK(l.find(" pass ") != std::string::npos);
  }
}
