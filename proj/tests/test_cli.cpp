#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "wdd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = wdd::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string header_config(const std::string& text) {
  const std::string tag = "# config: ";
  const auto first = lines(text).at(0);
  REQUIRE(first.rfind(tag, 0) == 0);
  return first.substr(tag.size());
}

}  // namespace

TEST_CASE("walsh command") {
  const auto r = run({"walsh", "--n", "7", "--m", "3"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 10);
  CHECK(l[1] == "k,x,W");
  std::string signs;
  for (std::size_t i = 2; i < l.size(); ++i) signs += l[i].substr(l[i].rfind(',') + 1) == "-1" ? '-' : '+';
  CHECK(signs == "+--+-++-");
}

TEST_CASE("filter command") {
  const auto r = run({"filter", "--n", "15", "--grid", "log:1e-3:1e2:2048"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2050);
  CHECK(l[1] == "omega_tau,F");
  const auto value = [&](std::size_t i) { return std::stod(l[i].substr(l[i].find(',') + 1)); };
  const auto arg = [&](std::size_t i) { return std::stod(l[i].substr(0, l[i].find(','))); };
  const double slope = std::log(value(102) / value(2)) / std::log(arg(102) / arg(2));
  CHECK(slope == doctest::Approx(10.0).epsilon(0.01));

  const auto threaded = run({"--threads", "3", "filter", "--n", "15", "--grid", "log:1e-3:1e2:2048"});
  CHECK(threaded.out == r.out);
}

TEST_CASE("moments command") {
  const auto r = run({"moments", "--n-max", "63"});
  REQUIRE(r.code == 0);
  int zeros = 0;
  for (const auto& line : lines(r.out)) {
    if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
    std::istringstream in(line);
    std::string n, rr, k, value;
    std::getline(in, n, ',');
    std::getline(in, rr, ',');
    std::getline(in, k, ',');
    std::getline(in, value, ',');
    if (std::stoi(k) < std::stoi(rr)) {
      CHECK(value == "0");
      ++zeros;
    }
  }
  // sum over n < 64 of hamming weight
  CHECK(zeros == 192);
}

TEST_CASE("config round trip") {
  const std::vector<std::vector<std::string>> commands = {
      {"walsh", "--n", "11", "--m", "5", "--format", "json"},
      {"seq", "--family", "cdd", "--r", "3"},
      {"filter", "--n", "22", "--grid", "lin:0:30:64"},
      {"rolloff", "--n", "1", "3", "7"},
      {"bandwidth", "--n", "15", "23"},
      {"coherence", "--n", "1", "3", "--noise", "power_law_gaussian_cutoff", "--A", "2", "--p", "1",
       "--omega-c", "5", "--tau-grid", "log:0.1:1:3"},
      {"t2", "--family", "cdd", "--r", "1", "2", "--noise", "white", "--A", "1", "--omega-c", "50"},
      {"mc", "--n", "3", "--noise", "white", "--A", "1", "--omega-c", "40", "--tau-grid", "lin:0.2:0.4:2",
       "--n-traj", "200", "--seed", "5"},
      {"bath", "--n", "3", "--seed", "2", "--tau-grid", "log:0.01:0.1:4"},
      {"dcg", "--order", "2"},
      {"gwdd", "--n", "15"},
      {"search", "--m", "2", "--noise", "white", "--A", "1", "--omega-c", "30", "--oracle"},
      {"moments", "--n-max", "7"},
  };
  for (const auto& cmd : commands) {
    INFO(cmd[0]);
    const auto first = run(cmd);
    REQUIRE(first.code == 0);
    std::string config;
    if (first.out[0] == '{') {
      config = first.out;
    } else {
      config = header_config(first.out);
    }
    const auto replay = run({"--config", config});
    REQUIRE(replay.code == 0);
    CHECK(replay.out == first.out);

    const auto path = std::filesystem::temp_directory_path() / ("wdd_replay_" + cmd[0]);
    std::ofstream(path) << first.out;
    const auto from_file = run({"--config", path.string()});
    CHECK(from_file.out == first.out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "wdd_out.csv";
  const auto r = run({"--out", path.string(), "walsh", "--n", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == run({"walsh", "--n", "3"}).out);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  auto r = run({"walsh", "--n", "8", "--m", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);

  r = run({"walsh", "--bogus"});
  CHECK(r.code == 2);

  r = run({"--config", "{not json"});
  CHECK(r.code == 2);

  r = run({"mc", "--n", "1"});
  CHECK(r.code == 2);

  r = run({"coherence", "--n", "0", "--noise", "power_law_gaussian_cutoff", "--A", "1", "--p", "2",
           "--omega-c", "10", "--tau-grid", "lin:0.1:1:2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("infrared") != std::string::npos);

  r = run({"t2", "--n", "1", "--noise", "white", "--A", "0"});
  CHECK(r.code == 3);
}
