#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "kllab/io.hpp"
#include "oracles.hpp"

namespace kllab {
namespace {

using json = nlohmann::ordered_json;

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the CLI through the shell; `args` is appended verbatim.
CliRun kllab(const std::string& args, const std::string& env = "") {
  const auto err_path = std::filesystem::path(testing::TempDir()) / "kllab_cli_stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + KLLAB_CLI_PATH + std::string(" ") + args + " 2>" + err_path.string();
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_path);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

// Splits one CSV line, honoring double quotes.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

Word word_of(const std::string& rendered) { return rendered == "e" ? Word{} : parse_word(rendered); }

std::string error_kind(const CliRun& r) { return json::parse(r.err).at("error").get<std::string>(); }

TEST(CliTest, Info) {
  CliRun r = kllab("info --group A3");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "order 24, longest length 6\n");
  r = kllab("info --group H4");
  EXPECT_EQ(r.out, "order 14400, longest length 60\n");
  r = kllab("info --group Aff-A2 --cap 3 --format json");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("elements"), 1 + 3 + 6 + 9);
  EXPECT_EQ(j.at("complete"), false);
  EXPECT_EQ(j.at("layer_sizes"), json::array({1, 3, 6, 9}));
  r = kllab("info --group 'I2(inf)' --cap 4 --format csv");
  EXPECT_EQ(r.out, "length,elements\n0,1\n1,2\n2,2\n3,2\n4,2\n");
}

// Each row against the classical recursion via h^{y,x} = h_{w0 x, w0 y}.
TEST(CliTest, InverseTableA2MatchesOracle) {
  const CliRun r = kllab("invkl --group A2 --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "y,x,len_y,len_x,poly");

  const oracle::SymmetricGroup sym(3);
  const oracle::KLOracle ref(sym);
  std::size_t comparable = 0;
  for (std::size_t a = 0; a < sym.size(); ++a) {
    for (std::size_t b = 0; b < sym.size(); ++b) comparable += sym.leq(a, b) ? 1 : 0;
  }
  EXPECT_EQ(rows.size() - 1, comparable);
  EXPECT_EQ(comparable, 19U);

  auto w0_times = [&](const Word& w) {
    oracle::Perm p = oracle::perm_of_word(w, 3);
    for (int& v : p) v = 2 - v;
    return sym.index.at(p);
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = csv_fields(rows[i]);
    ASSERT_EQ(f.size(), 5U) << rows[i];
    const Word y = word_of(f[0]);
    const Word x = word_of(f[1]);
    EXPECT_TRUE(sym.leq(sym.index.at(oracle::perm_of_word(y, 3)), sym.index.at(oracle::perm_of_word(x, 3))));
    EXPECT_EQ(std::stoi(f[2]), static_cast<int>(y.size()));
    EXPECT_EQ(std::stoi(f[3]), static_cast<int>(x.size()));
    EXPECT_EQ(LaurentPoly::parse_csv_string(f[4]), ref.h(w0_times(x), w0_times(y))) << rows[i];
  }
}

TEST(CliTest, KLTableJsonMatchesLibrary) {
  const CliRun r = kllab("kl --group B3 --format json");
  ASSERT_EQ(r.status, 0) << r.err;
  const GroupTable g = GroupTable::enumerate(parse_coxeter_spec("B3"), std::nullopt);
  const KLTable kl(g);
  std::size_t n = 0;
  for (const auto& [key, p] : io::parse_json_table(r.out)) {
    const auto bar = key.find('|');
    const ElementId y = g.find(word_of(key.substr(0, bar)));
    const ElementId x = g.find(word_of(key.substr(bar + 1)));
    EXPECT_EQ(p, kl.kl_poly(y, x)) << key;
    ++n;
  }
  std::size_t expected = 0;
  for (ElementId x : g.all()) expected += g.lower_interval(x).size();
  EXPECT_EQ(n, expected);
}

TEST(CliTest, GoldenColumnAndMu) {
  CliRun r = kllab("kl --group A3 --element 2,1,3,2 --format json");
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("entries").at("2|2,1,3,2"), (json{{"1", 1}, {"3", 1}}));
  r = kllab("kl --group A2 --mu --format csv");
  EXPECT_EQ(lines(r.out).size(), 9U);
}

TEST(CliTest, ParabolicTables) {
  CliRun r = kllab("parabolic --group A2 --parabolic 1 --flavor spherical --inverse --format csv");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  EXPECT_EQ(rows[0], "y,x,len_y,len_x,poly,flavor,I");
  EXPECT_EQ(rows.size(), 7U);
  EXPECT_NE(r.out.find("\"e\",\"2,1\",0,2,0,spherical,\"1\""), std::string::npos);

  r = kllab("parabolic --group A2 --parabolic 1 --format json");
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("flavor"), "antispherical");
  EXPECT_EQ(j.at("I"), json::array({1}));
  EXPECT_EQ(j.at("entries").at("e|2"), (json{{"1", 1}}));
  EXPECT_EQ(j.at("entries").at("e|2,1"), json::object());
}

TEST(CliTest, Rouquier) {
  const CliRun r = kllab("rouquier --group A2 --element 1,2 --format json");
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j.at("tables").size(), 1U);
  // h^{y,12} = v^{2-ℓ(y)} for each of the four y <= s1s2.
  const json& m = j.at("tables").at(0).at("multiplicities");
  EXPECT_EQ(m.size(), 4U);
  for (const json& e : m) {
    EXPECT_EQ(e.at("multiplicity"), 1);
    EXPECT_EQ(e.at("degree").get<int>(), 2 - static_cast<int>(word_of(e.at("y").get<std::string>()).size()));
  }
}

TEST(CliTest, Scans) {
  CliRun r = kllab("scan --name spherical --group A2 --parabolic 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("(EXPECTED)"), std::string::npos);
  EXPECT_NE(r.out.find("expected: z=e y=2 x=2,1"), std::string::npos);

  r = kllab("scan --name spherical --group A2 --parabolic 1 --no-expect-violations");
  EXPECT_EQ(r.status, 1);

  r = kllab("scan --name spherical --group A3 --parabolic 1,2 --format json");
  EXPECT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("missing").size(), 0U);
  EXPECT_GE(j.at("violations").size(), 2U);

  for (const char* name : {"inverse", "classical"}) {
    r = kllab(std::string("scan --name ") + name + " --group H3 --format json");
    EXPECT_EQ(r.status, 0) << name;
    EXPECT_EQ(json::parse(r.out).at("violations").size(), 0U);
  }
  r = kllab("scan --name antispherical --group B3 --parabolic 2,3");
  EXPECT_EQ(r.status, 0);
  r = kllab("scan --name inverse --group 'I2(inf)' --cap 10");
  EXPECT_EQ(r.status, 0);
}

TEST(CliTest, SuiteAndDeterminism) {
  const CliRun a = kllab("suite --group A3 --parabolic all --format json");
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_TRUE(json::parse(a.out).at("passed").get<bool>());
  const CliRun b = kllab("suite --group A3 --parabolic all --format json --threads 3");
  const CliRun c = kllab("suite --group A3 --parabolic all --format json");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);

  const CliRun strict = kllab("suite --group A2 --no-expect-violations");
  EXPECT_EQ(strict.status, 1);
  EXPECT_NE(strict.out.find("FAILED"), std::string::npos);
}

TEST(CliTest, OutFile) {
  const auto path = std::filesystem::path(testing::TempDir()) / "kllab_cli_out.csv";
  std::filesystem::remove(path);
  const CliRun r = kllab("invkl --group A2 --format csv --out " + path.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(path), kllab("invkl --group A2 --format csv").out);
}

TEST(CliTest, UsageErrors) {
  for (const char* args :
       {"info", "info --group Z4", "info --group Aff-A1", "info --group A2 --cap -1", "info --group A2 --threads 0",
        "info --group A2 --format xml", "info --group A2 --bogus", "parabolic --group A2 --parabolic 5",
        "parabolic --group A2 --parabolic 1 --flavor regular", "parabolic --group A2 --parabolic 1 --element 1",
        "kl --group A2 --element 4", "kl --group A2 --element x", "scan --name sideways --group A2",
        "info --group file:/nonexistent/matrix.txt", "frobnicate"}) {
    const CliRun r = kllab(args);
    EXPECT_EQ(r.status, 2) << args;
    EXPECT_EQ(error_kind(r), "usage") << args << ": " << r.err;
  }
  EXPECT_EQ(kllab("info --group A2", "KLLAB_MAX_ELEMENTS=lots").status, 2);
  EXPECT_EQ(kllab("--help").status, 0);
}

TEST(CliTest, ComputationErrors) {
  CliRun r = kllab("info --group A3", "KLLAB_MAX_ELEMENTS=5");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "resource_limit");
  r = kllab("kl --group Aff-A1 --cap 3 --element 1,2,1,2");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "out_of_range");
  EXPECT_EQ(kllab("info --group A3", "KLLAB_MAX_ELEMENTS=24").status, 0);
}

}  // namespace
}  // namespace kllab
