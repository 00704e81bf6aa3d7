#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

#include "irlbfgs/dataio.hpp"
#include "irlbfgs/synthetic.hpp"
#include "support/helpers.hpp"

using namespace irlbfgs;
using doctest::Approx;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("irlbfgs_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("libsvm parsing of a well-formed file") {
  TempDir tmp;
  const std::string path = tmp.file("data.svm");
  write_text(path, "+1 3:1 7:1\n-1\n0 1:0.5\n1 2:2.25\n");
  const Dataset ds = read_libsvm(path);
  REQUIRE(ds.size() == 4);
  CHECK(ds.dimension == 7);

  CHECK(ds.examples[0].label == 1);
  REQUIRE(ds.examples[0].features.size() == 2);
  CHECK(ds.examples[0].features[0].index == 2);
  CHECK(ds.examples[0].features[1].index == 6);
  CHECK(ds.examples[0].features[1].value == 1.0);

  CHECK(ds.examples[1].label == -1);
  CHECK(ds.examples[1].features.empty());

  CHECK(ds.examples[2].label == -1);  // 0 maps to -1
  CHECK(ds.examples[3].label == 1);

  CHECK(ds.lipschitz_bound == Approx(2.25 * 2.25 / 4.0));
}

TEST_CASE("libsvm parse errors carry line numbers") {
  TempDir tmp;
  const std::string path = tmp.file("bad.svm");

  write_text(path, "abc 1:1\n");
  CHECK_THROWS_WITH_AS(read_libsvm(path), doctest::Contains(":1:"), std::runtime_error);

  write_text(path, "+1 1:1\n-1 5:1 3:1\n");
  CHECK_THROWS_WITH_AS(read_libsvm(path), doctest::Contains(":2:"), std::runtime_error);

  write_text(path, "+1 1:1 1:2\n");
  CHECK_THROWS_AS(read_libsvm(path), std::runtime_error);

  write_text(path, "+1 0:1\n");
  CHECK_THROWS_AS(read_libsvm(path), std::runtime_error);

  write_text(path, "+1 3:one\n");
  CHECK_THROWS_AS(read_libsvm(path), std::runtime_error);
}

TEST_CASE("dimension override") {
  TempDir tmp;
  const std::string path = tmp.file("dim.svm");
  write_text(path, "+1 2:1\n");
  CHECK(read_libsvm(path).dimension == 2);
  CHECK(read_libsvm(path, 10).dimension == 10);
  CHECK_THROWS_AS(read_libsvm(path, 1), std::runtime_error);
}

TEST_CASE("write then read is the identity on labels and features") {
  TempDir tmp;
  const Dataset ds = make_logistic_dataset({.n = 12, .N = 50, .nnz = 4,
                                            .feature_scale = 0.75,
                                            .flip_prob = 0.3,
                                            .seed = 21});
  const std::string path = tmp.file("round.svm");
  write_libsvm(ds, path);
  const Dataset back = read_libsvm(path, ds.dimension);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.examples[i].label == ds.examples[i].label);
    REQUIRE(back.examples[i].features.size() == ds.examples[i].features.size());
    for (std::size_t j = 0; j < ds.examples[i].features.size(); ++j) {
      CHECK(back.examples[i].features[j].index == ds.examples[i].features[j].index);
      CHECK(back.examples[i].features[j].value == ds.examples[i].features[j].value);
    }
  }
  CHECK(back.lipschitz_bound == ds.lipschitz_bound);
}

TEST_CASE("subset draws without replacement, deterministically") {
  const Dataset ds = make_logistic_dataset({.n = 6, .N = 40, .nnz = 3,
                                            .feature_scale = 1.0,
                                            .flip_prob = 0.2,
                                            .seed = 22});
  const Dataset a = subset(ds, 40, 5);
  const Dataset b = subset(ds, 40, 5);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.examples[i].label == b.examples[i].label);
    CHECK(a.examples[i].features.size() == b.examples[i].features.size());
  }

  // full-size subset is a permutation: same multiset of (label, support sum)
  auto key = [](const SparseExample& e) {
    double s = static_cast<double>(e.label) * 1000.0;
    for (const auto& [idx, val] : e.features) s += idx * val;
    return s;
  };
  std::multiset<double> orig, perm;
  for (const auto& e : ds.examples) orig.insert(key(e));
  for (const auto& e : a.examples) perm.insert(key(e));
  CHECK(orig == perm);

  const Dataset one = subset(ds, 1, 9);
  REQUIRE(one.size() == 1);
  CHECK(one.lipschitz_bound == Approx(one.examples[0].squared_norm() / 4.0));
  CHECK(one.dimension == ds.dimension);

  CHECK_THROWS_AS(subset(ds, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(subset(ds, 41, 1), std::invalid_argument);
}

TEST_CASE("run csv round trip is bit exact") {
  TempDir tmp;
  RngState rng = RngState::seeded(33);
  RunRecord rr;
  rr.algorithm = "irs-lbfgs";
  rr.seed = 17;
  rr.config = {{"algo", "irs-lbfgs"}, {"gamma0", "0.5"}};
  for (long k = 0; k < 40; ++k) {
    IterationRecord rec;
    rec.k = k * 3;
    rec.gamma = rng.next_unit() * 1e-3;
    rec.mu = rng.next_gaussian();
    rec.f = rng.next_gaussian() * 1e8;
    if (k % 2 == 0) rec.f_reg = rng.next_gaussian();
    rec.dir_norm = rng.next_unit();
    rr.records.push_back(rec);
  }
  const std::string path = tmp.file("run.csv");
  write_run_csv(rr, path);

  const RunRecord back = read_run_csv(path);
  CHECK(back.algorithm == "irs-lbfgs");
  CHECK(back.seed == 17);
  REQUIRE(back.records.size() == rr.records.size());
  for (std::size_t i = 0; i < rr.records.size(); ++i) {
    CHECK(back.records[i].k == rr.records[i].k);
    CHECK(back.records[i].gamma == rr.records[i].gamma);
    CHECK(back.records[i].mu == rr.records[i].mu);
    CHECK(back.records[i].f == rr.records[i].f);
    CHECK(back.records[i].dir_norm == rr.records[i].dir_norm);
    CHECK(back.records[i].f_reg.has_value() == rr.records[i].f_reg.has_value());
    if (rr.records[i].f_reg) CHECK(*back.records[i].f_reg == *rr.records[i].f_reg);
  }
}

TEST_CASE("empty record list writes a header-only file") {
  TempDir tmp;
  RunRecord rr;
  rr.algorithm = "sgd";
  const std::string path = tmp.file("empty.csv");
  write_run_csv(rr, path);
  CHECK(read_text(path) == "k,gamma,mu,f,f_reg,dir_norm\n");
  CHECK(read_run_csv(path).records.empty());
}

TEST_CASE("loader rejects non-increasing k") {
  TempDir tmp;
  const std::string path = tmp.file("bad.csv");
  write_text(path, "k,gamma,mu,f,f_reg,dir_norm\n5,1,1,1,,1\n5,1,1,1,,1\n");
  CHECK_THROWS_AS(read_run_csv(path), std::runtime_error);
  write_text(path, "k,gamma,mu,f,f_reg,dir_norm\n5,1,1,1,,1\n2,1,1,1,,1\n");
  CHECK_THROWS_AS(read_run_csv(path), std::runtime_error);
}

TEST_CASE("key-value files round trip") {
  TempDir tmp;
  const KeyValues kv = {{"algo", "saga"}, {"gamma0", "0.125"}, {"note", "a = b = c"}};
  const std::string path = tmp.file("cfg.kv");
  write_kv(kv, path);
  const KeyValues back = read_kv(path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].first == "algo");
  CHECK(back[0].second == "saga");
  CHECK(back[2].second == "a = b = c");

  write_text(path, "# comment\n\nkey = value\nbroken-line\n");
  CHECK_THROWS_AS(read_kv(path), std::runtime_error);
}

TEST_CASE("17-digit rendering round trips binary64") {
  RngState rng = RngState::seeded(44);
  for (int t = 0; t < 2000; ++t) {
    const double v = std::exp(40.0 * (rng.next_unit() - 0.5)) * (rng.next_unit() - 0.5);
    CHECK(std::stod(format_real(v)) == v);
  }
}
