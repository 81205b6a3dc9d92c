#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "pulearn/csv.hpp"
#include "pulearn/dataset.hpp"

using namespace pulearn;

namespace {

LabeledDataset tiny(std::size_t n_pos, std::size_t n_neg) {
  Matrix f(n_pos + n_neg, 2);
  std::vector<int> y(n_pos + n_neg);
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    f(i, 0) = static_cast<double>(i);
    f(i, 1) = static_cast<double>(i) * 0.5 - 1.0;
    y[i] = i < n_pos ? 1 : -1;
  }
  return make_dataset("tiny", std::move(f), std::move(y));
}

std::string temp_path(const std::string& name) {
  return "/tmp/pulearn_test_" + name;
}

}  // namespace

TEST_CASE("dataset shape accessors and validation") {
  LabeledDataset ds = tiny(3, 7);
  REQUIRE(ds.n() == 10);
  REQUIRE(ds.d() == 2);
  REQUIRE(ds.positive_count() == 3);
  REQUIRE(ds.positive_ratio() == 0.3);

  Matrix f(2, 1);
  REQUIRE_THROWS_AS(make_dataset("bad", f, {1, 0}), Error);
  REQUIRE_THROWS_AS(make_dataset("bad", f, {1}), Error);
  REQUIRE_THROWS_AS(make_dataset("bad", Matrix(0, 1), {}), Error);
}

TEST_CASE("column statistics use the population convention") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 0) = 3.0;
  m(0, 1) = 5.0;
  m(1, 1) = 5.0;
  const FeatureStats st = column_stats(m);
  REQUIRE(st.mean[0] == 2.0);
  REQUIRE(st.stddev[0] == 1.0);
  REQUIRE(st.mean[1] == 5.0);
  REQUIRE(st.stddev[1] == 0.0);
}

TEST_CASE("standardization maps train stats onto both splits") {
  Matrix ftr(2, 1);
  ftr(0, 0) = 1.0;
  ftr(1, 0) = 3.0;
  LabeledDataset train = make_dataset("t", std::move(ftr), {1, -1});
  Matrix fte(2, 1);
  fte(0, 0) = 2.0;
  fte(1, 0) = 5.0;
  LabeledDataset test = make_dataset("t", std::move(fte), {1, -1});

  const StandardizeResult out = standardize(train, test);
  REQUIRE(out.train.features(0, 0) == -1.0);
  REQUIRE(out.train.features(1, 0) == 1.0);
  REQUIRE(out.test.features(0, 0) == 0.0);
  REQUIRE(out.test.features(1, 0) == 3.0);

  // standardizing an already standardized split is a fixed point
  const StandardizeResult twice = standardize(out.train, out.test);
  REQUIRE(twice.train.features(0, 0) == out.train.features(0, 0));
  REQUIRE(twice.test.features(1, 0) == out.test.features(1, 0));
}

TEST_CASE("constant columns standardize to zero everywhere") {
  Matrix ftr(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    ftr(i, 0) = 4.0;
    ftr(i, 1) = static_cast<double>(i);
  }
  LabeledDataset train = make_dataset("c", std::move(ftr), {1, -1, -1});
  Matrix fte(2, 2);
  fte(0, 0) = 9.0;
  fte(0, 1) = 1.0;
  fte(1, 0) = -2.0;
  fte(1, 1) = 0.5;
  LabeledDataset test = make_dataset("c", std::move(fte), {1, -1});
  const StandardizeResult out = standardize(train, test);
  for (std::size_t i = 0; i < 3; ++i)
    REQUIRE(out.train.features(i, 0) == 0.0);
  REQUIRE(out.test.features(0, 0) == 0.0);
  REQUIRE(out.test.features(1, 0) == 0.0);
}

TEST_CASE("stratified split honors the documented counting rule") {
  // 10 rows, 3 positive, train fraction 0.7: 7 train rows, floors give
  // 2 positives + 4 negatives, the leftover goes to the larger remainder
  LabeledDataset ds = tiny(3, 7);
  SplitSpec spec;
  spec.train_fraction = 0.7;
  spec.seed = 123;
  const auto [train, test] = train_test_split(ds, spec);
  REQUIRE(train.n() == 7);
  REQUIRE(test.n() == 3);
  REQUIRE(train.positive_count() == 2);
  REQUIRE(test.positive_count() == 1);
}

TEST_CASE("splits are deterministic in the seed and exhaustive") {
  LabeledDataset ds = tiny(20, 50);
  SplitSpec spec;
  spec.seed = 9;
  const auto [a_train, a_test] = train_test_split(ds, spec);
  const auto [b_train, b_test] = train_test_split(ds, spec);
  REQUIRE(a_train.features.data == b_train.features.data);
  REQUIRE(a_test.features.data == b_test.features.data);
  REQUIRE(a_train.labels == b_train.labels);

  spec.seed = 10;
  const auto [c_train, c_test] = train_test_split(ds, spec);
  REQUIRE(a_train.features.data != c_train.features.data);

  // every original row appears exactly once across the two splits
  std::vector<int> seen(ds.n(), 0);
  for (const LabeledDataset* part : {&a_train, &a_test}) {
    for (std::size_t i = 0; i < part->n(); ++i) {
      const std::size_t original =
          static_cast<std::size_t>(part->features(i, 0));
      REQUIRE(original < ds.n());
      REQUIRE(part->features(i, 1) == ds.features(original, 1));
      REQUIRE(part->labels[i] == ds.labels[original]);
      seen[original] += 1;
    }
  }
  for (int c : seen) REQUIRE(c == 1);
}

TEST_CASE("both classes survive every split") {
  LabeledDataset ds = tiny(2, 98);
  SplitSpec spec;
  spec.train_fraction = 0.99;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    spec.seed = seed;
    const auto [train, test] = train_test_split(ds, spec);
    REQUIRE(train.positive_count() >= 1);
    REQUIRE(test.positive_count() >= 1);
    REQUIRE(train.positive_count() < train.n());
    REQUIRE(test.positive_count() < test.n());
  }
}

TEST_CASE("splits need at least two rows per class") {
  LabeledDataset ds = tiny(1, 9);
  SplitSpec spec;
  REQUIRE_THROWS_AS(train_test_split(ds, spec), Error);
}

TEST_CASE("CSV loader round-trips a dataset") {
  LabeledDataset ds = tiny(3, 4);
  const std::string path = temp_path("roundtrip.csv");
  write_dataset_csv(ds, path);
  CsvSchema schema;
  const LabeledDataset back = load_csv(path, schema);
  REQUIRE(back.name == "pulearn_test_roundtrip");
  REQUIRE(back.n() == ds.n());
  REQUIRE(back.d() == ds.d());
  REQUIRE(back.features.data == ds.features.data);
  REQUIRE(back.labels == ds.labels);
  std::remove(path.c_str());
}

TEST_CASE("CSV loader reports malformed inputs precisely") {
  const std::string path = temp_path("bad.csv");
  const auto write_file = [&](const std::string& body) {
    std::ofstream out(path);
    out << body;
  };

  write_file("1.0,2.0,1\n3.0,oops,-1\n");
  REQUIRE_THROWS_AS(load_csv(path, CsvSchema{}), Error);

  write_file("1.0,2.0,1\n3.0,-1\n");
  REQUIRE_THROWS_AS(load_csv(path, CsvSchema{}), Error);

  write_file("1.0,2.0,0.5\n");
  REQUIRE_THROWS_AS(load_csv(path, CsvSchema{}), Error);

  write_file("");
  REQUIRE_THROWS_AS(load_csv(path, CsvSchema{}), Error);

  write_file("1.0,2.0,1\n3.0,4.0,1\n");  // single class
  REQUIRE_THROWS_AS(load_csv(path, CsvSchema{}), Error);

  REQUIRE_THROWS_AS(load_csv(temp_path("missing_file.csv"), CsvSchema{}),
                    Error);
  std::remove(path.c_str());
}

TEST_CASE("CSV schema options: header and label column") {
  const std::string path = temp_path("schema.csv");
  {
    std::ofstream out(path);
    out << "y,f0,f1\n1,0.5,2.0\n-1,0.25,4.0\n";
  }
  CsvSchema schema;
  schema.has_header = true;
  schema.label_column = 0;
  const LabeledDataset ds = load_csv(path, schema);
  REQUIRE(ds.n() == 2);
  REQUIRE(ds.d() == 2);
  REQUIRE(ds.labels[0] == 1);
  REQUIRE(ds.labels[1] == -1);
  REQUIRE(ds.features(0, 0) == 0.5);
  REQUIRE(ds.features(1, 1) == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("catalog validation flags size and ratio drift") {
  const std::string path = temp_path("catalog.csv");
  {
    std::ofstream out(path);
    out << "name,n,d,positive_pct\ntiny,10,2,30.0\nother,5,1,20.0\n";
  }
  const auto catalog = load_catalog(path);
  REQUIRE(catalog.size() == 2);

  LabeledDataset ds = tiny(3, 7);
  CatalogCheck ok = validate_against_catalog(ds, catalog);
  REQUIRE(ok.found);
  REQUIRE(ok.all_ok());

  LabeledDataset bigger = tiny(3, 8);
  bigger.name = "tiny";
  CatalogCheck bad = validate_against_catalog(bigger, catalog);
  REQUIRE(bad.found);
  REQUIRE_FALSE(bad.all_ok());

  LabeledDataset unknown = tiny(3, 7);
  unknown.name = "nope";
  CatalogCheck miss = validate_against_catalog(unknown, catalog);
  REQUIRE_FALSE(miss.found);
  REQUIRE_FALSE(miss.all_ok());
  std::remove(path.c_str());
}

TEST_CASE("the shipped dataset catalog parses and covers the benchmark") {
  const auto catalog =
      load_catalog(std::string(PULEARN_DATA_DIR) + "/dataset_catalog.csv");
  REQUIRE(catalog.size() == 14);
  for (const auto& e : catalog) {
    REQUIRE(e.n > 0);
    REQUIRE(e.d > 0);
    REQUIRE(e.positive_pct > 0.0);
    REQUIRE(e.positive_pct < 50.0);
  }
}
