#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trslab/errors.hpp"
#include "trslab/experiments.hpp"

using namespace trslab;

TEST(Families, NamesRoundTrip) {
  for (Family f : {Family::Evenly1a, Family::Exp1b, Family::ChebNodes2, Family::Strakos3,
                   Family::RandomSym4})
    EXPECT_EQ(parseFamily(familyName(f)), f);
  EXPECT_EQ(parseFamily("strakos3"), Family::Strakos3);
  EXPECT_THROW(parseFamily("5"), InvalidSpec);
}

TEST(FamilySpectrum, StrakosLiteralOrientation) {
  ProblemSpec spec = ProblemSpec::defaults(Family::Strakos3);
  spec.n = 4;
  spec.params["mirror"] = 0;
  const Vector d = familySpectrum(spec);
  EXPECT_DOUBLE_EQ(d[0], 8.0);
  EXPECT_NEAR(d[1], 4.7330, 5e-5);
  EXPECT_DOUBLE_EQ(d[3], -2.0);
}

TEST(FamilySpectrum, StrakosMirroredEndpoints) {
  ProblemSpec spec = ProblemSpec::defaults(Family::Strakos3);
  spec.n = 100;
  const Vector d = familySpectrum(spec);
  EXPECT_DOUBLE_EQ(d.front(), -2.0);
  EXPECT_DOUBLE_EQ(d.back(), 8.0);
}

TEST(FamilySpectrum, ChebyshevNodes) {
  ProblemSpec spec = ProblemSpec::defaults(Family::ChebNodes2);
  spec.n = 2;
  const Vector d = familySpectrum(spec);
  EXPECT_NEAR(d[0], 3.53553, 1e-5);
  EXPECT_NEAR(d[1], -3.53553, 1e-5);
}

TEST(FamilySpectrum, EvenlySpacedRange) {
  ProblemSpec spec = ProblemSpec::defaults(Family::Evenly1a);
  spec.n = 10;
  const Vector d = familySpectrum(spec);
  EXPECT_DOUBLE_EQ(d.front(), -2.0);
  EXPECT_DOUBLE_EQ(d.back(), 2.0);
}

TEST(Generate, ReflectorsPreserveSpectrum) {
  ProblemSpec spec = ProblemSpec::defaults(Family::Evenly1a);
  spec.n = 30;
  spec.params["reflectors"] = 3;
  const auto inst = generate(spec);
  ASSERT_EQ(inst.reflectors.size(), 3u);
  ASSERT_TRUE(inst.eigenvalues);
  const Vector x = seededUnitVector(30, 4);
  const Vector y = fromEigenbasis(inst, toEigenbasis(inst, x));
  for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(x[i], y[i], 1e-14);
  // A v = theta v for v the image of a coordinate vector
  Vector e(30, 0.0);
  e[7] = 1;
  const Vector v = fromEigenbasis(inst, e);
  const Vector av = inst.a.apply(v);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(av[i], (*inst.eigenvalues)[7] * v[i], 1e-13);
}

TEST(Generate, DeterministicPerSeed) {
  ProblemSpec spec = ProblemSpec::defaults(Family::RandomSym4);
  spec.n = 50;
  const auto a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.g, b.g);
  const Vector x = seededUnitVector(50, 9);
  EXPECT_EQ(a.a.apply(x), b.a.apply(x));
  spec.seed = 2;
  EXPECT_NE(generate(spec).g, a.g);
}

TEST(ReferenceSolution, ScaledIdentity) {
  ProblemInstance inst{SymmetricLinearOperator::fromDiagonal(Vector(4, 1.0)), Vector{1, 1, 1, 1}};
  const auto ref = referenceSolution(inst, 1.0);
  EXPECT_NEAR(ref.lambdaOpt, 1.0, 1e-13);
  EXPECT_NEAR(ref.qOpt, -1.5, 1e-13);
  EXPECT_TRUE(ref.kkt.pass);
}

TEST(ProblemSpec, JsonRoundTrip) {
  ProblemSpec spec = ProblemSpec::defaults(Family::Strakos3);
  spec.n = 321;
  spec.delta = 0.25;
  spec.seed = 42;
  spec.params["rho"] = 0.95;
  const ProblemSpec back = specFromJson(specToJson(spec));
  EXPECT_EQ(back.family, spec.family);
  EXPECT_EQ(back.n, spec.n);
  EXPECT_EQ(back.delta, spec.delta);
  EXPECT_EQ(back.seed, spec.seed);
  EXPECT_EQ(back.params, spec.params);
}

TEST(ProblemSpec, ValidationErrors) {
  EXPECT_THROW(specFromJson("{"), InvalidSpec);
  EXPECT_THROW(specFromJson(R"({"family":"1a","n":1})"), InvalidSpec);
  EXPECT_THROW(specFromJson(R"({"family":"1a","delta":-1})"), InvalidSpec);
  EXPECT_THROW(specFromJson(R"({"family":"3","params":{"rho":1.5}})"), InvalidSpec);
  EXPECT_THROW(specFromJson(R"({"family":"2","params":{"a":3,"b":1}})"), InvalidSpec);
}

TEST(Csv, RoundTripIsExact) {
  std::vector<ExperimentRow> rows(3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto v = rows[i].values();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(0.37, double(i * 14 + j)) / 3.0;
    v[0] = double(i);
    rows[i] = ExperimentRow::fromValues(v);
  }
  const std::string text = formatCsv(rows);
  EXPECT_EQ(text.substr(0, std::string(kCsvHeader).size()), kCsvHeader);
  const auto back = parseCsv(text);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(back[i].values(), rows[i].values());
  EXPECT_THROW(parseCsv(std::string(kCsvHeader) + "\n1,2\n"), ParseError);
}

TEST(Emit, EmptyTableIsAnError) {
  ExperimentTable table;
  EXPECT_THROW(emitCsv(table, std::filesystem::temp_directory_path() / "trslab_empty.csv"), Error);
}

TEST(FitRate, ExactGeometricSequence) {
  std::vector<double> ks, vs;
  for (int k = 0; k < 30; ++k) {
    ks.push_back(k);
    vs.push_back(std::pow(0.5, k));
  }
  const auto fit = fitRate(ks, vs, 1e-6, 1.0);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->slope, std::log(0.5), 1e-12);
  EXPECT_EQ(fit->kFirst, 0u);
  EXPECT_EQ(fit->kLast, 19u);
  EXPECT_FALSE(fitRate(ks, vs, 0.3, 1.0));
}

class SmallExperiment : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ProblemSpec spec = ProblemSpec::defaults(Family::Evenly1a);
    spec.n = 2000;
    ExperimentOptions opts;
    opts.kMax = 80;
    table_ = new ExperimentTable(runExperiment(spec, opts));
  }
  static void TearDownTestSuite() { delete table_; }
  static ExperimentTable* table_;
};

ExperimentTable* SmallExperiment::table_ = nullptr;

TEST_F(SmallExperiment, LambdaGapAtIteration34) {
  ASSERT_GT(table_->rows.size(), 34u);
  const double gap = table_->rows[34].lambdaGap;
  EXPECT_GE(gap, 0.0);
  EXPECT_LE(gap, 1e-12);
}

TEST_F(SmallExperiment, BoundsDominateMeasurements) {
  for (const auto& r : table_->rows) {
    EXPECT_LE(r.qGap, r.qGapBound * (1 + 1e-10) + 1e-14) << "k=" << r.k;
    EXPECT_LE(r.sGap, r.sGapBound * (1 + 1e-10) + 1e-14) << "k=" << r.k;
    EXPECT_LE(r.cgGap, r.cgGapBound * (1 + 1e-10) + 1e-14) << "k=" << r.k;
  }
}

TEST_F(SmallExperiment, OutputsAreWrittenAndDeterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "trslab_exp_test";
  std::filesystem::create_directories(dir);
  writeExperimentOutputs(*table_, dir, "t1");
  std::ifstream in(dir / "t1.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), formatCsv(table_->rows));
  EXPECT_TRUE(std::filesystem::exists(dir / "t1.plt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "t1.summary.json"));
  const std::string plot = formatPlotScript(*table_, "t1.csv");
  EXPECT_NE(plot.find("t1.csv"), std::string::npos);
  EXPECT_NE(plot.find("logscale"), std::string::npos);
  std::filesystem::remove_all(dir);
}
