#include <gtest/gtest.h>

#include "nsgev/error.hpp"
#include "nsgev/model_io.hpp"
#include "nsgev/synthetic.hpp"

using namespace nsgev;

TEST(ConfigJson, DefaultsAndRoundTrip) {
  const Config c = config_from_json("{}");
  EXPECT_EQ(c.basis, BasisSpec{});
  EXPECT_EQ(c.lambda_grid, default_lambda_grid());
  EXPECT_EQ(c.bootstrap_replicates, 200u);
  EXPECT_DOUBLE_EQ(c.min_coverage, 0.8);

  Config d;
  d.basis.k_month = 6;
  d.lambda_grid = {0.1, 1.0, 10.0};
  d.bootstrap_replicates = 75;
  d.min_coverage = 0.9;
  const Config e = config_from_json(config_to_json(d));
  EXPECT_EQ(e.basis, d.basis);
  EXPECT_EQ(e.lambda_grid, d.lambda_grid);
  EXPECT_EQ(e.bootstrap_replicates, 75u);
  EXPECT_EQ(config_hash(e), config_hash(d));
  EXPECT_NE(config_hash(e), config_hash(Config{}));
}

TEST(ConfigJson, Rejections) {
  EXPECT_THROW((void)config_from_json("{\"schema\": 2}"), DomainError);
  EXPECT_THROW((void)config_from_json("not json"), DomainError);
  EXPECT_THROW((void)config_from_json("{\"basis\": {\"k_month\": 20}}"), DomainError);
  EXPECT_THROW((void)config_from_json("{\"lambda_grid\": []}"), DomainError);
  EXPECT_THROW((void)config_from_json("{\"min_coverage\": 1.5}"), DomainError);
  EXPECT_THROW((void)config_from_json("{\"lambda_grid\": \"x\"}"), DomainError);
}

TEST(ModelJson, TensorRoundTripPredictsIdentically) {
  SyntheticTruth t;
  t.mu.trend = 1.0;
  const auto bm = simulate_monthly_maxima(t, 1991, 2020, 3);
  ModelFile file;
  file.model = fit_tensor(bm);
  file.first_year = 1991;
  file.last_year = 2020;
  file.block_kind = "monthly";
  file.config_hash = 0xabcdefULL;
  file.seed = 9;
  const std::string text = model_to_json(file);
  const ModelFile back = model_from_json(text);
  EXPECT_EQ(back.config_hash, file.config_hash);
  EXPECT_EQ(back.seed, 9u);
  const auto& a = std::get<FittedModel>(file.model);
  const auto& b = std::get<FittedModel>(back.model);
  EXPECT_EQ(b.kind, ModelKind::tensor);
  EXPECT_EQ(b.data_fingerprint, a.data_fingerprint);
  EXPECT_EQ(b.design_points, a.design_points);
  for (int m = 1; m <= 12; ++m) {
    for (int y : {1991, 2005, 2020}) EXPECT_EQ(predict_params(b, m, y), predict_params(a, m, y));
  }
  EXPECT_EQ(model_to_json(back), text);
}

TEST(ModelJson, StationaryRoundTrip) {
  ModelFile file;
  file.model = fit_gev_mle(gev_sample({5, 1, 0.1}, 50, 2));
  file.first_year = 1971;
  file.last_year = 2020;
  const ModelFile back = model_from_json(model_to_json(file));
  const auto& a = std::get<StationaryFit>(file.model);
  const auto& b = std::get<StationaryFit>(back.model);
  EXPECT_EQ(b.params, a.params);
  EXPECT_EQ(b.cov, a.cov);
  EXPECT_EQ(b.n, a.n);
}

TEST(ModelJson, Rejections) {
  EXPECT_THROW((void)model_from_json("{\"schema\": 1, \"model_kind\": \"gam\"}"), DomainError);
  EXPECT_THROW((void)model_from_json("{\"schema\": 1}"), DomainError);
  EXPECT_THROW((void)load_model("/nonexistent/model.json"), DomainError);
}
