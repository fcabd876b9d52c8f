#include <doctest.h>

#include <bouligand.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

TEST_CASE("status strings and errors") {
  CHECK(std::string(bl_status_string(BL_OK)) != "");
  bl_problem* p = nullptr;
  CHECK(bl_problem_create(2, &p) == BL_ERR_INVALID_MESH);
  CHECK(p == nullptr);
  CHECK(std::string(bl_last_error()).size() > 0);
  CHECK(bl_problem_create(5, nullptr) == BL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scalar forward solve through the C API") {
  bl_problem* p = nullptr;
  REQUIRE(bl_problem_create(3, &p) == BL_OK);
  CHECK(bl_problem_size(p) == 1);
  const double one = 1.0;
  bl_gridfn* u = nullptr;
  REQUIRE(bl_gridfn_from_values(p, &one, 1, BL_ROLE_SOURCE, &u) == BL_OK);
  bl_gridfn* y = nullptr;
  int it = 0;
  double res = 1.0;
  REQUIRE(bl_forward_solve(p, u, &y, &it, &res) == BL_OK);
  double yv = 0.0;
  REQUIRE(bl_gridfn_values(y, &yv, 1) == BL_OK);
  CHECK(std::abs(yv - 0.125 / 4.25) <= 1e-12);
  CHECK(res <= 1e-11);

  bl_gridfn* eta = nullptr;
  REQUIRE(bl_subderivative_apply(p, y, u, &eta) == BL_OK);
  double ev = 0.0;
  bl_gridfn_values(eta, &ev, 1);
  CHECK(ev == doctest::Approx(0.125 / 4.25));

  double wrong[2] = {1.0, 2.0};
  bl_gridfn* bad = nullptr;
  CHECK(bl_gridfn_from_values(p, wrong, 2, BL_ROLE_SOURCE, &bad) == BL_ERR_DIMENSION_MISMATCH);
  CHECK(bad == nullptr);

  bl_gridfn_destroy(eta);
  bl_gridfn_destroy(y);
  bl_gridfn_destroy(u);
  bl_problem_destroy(p);
}

TEST_CASE("parameter check through the C API") {
  bl_landweber_config cfg;
  bl_landweber_config_default(&cfg);
  bl_parameter_check pc;
  REQUIRE(bl_check_parameters(&cfg, cfg.lbar, &pc) == BL_OK);
  CHECK(std::abs(pc.choice - 2.2 / 1.4) <= 1e-12);
  CHECK(std::abs(pc.choice_aux - 8.1) <= 1e-12);
  CHECK(pc.choice_satisfied == 0);
  CHECK(bl_check_parameters(nullptr, 0.05, &pc) == BL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("noisy inversion, record round trip and table") {
  bl_problem* p = nullptr;
  REQUIRE(bl_problem_create(17, &p) == BL_OK);
  bl_gridfn *y = nullptr, *u = nullptr, *start = nullptr, *data = nullptr;
  REQUIRE(bl_gridfn_builtin(p, BL_FIELD_EXACT_STATE, 5.0, &y) == BL_OK);
  REQUIRE(bl_gridfn_builtin(p, BL_FIELD_EXACT_SOURCE, 5.0, &u) == BL_OK);
  REQUIRE(bl_gridfn_builtin(p, BL_FIELD_START_SOURCE, 5.0, &start) == BL_OK);
  double delta = 0.0;
  REQUIRE(bl_add_noise(p, y, BL_NOISE_RESCALE_TO_TARGET, 1e-2, 4, &data, &delta) == BL_OK);
  CHECK(delta == doctest::Approx(1e-2).epsilon(1e-12));

  bl_landweber_config cfg;
  bl_landweber_config_default(&cfg);
  cfg.delta = delta;
  bl_record* rec = nullptr;
  REQUIRE(bl_landweber_run(p, data, &cfg, start, u, &rec) == BL_OK);
  CHECK(std::string(bl_record_reason(rec)) == "discrepancy");
  CHECK(bl_record_discrepancy_consistent(rec) == 1);
  const size_t len = bl_record_length(rec);
  CHECK(len == static_cast<size_t>(bl_record_stopping_index(rec)) + 1);

  const std::string csv = "capi_record_test.csv", json = "capi_record_test.json";
  REQUIRE(bl_record_write(rec, csv.c_str(), json.c_str()) == BL_OK);
  bl_record* back = nullptr;
  REQUIRE(bl_record_read(csv.c_str(), json.c_str(), &back) == BL_OK);
  std::vector<double> r1(len), r2(len);
  bl_record_residuals(rec, r1.data(), len);
  bl_record_residuals(back, r2.data(), len);
  CHECK(r1 == r2);
  CHECK(bl_record_discrepancy_consistent(back) == 1);
  std::remove(csv.c_str());
  std::remove(json.c_str());

  bl_gridfn* fin = nullptr;
  REQUIRE(bl_record_final_iterate(rec, &fin) == BL_OK);
  double e = 0.0;
  REQUIRE(bl_relative_error(p, fin, u, &e) == BL_OK);
  std::vector<double> errs(len);
  bl_record_rel_errors(rec, errs.data(), len);
  CHECK(e == doctest::Approx(errs.back()));

  const double deltas[] = {1e-2};
  const uint64_t seeds[] = {1, 2};
  bl_table* tab = nullptr;
  REQUIRE(bl_table_run(p, BL_START_SOURCE, deltas, 1, seeds, 2, &cfg, 1, &tab) == BL_OK);
  CHECK(bl_table_rows(tab) == 2);
  bl_table_row row;
  REQUIRE(bl_table_row_at(tab, 1, &row) == BL_OK);
  CHECK(row.seed == 2);
  CHECK(std::string(row.reason) == "discrepancy");
  CHECK(bl_table_row_at(tab, 5, &row) == BL_ERR_INVALID_ARGUMENT);

  bl_table_destroy(tab);
  bl_gridfn_destroy(fin);
  bl_record_destroy(back);
  bl_record_destroy(rec);
  bl_gridfn_destroy(data);
  bl_gridfn_destroy(start);
  bl_gridfn_destroy(u);
  bl_gridfn_destroy(y);
  bl_problem_destroy(p);
}

TEST_CASE("verification handle") {
  bl_verification* v = nullptr;
  CHECK(bl_verify_run("nonsense", 1, &v) == BL_ERR_INVALID_ARGUMENT);
  REQUIRE(bl_verify_run("oracle", 1, &v) == BL_OK);
  CHECK(bl_verification_passed(v) == 1);
  bl_verification_destroy(v);
}
