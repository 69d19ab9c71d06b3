// Exercises the shared library strictly through the C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfd/capi.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

TEST_CASE("ml evaluation and error reporting") {
    double v = 0.0;
    REQUIRE(tfd_ml_eval(1.0, 1.0, 1.0, &v) == TFD_OK);
    CHECK(v == doctest::Approx(std::exp(1.0)).epsilon(1e-13));

    CHECK(tfd_ml_eval(5.0, 1.0, 1.0, &v) == TFD_ERR_BAD_INPUT);
    CHECK(std::strlen(tfd_last_error()) > 0);
    CHECK(tfd_ml_eval(1.0, 1.0, 1.0, nullptr) == TFD_ERR_BAD_INPUT);
}

TEST_CASE("problem lifecycle: parse, hash, override, solve, emit") {
    tfd_problem* p = nullptr;
    REQUIRE(tfd_problem_preset("heat", &p) == TFD_OK);
    const uint64_t h0 = tfd_problem_hash(p);
    REQUIRE(tfd_problem_set_steps(p, 128) == TFD_OK);
    CHECK(tfd_problem_hash(p) != h0);
    REQUIRE(tfd_problem_set_method(p, "l1") == TFD_OK);
    CHECK(tfd_problem_set_method(p, "newton") == TFD_ERR_BAD_INPUT);

    tfd_solution* s = nullptr;
    REQUIRE(tfd_solve(p, &s) == TFD_OK);
    CHECK(tfd_solution_residual(s) >= 0.0);
    CHECK(tfd_solution_cross_discrepancy(s) < 0.0); // single solver ran

    REQUIRE(tfd_solution_write_csv(s, "capi_solution.csv") == TFD_OK);
    REQUIRE(tfd_solution_write_trace(s, "capi_trace.txt") == TFD_OK);
    std::ifstream csv("capi_solution.csv");
    CHECK(csv.good());
    tfd_solution_free(s);
    tfd_problem_free(p);
    std::remove("capi_solution.csv");
    std::remove("capi_trace.txt");
}

TEST_CASE("config strings parse through the boundary") {
    tfd_problem* p = nullptr;
    const char* text =
        "[time]\nhorizon = 1\nsteps = 64\nalpha = 0.5\n"
        "[initial]\npreset = sine:1\n"
        "[solver]\nmodes = 4\nmethod = l1\n";
    REQUIRE(tfd_problem_parse_string(text, &p) == TFD_OK);
    tfd_problem_free(p);

    CHECK(tfd_problem_parse_string("[nope]\nx = 1\n", &p) == TFD_ERR_BAD_INPUT);
    CHECK(tfd_problem_parse_file("/definitely/not/here.cfg", &p) == TFD_ERR_BAD_INPUT);
}

TEST_CASE("verification entry points") {
    const int Ns[2] = {128, 256};
    int pass = 0;
    REQUIRE(tfd_verify_identities(0.5, "linear", Ns, 2, nullptr, &pass) == TFD_OK);
    CHECK(pass == 1);

    int continuous = -1;
    REQUIRE(tfd_counterexample(0.3, -0.4, "capi_ce.txt", &continuous) == TFD_OK);
    CHECK(continuous == 0);
    std::ifstream ce("capi_ce.txt");
    CHECK(ce.good());
    std::remove("capi_ce.txt");
    CHECK(tfd_counterexample(0.3, -0.6, nullptr, &continuous) == TFD_ERR_BAD_INPUT);

    tfd_problem* p = nullptr;
    REQUIRE(tfd_problem_preset("heat", &p) == TFD_OK);
    REQUIRE(tfd_problem_set_steps(p, 128) == TFD_OK);
    int holds = 0;
    double lhs = 0.0, rhs = 0.0;
    REQUIRE(tfd_energy_check(p, nullptr, &holds, &lhs, &rhs) == TFD_OK);
    CHECK(holds == 1);
    CHECK(lhs < rhs);

    const int studyNs[2] = {64, 128};
    double order_final = 0.0, order_l2 = 0.0;
    REQUIRE(tfd_problem_set_method(p, "l1") == TFD_OK);
    REQUIRE(tfd_convergence_study(p, "1 + t^2", 1, studyNs, 2, nullptr, &order_final, &order_l2) ==
            TFD_OK);
    CHECK(order_l2 > 0.5);
    tfd_problem_free(p);
}
