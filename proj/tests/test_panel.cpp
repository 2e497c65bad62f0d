#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"
#include "mss/errors.hpp"
#include "mss/panel.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using mss::DataError;
using mss::ReturnPanel;

namespace {

ReturnPanel parse(const std::string& csv, mss::CsvOptions options = {}) {
    std::istringstream in(csv);
    return mss::load_panel(in, options);
}

const char* kSmallCsv =
    "date,A,B,C\n"
    "2001-01,0.01,0.02,-0.005\n"
    "2001-02,0.00,0.01,0.003\n"
    "2001-03,-0.02,0.005,0.001\n"
    "2001-04,0.013,-0.007,0.002\n"
    "2001-05,0.004,0.001,-0.001\n"
    "2001-06,-0.008,0.012,0.004\n";

}  // namespace

TEST_CASE("load_panel parses a complete CSV in file order") {
    const auto panel = parse(kSmallCsv);
    CHECK(panel.T() == 6);
    CHECK(panel.d() == 3);
    CHECK(panel.asset_labels() == std::vector<std::string>{"A", "B", "C"});
    CHECK(panel.period_labels().front() == "2001-01");
    CHECK(panel.values()(0, 0) == doctest::Approx(0.01));
    CHECK(panel.values()(5, 2) == doctest::Approx(0.004));
}

TEST_CASE("load_panel honors the units scale") {
    mss::CsvOptions options;
    options.scale = 0.01;
    const auto panel = parse(kSmallCsv, options);
    CHECK(panel.values()(0, 1) == doctest::Approx(0.0002));
}

TEST_CASE("drop_incomplete_rows removes the bad row; strict mode errors") {
    const std::string csv =
        "date,A,B,C\n"
        "2001-01,0.01,0.02,-0.005\n"
        "2001-02,0.00,,0.003\n"
        "2001-03,-0.02,0.005,0.001\n"
        "2001-04,0.013,-0.007,0.002\n"
        "2001-05,0.004,0.001,-0.001\n"
        "2001-06,-0.008,0.012,0.004\n"
        "2001-07,0.002,0.003,0.001\n";

    mss::CsvOptions drop;
    drop.drop_incomplete_rows = true;
    const auto panel = parse(csv, drop);
    CHECK(panel.T() == 6);
    CHECK(panel.period_labels()[1] == "2001-03");

    CHECK_THROWS_AS(parse(csv), DataError);
}

TEST_CASE("load_panel rejects malformed inputs") {
    SUBCASE("duplicate asset labels") {
        CHECK_THROWS_WITH_AS(parse("date,A,A\n2001-01,1,2\n"), doctest::Contains("duplicate"),
                             DataError);
    }
    SUBCASE("fewer than two asset columns") {
        CHECK_THROWS_AS(parse("date,A\n2001-01,1\n"), DataError);
    }
    SUBCASE("missing date column") {
        CHECK_THROWS_AS(parse("day,A,B\n2001-01,1,2\n"), DataError);
    }
    SUBCASE("too few rows after filtering") {
        // T = 4 with d = 3 violates T > d + 1
        CHECK_THROWS_AS(parse("date,A,B,C\n"
                              "2001-01,0.01,0.02,-0.005\n"
                              "2001-02,0.00,0.01,0.003\n"
                              "2001-03,-0.02,0.005,0.001\n"
                              "2001-04,0.013,-0.007,0.002\n"),
                        DataError);
    }
    SUBCASE("periods out of order") {
        CHECK_THROWS_AS(parse("date,A,B\n"
                              "2001-02,0,0.1\n"
                              "2001-01,0.1,0\n"
                              "2001-03,0.2,0.1\n"
                              "2001-04,0.1,0.3\n"
                              "2001-05,0,0.2\n"),
                        DataError);
    }
    SUBCASE("non-finite value") {
        CHECK_THROWS_AS(parse("date,A,B\n"
                              "2001-01,0,nan\n"
                              "2001-02,0.1,0\n"
                              "2001-03,0.2,0.1\n"
                              "2001-04,0.1,0.3\n"
                              "2001-05,0,0.2\n"),
                        DataError);
    }
}

TEST_CASE("save_panel then load_panel is the identity") {
    const auto panel = helpers::random_panel(40, 4, 991);
    std::ostringstream out;
    mss::save_panel(panel, out);
    std::istringstream in(out.str());
    const auto reloaded = mss::load_panel(in);

    CHECK(reloaded.asset_labels() == panel.asset_labels());
    CHECK(reloaded.period_labels() == panel.period_labels());
    CHECK((reloaded.values() - panel.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("align_common_sample intersects periods and concatenates columns") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto fill = [&](int T) {
        Eigen::MatrixXd values(T, 2);
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < 2; ++j) values(t, j) = normal(rng);
        return values;
    };

    const ReturnPanel a(fill(10), {"A1", "A2"}, helpers::period_labels(10, 1));
    const ReturnPanel b(fill(11), {"B1", "B2"}, helpers::period_labels(11, 5));

    const auto joined = mss::align_common_sample({a, b});
    CHECK(joined.T() == 6);  // periods 5..10
    CHECK(joined.d() == 4);
    CHECK(joined.period_labels().front() == "p00005");
    CHECK(joined.period_labels().back() == "p00010");
    CHECK(joined.asset_labels() == std::vector<std::string>{"A1", "A2", "B1", "B2"});
    // values line up with the source rows
    CHECK(joined.values()(0, 0) == a.values()(4, 0));
    CHECK(joined.values()(0, 2) == b.values()(0, 0));

    SUBCASE("identity on a single panel") {
        const auto same = mss::align_common_sample({a});
        CHECK(same.period_labels() == a.period_labels());
        CHECK((same.values() - a.values()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("disjoint periods error") {
        const ReturnPanel c(fill(10), {"C1", "C2"}, helpers::period_labels(10, 100));
        CHECK_THROWS_AS(mss::align_common_sample({a, c}), DataError);
    }
    SUBCASE("duplicate labels across panels error") {
        const ReturnPanel c(fill(10), {"A1", "C2"}, helpers::period_labels(10, 1));
        CHECK_THROWS_AS(mss::align_common_sample({a, c}), DataError);
    }
    SUBCASE("three-way join lands on the intersection of all periods") {
        const ReturnPanel x(fill(20), {"X1", "X2"}, helpers::period_labels(20, 1));
        const ReturnPanel y(fill(20), {"Y1", "Y2"}, helpers::period_labels(20, 5));
        const ReturnPanel z(fill(16), {"Z1", "Z2"}, helpers::period_labels(16, 3));
        const auto all = mss::align_common_sample({x, y, z});
        const auto nested = mss::align_common_sample({mss::align_common_sample({x, y}), z});
        CHECK(all.period_labels() == nested.period_labels());
        CHECK(all.period_labels().front() == "p00005");
        CHECK(all.period_labels().back() == "p00018");
    }
}

TEST_CASE("validate_panel matches a hand-rolled two-pass covariance") {
    const auto panel = helpers::random_panel(60, 2, 1234);
    const auto diag = mss::validate_panel(panel);

    const int T = panel.T();
    for (int a = 0; a < 2; ++a) {
        double mean = 0.0;
        for (int t = 0; t < T; ++t) mean += panel.values()(t, a);
        mean /= T;
        CHECK(std::abs(diag.sample_mean(a) - mean) < 1e-12);
        for (int b = 0; b < 2; ++b) {
            double mean_b = 0.0;
            for (int t = 0; t < T; ++t) mean_b += panel.values()(t, b);
            mean_b /= T;
            double cov = 0.0;
            for (int t = 0; t < T; ++t)
                cov += (panel.values()(t, a) - mean) * (panel.values()(t, b) - mean_b);
            cov /= T;  // divisor-T convention
            CHECK(std::abs(diag.sample_cov(a, b) - cov) < 1e-12);
        }
    }
}

TEST_CASE("validate_panel flags exact collinearity and constant columns") {
    SUBCASE("duplicated column") {
        auto base = helpers::random_panel(30, 2, 77);
        Eigen::MatrixXd values(30, 3);
        values.leftCols(2) = base.values();
        values.col(2) = base.values().col(0);
        const ReturnPanel panel(values, helpers::asset_labels(3), helpers::period_labels(30));
        const auto diag = mss::validate_panel(panel);
        CHECK(std::abs(diag.min_cov_eigenvalue) < 1e-12 * diag.sample_cov.norm());
        CHECK_THROWS_AS(mss::require_estimable(panel), mss::NumericalError);
    }
    SUBCASE("constant column") {
        auto base = helpers::random_panel(30, 2, 78);
        Eigen::MatrixXd values(30, 3);
        values.leftCols(2) = base.values();
        values.col(2).setConstant(0.25);
        const ReturnPanel panel(values, helpers::asset_labels(3), helpers::period_labels(30));
        const auto diag = mss::validate_panel(panel);
        CHECK(std::abs(diag.min_cov_eigenvalue) < 1e-12);
    }
}

TEST_CASE("sample covariance is positive semidefinite on random panels") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto panel = helpers::random_panel(25, 5, seed);
        const auto diag = mss::validate_panel(panel);
        CHECK(diag.min_cov_eigenvalue >= -1e-10);
    }
}
