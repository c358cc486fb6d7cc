#include <doctest.h>

#include <sstream>

#include "pwd/csv.hpp"
#include "pwd/data.hpp"

TEST_CASE("dataset validates its invariants") {
    Eigen::VectorXd x(3), y(3);
    x << 1, 2, 3;
    y << 2, 4, 6;
    const pwd::MCDataset d(x, y);
    CHECK(d.n() == 3);
    CHECK(d.index() == std::vector<int>{1, 2, 3});

    Eigen::VectorXd bad = y;
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pwd::MCDataset(x, bad), pwd::DataError);

    Eigen::VectorXd two(2);
    two << 1, 2;
    CHECK_THROWS_AS(pwd::MCDataset(two, two), pwd::DataError);
    CHECK_THROWS_AS(pwd::MCDataset({1, 1, 2}, x, y), pwd::DataError);
}

TEST_CASE("subsetting keeps the original ids") {
    Eigen::VectorXd x(4), y(4);
    x << 1, 2, 3, 4;
    y << 1, 2, 3, 4;
    const pwd::MCDataset d({10, 20, 30, 40}, x, y);
    const pwd::MCDataset loo = d.without_position(1);
    CHECK(loo.n() == 3);
    CHECK(loo.index() == std::vector<int>{10, 30, 40});
    CHECK(loo.x()[1] == 3.0);
    CHECK(d.position_of(30) == 2);
    CHECK_THROWS_AS(d.position_of(99), pwd::DataError);
}

TEST_CASE("correlations match hand-computed values") {
    Eigen::VectorXd x(5), y(5);
    x << 1, 2, 3, 4, 5;
    y << 2, 4, 6, 8, 10;
    CHECK(pwd::pearson(x, y) == doctest::Approx(1.0));
    CHECK(pwd::spearman(x, y) == doctest::Approx(1.0));
    y << 10, 8, 6, 4, 2;
    CHECK(pwd::spearman(x, y) == doctest::Approx(-1.0));
    // ties get average ranks
    Eigen::VectorXd yt(5);
    yt << 1, 1, 2, 2, 3;
    CHECK(pwd::spearman(x, yt) == doctest::Approx(0.9486832980505138).epsilon(1e-12));
}

TEST_CASE("csv reader parses the documented format") {
    std::istringstream in("x,y\n1,2\n2,4.5\n3,6\n");
    const pwd::MCDataset d = pwd::read_csv(in);
    CHECK(d.n() == 3);
    CHECK(d.y()[1] == 4.5);
    CHECK(d.index() == std::vector<int>{1, 2, 3});
}

TEST_CASE("csv reader honours an id column in any position") {
    std::istringstream in("id,y,x\n7,2,1\n9,4,2\n11,6,3\n");
    const pwd::MCDataset d = pwd::read_csv(in);
    CHECK(d.index() == std::vector<int>{7, 9, 11});
    CHECK(d.x()[2] == 3.0);
    CHECK(d.y()[0] == 2.0);
}

TEST_CASE("csv reader reports the offending line") {
    std::istringstream bad_value("x,y\n1,2\n2,oops\n3,6\n");
    CHECK_THROWS_WITH_AS(pwd::read_csv(bad_value),
                         doctest::Contains("line 3"), pwd::DataError);

    std::istringstream short_row("x,y\n1,2\n2\n");
    CHECK_THROWS_WITH_AS(pwd::read_csv(short_row), doctest::Contains("line 3"), pwd::DataError);

    std::istringstream no_header("a,b\n1,2\n");
    CHECK_THROWS_AS(pwd::read_csv(no_header), pwd::DataError);

    std::istringstream empty("");
    CHECK_THROWS_AS(pwd::read_csv(empty), pwd::DataError);
}
