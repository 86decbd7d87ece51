#include <doctest.h>

#include <ce2ls/dataset.hpp>
#include <ce2ls/graph_io.hpp>

#include <sstream>

using namespace ce2ls;

TEST_CASE("CSV reading infers column kinds") {
    std::istringstream in("a,b,c\n0,1.5,3\n1,2.25,7\n1,-0.5,3\n");
    auto d = Dataset::read_csv(in);
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 3);
    CHECK(d.kind("a") == VarKind::discrete);
    CHECK(d.kind("b") == VarKind::continuous);
    CHECK(d.kind("c") == VarKind::discrete);
    CHECK(d.is_binary("a"));
    CHECK_FALSE(d.is_binary("c"));
    int levels = 0;
    CHECK(d.codes("c", levels) == std::vector<int>{0, 1, 0});
    CHECK(levels == 2);
    CHECK(d.column("b")[2] == doctest::Approx(-0.5));
}

TEST_CASE("columns with many integer levels are continuous") {
    Eigen::VectorXd v(10);
    for (int i = 0; i < 10; ++i) v[i] = i;
    CHECK(infer_kind(v) == VarKind::continuous);
    CHECK(infer_kind(v.head(8)) == VarKind::discrete);
}

TEST_CASE("CSV errors report the line") {
    std::istringstream ragged("a,b\n1,2\n3\n");
    try {
        Dataset::read_csv(ragged);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream bad("a,b\n1,x\n");
    CHECK_THROWS_AS(Dataset::read_csv(bad), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(Dataset::read_csv(empty), ParseError);
    std::istringstream dup("a,a\n1,2\n");
    CHECK_THROWS_AS(Dataset::read_csv(dup), std::invalid_argument);
}

TEST_CASE("CSV round trip, drop and select") {
    std::istringstream in("w,x,y\n0,0.125,1.5\n1,-2.75,3.25\n");
    auto d = Dataset::read_csv(in);
    std::ostringstream out;
    d.write_csv(out);
    CHECK(out.str() == "w,x,y\n0,0.125,1.5\n1,-2.75,3.25\n");

    auto dropped = d.drop({"x"});
    CHECK(dropped.names() == std::vector<std::string>{"w", "y"});
    CHECK(dropped.rows() == 2);
    CHECK(d.drop({}).names() == d.names());
    CHECK_THROWS_AS(d.drop({"q"}), std::invalid_argument);
    auto picked = d.select({"y", "w"});
    CHECK(picked.column("y")[1] == doctest::Approx(3.25));
    CHECK(picked.kind("w") == VarKind::discrete);
}
