#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwb/rng.hpp"
#include "qwb/sdpa.hpp"

using namespace qwb;

namespace {

ConicProblem random_problem(Rng& rng) {
    // Small random mix of Zero / NonNeg / PSD cones with sparse data.
    ConicProblem p;
    p.num_vars = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<ConeSpec> cones;
    if (rng.next_u64() % 2) cones.push_back(ConeSpec::zero(1 + rng.next_u64() % 3));
    if (rng.next_u64() % 2) cones.push_back(ConeSpec::nonneg(1 + rng.next_u64() % 3));
    cones.push_back(ConeSpec::psd(2 + rng.next_u64() % 2));
    if (rng.next_u64() % 2) cones.push_back(ConeSpec::psd(2));
    p.cones = cones;

    int rows = 0;
    for (const auto& cn : cones) rows += cn.length();
    p.b.resize(rows);
    for (int i = 0; i < rows; ++i) p.b(i) = rng.normal();
    p.c.resize(p.num_vars);
    for (int i = 0; i < p.num_vars; ++i) p.c(i) = rng.normal();

    std::vector<Eigen::Triplet<double>> trip;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < p.num_vars; ++c)
            if (rng.uniform() < 0.4) trip.emplace_back(r, c, rng.normal());
    p.A.resize(rows, p.num_vars);
    p.A.setFromTriplets(trip.begin(), trip.end());
    return p;
}

} // namespace

TEST_CASE("tiny LP export has one diagonal block") {
    ConicProblem p;
    p.num_vars = 1;
    p.c = Eigen::VectorXd::Constant(1, 1.0);
    p.b = Eigen::VectorXd::Constant(1, -3.0);
    std::vector<Eigen::Triplet<double>> t{{0, 0, -1.0}};
    p.A.resize(1, 1);
    p.A.setFromTriplets(t.begin(), t.end());
    p.cones = {ConeSpec::nonneg(1)};

    const std::string text = export_sdpa(p);
    CHECK(text.find("\n1\n1\n-1\n1\n") != std::string::npos); // m, nBlock, sizes, c
    CHECK(text.find("0 1 1 1 3") != std::string::npos);       // F_0 entry: bound 3
    CHECK(text.find("1 1 1 1 1") != std::string::npos);       // F_1 entry

    const ConicProblem q = parse_sdpa(text);
    CHECK(structurally_equal(p, q));
}

TEST_CASE("export is byte deterministic") {
    Rng rng(3);
    const ConicProblem p = random_problem(rng);
    CHECK(export_sdpa(p) == export_sdpa(p));
}

TEST_CASE("round trip is exact on random problems") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const ConicProblem p = random_problem(rng);
        const ConicProblem q = parse_sdpa(export_sdpa(p));
        CHECK(structurally_equal(p, q));
    }
}

TEST_CASE("equality rows become +/- pairs that foreign parsers accept") {
    ConicProblem p;
    p.num_vars = 2;
    p.c.resize(2);
    p.c << 1, 2;
    p.b.resize(2);
    p.b << 5, 0;
    std::vector<Eigen::Triplet<double>> t{{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, -1.0}};
    p.A.resize(2, 2);
    p.A.setFromTriplets(t.begin(), t.end());
    p.cones = {ConeSpec::zero(1), ConeSpec::nonneg(1)};

    const std::string text = export_sdpa(p);
    // Strip the recovery comment: a foreign reader sees a plain LP block
    // with three rows, the first two being the +/- pair.
    std::string foreign;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.empty() || line[0] != '*') foreign += line + "\n";
    const ConicProblem q = parse_sdpa(foreign);
    REQUIRE(q.cones.size() == 1);
    CHECK(q.cones[0].kind == ConeSpec::Kind::NonNeg);
    CHECK(q.cones[0].dim == 3);
    CHECK(q.b(0) == 5.0);
    CHECK(q.b(1) == -5.0);

    // With the comment intact the Zero cone is restored.
    const ConicProblem r = parse_sdpa(text);
    CHECK(structurally_equal(p, r));
}

TEST_CASE("parser reports malformed input") {
    CHECK_THROWS_AS(parse_sdpa("garbage header\n"), Error);
    CHECK_THROWS_AS(parse_sdpa(""), Error);
    CHECK_THROWS_AS(parse_sdpa("2\n"), Error);          // missing blocks
    CHECK_THROWS_AS(parse_sdpa("2\n1\n0\n1 1\n"), Error); // zero block size
    try {
        parse_sdpa("not a number\n");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("comment characters are skipped") {
    const std::string text =
        "* leading comment\n\" quoted comment\n1\n1\n-2\n0\n0 1 1 1 1\n0 1 2 2 2\n";
    const ConicProblem p = parse_sdpa(text);
    CHECK(p.num_vars == 1);
    REQUIRE(p.cones.size() == 1);
    CHECK(p.cones[0].dim == 2);
    CHECK(p.b(0) == -1.0);
    CHECK(p.b(1) == -2.0);
}

TEST_CASE("17 significant digits survive the round trip") {
    ConicProblem p;
    p.num_vars = 1;
    p.c = Eigen::VectorXd::Constant(1, 1.0 / 3.0);
    p.b = Eigen::VectorXd::Constant(1, M_PI);
    std::vector<Eigen::Triplet<double>> t{{0, 0, -std::sqrt(2.0)}};
    p.A.resize(1, 1);
    p.A.setFromTriplets(t.begin(), t.end());
    p.cones = {ConeSpec::nonneg(1)};
    const ConicProblem q = parse_sdpa(export_sdpa(p));
    CHECK(structurally_equal(p, q)); // bitwise, thanks to %.17g
}
