#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sgnm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "sgnm_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("census prints every feasible m and the single genus-one K5 row") {
    const auto r = call({"census", "--n", "5", "--g", "1"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.front() == "n,m,g,count");
    CHECK(rows.size() == 1 + 11);
    CHECK(rows.back() == "5,10,1,1");
    CHECK(rows[1] == "5,0,1,1");
}

TEST_CASE("census artifacts verify against themselves and flag a tampered count") {
    const auto prefix = scratch("c4").string();
    REQUIRE(call({"census", "--n", "4", "--g", "0", "--stat", "maxDegree", "--out", prefix}).code == 0);
    const std::string csv = slurp(prefix + ".csv");
    CHECK(csv.rfind("n,m,g,count\n4,0,0,1\n4,1,0,6\n", 0) == 0);
    CHECK(slurp(prefix + ".json").find("\"maxDegree\"") != std::string::npos);

    CHECK(call({"census", "--n", "4", "--g", "0", "--verify-against", prefix + ".csv"}).code == 0);

    std::string bad = csv;
    bad.replace(bad.find("4,1,0,6"), 7, "4,1,0,7");
    const auto tampered = scratch("c4bad.csv");
    std::ofstream(tampered) << bad;
    const auto r = call({"census", "--n", "4", "--g", "0", "--verify-against", tampered.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("(4,1,0) persisted 7, recomputed 6") != std::string::npos);
}

TEST_CASE("census --m accepts ratios and absolute counts") {
    // Two triangulations on six vertices: the octahedron (720/48 labelings) and one with 720/4.
    const auto r = call({"census", "--n", "6", "--g", "0", "--m", "ratio:1.5,12"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out) == std::vector<std::string>{"n,m,g,count", "6,9,0,4995", "6,12,0,195"});
}

TEST_CASE("the connected trend rises with the edge ratio and is byte-reproducible") {
    const std::vector<std::string> args{"trend", "--stat", "connected", "--n", "12", "--g", "0",
                                        "--m-ratio", "1.2,2.0,2.8", "--samples", "400", "--seed", "7"};
    const auto a = call(args);
    REQUIRE(a.code == 0);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 4);
    double previous = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream cells(rows[i]);
        std::string cell;
        for (int k = 0; k < 6; ++k) std::getline(cells, cell, ',');
        const double estimate = std::stod(cell);
        CHECK(estimate >= previous);
        previous = estimate;
    }
    CHECK(call(args).out == a.out);
}

TEST_CASE("exact trend rows say so in the interval column") {
    const auto r = call({"trend", "--stat", "pendantEdges", "--n", "5", "--m", "4", "--exact"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].find(",exact,") != std::string::npos);
    CHECK(rows[1].find(",census,") != std::string::npos);
}

TEST_CASE("genus-one trends beyond n = 10 need --max-n") {
    const auto r = call({"trend", "--stat", "connected", "--n", "11", "--g", "1", "--m", "12"});
    CHECK(r.code == sgnm::cli::kUsage);
    CHECK(r.err.find("\"error\":\"usage\"") != std::string::npos);
}

TEST_CASE("sample writes graph6 lines and a provenance sidecar") {
    const auto prefix = scratch("s").string();
    REQUIRE(call({"sample", "--n", "6", "--m", "9", "--samples", "5", "--seed", "3", "--out", prefix}).code == 0);
    CHECK(lines(slurp(prefix + ".g6")).size() == 5);
    const std::string json = slurp(prefix + ".json");
    CHECK(json.find("\"seed\": 3") != std::string::npos);
    CHECK(json.find("\"method\": \"rejection\"") != std::string::npos);

    const auto mc = call({"sample", "--n", "6", "--m", "9", "--samples", "4", "--method", "mcmc", "--burn-in", "50"});
    CHECK(mc.code == 0);
    CHECK(lines(mc.out).size() == 4);
    CHECK(call({"sample", "--n", "6", "--m", "40"}).code == sgnm::cli::kUsage);
}

TEST_CASE("stats reads graph6 from a file") {
    const auto path = scratch("k4.g6");
    std::ofstream(path) << "C~\n";
    const auto r = call({"stats", "--in", path.string(), "--g", "0"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].rfind("4,6,0,0,0,3,", 0) == 0);
    CHECK(call({"stats", "--in", path.string(), "--json"}).out.find("\"maxDegree\":3") != std::string::npos);
}

TEST_CASE("gamma reports every genus up to the bound") {
    const auto r = call({"gamma", "--n", "6", "--g", "1"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].rfind("1.5,6,9,0,4995,", 0) == 0);
    CHECK(rows[2].rfind("1.5,6,9,1,5005,", 0) == 0);
}

TEST_CASE("verify passes on the small census") {
    const auto r = call({"verify", "--max-n", "5", "--max-g", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"violations\": 0") != std::string::npos);
}

TEST_CASE("usage, capability and budget failures map to exit codes with a JSON report") {
    CHECK(call({}).code == sgnm::cli::kUsage);
    CHECK(call({"census"}).code == sgnm::cli::kUsage);
    CHECK(call({"trend", "--stat", "nope", "--n", "5", "--m", "3"}).code == sgnm::cli::kUsage);
    CHECK(call({"census", "--n", "9"}).err.find("\"error\":\"capability\"") != std::string::npos);
    CHECK(call({"--help"}).code == 0);

    const auto r = call({"census", "--n", "8", "--g", "2", "--m", "28", "--max-n", "8", "--budget", "10"});
    CHECK(r.code == sgnm::cli::kBudget);
    CHECK(r.err.find("\"error\":\"budget\"") != std::string::npos);
    CHECK(r.out == "n,m,g,count\n");  // the partial table is still written

    setenv("SGNM_BUDGET", "10", 1);
    CHECK(call({"census", "--n", "8", "--g", "2", "--m", "28", "--max-n", "8"}).code == sgnm::cli::kBudget);
    setenv("SGNM_BUDGET", "zero", 1);
    CHECK(call({"census", "--n", "3"}).code == sgnm::cli::kUsage);
    unsetenv("SGNM_BUDGET");
}
