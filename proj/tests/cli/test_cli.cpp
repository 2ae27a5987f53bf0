// End-to-end checks of the installed command surface, driving the real
// binary through files and exit codes.
#include <doctest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "dirate/model_io.hpp"
#include "dirate/model_zoo.hpp"
#include "support/test_util.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    std::string command = std::string(DIRATE_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        output += buffer.data();
    }
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string write_copy_model() {
    static testutil::TempFile file("model");
    dirate::save_model(file.path(), dirate::copy_model());
    return file.path();
}

} // namespace

TEST_CASE("simulate writes n+k rows and is byte-deterministic in the seed") {
    std::string model = write_copy_model();
    testutil::TempFile out1("sim"), out2("sim"), out3("sim");

    auto r1 = run("simulate --model " + model + " --n 10 --seed 5 --out " + out1.path());
    REQUIRE(r1.exit_code == 0);
    std::string text = out1.read();
    int rows = 0;
    for (char c : text) rows += c == '\n';
    CHECK(rows == 11);

    run("simulate --model " + model + " --n 10 --seed 5 --out " + out2.path());
    run("simulate --model " + model + " --n 10 --seed 6 --out " + out3.path());
    CHECK(out1.read() == out2.read());
    CHECK(out1.read() != out3.read());
}

TEST_CASE("simulated copy-model data has y equal to the shifted x column") {
    std::string model = write_copy_model();
    testutil::TempFile out("sim");
    run("simulate --model " + model + " --n 50 --seed 3 --out " + out.path());

    std::istringstream lines(out.read());
    std::string line;
    int prev_x = -1;
    while (std::getline(lines, line)) {
        int x = line[0] - '0';
        int y = line[2] - '0';
        if (prev_x >= 0) CHECK(y == prev_x);
        prev_x = x;
    }
}

TEST_CASE("estimate reports the directed information rate of the copy data") {
    std::string model = write_copy_model();
    testutil::TempFile data("sim");
    run("simulate --model " + model + " --n 20000 --seed 9 --out " + data.path());

    auto nats = run("estimate --data " + data.path() + " --k 1 --di");
    REQUIRE(nats.exit_code == 0);
    auto doc = nlohmann::json::parse(nats.output);
    CHECK(std::abs(doc["estimate"].get<double>() - std::log(2.0)) < 0.02);
    CHECK(doc["n"].get<long long>() == 20000);

    auto bits = run("estimate --data " + data.path() + " --k 1 --di --bits");
    auto doc_bits = nlohmann::json::parse(bits.output);
    CHECK(doc_bits["estimate"].get<double>() ==
          doctest::Approx(doc["estimate"].get<double>() / std::log(2.0)).epsilon(1e-12));
    CHECK(doc_bits["units"] == "bits");
}

TEST_CASE("test command exits 3 on rejection and 0 on retention") {
    std::string model = write_copy_model();
    testutil::TempFile data("sim"), report("rep");
    run("simulate --model " + model + " --n 10000 --seed 21 --out " + data.path());

    auto rejected = run("test --data " + data.path() + " --k 1 --alpha 0.05 --di --out " +
                        report.path());
    CHECK(rejected.exit_code == 3);
    auto doc = nlohmann::json::parse(report.read());
    CHECK(doc["decision"] == "reject");
    CHECK(doc["p_value"].get<double>() < 1e-6);
    CHECK(doc["dof"].get<int>() == 6);

    // independent product data: retained for this seed
    testutil::TempFile prod_model("model"), prod_data("sim");
    dirate::save_model(prod_model.path(),
                       dirate::product_model(dirate::iid_uniform_univariate_model(2),
                                             dirate::iid_uniform_univariate_model(2)));
    run("simulate --model " + prod_model.path() + " --n 10000 --seed 24 --out " +
        prod_data.path());
    auto retained = run("test --data " + prod_data.path() + " --k 1 --alpha 0.05 --di");
    CHECK(retained.exit_code == 0);
}

TEST_CASE("test command exits 1 on malformed input naming the line") {
    testutil::TempFile data("bad");
    data.write("0,0\n0,banana\n1,1\n");
    auto result = run("test --data " + data.path() + " --k 1 --di");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("line 2") != std::string::npos);
}

TEST_CASE("variance reports zero for the copy model and positive otherwise") {
    std::string model = write_copy_model();
    auto zero = run("variance --model " + model + " --di");
    REQUIRE(zero.exit_code == 0);
    CHECK(nlohmann::json::parse(zero.output)["sigma_sq"].get<double>() == 0.0);

    testutil::TempFile uni("model");
    dirate::save_model(uni.path(), dirate::UnivariateMarkovModel(
                                       1, dirate::Alphabet{2}, {0.9, 0.1, 0.2, 0.8}, {0.5, 0.5}));
    auto positive = run("variance --model " + uni.path() + " --mi");
    REQUIRE(positive.exit_code == 0);
    CHECK(nlohmann::json::parse(positive.output)["sigma_sq"].get<double>() > 0.0);
}

TEST_CASE("experiment identity-fuzz emits a CSV and a summary") {
    testutil::TempFile out("exp");
    auto result = run("experiment --kind identity-fuzz --trials 40 --seed 11 --out " +
                      out.path());
    REQUIRE(result.exit_code == 0);
    auto doc = nlohmann::json::parse(result.output);
    CHECK(doc["max_rel_dev_di"].get<double>() < 1e-9);
    CHECK(doc["max_rel_dev_mi"].get<double>() < 1e-9);
    CHECK(out.read().find("rel_dev_di") != std::string::npos);
}

TEST_CASE("experiment output is identical across thread counts") {
    testutil::TempFile out1("exp"), out2("exp"), rnd("model");
    dirate::save_model(rnd.path(), dirate::random_positive_joint_model(1, 2, 2, 17));
    std::string base = "experiment --kind clt --model " + rnd.path() +
                       " --trials 30 --n 500 --seed 4 --di --out ";
    auto r1 = run(base + out1.path() + " --threads 1");
    auto r2 = run(base + out2.path() + " --threads 4");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(out1.read() == out2.read());
}

TEST_CASE("simulate throughput handles a million transitions promptly") {
    std::string model = write_copy_model();
    testutil::TempFile out("sim");
    auto start = std::chrono::steady_clock::now();
    auto result = run("simulate --model " + model + " --n 1000000 --seed 1 --out " + out.path());
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    REQUIRE(result.exit_code == 0);
    MESSAGE("simulate n=1e6 took ", elapsed.count(), " s");
    CHECK(elapsed.count() < 5.0); // generous bound; typically ~0.15 s
}
