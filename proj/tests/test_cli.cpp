#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nids/dataset.hpp"
#include "nids/rng.hpp"
#include "test_util.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run(const std::string& args, const std::string& capture_path) {
    const std::string command =
        std::string(NIDS_BINARY) + " " + args + " > " + capture_path + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Synthetic file in the canonical 41-feature layout: anomalies use the
/// icmp/REJ corner of the schema with larger byte counts.
void write_synthetic_kdd(const std::string& path, int rows, std::uint64_t seed) {
    nids::Rng rng(seed);
    const char* services_normal[] = {"http", "smtp", "ftp"};
    const char* services_anomaly[] = {"domain_u", "ecr_i", "private"};
    const char* attacks[] = {"neptune", "smurf", "satan", "imap"};
    std::string out;
    for (int i = 0; i < rows; ++i) {
        const bool anomaly = i % 2 == 1;
        out += std::to_string(rng.next_below(anomaly ? 5000 : 300));  // duration
        out += anomaly ? ",icmp," : (rng.next_below(2) ? ",tcp," : ",udp,");
        out += anomaly ? services_anomaly[rng.next_below(3)] : services_normal[rng.next_below(3)];
        out += anomaly ? (rng.next_below(2) ? ",REJ" : ",S0") : ",SF";
        out += "," + std::to_string(rng.next_below(10000));
        out += "," + std::to_string(rng.next_below(10000));
        for (int f = 0; f < 35; ++f) out += ",0";
        out += ",";
        out += anomaly ? attacks[rng.next_below(4)] : "normal";
        out += "," + std::to_string(rng.next_below(22));  // difficulty column
        out += "\n";
    }
    testutil::write_file(path, out);
}

}  // namespace

TEST_CASE("cli exit codes") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");

    SUBCASE("unknown algorithm is a usage error (1)") {
        write_synthetic_kdd(tmp.path("d.csv"), 40, 1);
        CliResult r = run("train --algo warp --data " + tmp.path("d.csv") + " --model " +
                              tmp.path("m.model"),
                          log);
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("unknown algorithm") != std::string::npos);
    }
    SUBCASE("unknown subcommand is a usage error (1)") {
        CliResult r = run("frobnicate", log);
        CHECK(r.exit_code == 1);
    }
    SUBCASE("folds=1 is a usage error (1)") {
        write_synthetic_kdd(tmp.path("d.csv"), 40, 1);
        CliResult r = run("crossval --algo nb --data " + tmp.path("d.csv") + " --folds 1", log);
        CHECK(r.exit_code == 1);
    }
    SUBCASE("missing data file is a data error (2)") {
        CliResult r = run("crossval --algo nb --data " + tmp.path("absent.csv"), log);
        CHECK(r.exit_code == 2);
    }
    SUBCASE("malformed data is a data error (2) naming the line") {
        testutil::write_file(tmp.path("bad.csv"), "1,2,3\n");
        CliResult r = run("crossval --algo nb --data " + tmp.path("bad.csv"), log);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("line 1") != std::string::npos);
    }
    SUBCASE("schema fingerprint mismatch is a model error (3)") {
        write_synthetic_kdd(tmp.path("d.csv"), 60, 2);
        CHECK(run("train --algo nb --data " + tmp.path("d.csv") + " --model " +
                      tmp.path("m.model"),
                  log)
                  .exit_code == 0);
        // category5 labels change the schema fingerprint
        CliResult r = run("eval --model " + tmp.path("m.model") + " --test " +
                              tmp.path("d.csv") + " --labels category5",
                          log);
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("cli train/eval/roc round trip on synthetic data") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");
    const auto data = tmp.path("train.csv");
    write_synthetic_kdd(data, 200, 5);

    for (const std::string algo : {"nb", "nb-disc", "rtree"}) {
        CAPTURE(algo);
        const auto model = tmp.path(algo + ".model");
        CliResult train = run("train --algo " + algo + " --data " + data + " --model " + model +
                                  " --seed 9",
                              log);
        CHECK(train.exit_code == 0);
        CHECK(train.output.find("Model Building Time") != std::string::npos);

        CliResult eval = run("eval --model " + model + " --test " + data + " --out " +
                                 tmp.path(algo + ".csv"),
                             log);
        CHECK(eval.exit_code == 0);
        CHECK(slurp(tmp.path(algo + ".csv")).find("accuracy") != std::string::npos);

        CliResult roc = run("roc --model " + model + " --test " + data + " --out " +
                                tmp.path(algo + ".roc.csv"),
                            log);
        CHECK(roc.exit_code == 0);
        const std::string curve = slurp(tmp.path(algo + ".roc.csv"));
        CHECK(curve.rfind("fpr,tpr,threshold", 0) == 0);
        CHECK(curve.find("1,1,") != std::string::npos);  // ends at (1,1)
    }
}

TEST_CASE("cli outputs are byte-identical across reruns") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");
    const auto data = tmp.path("train.csv");
    write_synthetic_kdd(data, 120, 11);

    SUBCASE("crossval csv") {
        const std::string cmd = "crossval --algo rforest --trees 10 --data " + data +
                                " --folds 4 --seed 17 --out ";
        CHECK(run(cmd + tmp.path("a.csv"), log).exit_code == 0);
        CHECK(run(cmd + tmp.path("b.csv"), log).exit_code == 0);
        CHECK(slurp(tmp.path("a.csv")) == slurp(tmp.path("b.csv")));
        CHECK(!slurp(tmp.path("a.csv")).empty());
    }
    SUBCASE("model files") {
        const std::string cmd = "train --algo rforest --trees 10 --data " + data +
                                " --seed 21 --model ";
        CHECK(run(cmd + tmp.path("a.model"), log).exit_code == 0);
        CHECK(run(cmd + tmp.path("b.model"), log).exit_code == 0);
        CHECK(slurp(tmp.path("a.model")) == slurp(tmp.path("b.model")));
    }
}

TEST_CASE("cli rank and wrapper emit the documented csv") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");
    const auto data = tmp.path("train.csv");
    write_synthetic_kdd(data, 150, 23);

    CliResult rank = run("rank --data " + data + " --out " + tmp.path("rank.csv"), log);
    CHECK(rank.exit_code == 0);
    const std::string ranking = slurp(tmp.path("rank.csv"));
    CHECK(ranking.rfind("feature_index,feature_name,score", 0) == 0);
    CHECK(ranking.find("service") != std::string::npos);

    CliResult wrapper = run("wrapper --data " + data +
                                " --folds 3 --final-folds 3 --max-features 2 --seed 2 --out " +
                                tmp.path("subset.csv"),
                            log);
    CHECK(wrapper.exit_code == 0);
    CHECK(wrapper.output.find("selected features:") != std::string::npos);
    CHECK(slurp(tmp.path("subset.csv")).rfind("feature_index,feature_name,score", 0) == 0);
}

TEST_CASE("cli config file provides defaults that flags override") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");
    const auto data = tmp.path("train.csv");
    write_synthetic_kdd(data, 80, 31);
    testutil::write_file(tmp.path("nids.ini"),
                         "[crossval]\nalgo=nb\ndata=" + data + "\nfolds=4\nseed=3\n");
    CliResult r = run("--config " + tmp.path("nids.ini") + " crossval --folds 3", log);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("3-fold") != std::string::npos);  // flag beat the config file
}

TEST_CASE("cli arff input works end to end") {
    testutil::TempDir tmp;
    const auto log = tmp.path("out.txt");
    std::string arff =
        "@relation toy\n@attribute x numeric\n@attribute y numeric\n"
        "@attribute class {normal,anomaly}\n@data\n";
    nids::Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        const bool anomaly = i % 2 == 1;
        const double base = anomaly ? 10.0 : 0.0;
        arff += std::to_string(base + double(rng.next_below(40)) / 10.0) + "," +
                std::to_string(base + double(rng.next_below(40)) / 10.0) + "," +
                (anomaly ? "anomaly" : "normal") + "\n";
    }
    testutil::write_file(tmp.path("toy.arff"), arff);
    CliResult r = run("crossval --algo nb --data " + tmp.path("toy.arff") + " --folds 5", log);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Correctly Classified Instances") != std::string::npos);
}

TEST_CASE("fetch-dataset rejects unsupported schemes with a usage error") {
    testutil::TempDir tmp;
    CliResult r = run("fetch-dataset --url ftp://example.org/x --out " + tmp.path("x"),
                      tmp.path("out.txt"));
    CHECK(r.exit_code == 1);
}
