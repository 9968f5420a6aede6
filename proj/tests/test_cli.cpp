// End-to-end tests that drive the installed `sdd` binary as a subprocess.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "soranidd.h"
#include "support/util.hpp"

using nlohmann::json;
using testutil::TempDir;

#ifndef SDD_CLI_PATH
#error "SDD_CLI_PATH must name the sdd executable"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    static int counter = 0;
    const auto out_path = dir.file("stdout." + std::to_string(counter));
    const auto err_path = dir.file("stderr." + std::to_string(counter));
    ++counter;

    const std::string cmd = std::string("'") + SDD_CLI_PATH + "' " + args + " > '" +
                            out_path.string() + "' 2> '" + err_path.string() + "'";
    const int rc = std::system(cmd.c_str());

    RunResult result;
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = testutil::read_file(out_path);
    result.err = testutil::read_file(err_path);
    return result;
}

// synth settings small enough for instant runs
const char* kQuick =
    "--set synth.counts=20,20,6 --set synth.vocab_size=150 "
    "--set synth.markers_per_class=10 --set rf.n_trees=25";

}  // namespace

TEST_CASE("version and help") {
    TempDir dir("cli");
    const RunResult version = run_cli(dir, "--version");
    CHECK(version.exit_code == 0);
    CHECK(version.out.find('.') != std::string::npos);

    const RunResult help = run_cli(dir, "--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("ingest") != std::string::npos);
    CHECK(help.out.find("run-suite") != std::string::npos);
    CHECK(help.out.find("--paper-compat") != std::string::npos);
}

TEST_CASE("usage errors exit with InvalidArgument and a single stderr line") {
    TempDir dir("cli");

    const RunResult none = run_cli(dir, "");
    CHECK(none.exit_code == SDD_E_INVALID_ARGUMENT);
    CHECK(none.err.find("error: InvalidArgument: ") == 0);

    const RunResult unknown = run_cli(dir, "--frobnicate");
    CHECK(unknown.exit_code == SDD_E_INVALID_ARGUMENT);

    const RunResult badmodel = run_cli(dir, "train --model xgboost --out x");
    CHECK(badmodel.exit_code == SDD_E_INVALID_ARGUMENT);

    const RunResult noinput = run_cli(dir, "ingest");
    CHECK(noinput.exit_code == SDD_E_INVALID_ARGUMENT);
    CHECK(noinput.err.find("requires --input") != std::string::npos);
    CHECK(noinput.out.empty());

    const RunResult badset = run_cli(dir, "ingest --set seedonly");
    CHECK(badset.exit_code == SDD_E_INVALID_ARGUMENT);
    CHECK(badset.err.find("key=value") != std::string::npos);
}

TEST_CASE("library failures map onto status exit codes") {
    TempDir dir("cli");

    const RunResult missing = run_cli(dir, "ingest --input " + dir.file("no.csv").string());
    CHECK(missing.exit_code == SDD_E_FILE_NOT_FOUND);
    CHECK(missing.err.find("error: FileNotFound: ") == 0);
    CHECK(missing.err.find('\n') == missing.err.size() - 1);  // one line

    const RunResult badkey = run_cli(dir, "ingest --input x.csv --set sed=1");
    CHECK(badkey.exit_code == SDD_E_UNKNOWN_KEY);
    CHECK(badkey.err.find("error: UnknownKey: ") == 0);

    const RunResult badval = run_cli(dir, "ingest --input x.csv --set seed=pony");
    CHECK(badval.exit_code == SDD_E_TYPE_MISMATCH);
    CHECK(badval.err.find("error: TypeMismatch: ") == 0);

    testutil::write_file(dir.file("bad.sddm"), "XXXX not a model");
    const RunResult corrupt = run_cli(dir, "evaluate --model-file " +
                                               dir.file("bad.sddm").string() +
                                               " --input x.csv");
    CHECK(corrupt.exit_code == SDD_E_CORRUPT_MODEL);
    CHECK(corrupt.err.find("error: CorruptModel: ") == 0);
}

TEST_CASE("synth then ingest round trip") {
    TempDir dir("cli");
    const auto corpus = dir.file("c.csv");

    const RunResult synth =
        run_cli(dir, std::string("synth --out ") + corpus.string() + " " + kQuick);
    REQUIRE(synth.exit_code == 0);
    CHECK(synth.out.find("wrote 46 synthetic posts") != std::string::npos);
    REQUIRE(std::filesystem::exists(corpus));

    const RunResult ingest = run_cli(dir, "ingest --input " + corpus.string());
    CHECK(ingest.exit_code == 0);
    CHECK(ingest.out.find("posts: 46") != std::string::npos);
    CHECK(ingest.out.find("labels: show=20 not_show=20 suspicious=6") != std::string::npos);

    // unlabeled rows surface as incomplete labels, not an error
    testutil::write_file(dir.file("half.csv"),
                         "id,text,label\na,\xd8\xa7 \xd8\xa8,show\nb,\xd8\xa7 \xd8\xaa,\n");
    const RunResult half = run_cli(dir, "ingest --input " + dir.file("half.csv").string());
    CHECK(half.exit_code == 0);
    CHECK(half.out.find("labels: incomplete") != std::string::npos);
}

TEST_CASE("preprocess prints stats and keeps the cleaned corpus") {
    TempDir dir("cli");
    testutil::write_file(dir.file("noisy.csv"),
                         "id,text,label\n"
                         "a,\xd8\xb3\xd9\x84\xd8\xa7\xd9\x88 http://x.io,show\n"
                         "b,\xd8\xb3\xd9\x84\xd8\xa7\xd9\x88 http://x.io,show\n");
    const auto cleaned = dir.file("clean.csv");
    const RunResult r = run_cli(dir, "preprocess --input " + dir.file("noisy.csv").string() +
                                         " --out " + cleaned.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"urls\"") != std::string::npos);
    CHECK(r.out.find("kept: 1") != std::string::npos);
    CHECK(std::filesystem::exists(cleaned));
}

TEST_CASE("train, predict and evaluate through the binary") {
    TempDir dir("cli");
    const auto corpus = dir.file("c.csv");
    REQUIRE(run_cli(dir, std::string("synth --out ") + corpus.string() + " " + kQuick)
                .exit_code == 0);

    const auto model = dir.file("m.sddm");
    const RunResult train = run_cli(dir, "train --input " + corpus.string() +
                                             " --model mnb --out " + model.string());
    REQUIRE(train.exit_code == 0);
    CHECK(train.out.find("trained mnb on 46 posts") != std::string::npos);
    REQUIRE(std::filesystem::exists(model));

    const auto preds = dir.file("p.csv");
    const RunResult predict =
        run_cli(dir, "predict --model-file " + model.string() + " --input " +
                         corpus.string() + " --out " + preds.string());
    REQUIRE(predict.exit_code == 0);
    const std::string csv = testutil::read_file(preds);
    CHECK(csv.find("id,predicted,score_show,score_not_show,score_suspicious\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 47);

    const RunResult evaluate = run_cli(dir, "evaluate --model-file " + model.string() +
                                                " --input " + corpus.string());
    REQUIRE(evaluate.exit_code == 0);
    const json metrics = json::parse(evaluate.out);
    CHECK(metrics.at("n") == 46);
    CHECK(metrics.at("accuracy").get<double>() >= 0.9);

    const RunResult no_out = run_cli(dir, "train --input " + corpus.string() + " --model mnb");
    CHECK(no_out.exit_code == SDD_E_INVALID_ARGUMENT);
    CHECK(no_out.err.find("requires --out") != std::string::npos);

    const RunResult no_model = run_cli(dir, "predict --input " + corpus.string() +
                                                " --out " + preds.string());
    CHECK(no_model.exit_code == SDD_E_INVALID_ARGUMENT);
    CHECK(no_model.err.find("requires --model-file") != std::string::npos);
}

TEST_CASE("run-experiment emits the report JSON and the report tree") {
    TempDir dir("cli");
    const auto out = dir.file("rep");
    const RunResult r = run_cli(dir, std::string("run-experiment --experiment exp2 ") +
                                         kQuick + " --set cv.run=false --out " +
                                         out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"name\": \"exp2\"") != std::string::npos);
    CHECK(r.out.find("reports: " + out.string()) != std::string::npos);
    CHECK(std::filesystem::exists(out / "exp2" / "mnb" / "metrics.csv"));
    CHECK(std::filesystem::exists(out / "manifest.json"));
}

TEST_CASE("run-suite renders deterministic tables") {
    TempDir dir("cli");
    const std::string base = std::string("run-suite ") + kQuick + " --set cv.run=false";

    const auto out1 = dir.file("suite1");
    const auto out2 = dir.file("suite2");
    const RunResult a = run_cli(dir, base + " --out " + out1.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.find("# Accuracy (holdout)") != std::string::npos);
    CHECK(a.out.find("# Macro F1 (holdout)") != std::string::npos);
    CHECK(a.out.find("reports: " + out1.string()) != std::string::npos);

    const RunResult b = run_cli(dir, base + " --out " + out2.string());
    REQUIRE(b.exit_code == 0);

    // identical seeds, identical artifacts (manifest carries wall-clock times)
    for (const char* name : {"accuracy.md", "f1.md", "plotdata.csv"}) {
        CHECK(testutil::read_file(out1 / name) == testutil::read_file(out2 / name));
    }
    CHECK(testutil::read_file(out1 / "exp3" / "svm" / "metrics.csv") ==
          testutil::read_file(out2 / "exp3" / "svm" / "metrics.csv"));

    // --seed lands in the rendered manifest (the corpus here is separable, so
    // holdout tables can saturate identically under any seed)
    const auto out3 = dir.file("suite3");
    const RunResult c = run_cli(dir, base + " --seed 7 --out " + out3.string());
    REQUIRE(c.exit_code == 0);
    CHECK(testutil::read_file(out1 / "manifest.json").find("\"seed\": \"42\"") !=
          std::string::npos);
    CHECK(testutil::read_file(out3 / "manifest.json").find("\"seed\": \"7\"") !=
          std::string::npos);
}

TEST_CASE("config file and overrides compose") {
    TempDir dir("cli");
    testutil::write_file(dir.file("run.conf"),
                         "synth.counts = 20,20,6\n"
                         "synth.vocab_size = 150\n"
                         "synth.markers_per_class = 10\n"
                         "synth.seed = 1\n");

    const auto direct = dir.file("direct.csv");
    REQUIRE(run_cli(dir, std::string("synth --out ") + direct.string() + " " + kQuick +
                             " --set synth.seed=2")
                .exit_code == 0);

    // --set overrides the config file value
    const auto merged = dir.file("merged.csv");
    REQUIRE(run_cli(dir, "synth --config " + dir.file("run.conf").string() +
                             " --set synth.seed=2 --out " + merged.string())
                .exit_code == 0);
    CHECK(testutil::read_file(direct) == testutil::read_file(merged));

    // without the override the file's seed applies and the corpus changes
    const auto filed = dir.file("filed.csv");
    REQUIRE(run_cli(dir, "synth --config " + dir.file("run.conf").string() + " --out " +
                             filed.string())
                .exit_code == 0);
    CHECK(testutil::read_file(filed) != testutil::read_file(merged));
}
