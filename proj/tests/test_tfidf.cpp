#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "sdd/errors.hpp"
#include "sdd/tfidf.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

using namespace sdd;

namespace {

std::vector<TokenSequence> docs3() {
    return {
        {"red", "blue", "red"},
        {"blue", "green"},
        {"green", "green", "yellow"},
    };
}

}  // namespace

TEST_CASE("vocabulary indexes terms in first-appearance order") {
    const Vocabulary vocab = fit_vocabulary(docs3());
    REQUIRE(vocab.size() == 4);
    CHECK(vocab.index_to_term == std::vector<std::string>{"red", "blue", "green", "yellow"});
    CHECK(vocab.term_to_index.at("red") == 0);
    CHECK(vocab.term_to_index.at("yellow") == 3);
    CHECK(vocab.n_docs == 3);
    CHECK(vocab.doc_freq == std::vector<std::uint32_t>{1, 2, 2, 1});
}

TEST_CASE("min_df drops rare terms but keeps the appearance order of the rest") {
    const Vocabulary vocab = fit_vocabulary(docs3(), 2);
    CHECK(vocab.index_to_term == std::vector<std::string>{"blue", "green"});
    CHECK(vocab.doc_freq == std::vector<std::uint32_t>{2, 2});

    CHECK_RAISES(EmptyVocabulary, fit_vocabulary(docs3(), 4));
    CHECK_RAISES(EmptyCorpus, fit_vocabulary(std::vector<TokenSequence>{}));
}

TEST_CASE("idf follows ln((1+N)/(1+df)) + 1") {
    const Vocabulary vocab = fit_vocabulary(docs3());
    CHECK(vocab.idf(0) == doctest::Approx(std::log(4.0 / 2.0) + 1.0).epsilon(1e-12));
    CHECK(vocab.idf(1) == doctest::Approx(std::log(4.0 / 3.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("transform produces L2-normalized raw-tf-times-idf rows") {
    const Vocabulary vocab = fit_vocabulary(docs3());
    const SparseVector row = tfidf_transform({"red", "red", "blue"}, vocab);
    REQUIRE(row.entries.size() == 2);
    CHECK(row.entries[0].first == 0);
    CHECK(row.entries[1].first == 1);
    const double red = 2.0 * vocab.idf(0);
    const double blue = 1.0 * vocab.idf(1);
    const double norm = std::sqrt(red * red + blue * blue);
    CHECK(row.entries[0].second == doctest::Approx(red / norm).epsilon(1e-12));
    CHECK(row.entries[1].second == doctest::Approx(blue / norm).epsilon(1e-12));
    CHECK(row.l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("out-of-vocabulary tokens are ignored; all-OOV gives the empty vector") {
    const Vocabulary vocab = fit_vocabulary(docs3());
    CHECK(tfidf_transform({"red", "martian"}, vocab).entries.size() == 1);
    CHECK(tfidf_transform({"martian", "venusian"}, vocab).empty());
    CHECK(tfidf_transform({}, vocab).empty());
}

TEST_CASE("sparse pipeline equals the dense oracle on random corpora") {
    std::mt19937_64 rng(20240817);
    for (int iter = 0; iter < 60; ++iter) {
        const auto docs = oracle::random_docs(rng, 20, 30, 12);
        const std::uint32_t min_df = 1 + static_cast<std::uint32_t>(rng() % 2);

        const oracle::DenseTfidf expected = oracle::dense_tfidf(docs, min_df);
        bool any_term = !expected.terms.empty();
        if (!any_term) {
            CHECK_RAISES(EmptyVocabulary, fit_vocabulary(docs, min_df));
            continue;
        }
        const auto [vocab, matrix] = tfidf_fit_transform(docs, min_df);
        REQUIRE(vocab.index_to_term == expected.terms);
        REQUIRE(matrix.n_rows() == docs.size());
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const auto dense = oracle::to_dense(matrix.rows[d], vocab.size());
            for (std::size_t t = 0; t < vocab.size(); ++t) {
                CHECK(std::fabs(dense[t] - expected.rows[d][t]) < 1e-12);
            }
        }
    }
}

TEST_CASE("sparse vector dot and norm agree with dense arithmetic") {
    SparseVector a{{{0, 1.0}, {2, 2.0}, {5, -1.0}}};
    SparseVector b{{{1, 4.0}, {2, 3.0}, {5, 2.0}}};
    CHECK(a.dot(b) == doctest::Approx(2.0 * 3.0 + (-1.0) * 2.0));
    CHECK(b.dot(a) == a.dot(b));
    CHECK(a.l2_norm() == doctest::Approx(std::sqrt(1.0 + 4.0 + 1.0)));
    CHECK(SparseVector{}.l2_norm() == 0.0);
    CHECK(SparseVector{}.dot(a) == 0.0);
}

TEST_CASE("transform_matrix carries the vocabulary width") {
    const Vocabulary vocab = fit_vocabulary(docs3());
    const FeatureMatrix m = tfidf_transform_matrix(docs3(), vocab);
    CHECK(m.n_cols == vocab.size());
    CHECK(m.n_rows() == 3);
}

TEST_CASE("vocabulary TSV round trip") {
    const Vocabulary vocab = fit_vocabulary(docs3(), 1);
    std::ostringstream out;
    vocab.write_tsv(out);

    std::istringstream in(out.str());
    const Vocabulary back = Vocabulary::read_tsv(in);
    CHECK(back.index_to_term == vocab.index_to_term);
    CHECK(back.doc_freq == vocab.doc_freq);
    CHECK(back.n_docs == vocab.n_docs);
    CHECK(back.term_to_index.at("green") == 2);
}

TEST_CASE("vocabulary TSV rejects malformed input") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return Vocabulary::read_tsv(in);
    };
    CHECK_RAISES(MalformedRecord, read(""));
    CHECK_RAISES(MalformedRecord, read("no header\n"));
    CHECK_RAISES(MalformedRecord, read("#n_docs=3\na\t1\n"));             // missing field
    CHECK_RAISES(MalformedRecord, read("#n_docs=3\na\t1\t1\n"));          // index 1 first
    CHECK_RAISES(MalformedRecord, read("#n_docs=3\na\t0\t1\na\t1\t2\n")); // duplicate term
    CHECK_RAISES(MalformedRecord, read("#n_docs=3\na\t0\t9\n"));          // df > n_docs
    CHECK_RAISES(EmptyVocabulary, read("#n_docs=3\n"));
}
