// Copyright 2026 The QSANN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qsann/errors.hpp"
#include "qsann/data.hpp"

using namespace qsann;

namespace {

std::vector<RawSample> parse(const std::string &text) {
    std::istringstream in(text);
    return parse_tsv(in);
}

std::vector<RawSample> numbered(std::size_t count) {
    std::vector<RawSample> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({"word" + std::to_string(i) + " shared", static_cast<int>(i % 2)});
    }
    return out;
}

std::set<std::string> texts(const std::vector<LabeledSequence> &split) {
    std::set<std::string> out;
    for (const auto &s : split) {
        out.insert(s.text);
    }
    return out;
}

} // namespace

TEST(ParseTsv, Examples) {
    const auto rows = parse("Great food.\t1\nNot good\t0\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (RawSample{"Great food.", 1}));
    EXPECT_EQ(rows[1], (RawSample{"Not good", 0}));
}

TEST(ParseTsv, ToleratesCarriageReturnsAndBlankLines) {
    const auto rows = parse("a b\t0\r\n\n   \nc\td\t1\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].text, "a b");
    // Only the last tab separates the label.
    EXPECT_EQ(rows[1], (RawSample{"c\td", 1}));
}

TEST(ParseTsv, ErrorsCarryLineNumbers) {
    try {
        (void)parse("fine\t1\nno tab here\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
    try {
        (void)parse("fine\t1\n\nbad label\t2\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW((void)parse(""), ParseError);
    EXPECT_THROW((void)parse("\n\n"), ParseError);
}

TEST(LoadTsv, ThousandLineFile) {
    const auto path = std::filesystem::temp_directory_path() / "qsann_load_tsv_test.tsv";
    {
        std::ofstream out(path);
        for (int i = 0; i < 1000; ++i) {
            out << "sentence number " << i << ".\t" << i % 2 << "\n";
        }
    }
    EXPECT_EQ(load_tsv(path).size(), 1000u);
    std::filesystem::remove(path);
    EXPECT_THROW((void)load_tsv(path), ConfigError);
}

TEST(Tokenize, Examples) {
    EXPECT_EQ(tokenize("Great food."), (std::vector<std::string>{"great", "food"}));
    EXPECT_TRUE(tokenize("  ").empty());
    EXPECT_EQ(tokenize("Wow... Loved it!"), (std::vector<std::string>{"wow", "loved", "it"}));
    EXPECT_EQ(tokenize("don't (stop) -- 10/10"),
              (std::vector<std::string>{"don't", "stop", "10/10"}));
}

TEST(Vocabulary, OovAndRoundTrip) {
    Vocabulary v;
    EXPECT_EQ(v.size(), 1u);
    EXPECT_EQ(v.token(kOovId), kOovToken);
    const auto a = v.add("alpha");
    EXPECT_EQ(v.add("alpha"), a);
    v.add("beta");
    EXPECT_EQ(v.id("gamma"), kOovId);
    const std::vector<std::string> words{"beta", "alpha", "beta"};
    EXPECT_EQ(v.decode(v.encode(words)), words);
    EXPECT_THROW((void)v.token(99), IndexError);

    const auto copy = Vocabulary::from_tokens({v.tokens().begin(), v.tokens().end()});
    EXPECT_EQ(copy.hash(), v.hash());
    EXPECT_EQ(copy.id("beta"), v.id("beta"));
    EXPECT_EQ(v.hash().size(), 16u);
    EXPECT_THROW((void)Vocabulary::from_tokens({"x"}), ParseError);
    EXPECT_THROW((void)Vocabulary::from_tokens({std::string(kOovToken), "a", "a"}), ParseError);
}

TEST(LabeledSequence, Invariants) {
    EXPECT_THROW((void)LabeledSequence::make({}, {}, 0), EmptySequenceError);
    EXPECT_THROW((void)LabeledSequence::make({1}, {"a"}, 2), ConfigError);
    EXPECT_NO_THROW((void)LabeledSequence::make({1}, {"a"}, 1));
}

TEST(EmbeddingTable, Shape) {
    EmbeddingTable t(5, 12);
    EXPECT_EQ(t.rows(), 5u);
    EXPECT_EQ(t.dim(), 12u);
    EXPECT_EQ(t.data().size(), 60u);
    EXPECT_EQ(t.row(4).size(), 12u);
    EXPECT_THROW((void)t.row(5), IndexError);
}

TEST(BuildSplits, EightyTwenty) {
    const auto samples = numbered(1000);
    for (std::uint64_t seed : {0u, 1u, 77u}) {
        const std::vector<double> ratios{0.8, 0.2};
        const auto ds = build_splits(samples, ratios, seed);
        EXPECT_EQ(ds.train.size(), 800u);
        EXPECT_EQ(ds.test.size(), 200u);
        EXPECT_TRUE(ds.dev.empty());
    }
}

TEST(BuildSplits, DevSplitSizes) {
    const std::vector<double> ratios{70.0 / 130, 30.0 / 130, 30.0 / 130};
    const auto ds = build_splits(numbered(130), ratios, 5);
    EXPECT_EQ(ds.train.size(), 70u);
    EXPECT_EQ(ds.dev.size(), 30u);
    EXPECT_EQ(ds.test.size(), 30u);
}

TEST(BuildSplits, DeterministicAndDisjoint) {
    const auto samples = numbered(200);
    const std::vector<double> ratios{0.6, 0.2, 0.2};
    const auto a = build_splits(samples, ratios, 9);
    const auto b = build_splits(samples, ratios, 9);
    EXPECT_EQ(texts(a.train), texts(b.train));
    EXPECT_EQ(texts(a.test), texts(b.test));
    EXPECT_EQ(a.vocabulary.hash(), b.vocabulary.hash());
    for (std::size_t i = 0; i < a.train.size(); ++i) {
        EXPECT_EQ(a.train[i].text, b.train[i].text);
    }

    const auto tr = texts(a.train), dv = texts(a.dev), te = texts(a.test);
    EXPECT_EQ(tr.size() + dv.size() + te.size(), 200u);
    for (const auto &t : te) {
        EXPECT_FALSE(tr.contains(t));
        EXPECT_FALSE(dv.contains(t));
    }
    for (const auto &t : dv) {
        EXPECT_FALSE(tr.contains(t));
    }

    const auto c = build_splits(samples, ratios, 10);
    EXPECT_NE(texts(a.train), texts(c.train));
}

TEST(BuildSplits, TestOnlyWordsMapToOov) {
    const auto ds = build_splits(numbered(50), std::vector<double>{0.8, 0.2}, 3);
    for (const auto &s : ds.test) {
        // "wordN" never occurs in training; "shared" always does.
        EXPECT_EQ(s.tokens[0], kOovId);
        EXPECT_NE(s.tokens[1], kOovId);
    }
    for (const auto &s : ds.train) {
        EXPECT_EQ(ds.vocabulary.decode(s.tokens), s.words);
        for (auto id : s.tokens) {
            EXPECT_LT(id, ds.vocabulary.size());
        }
    }
}

TEST(BuildSplits, Errors) {
    const auto samples = numbered(10);
    EXPECT_THROW((void)build_splits(samples, std::vector<double>{0.5, 0.4}, 0), ConfigError);
    EXPECT_THROW((void)build_splits(samples, std::vector<double>{1.0}, 0), ConfigError);
    EXPECT_THROW((void)build_splits(samples, std::vector<double>{1.2, -0.2}, 0), ConfigError);
    EXPECT_THROW((void)build_splits(numbered(2), std::vector<double>{0.8, 0.1, 0.1}, 0),
                 ConfigError);
}

TEST(BuildSplits, DropsSamplesWithoutTokens) {
    auto samples = numbered(20);
    samples.push_back({"... !!", 1});
    const auto ds = build_splits(samples, std::vector<double>{0.5, 0.5}, 0);
    EXPECT_EQ(ds.dropped_empty, 1u);
    EXPECT_EQ(ds.train.size() + ds.test.size(), 20u);
}

TEST(EncodeSamples, UsesExistingVocabulary) {
    Vocabulary v;
    v.add("good");
    const auto out = encode_samples(std::vector<RawSample>{{"Good day", 1}, {"?", 0}}, v);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].tokens, (std::vector<TokenId>{1, kOovId}));
}

TEST(SeparableCorpus, BalancedAndDisjointClasses) {
    const auto corpus = make_separable_corpus(40, 1);
    ASSERT_EQ(corpus.size(), 40u);
    std::set<std::string> zero, one;
    int positives = 0;
    for (const auto &s : corpus) {
        positives += s.label;
        const auto words = tokenize(s.text);
        EXPECT_GE(words.size(), 3u);
        EXPECT_LE(words.size(), 4u);
        (s.label == 0 ? zero : one).insert(words.begin(), words.end());
    }
    EXPECT_EQ(positives, 20);
    for (const auto &w : zero) {
        EXPECT_FALSE(one.contains(w));
    }
    EXPECT_EQ(make_separable_corpus(40, 1), corpus);
}
