// Copyright 2026 The foundtts Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "foundtts/text/inventory.hpp"
#include "foundtts/text/normalize.hpp"
#include "foundtts/text/utf8.hpp"
#include "foundtts/text/vocabulary.hpp"
#include "test_support.hpp"

using namespace foundtts;
using foundtts::testing::data_dir;
using foundtts::testing::TempDir;

namespace {

std::vector<std::string> sample_corpus() {
  std::ifstream in(data_dir() / "darija_sample.txt");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

// Expected counts produced offline by a character-frequency script.
std::map<char32_t, std::pair<std::string, std::size_t>> oracle_counts() {
  std::ifstream in(data_dir() / "darija_sample.counts.tsv");
  std::map<char32_t, std::pair<std::string, std::size_t>> out;
  for (std::string l; std::getline(in, l);) {
    if (l.empty() || l[0] == '#') continue;
    std::istringstream ss(l);
    std::string cp, kind;
    std::size_t n;
    ss >> cp >> kind >> n;
    out[static_cast<char32_t>(std::stoul(cp.substr(2), nullptr, 16))] = {kind, n};
  }
  return out;
}

}  // namespace

TEST(Utf8, RoundTripsRandomCodePoints) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string s;
    for (int i = 0; i < 20; ++i) {
      char32_t cp;
      do cp = static_cast<char32_t>(gen() % 0x110000);
      while (cp >= 0xD800 && cp <= 0xDFFF);
      s.push_back(cp);
    }
    EXPECT_EQ(utf8::decode(utf8::encode(s)), s);
  }
}

TEST(Utf8, RejectsMalformedInput) {
  for (std::string bad : {std::string("\xC0\xAF"), std::string("\xE2\x82"), std::string("\xED\xA0\x80"),
                          std::string("\xF4\x90\x80\x80"), std::string("\x80"), std::string("ok\xFF")}) {
    EXPECT_THROW(utf8::decode(bad), InputError) << bad.size();
  }
  try {
    utf8::decode("ab\xFF");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(Utf8, CodePointLabel) {
  EXPECT_EQ(utf8::code_point_label(0x06A4), "U+06A4");
  EXPECT_EQ(utf8::code_point_label(0x1F600), "U+1F600");
}

TEST(Vocabulary, DarijaInvariants) {
  const auto v = GraphemeVocabulary::darija();
  EXPECT_NO_THROW(v.validate());
  for (char32_t c : v.extensions) EXPECT_FALSE(v.base.count(c));
  EXPECT_EQ(v.extensions, (std::set<char32_t>{U'ڤ', U'پ', U'ڭ'}));
  for (char32_t c : {0x064E, 0x064F, 0x0650, 0x0652, 0x0651, 0x064B}) EXPECT_EQ(v.kind(c), GraphemeKind::kDiacritic);
  auto bad = v;
  bad.base.insert(U'ڤ');
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Tokenize, ExtensionLetterIsOneToken) {
  const auto v = GraphemeVocabulary::darija();
  EXPECT_EQ(grapheme_tokenize("ڭال", v), (std::vector<std::string>{"ڭ", "ا", "ل"}));
  EXPECT_TRUE(grapheme_tokenize("", v).empty());
  EXPECT_EQ(grapheme_tokenize("ڭال ليا", v).size(), 6u);
}

TEST(Tokenize, DiacriticsAreSeparateTokens) {
  const auto v = GraphemeVocabulary::darija();
  // Letter + shadda + fatha.
  EXPECT_EQ(grapheme_tokenize("دَّ", v), (std::vector<std::string>{"د", "َ", "ّ"}));
}

TEST(Tokenize, LatinIsRejectedByName) {
  const auto v = GraphemeVocabulary::darija();
  try {
    grapheme_tokenize("ڭال x ليا zx", v);
    FAIL();
  } catch (const OovError& e) {
    EXPECT_EQ(e.code_points(), (std::vector<char32_t>{U'x', U'z'}));
    EXPECT_NE(std::string(e.what()).find("U+0078"), std::string::npos);
  }
}

TEST(Tokenize, PunctuationPolicy) {
  auto v = GraphemeVocabulary::darija();
  EXPECT_EQ(grapheme_tokenize("لا، لا!", v).size(), 4u);
  v.punctuation_policy = PunctuationPolicy::kKeep;
  EXPECT_EQ(grapheme_tokenize("لا، لا!", v).size(), 6u);
  v.punctuation_policy = PunctuationPolicy::kReject;
  EXPECT_THROW(grapheme_tokenize("لا، لا!", v), OovError);
}

TEST(Normalize, SpellsNumbersFromLexicon) {
  NormalizationRules r;
  r.number_lexicon = {{"3", "ثلاثة"}};
  EXPECT_EQ(normalize_text("عندي 3 ولاد", r), "عندي ثلاثة ولاد");
  // Arabic-Indic digits map through the same keys.
  EXPECT_EQ(normalize_text("عندي ٣ ولاد", r), "عندي ثلاثة ولاد");
}

TEST(Normalize, LongestMatchWins) {
  NormalizationRules r;
  r.number_lexicon = {{"1", "واحد"}, {"10", "عشرة"}, {"100", "مية"}};
  EXPECT_EQ(normalize_text("100", r), "مية");
  EXPECT_EQ(normalize_text("101", r), "عشرة واحد");
  EXPECT_EQ(normalize_text("1001", r), "مية واحد");
}

TEST(Normalize, UnknownRunIsNamed) {
  NormalizationRules r;
  r.number_lexicon = {{"1", "واحد"}};
  try {
    normalize_text("عندي 27 درهم", r);
    FAIL();
  } catch (const UnknownNumberError& e) {
    EXPECT_EQ(e.run(), "27");
  }
}

TEST(Normalize, IdentityWithoutDigits) {
  NormalizationRules r;
  for (const auto& line : sample_corpus()) EXPECT_EQ(normalize_text(line, r), line);
}

TEST(Normalize, StripAndDiacritics) {
  NormalizationRules r;
  r.strip_set = {U'ـ'};
  r.keep_diacritics = false;
  EXPECT_EQ(normalize_text("كـتـاب دَّار", r), "كتاب دار");
}

TEST(Normalize, IdempotentOnFuzzedCorpus) {
  NormalizationRules r;
  r.number_lexicon = {{"0", "صفر"}, {"1", "واحد"}, {"2", "جوج"}, {"3", "تلاتة"}, {"4", "ربعة"}, {"5", "خمسة"},
                      {"6", "ستة"},  {"7", "سبعة"}, {"8", "تمنية"}, {"9", "تسعود"}, {"10", "عشرة"}};
  r.strip_set = {U'ـ', U'.'};
  const std::u32string alphabet = U"ابتثجحخدذرسشصضطظعغفقكلمنهويڤپڭ َُِّْـ.،0123456789٣٧";
  std::mt19937_64 gen(4);
  for (const bool keep : {true, false}) {
    for (const bool collapse : {true, false}) {
      r.keep_diacritics = keep;
      r.collapse_whitespace = collapse;
      for (int trial = 0; trial < 300; ++trial) {
        std::u32string s;
        const int n = static_cast<int>(gen() % 40);
        for (int i = 0; i < n; ++i) s.push_back(alphabet[gen() % alphabet.size()]);
        const auto once = normalize_text(utf8::encode(s), r);
        EXPECT_EQ(normalize_text(once, r), once);
      }
    }
  }
}

TEST(Normalize, LexiconValidation) {
  NormalizationRules r;
  r.number_lexicon = {{"1a", "x"}};
  EXPECT_THROW(r.validate(), ConfigError);
  r.number_lexicon = {{"1", "واحد 1"}};
  EXPECT_THROW(r.validate(), ConfigError);
}

TEST(Normalize, ReadsLexiconFile) {
  const auto lex = read_lexicon(data_dir() / "numbers.tsv");
  EXPECT_EQ(lex.at("2"), "جوج");
  EXPECT_EQ(lex.size(), 5u);
  TempDir tmp("lex");
  std::ofstream(tmp / "dup.tsv") << "1\tواحد\n1\tواحد\n";
  EXPECT_THROW(read_lexicon(tmp / "dup.tsv"), ConfigError);
}

TEST(Inventory, HandCountable) {
  const auto v = GraphemeVocabulary::darija();
  const auto rep = grapheme_inventory({"اا", "ل"}, v);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].grapheme, "ا");
  EXPECT_EQ(rep.rows[0].count, 2u);
  EXPECT_EQ(rep.rows[1].grapheme, "ل");
  EXPECT_EQ(rep.rows[1].count, 1u);
  EXPECT_TRUE(grapheme_inventory({}, v).rows.empty());
}

TEST(Inventory, MatchesFrequencyOracleOnSampleCorpus) {
  const auto v = GraphemeVocabulary::darija();
  const auto corpus = sample_corpus();
  ASSERT_EQ(corpus.size(), 50u);
  const auto oracle = oracle_counts();
  for (bool diacritics : {false, true}) {
    const auto rep = grapheme_inventory(corpus, v, {diacritics});
    std::map<char32_t, std::size_t> got;
    for (const auto& row : rep.rows) got[row.code_point] = row.count;
    std::map<char32_t, std::size_t> want;
    for (const auto& [cp, kc] : oracle)
      if (kc.first == "letter" || diacritics) want[cp] = kc.second;
    EXPECT_EQ(got, want);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      EXPECT_GE(rep.rows[i - 1].count, rep.rows[i].count);
      if (rep.rows[i - 1].count == rep.rows[i].count) {
        EXPECT_LT(rep.rows[i - 1].code_point, rep.rows[i].code_point);
      }
    }
    std::size_t tokens = 0;
    for (const auto& line : corpus)
      for (const auto& t : grapheme_tokenize(line, v))
        if (diacritics || v.kind(utf8::decode(t)[0]) != GraphemeKind::kDiacritic) ++tokens;
    EXPECT_EQ(rep.total(), tokens);
  }
  const auto rep = grapheme_inventory(corpus, v);
  EXPECT_EQ(rep.count_of("ڤ"), 3u);
  EXPECT_EQ(rep.count_of("پ"), 5u);
  EXPECT_GT(rep.count_of("ڭ"), 0u);
}

TEST(Inventory, PermutationInvariant) {
  const auto v = GraphemeVocabulary::darija();
  auto corpus = sample_corpus();
  const auto a = grapheme_inventory(corpus, v);
  std::mt19937_64 gen(3);
  std::shuffle(corpus.begin(), corpus.end(), gen);
  const auto b = grapheme_inventory(corpus, v);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].code_point, b.rows[i].code_point);
    EXPECT_EQ(a.rows[i].count, b.rows[i].count);
  }
}

TEST(Inventory, ErrorsCarryLineNumbers) {
  const auto v = GraphemeVocabulary::darija();
  try {
    grapheme_inventory({"لا", "لا", "abc"}, v);
    FAIL();
  } catch (const OovError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Inventory, Renderings) {
  const auto v = GraphemeVocabulary::darija();
  const auto rep = grapheme_inventory({"ااال", "ڤ"}, v);
  const auto csv = render_inventory_csv(rep);
  EXPECT_EQ(csv, "token,code_point,count\nا,U+0627,3\nل,U+0644,1\nڤ,U+06A4,1\n");
  const auto table = render_inventory_table(rep, 2);
  EXPECT_NE(table.find("ڤ"), std::string::npos);
  EXPECT_NE(table.find("3"), std::string::npos);
}

TEST(Coverage, MissingAndRare) {
  const auto v = GraphemeVocabulary::darija();
  const auto corpus = sample_corpus();
  const std::set<char32_t> ext = {U'ڤ', U'پ', U'ڭ'};
  const auto full = coverage_check(corpus, ext, v);
  EXPECT_TRUE(full.missing.empty());
  EXPECT_NE(std::find(full.rare.begin(), full.rare.end(), std::pair<std::string, std::size_t>{"ڤ", 3}),
            full.rare.end());
  const auto lacking = coverage_check({"ڭال ليا"}, ext, v);
  EXPECT_EQ(lacking.missing, (std::vector<std::string>{"پ", "ڤ"}));
  EXPECT_TRUE(coverage_check(corpus, {}, v).missing.empty());
}
