// tests/lattice-io-test.cc

// Copyright 2026  The latrescore Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "latrescore/lattice-io.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "latrescore/error.h"
#include "latrescore/lattice-algo.h"
#include "testing/fixtures.h"
#include "testing/random-lattice.h"

namespace latrescore {
namespace {

namespace fs = std::filesystem;
using testing::L1Text;
using testing::MakeL1;

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIoError;
}

int ParseErrorLine(const std::string &text) {
  try {
    ParseLatticeText(text);
  } catch (const ParseError &e) {
    return e.line();
  } catch (const Error &e) {
    ADD_FAILURE() << "not a ParseError: " << e.what();
    return -1;
  }
  ADD_FAILURE() << "parsed: " << text;
  return -1;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("latrescore-io-" + std::to_string(::testing::UnitTest::GetInstance()
                                                   ->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

std::string Slurp(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

TEST(ParseTest, L1) {
  Lattice lat = ParseLatticeText(L1Text());
  EXPECT_EQ(lat, MakeL1());
  EXPECT_EQ(lat.num_arcs(), 4);
  EXPECT_EQ(lat.start(), 0);
  EXPECT_EQ(lat.meta().utterance_id, "utt1");
}

TEST(ParseTest, CostOrderAndSign) {
  Lattice lat = ParseLatticeText("u\n0 1 w 1.0,2.5\n1\n\n");
  EXPECT_EQ(lat.arc(0).lm_score, -1.0);
  EXPECT_EQ(lat.arc(0).acoustic_score, -2.5);
  EXPECT_EQ(lat.FinalScore(1), 0.0);
}

TEST(ParseTest, MetaAndPhones) {
  Lattice lat = ParseLatticeText(
      "u\n# meta: am=GMM align=word\n# a comment\n1 0 w 0,0,k_ae_t\n0 -0.5\n\n");
  EXPECT_EQ(lat.meta().am_kind, AmKind::kGmm);
  EXPECT_EQ(lat.meta().alignment_kind, AlignmentKind::kDirectWord);
  EXPECT_EQ(lat.start(), 1);
  EXPECT_EQ(lat.num_states(), 2);
  EXPECT_EQ(lat.arc(0).phones, (std::vector<std::string>{"k", "ae", "t"}));
  EXPECT_EQ(lat.FinalScore(0), 0.5);
}

TEST(ParseTest, StartIsFinalWithoutArcs) {
  Lattice lat = ParseLatticeText("u\n0 0.25\n\n");
  EXPECT_EQ(lat.start(), 0);
  EXPECT_EQ(lat.FinalScore(0), -0.25);
  EXPECT_EQ(lat.num_arcs(), 0);
}

TEST(ParseTest, GrammarViolationsCarryLineNumbers) {
  EXPECT_EQ(ParseErrorLine("u\n0 1 a 1,1\n1\n"), 4);          // truncated
  EXPECT_EQ(ParseErrorLine("u\n0 1 a 1,1\n1 0.0 7\n\n"), 3);   // final line
  EXPECT_EQ(ParseErrorLine("u\n0 1 a 1\n1\n\n"), 2);           // one cost
  EXPECT_EQ(ParseErrorLine("u\n0 1 a x,1\n1\n\n"), 2);         // bad number
  EXPECT_EQ(ParseErrorLine("u\n0 -1 a 1,1\n1\n\n"), 2);        // bad state
  EXPECT_EQ(ParseErrorLine("u\n# meta: am=RNN align=word\n1\n\n"), 2);
  EXPECT_EQ(ParseErrorLine("u\r\n0 1 a 1,1\n1\n\n"), 1);
  EXPECT_EQ(ParseErrorLine("u\n0 1 a nan,1\n1\n\n"), 2);
  EXPECT_EQ(ParseErrorLine(""), 1);
}

TEST(ParseTest, FinalLinesMayInterleaveWithArcs) {
  Lattice lat = ParseLatticeText("u\n0 1 a 1,1\n1\n1 2 b 1,1\n2\n\n");
  EXPECT_EQ(lat.num_arcs(), 2);
  EXPECT_EQ(lat.finals().size(), 2u);
}

TEST(ParseTest, ValidationErrors) {
  EXPECT_EQ(CodeOf([] { ParseLatticeText("u\n0 1 a 1,1\n1 0 b 1,1\n1\n\n"); }),
            ErrorCode::kValidationError);
  Lattice raw = ParseLatticeText("u\n0 1 a 1,1\n1 0 b 1,1\n1\n\n", false);
  EXPECT_FALSE(Validate(raw).ok());
}

TEST(WriteTest, L1Canonical) {
  EXPECT_EQ(WriteLatticeText(MakeL1()), L1Text());
  const Lattice l1 = MakeL1();
  std::vector<Arc> shuffled(l1.arcs().rbegin(), l1.arcs().rend());
  Lattice same(4, 0, {{3, 0.0}}, shuffled, l1.meta());
  EXPECT_EQ(WriteLatticeText(same), L1Text());
}

TEST(WriteTest, PhonesAndSingleState) {
  Lattice lat(2, 0, {{1, 0.0}}, {{0, 1, "cat", -2.5, -1, {"k", "ae", "t"}}},
              {"u", AmKind::kDnn, AlignmentKind::kPhoneThenWord});
  EXPECT_EQ(WriteLatticeText(lat),
            "u\n# meta: am=DNN align=phone-word\n0 1 cat 1.000000,2.500000,k_ae_t\n"
            "1 0.000000\n\n");
  Lattice single(1, 0, {{0, 0.0}}, {}, {"s", {}, {}});
  EXPECT_EQ(WriteLatticeText(single), "s\n# meta: am=UNKNOWN align=unknown\n0 0.000000\n\n");
}

TEST(WriteTest, FormatCost) {
  EXPECT_EQ(FormatCost(-0.0), "0.000000");
  EXPECT_EQ(FormatCost(-1e-9), "0.000000");
  EXPECT_EQ(FormatCost(2.5), "2.500000");
  EXPECT_EQ(FormatCost(1e7), "10000000.000000");
}

TEST(RoundTripTest, RandomLattices) {
  testing::RandomLatticeOptions opts;
  opts.phones = true;
  for (const Lattice &lat : testing::RandomLatticeCorpus(41, 100, opts)) {
    std::string text = WriteLatticeText(lat);
    Lattice back = ParseLatticeText(text);
    EXPECT_EQ(back, lat);
    EXPECT_EQ(back.meta(), lat.meta());
    EXPECT_EQ(back.start(), lat.start());
    EXPECT_EQ(WriteLatticeText(back), text);
  }
}

TEST(ArkTest, WriteThenSeek) {
  TempDir dir;
  std::vector<Lattice> lats = {MakeL1(), testing::MakeL2()};
  ScpIndex index = WriteArk(dir / "a.ark", lats);
  WriteScp(dir / "a.scp", index);
  ScpIndex read = ReadScp(dir / "a.scp");
  ASSERT_EQ(read.entries, index.entries);
  EXPECT_EQ(read.entries[0].offset, 0u);
  EXPECT_EQ(read.entries[1].offset, L1Text().size());
  EXPECT_EQ(ReadArkEntry(read, "utt2"), testing::MakeL2());
  EXPECT_EQ(ReadArkEntry(read, "utt2").meta().utterance_id, "utt2");
  EXPECT_EQ(ReadArk(dir / "a.ark"), lats);
  EXPECT_EQ(ReadLattices(dir / "a.scp"), lats);
  EXPECT_EQ(CodeOf([&] { ReadArkEntry(read, "nope"); }), ErrorCode::kKeyNotFound);
}

TEST(ArkTest, CorruptedOffset) {
  TempDir dir;
  std::vector<Lattice> lats = {MakeL1(), testing::MakeL2()};
  ScpIndex index = WriteArk(dir / "a.ark", lats);
  for (int delta : {-1, 1}) {
    ScpIndex bad = index;
    bad.entries[1].offset += delta;
    EXPECT_EQ(CodeOf([&] { ReadArkEntry(bad, "utt2"); }), ErrorCode::kOffsetMismatch);
  }
  ScpIndex past = index;
  past.entries[1].offset = 1u << 20;
  EXPECT_EQ(CodeOf([&] { ReadArkEntry(past, "utt2"); }), ErrorCode::kOffsetMismatch);
}

TEST(ArkTest, RelativePathsResolveAgainstScpDir) {
  TempDir dir;
  std::vector<Lattice> lats = {MakeL1()};
  WriteArk(dir / "b.ark", lats);
  std::ofstream(dir / "b.scp") << "utt1\tb.ark:0\n";
  EXPECT_EQ(ReadLattices(dir / "b.scp"), lats);
}

TEST(ArkTest, ScpMatchesSequentialReadOnRandomCorpus) {
  TempDir dir;
  std::vector<Lattice> lats = testing::RandomLatticeCorpus(42, 30);
  ScpIndex index = WriteArk(dir / "r.ark", lats);
  std::vector<Lattice> seq = ReadArk(dir / "r.ark");
  ASSERT_EQ(seq.size(), lats.size());
  for (size_t i = 0; i < lats.size(); i++) {
    EXPECT_EQ(ReadArkEntry(index, lats[i].meta().utterance_id), seq[i]);
  }
  std::string ark = Slurp(dir / "r.ark");
  for (const ScpEntry &e : index.entries)
    EXPECT_EQ(ark.compare(e.offset, e.key.size() + 1, e.key + "\n"), 0);
}

TEST(ScpTest, ParseRules) {
  ScpIndex idx = ParseScp("a\tx.ark:0\nb\tx.ark:10\nc\ty.ark:0\n");
  EXPECT_EQ(idx.entries.size(), 3u);
  EXPECT_NE(idx.Find("b"), nullptr);
  EXPECT_EQ(idx.Find("z"), nullptr);
  EXPECT_EQ(WriteScpText(idx), "a\tx.ark:0\nb\tx.ark:10\nc\ty.ark:0\n");
  EXPECT_EQ(CodeOf([] { ParseScp("a\tx.ark:0\na\tx.ark:10\n"); }),
            ErrorCode::kDuplicateKey);
  EXPECT_EQ(CodeOf([] { ParseScp("a\tx.ark:10\nb\tx.ark:10\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseScp("a\tx.ark\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseScp("a x.ark:-3\n"); }), ErrorCode::kParseError);
}

TEST(ArkTest, DuplicateKeysRejected) {
  TempDir dir;
  std::vector<Lattice> lats = {MakeL1(), MakeL1()};
  EXPECT_EQ(CodeOf([&] { WriteArk(dir / "d.ark", lats); }), ErrorCode::kDuplicateKey);
}

TEST(TranscriptTest, Examples) {
  Transcripts t = ParseTranscripts("utt1 the cat\nempty\n\nutt3   a  b \n");
  EXPECT_EQ(t.at("utt1"), (std::vector<std::string>{"the", "cat"}));
  EXPECT_TRUE(t.at("empty").empty());
  EXPECT_EQ(t.at("utt3"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(CodeOf([] { ParseTranscripts("u a\nu b\n"); }), ErrorCode::kDuplicateKey);
  EXPECT_EQ(FormatTranscriptLine("k", std::vector<std::string>{}), "k");
  EXPECT_EQ(FormatTranscriptLine("k", std::vector<std::string>{"a", "b"}), "k a b");
}

TEST(IoErrors, MissingFiles) {
  EXPECT_EQ(CodeOf([] { ReadScp("/nonexistent/x.scp"); }), ErrorCode::kIoError);
  EXPECT_EQ(CodeOf([] { ReadTranscripts("/nonexistent/t.txt"); }), ErrorCode::kIoError);
  EXPECT_EQ(CodeOf([] { ReadArk("/nonexistent/x.ark"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace latrescore
