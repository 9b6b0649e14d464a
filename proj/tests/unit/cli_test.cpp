// Copyright 2026 The Notary Trie Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "notary/chain.hpp"
#include "notary/merkle_ledger.hpp"
#include "temp_dir.hpp"

namespace notary {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() /
                       ("notary-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  const std::string cmd = env + " \"" NOTARY_CLI "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(out);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string simulate_args(const fs::path& wd, int seed = 7) {
  return "simulate --ledgers 10 --rounds 3 --append-rate 0.6 --seed " + std::to_string(seed) +
         " --workdir " + q(wd);
}

TEST(CliTest, BenchSingleLedgerRow) {
  auto r = run("bench --r 2 --k 1 --ledgers 1 --seed 1");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "r,k,ledgers,nodes,path_min,path_max,path_avg,total_bytes,total_paper_bits,"
                    "path_avg_bytes");
  EXPECT_EQ(row.rfind("2,1,1,1,1,1,1.0000,98,", 0), 0u) << row;
}

TEST(CliTest, BenchDeterministic) {
  testing::TempDir dir;
  const std::string args = "bench --r 2,4 --k 1,2 --ledgers 500,1000 --seed 9 --out ";
  ASSERT_EQ(run(args + q(dir.path() / "a.csv")).code, 0);
  ASSERT_EQ(run(args + q(dir.path() / "b.csv")).code, 0);
  const std::string a = slurp(dir.path() / "a.csv");
  EXPECT_EQ(a, slurp(dir.path() / "b.csv"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 9);
  EXPECT_NE(a, run("bench --r 2,4 --k 1,2 --ledgers 500,1000 --seed 10").out);
}

TEST(CliTest, SimulateDeterministicArtifacts) {
  testing::TempDir dir;
  ASSERT_EQ(run(simulate_args(dir.path() / "a")).code, 0);
  ASSERT_EQ(run(simulate_args(dir.path() / "b")).code, 0);
  const std::string chain = slurp(dir.path() / "a" / "chain.log");
  EXPECT_EQ(chain, slurp(dir.path() / "b" / "chain.log"));
  EXPECT_EQ(slurp(dir.path() / "a" / "proofs.idx"), slurp(dir.path() / "b" / "proofs.idx"));
  EXPECT_EQ(Chain(dir.path() / "a" / "chain.log").height(), 3u);
  ASSERT_EQ(run(simulate_args(dir.path() / "c", 8)).code, 0);
  EXPECT_NE(chain, slurp(dir.path() / "c" / "chain.log"));
}

TEST(CliTest, WorkdirCollision) {
  testing::TempDir dir;
  const fs::path wd = dir.path() / "w";
  ASSERT_EQ(run(simulate_args(wd)).code, 0);
  EXPECT_EQ(run(simulate_args(wd)).code, 3);
  EXPECT_EQ(run(simulate_args(wd) + " --force").code, 0);
  EXPECT_EQ(Chain(wd / "chain.log").height(), 3u);
}

TEST(CliTest, AuditHonestUnknownAndTampered) {
  testing::TempDir dir;
  const fs::path wd = dir.path() / "w";
  ASSERT_EQ(run(simulate_args(wd)).code, 0);
  for (int i = 0; i < 10; ++i) {
    auto r = run("audit --workdir " + q(wd) + " --id ledger-" + std::to_string(i));
    EXPECT_EQ(r.code, 0) << r.out;
  }
  auto unknown = run("audit --workdir " + q(wd) + " --id nobody");
  EXPECT_EQ(unknown.code, 2) << unknown.out;

  // A digest the notary never saw.
  auto wrong = run("audit --workdir " + q(wd) + " --id ledger-0 --digest " +
                   std::string(64, 'a'));
  EXPECT_EQ(wrong.code, 1) << wrong.out;

  ASSERT_EQ(run("tamper --workdir " + q(wd) + " --kind chain-root --id ledger-0 --round 0").code, 0);
  auto bad = run("audit --workdir " + q(wd) + " --id ledger-0");
  EXPECT_EQ(bad.code, 1) << bad.out;
  EXPECT_NE(bad.out.find("chain_match: fail"), std::string::npos) << bad.out;
}

TEST(CliTest, ProveVerifyAndTruncation) {
  testing::TempDir dir;
  const fs::path wd = dir.path() / "w";
  ASSERT_EQ(run(simulate_args(wd)).code, 0);
  const fs::path proof = dir.path() / "p.bin";
  ASSERT_EQ(run("prove --workdir " + q(wd) + " --id ledger-0 --out " + q(proof)).code, 0);
  auto ok = run("verify --proof " + q(proof) + " --id ledger-0 --workdir " + q(wd));
  EXPECT_EQ(ok.code, 0) << ok.out;
  auto other = run("verify --proof " + q(proof) + " --id ledger-1 --workdir " + q(wd));
  EXPECT_EQ(other.code, 1) << other.out;

  const std::string bytes = slurp(proof);
  {
    std::ofstream out(dir.path() / "cut.bin", std::ios::binary);
    out << bytes.substr(0, bytes.size() / 2);
  }
  auto cut = run("verify --proof " + q(dir.path() / "cut.bin") + " --id ledger-0 --workdir " + q(wd));
  EXPECT_EQ(cut.code, 2) << cut.out;
  EXPECT_EQ(run("verify --proof " + q(dir.path() / "missing.bin") + " --id ledger-0 --workdir " +
                q(wd)).code,
            2);

  // A proof for round 0 against a longer chain reports later rounds as uncovered.
  ASSERT_EQ(run("prove --workdir " + q(wd) + " --id ledger-0 --round 0 --out " + q(proof)).code, 0);
  auto scoped = run("verify --proof " + q(proof) + " --id ledger-0 --workdir " + q(wd));
  EXPECT_EQ(scoped.code, 0) << scoped.out;
  EXPECT_NE(scoped.out.find("not covered"), std::string::npos) << scoped.out;
}

TEST(CliTest, NotarizeAndChainCommands) {
  testing::TempDir dir;
  const fs::path wd = dir.path() / "w";
  ASSERT_EQ(run(simulate_args(wd)).code, 0);
  auto r = run("notarize --workdir " + q(wd));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("3 ", 0), 0u) << r.out;
  auto shown = run("chain --workdir " + q(wd));
  EXPECT_EQ(shown.code, 0);
  EXPECT_EQ(shown.out, slurp(wd / "chain.log"));
  EXPECT_EQ(std::count(shown.out.begin(), shown.out.end(), '\n'), 4);
  EXPECT_EQ(run("audit --workdir " + q(wd) + " --id ledger-3").code, 0);
}

TEST(CliTest, WorkdirFromEnvironment) {
  testing::TempDir dir;
  const fs::path wd = dir.path() / "env";
  const std::string env = "NOTARY_WORKDIR=" + q(wd);
  ASSERT_EQ(run("simulate --ledgers 3 --rounds 2", env).code, 0);
  EXPECT_TRUE(fs::exists(wd / "chain.log"));
  EXPECT_EQ(run("audit --id ledger-0", env).code, 0);
}

TEST(CliTest, NotarizeSingle) {
  testing::TempDir dir;
  Ledger l(HashAlg::kSha256, "solo");
  for (int i = 0; i < 4; ++i) l.append(as_bytes(std::to_string(i)));
  auto write = [&] {
    std::ofstream out(dir.path() / "solo.ledger");
    l.write(out);
  };
  write();
  const std::string args = "notarize-single --ledger " + q(dir.path() / "solo.ledger") +
                           " --chain " + q(dir.path() / "chain.log");
  ASSERT_EQ(run(args).code, 0);
  for (int i = 4; i < 8; ++i) l.append(as_bytes(std::to_string(i)));
  write();
  ASSERT_EQ(run(args).code, 0);
  auto records = Chain(dir.path() / "chain.log").records();
  ASSERT_EQ(records.size(), 2u);
  EXPECT_TRUE(records[0].note.empty());
  auto proof = ConsistencyProof::parse(records[1].note, HashAlg::kSha256);
  EXPECT_TRUE(verify_consistency(HashAlg::kSha256, records[0].trie_root, records[1].trie_root, proof));
}

TEST(CliTest, BadArguments) {
  EXPECT_NE(run("bench --r 3").code, 0);
  EXPECT_NE(run("frobnicate").code, 0);
}

}  // namespace
}  // namespace notary
