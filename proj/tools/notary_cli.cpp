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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "notary/audit.hpp"
#include "notary/bench.hpp"
#include "notary/simulate.hpp"
#include "notary/tamper.hpp"

namespace fs = std::filesystem;
using namespace notary;

namespace {

std::string default_workdir() {
  const char* env = std::getenv("NOTARY_WORKDIR");
  return env ? env : "notary-work";
}

struct Opened {
  Workdir dir;
  NotaryState state;
};

Opened open_workdir(const std::string& path) {
  Workdir dir{path};
  if (!fs::exists(dir.state_file()))
    throw Error(Errc::kNotFound, "no notary state in " + path);
  return {dir, NotaryState::load(dir.state_file())};
}

Bytes id_bytes(const std::string& id, const std::string& id_hex) {
  if (!id_hex.empty()) return from_hex(id_hex);
  return Bytes(id.begin(), id.end());
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_chain(const fs::path& path, const std::vector<NotarizationRecord>& records) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  for (const auto& r : records) out << format_record(r);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
}

// Digest claim from a disclosed ledger. When the ledger has grown past its
// last notarized value, attach the proof linking the two.
AuditClaim claim_from_ledger(const Ledger& ledger, const NotaryState& state,
                             const Workdir& dir) {
  AuditClaim claim{ledger.root(), std::nullopt, std::nullopt};
  try {
    DirectoryStore store(dir.root, state.params.alg);
    Chain chain(dir.chain_log());
    auto roots = chain.read_roots();
    if (roots.empty()) return claim;
    auto latest = lookup({state.params, roots.back(), &store}, hash(state.params.alg, ledger.id()));
    if (!latest || *latest == claim.digest) return claim;
    for (std::uint64_t m = ledger.size(); m >= 1; --m) {
      if (ledger.root_at(m) == *latest) {
        claim.from_previous = ledger.prove_consistency(m, ledger.size());
        break;
      }
    }
  } catch (const Error&) {
    // The audit itself reports whatever is wrong with the storage.
  }
  return claim;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Notarize many Merkle ledgers through one chained trie digest"};
  app.require_subcommand(1);

  std::string workdir = default_workdir();
  std::string hash_name = "sha256";
  unsigned r = 4, k = 4;
  std::uint64_t seed = 1;
  bool force = false;

  // bench
  auto* bench = app.add_subcommand("bench", "Trie size/depth measurements as CSV");
  std::vector<unsigned> bench_r{2, 4, 8}, bench_k{1, 2, 4, 8};
  std::vector<std::uint64_t> bench_n{10000};
  std::string out_path;
  bench->add_option("--r", bench_r, "arities")->delimiter(',');
  bench->add_option("--k", bench_k, "leaf capacities")->delimiter(',');
  bench->add_option("--ledgers", bench_n, "ledger counts")->delimiter(',');
  bench->add_option("--seed", seed);
  bench->add_option("--hash", hash_name)->check(CLI::IsMember({"sha256", "sha512"}));
  bench->add_option("--out", out_path, "CSV file (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Seeded end-to-end notarization run");
  SimulationConfig sim_cfg;
  sim->add_option("--ledgers", sim_cfg.ledgers);
  sim->add_option("--rounds", sim_cfg.rounds);
  sim->add_option("--append-rate", sim_cfg.append_rate)->check(CLI::Range(0.0, 1.0));
  sim->add_option("--late-join-rate", sim_cfg.late_join_rate)->check(CLI::Range(0.0, 1.0));
  sim->add_option("--seed", seed);
  sim->add_option("--hash", hash_name)->check(CLI::IsMember({"sha256", "sha512"}));
  sim->add_option("--r", r);
  sim->add_option("--k", k);
  sim->add_option("--workdir", workdir);
  sim->add_flag("--force", force, "overwrite an existing workdir");

  // notarize
  auto* notarize = app.add_subcommand("notarize", "Run one notarization round");
  std::string ledger_dir;
  notarize->add_option("--ledger-dir", ledger_dir, "directory of .ledger files (default <workdir>/ledgers)");
  notarize->add_option("--workdir", workdir);
  notarize->add_option("--hash", hash_name)->check(CLI::IsMember({"sha256", "sha512"}));
  notarize->add_option("--r", r);
  notarize->add_option("--k", k);

  // single-ledger mode
  auto* single = app.add_subcommand("notarize-single", "Notarize one ledger directly on chain");
  std::string ledger_file, chain_file;
  single->add_option("--ledger", ledger_file)->required();
  single->add_option("--chain", chain_file)->required();

  // audit / prove / verify
  std::string id, id_hex, digest_hex, proof_file;
  std::optional<std::uint64_t> round;
  auto* audit = app.add_subcommand("audit", "Audit one ledger against chain and storage");
  audit->add_option("--workdir", workdir);
  audit->add_option("--id", id);
  audit->add_option("--id-hex", id_hex);
  audit->add_option("--digest", digest_hex, "shared ledger digest (hex)");
  audit->add_option("--ledger", ledger_file, "shared ledger file");

  auto* prove = app.add_subcommand("prove", "Write an offline audit proof");
  prove->add_option("--workdir", workdir);
  prove->add_option("--id", id);
  prove->add_option("--id-hex", id_hex);
  prove->add_option("--round", round, "last round covered (default: latest)");
  prove->add_option("--out", proof_file)->required();

  auto* verify = app.add_subcommand("verify", "Check an audit proof against the chain");
  verify->add_option("--proof", proof_file)->required();
  verify->add_option("--id", id);
  verify->add_option("--id-hex", id_hex);
  verify->add_option("--workdir", workdir, "workdir whose chain.log to use");
  verify->add_option("--chain", chain_file, "chain journal (overrides --workdir)");
  verify->add_option("--digest", digest_hex, "shared ledger digest (hex)");

  // test hook
  auto* tamper = app.add_subcommand("tamper", "Inject a fault (testing only)");
  std::string fault_kind;
  std::uint64_t tamper_round = 0;
  tamper->add_option("--workdir", workdir);
  tamper->add_option("--kind", fault_kind)
      ->required()
      ->check(CLI::IsMember({"remove-key", "fork-value", "chain-root", "corrupt-node", "corrupt-proof"}));
  tamper->add_option("--id", id);
  tamper->add_option("--id-hex", id_hex);
  tamper->add_option("--round", tamper_round)->required();

  auto* show = app.add_subcommand("chain", "Print the chain journal");
  show->add_option("--workdir", workdir);

  CLI11_PARSE(app, argc, argv);

  try {
    const HashAlg alg = parse_hash_alg(hash_name);

    if (*bench) {
      BenchConfig cfg{bench_r, bench_k, bench_n, seed, alg};
      if (out_path.empty()) {
        run_bench(cfg, std::cout);
      } else {
        std::ofstream out(out_path, std::ios::trunc);
        run_bench(cfg, out);
      }
      return 0;
    }

    if (*sim) {
      sim_cfg.seed = seed;
      sim_cfg.params = {r, k, alg};
      Workdir dir = Workdir::create(workdir, force);
      DirectoryStore store(dir.root, alg);
      Chain chain(dir.chain_log());
      SimulationResult res = simulate(sim_cfg, store, chain);
      res.state.save(dir.state_file());
      dir.write_ledgers(res.ledgers);
      std::size_t proofs = 0, nodes = 0;
      for (const auto& rr : res.rounds) {
        proofs += rr.proofs_stored;
        nodes += rr.nodes_emitted;
      }
      std::cout << "rounds: " << chain.height() << "\nledgers: " << res.state.registry.size()
                << "\nnodes published: " << nodes << "\nproofs published: " << proofs
                << "\nlatest root: " << res.state.last_root.hex() << '\n';
      return 0;
    }

    if (*notarize) {
      Workdir dir{workdir};
      NotaryState state = fs::exists(dir.state_file())
                              ? NotaryState::load(dir.state_file())
                              : NotaryState::initial({r, k, alg});
      fs::path src = ledger_dir.empty() ? dir.ledger_dir() : fs::path(ledger_dir);
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(src))
        if (e.path().extension() == ".ledger") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      std::vector<Ledger> snapshot;
      for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        snapshot.push_back(Ledger::read(in));
      }
      DirectoryStore store(dir.root, state.params.alg);
      Chain chain(dir.chain_log());
      RoundResult res = notarize_round(state, snapshot, store, chain);
      res.state.save(dir.state_file());
      std::cout << format_record(res.record);
      return 0;
    }

    if (*single) {
      std::ifstream in(ledger_file, std::ios::binary);
      Ledger ledger = Ledger::read(in);
      Chain chain(chain_file);
      std::optional<SingleLedgerPrev> prev;
      auto records = chain.records();
      if (!records.empty()) {
        const Digest last = records.back().trie_root;
        for (std::uint64_t m = ledger.size();; --m) {
          if (ledger.root_at(m) == last) {
            prev = SingleLedgerPrev{last, m};
            break;
          }
          if (m == 0) throw Error(Errc::kFork, "ledger does not extend the last notarized state");
        }
      }
      std::cout << format_record(notarize_single(ledger, prev, chain));
      return 0;
    }

    if (*audit) {
      Opened w = open_workdir(workdir);
      Bytes ident = id_bytes(id, id_hex);
      std::optional<AuditClaim> claim;
      if (!digest_hex.empty()) {
        claim = AuditClaim{Digest::from_hex(digest_hex), std::nullopt, std::nullopt};
      } else {
        std::optional<Ledger> shared;
        if (!ledger_file.empty()) {
          std::ifstream in(ledger_file, std::ios::binary);
          shared = Ledger::read(in);
        } else {
          shared = w.dir.read_ledger(ident);
        }
        if (shared) claim = claim_from_ledger(*shared, w.state, w.dir);
      }
      DirectoryStore store(w.dir.root, w.state.params.alg);
      Chain chain(w.dir.chain_log());
      auto roots = chain.read_roots();
      AuditReport report = audit_ledger(w.state.params, ident, claim, roots, store);
      std::cout << report.to_text();
      return report.exit_code();
    }

    if (*prove) {
      Opened w = open_workdir(workdir);
      DirectoryStore store(w.dir.root, w.state.params.alg);
      Chain chain(w.dir.chain_log());
      auto roots = chain.read_roots();
      if (roots.empty()) throw Error(Errc::kCannotConstruct, "chain is empty");
      AuditProof proof = make_audit_proof(w.state.params, id_bytes(id, id_hex),
                                          round.value_or(roots.size() - 1), roots, store);
      Bytes bytes = proof.serialize();
      std::ofstream out(proof_file, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw Error(Errc::kIo, "cannot write " + proof_file);
      std::cout << "audit proof: " << bytes.size() << " bytes, " << proof.nodes.size()
                << " nodes, " << proof.proofs.size() << " consistency proofs, rounds 0.."
                << proof.up_to_round << '\n';
      return 0;
    }

    if (*verify) {
      Chain chain(chain_file.empty() ? Workdir{workdir}.chain_log() : fs::path(chain_file));
      auto roots = chain.read_roots();
      std::optional<AuditClaim> claim;
      if (!digest_hex.empty())
        claim = AuditClaim{Digest::from_hex(digest_hex), std::nullopt, std::nullopt};
      AuditReport report =
          verify_audit_proof_bytes(read_file(proof_file), id_bytes(id, id_hex), roots, claim);
      std::cout << report.to_text();
      return report.exit_code();
    }

    if (*tamper) {
      Opened w = open_workdir(workdir);
      DirectoryStore store(w.dir.root, w.state.params.alg);
      auto records = Chain(w.dir.chain_log()).records();
      auto rewritten = inject_fault(parse_fault(fault_kind), w.state.params,
                                    id_bytes(id, id_hex), tamper_round, records, store);
      if (rewritten != records) write_chain(w.dir.chain_log(), rewritten);
      std::cout << "injected " << fault_kind << " at round " << tamper_round << '\n';
      return 0;
    }

    if (*show) {
      Chain chain(Workdir{workdir}.chain_log());
      for (const auto& rec : chain.records()) std::cout << format_record(rec);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    // Unknown ids and unreadable inputs are inconclusive for audit commands.
    if (*audit || *verify) return 2;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
