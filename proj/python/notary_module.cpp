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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "notary/audit.hpp"
#include "notary/bench.hpp"
#include "notary/simulate.hpp"

namespace py = pybind11;
using namespace notary;

namespace {

py::bytes to_py(ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

Bytes from_py(const py::bytes& b) {
  std::string s = b;
  return Bytes(s.begin(), s.end());
}

Digest digest_from_py(const py::bytes& b) { return Digest(from_py(b)); }

py::dict measurements_dict(const Measurements& m) {
  py::dict d;
  d["keys"] = m.keys;
  d["nodes"] = m.nodes_count;
  d["path_min"] = m.path_min;
  d["path_max"] = m.path_max;
  d["path_avg"] = m.path_avg;
  d["total_bytes"] = m.total_size_bytes;
  d["total_paper_bits"] = m.total_size_paper_bits;
  d["path_avg_bytes"] = m.path_avg_bytes;
  return d;
}

py::dict report_dict(const AuditReport& r) {
  py::dict d;
  d["verdict"] = std::string(audit_status_name(r.verdict()));
  d["exit_code"] = r.exit_code();
  d["no_alternative_histories"] = std::string(audit_status_name(r.no_alternative_histories.status));
  d["no_removal"] = std::string(audit_status_name(r.no_removal.status));
  d["no_forks"] = std::string(audit_status_name(r.no_forks.status));
  d["chain_match"] = std::string(audit_status_name(r.chain_match.status));
  d["disclosed_data_match"] = std::string(audit_status_name(r.disclosed_data_match.status));
  py::list history;
  for (const auto& v : r.history) {
    if (v)
      history.append(to_py(v->view()));
    else
      history.append(py::none());
  }
  d["history"] = history;
  d["not_covered_from"] = r.not_covered_from ? py::cast(*r.not_covered_from) : py::none();
  d["text"] = r.to_text();
  return d;
}

struct Opened {
  Workdir dir;
  NotaryState state;
};

Opened open_workdir(const std::filesystem::path& path) {
  Workdir dir{path};
  if (!std::filesystem::exists(dir.state_file()))
    throw Error(Errc::kNotFound, "no notary state in " + path.string());
  return {dir, NotaryState::load(dir.state_file())};
}

}  // namespace

PYBIND11_MODULE(_notary, m) {
  m.doc() = "Notarize many Merkle ledgers through one chained trie digest";
  py::register_exception<Error>(m, "NotaryError", PyExc_RuntimeError);

  py::enum_<HashAlg>(m, "HashAlg")
      .value("SHA256", HashAlg::kSha256)
      .value("SHA512", HashAlg::kSha512);

  m.def("hash", [](const py::bytes& data, HashAlg alg) { return to_py(hash(alg, from_py(data)).view()); },
        py::arg("data"), py::arg("alg") = HashAlg::kSha256);

  py::class_<Ledger>(m, "Ledger")
      .def(py::init([](const py::bytes& id, HashAlg alg) { return Ledger(alg, from_py(id)); }),
           py::arg("id"), py::arg("alg") = HashAlg::kSha256)
      .def("append", [](Ledger& l, const py::bytes& payload) { l.append(from_py(payload)); })
      .def("__len__", &Ledger::size)
      .def_property_readonly("id", [](const Ledger& l) { return to_py(l.id()); })
      .def("root", [](const Ledger& l) { return to_py(l.root().view()); })
      .def("root_at", [](const Ledger& l, std::size_t n) { return to_py(l.root_at(n).view()); })
      .def("prove_consistency",
           [](const Ledger& l, std::uint64_t m, std::uint64_t n) {
             return to_py(l.prove_consistency(m, n).serialize());
           })
      .def("write",
           [](const Ledger& l, const std::filesystem::path& path, bool base64) {
             std::ofstream out(path, std::ios::binary | std::ios::trunc);
             l.write(out, base64);
           },
           py::arg("path"), py::arg("base64") = false);

  m.def("verify_consistency",
        [](const py::bytes& old_root, const py::bytes& new_root, const py::bytes& proof,
           HashAlg alg) {
          return verify_consistency(alg, digest_from_py(old_root), digest_from_py(new_root),
                                    ConsistencyProof::parse(from_py(proof), alg));
        },
        py::arg("old_root"), py::arg("new_root"), py::arg("proof"),
        py::arg("alg") = HashAlg::kSha256);

  m.def("trie_root",
        [](const std::map<std::string, std::string>& assoc, unsigned r, unsigned k, HashAlg alg) {
          std::vector<Tuple> tuples;
          for (const auto& [id, value] : assoc)
            tuples.push_back({hash(alg, id), Digest(as_bytes(value))});
          MemoryStore store(alg);
          return to_py(build({r, k, alg}, std::move(tuples), Digest::zero(alg), store)
                           .root_digest.view());
        },
        "Root digest of a first-version trie over {ledger id: ledger digest}.",
        py::arg("assoc"), py::arg("r") = 4, py::arg("k") = 4, py::arg("alg") = HashAlg::kSha256);

  m.def("measure",
        [](unsigned r, unsigned k, std::uint64_t ledgers, std::uint64_t seed, HashAlg alg) {
          py::gil_scoped_release release;
          Measurements meas = measure_build({r, k, alg}, bench_tuples(alg, ledgers, seed),
                                            Digest::zero(alg));
          py::gil_scoped_acquire acquire;
          return measurements_dict(meas);
        },
        py::arg("r"), py::arg("k"), py::arg("ledgers"), py::arg("seed") = 1,
        py::arg("alg") = HashAlg::kSha256);

  m.def("bench_csv",
        [](std::vector<unsigned> r, std::vector<unsigned> k, std::vector<std::uint64_t> ledgers,
           std::uint64_t seed, HashAlg alg) {
          std::ostringstream out;
          run_bench(BenchConfig{std::move(r), std::move(k), std::move(ledgers), seed, alg}, out);
          return out.str();
        },
        py::arg("r"), py::arg("k"), py::arg("ledgers"), py::arg("seed") = 1,
        py::arg("alg") = HashAlg::kSha256);

  m.def("simulate",
        [](const std::filesystem::path& workdir, std::size_t ledgers, std::size_t rounds,
           double append_rate, std::uint64_t seed, unsigned r, unsigned k, HashAlg alg,
           bool force) {
          SimulationConfig cfg;
          cfg.ledgers = ledgers;
          cfg.rounds = rounds;
          cfg.append_rate = append_rate;
          cfg.seed = seed;
          cfg.params = {r, k, alg};
          Workdir dir = Workdir::create(workdir, force);
          DirectoryStore store(dir.root, alg);
          Chain chain(dir.chain_log());
          SimulationResult res = simulate(cfg, store, chain);
          res.state.save(dir.state_file());
          dir.write_ledgers(res.ledgers);
          py::list roots;
          for (const Digest& d : chain.read_roots()) roots.append(to_py(d.view()));
          return roots;
        },
        "Seeded end-to-end run into a workdir; returns the published roots.",
        py::arg("workdir"), py::arg("ledgers") = 10, py::arg("rounds") = 3,
        py::arg("append_rate") = 0.5, py::arg("seed") = 1, py::arg("r") = 4, py::arg("k") = 4,
        py::arg("alg") = HashAlg::kSha256, py::arg("force") = false);

  m.def("audit",
        [](const std::filesystem::path& workdir, const py::bytes& id,
           std::optional<py::bytes> digest) {
          Opened w = open_workdir(workdir);
          std::optional<AuditClaim> claim;
          if (digest) claim = AuditClaim{digest_from_py(*digest), std::nullopt, std::nullopt};
          DirectoryStore store(w.dir.root, w.state.params.alg);
          auto roots = Chain(w.dir.chain_log()).read_roots();
          return report_dict(audit_ledger(w.state.params, from_py(id), claim, roots, store));
        },
        py::arg("workdir"), py::arg("id"), py::arg("digest") = py::none());

  m.def("make_audit_proof",
        [](const std::filesystem::path& workdir, const py::bytes& id,
           std::optional<std::uint64_t> round) {
          Opened w = open_workdir(workdir);
          DirectoryStore store(w.dir.root, w.state.params.alg);
          auto roots = Chain(w.dir.chain_log()).read_roots();
          if (roots.empty()) throw Error(Errc::kCannotConstruct, "chain is empty");
          return to_py(make_audit_proof(w.state.params, from_py(id),
                                        round.value_or(roots.size() - 1), roots, store)
                           .serialize());
        },
        py::arg("workdir"), py::arg("id"), py::arg("round") = py::none());

  m.def("verify_audit_proof",
        [](const py::bytes& bundle, const py::bytes& id, const std::filesystem::path& chain_log) {
          auto roots = Chain(chain_log).read_roots();
          return report_dict(verify_audit_proof_bytes(from_py(bundle), from_py(id), roots));
        },
        py::arg("bundle"), py::arg("id"), py::arg("chain_log"));
}
