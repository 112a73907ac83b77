// Operator CLI. Every role's material lives in a workspace directory:
//
//   universe.json                 attribute universe
//   public/pk.huap, public/pp.huap
//   authority/mk.huap             attribute authority only
//   owner/sp.huap, owner/rk.huap  data owner only
//   cloud/rk.huap, cloud/store/   cloud provider
//   devices/<name>/pool/*.huap    unused offline ciphertexts, oldest first
//   rng.counter                   invocation counter for seeded runs
//
// Exit status: 0 success, 1 rejection (no matching gate, payload
// authentication failure), 2 malformed input or invalid request,
// 3 internal failure, bench counter mismatch or failed scenario expectation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "huap/bench.hpp"
#include "huap/errors.hpp"
#include "huap/harness.hpp"
#include "huap/payload.hpp"
#include "huap/policy_json.hpp"
#include "huap/wire.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace huap;

namespace {

constexpr int kExitRejected = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInternal = 3;

// No gate of the ciphertext matched the key.
class Rejected : public Error {
 public:
  using Error::Error;
};

Bytes read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const fs::path& path) {
  const Bytes b = read_bytes(path);
  return std::string(b.begin(), b.end());
}

void write_bytes(const fs::path& path, ByteView data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("HUAP_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::strlen(s)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("HUAP_SEED must be an unsigned integer");
  }
}

class Workspace {
 public:
  Workspace(fs::path root, std::optional<std::uint64_t> seed) : root_(std::move(root)), seed_(seed) {}

  fs::path path(const fs::path& rel) const { return root_ / rel; }
  bool has(const fs::path& rel) const { return fs::exists(root_ / rel); }

  template <class T>
  T load(const fs::path& rel, const std::string& what) const {
    if (!has(rel)) throw ProtocolError(what + " not found in " + root_.string() + " (run the producing step first)");
    return decode<T>(read_bytes(root_ / rel));
  }

  template <class T>
  void save(const fs::path& rel, const T& value) const {
    write_bytes(root_ / rel, encode(value));
  }

  Universe universe() const {
    if (!has("universe.json")) throw ProtocolError("workspace has no universe (run setup first)");
    return universe_from_json(parse_json_text(read_text(root_ / "universe.json")));
  }

  // Seeded runs draw a fresh stream per invocation so repeated commands never
  // reuse randomness.
  Rng rng(const std::string& label) const {
    if (!seed_) return Rng();
    const fs::path counter = root_ / "rng.counter";
    std::uint64_t k = 0;
    if (fs::exists(counter)) k = std::stoull(read_text(counter));
    fs::create_directories(root_);
    write_text(counter, std::to_string(k + 1));
    return Rng(*seed_, label + ":" + std::to_string(k));
  }

  DirectoryObjectStore cloud_store() const { return DirectoryObjectStore(root_ / "cloud" / "store"); }

 private:
  fs::path root_;
  std::optional<std::uint64_t> seed_;
};

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

fs::path pool_dir(const Workspace& ws, const std::string& device) {
  if (device.empty() || device.find('/') != std::string::npos || device == "." || device == "..") {
    throw InvalidInput("bad device name");
  }
  return ws.path(fs::path("devices") / device / "pool");
}

std::vector<fs::path> pool_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".huap") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

LifecycleManager cloud_manager(const Workspace& ws, DirectoryObjectStore& store, Rng& rng) {
  return LifecycleManager(ws.load<SystemPublicKey>("public/pk.huap", "system public key"),
                          ws.load<DataPublicParams>("public/pp.huap", "owner public parameters"),
                          ws.load<ReencKey>("cloud/rk.huap", "cloud re-encryption key"), store, rng);
}

void print_update(const UpdateRecord& r) {
  std::cout << to_string(r.kind) << " " << r.object_id << " epoch " << r.epoch_before << " -> " << r.epoch_after;
  if (!r.gate_ids.empty()) {
    std::cout << " gates";
    for (auto g : r.gate_ids) std::cout << " " << g;
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden-policy attribute-based access control toolkit"};
  app.require_subcommand(1);
  std::string dir = "huap-data";
  if (const char* d = std::getenv("HUAP_DIR"); d != nullptr && *d != '\0') dir = d;
  std::optional<std::uint64_t> seed_opt;
  app.add_option("--dir", dir, "Workspace directory (env HUAP_DIR)");
  app.add_option("--seed", seed_opt, "Deterministic seed (env HUAP_SEED)");

  std::function<void()> action;
  auto ws = [&] {
    std::optional<std::uint64_t> seed = seed_opt ? seed_opt : env_seed();
    return Workspace(dir, seed);
  };

  // setup
  std::string universe_file;
  auto* setup = app.add_subcommand("setup", "Attribute authority: generate system keys for a universe");
  setup->add_option("--universe", universe_file, "Universe JSON file")->required();
  setup->callback([&] {
    action = [&] {
      Workspace w = ws();
      if (w.has("public/pk.huap")) throw ProtocolError("workspace already set up");
      const json uj = parse_json_text(read_text(universe_file));
      const Universe u = universe_from_json(uj);
      Rng rng = w.rng("setup");
      const SystemKeys keys = system_setup(rng);
      write_text(w.path("universe.json"), universe_to_json(u).dump(2) + "\n");
      w.save("authority/mk.huap", keys.mk);
      w.save("public/pk.huap", keys.pk);
      std::cout << "system keys written to " << dir << "\n";
    };
  });

  // keygen
  std::string attrs_file, key_out;
  auto* keygen = app.add_subcommand("keygen", "Attribute authority: issue an attribute key");
  keygen->add_option("--attrs", attrs_file, "Attribute list JSON file")->required();
  keygen->add_option("--out", key_out, "Key output file")->required();
  keygen->callback([&] {
    action = [&] {
      Workspace w = ws();
      const Universe u = w.universe();
      const AttributeList list = attribute_list_from_json(u, parse_json_text(read_text(attrs_file)));
      const auto pk = w.load<SystemPublicKey>("public/pk.huap", "system public key");
      const auto mk = w.load<SystemMasterKey>("authority/mk.huap", "master key");
      Rng rng = w.rng("keygen");
      write_bytes(key_out, encode(attr_keygen(pk, mk, u, list, rng)));
      std::cout << "attribute key written to " << key_out << "\n";
    };
  });

  // owner-setup
  auto* owner_setup = app.add_subcommand("owner-setup", "Data owner: generate owner parameters");
  owner_setup->callback([&] {
    action = [&] {
      Workspace w = ws();
      if (w.has("owner/sp.huap")) throw ProtocolError("owner parameters already exist");
      const auto pk = w.load<SystemPublicKey>("public/pk.huap", "system public key");
      Rng rng = w.rng("owner-setup");
      const OwnerParams params = owner_param_setup(pk, rng);
      w.save("owner/sp.huap", params.sp);
      w.save("public/pp.huap", params.pp);
      std::cout << "owner parameters written\n";
    };
  });

  // rkey
  auto* rkey = app.add_subcommand("rkey", "Data owner: issue the cloud re-encryption key");
  rkey->callback([&] {
    action = [&] {
      Workspace w = ws();
      if (!w.has("owner/sp.huap")) throw ProtocolError("run owner-setup first");
      if (w.has("owner/rk.huap")) throw ProtocolError("re-encryption key already issued");
      Rng rng = w.rng("rkey");
      const ReencKey rk = reenc_keygen(rng);
      w.save("owner/rk.huap", rk);
      w.save("cloud/rk.huap", rk);
      std::cout << "re-encryption key delivered to the cloud\n";
    };
  });

  // enc-offline
  std::size_t pool_size = kDefaultPoolSize;
  std::string device = "device";
  auto* enc_offline = app.add_subcommand("enc-offline", "Device: precompute offline ciphertexts");
  enc_offline->add_option("--pool", pool_size, "Number of offline ciphertexts to add")->check(CLI::Range(1, 4096));
  enc_offline->add_option("--device", device, "Device name");
  enc_offline->callback([&] {
    action = [&] {
      Workspace w = ws();
      const auto pk = w.load<SystemPublicKey>("public/pk.huap", "system public key");
      const auto pp = w.load<DataPublicParams>("public/pp.huap", "owner public parameters");
      const fs::path pdir = pool_dir(w, device);
      const auto existing = pool_files(pdir);
      std::size_t next = 0;
      if (!existing.empty()) next = std::stoul(existing.back().stem().string()) + 1;
      Rng rng = w.rng("enc-offline:" + device);
      for (std::size_t k = 0; k < pool_size; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "%010zu.huap", next + k);
        write_bytes(pdir / name, encode(offline_encrypt(pk, pp, rng)));
      }
      std::cout << device << " pool: " << existing.size() + pool_size << " offline ciphertexts\n";
    };
  });

  // enc-online
  std::string in_file, object_id;
  auto* enc_online = app.add_subcommand("enc-online", "Device: encrypt a file into a cloud object");
  enc_online->add_option("--in", in_file, "Plaintext file")->required();
  enc_online->add_option("--object", object_id, "Cloud object id")->required();
  enc_online->add_option("--device", device, "Device name");
  enc_online->callback([&] {
    action = [&] {
      Workspace w = ws();
      const Bytes plaintext = read_bytes(in_file);
      const auto files = pool_files(pool_dir(w, device));
      if (files.empty()) throw InvalidInput("offline pool of " + device + " is empty (run enc-offline)");
      OfflineCiphertext off = decode<OfflineCiphertext>(read_bytes(files.front()));
      fs::remove(files.front());  // consumed before anything leaves the device
      Rng rng = w.rng("enc-online:" + device);
      const TargetElem m = random_target_elem(rng);
      const Bytes sealed = seal_payload(m, plaintext, rng);
      const MessageCiphertext ct = online_encrypt(m, off);
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      const UpdateRecord r = mgr.store_message(object_id, ct, sealed, device, 0);
      std::cout << "message " << mgr.object(object_id).cloud.messages.size() - 1 << " of " << object_id
                << " stored (" << files.size() - 1 << " offline ciphertexts left)\n";
      (void)r;
    };
  });

  // policy
  std::string policy_file;
  auto* policy = app.add_subcommand("policy", "Data owner: encrypt an access policy for an object");
  policy->add_option("--file", policy_file, "Policy JSON file")->required();
  policy->add_option("--object", object_id, "Cloud object id")->required();
  policy->callback([&] {
    action = [&] {
      Workspace w = ws();
      const Universe u = w.universe();
      const json pj = parse_json_text(read_text(policy_file));
      const Policy p = policy_from_json(u, pj);
      const auto pk = w.load<SystemPublicKey>("public/pk.huap", "system public key");
      const auto pp = w.load<DataPublicParams>("public/pp.huap", "owner public parameters");
      const auto sp = w.load<DataSecretParams>("owner/sp.huap", "owner secret parameters");
      const auto rk = w.load<ReencKey>("owner/rk.huap", "owner re-encryption key");
      Rng rng = w.rng("policy");
      const PolicyCiphertext pct = anon_encrypt(pk, pp, sp, rk, u, p, rng);
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      mgr.store_policy(object_id, pct, policy_expirations(pj), "owner", 0);
      std::cout << "policy with " << p.gates.size() << " gate(s) stored for " << object_id << "\n";
    };
  });

  // reencrypt
  std::optional<std::uint64_t> epoch;
  std::string ct_out;
  auto* reenc = app.add_subcommand("reencrypt", "Cloud: publish an object at a new epoch");
  reenc->add_option("--object", object_id, "Cloud object id")->required();
  reenc->add_option("--epoch", epoch, "Epoch to publish (default: current + 1)");
  reenc->add_option("--out", ct_out, "Also write the published ciphertext here");
  reenc->callback([&] {
    action = [&] {
      Workspace w = ws();
      Rng rng = w.rng("reencrypt");
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      const std::uint64_t target = epoch ? *epoch : mgr.object(object_id).epoch + 1;
      const UserCiphertext uct = mgr.publish(object_id, target, "cloud", 0);
      if (!ct_out.empty()) write_bytes(ct_out, encode(uct));
      std::cout << object_id << " published at epoch " << uct.epoch << "\n";
    };
  });

  // decrypt
  std::string key_file, out_file;
  std::size_t message_index = 0;
  auto* decrypt = app.add_subcommand("decrypt", "Data user: recover a message of a published object");
  decrypt->add_option("--key", key_file, "Attribute key file")->required();
  decrypt->add_option("--object", object_id, "Cloud object id")->required();
  decrypt->add_option("--message", message_index, "Message index within the object");
  decrypt->add_option("--out", out_file, "Plaintext output file")->required();
  decrypt->callback([&] {
    action = [&] {
      Workspace w = ws();
      const auto key = decode<AttrSecretKey>(read_bytes(key_file));
      const auto pp = w.load<DataPublicParams>("public/pp.huap", "owner public parameters");
      DirectoryObjectStore store = w.cloud_store();
      const auto obj = store.load(object_id);
      if (!obj) throw ProtocolError("unknown object '" + object_id + "'");
      if (!obj->published) throw ProtocolError(object_id + " is not published");
      if (message_index >= obj->payloads.size()) throw InvalidInput("message index out of range");
      const auto d = anon_decrypt(pp, *obj->published, key, message_index);
      if (!d) throw Rejected("access denied (no matching gate)");
      write_bytes(out_file, open_payload(d->message, obj->payloads[message_index]));
      std::cout << "recovered message " << message_index << " of " << object_id << " (epoch " << obj->published->epoch
                << ", gate " << d->gate + 1 << ")\n";
    };
  });

  // update
  std::uint32_t gate_id = 0;
  std::string gate_file;
  std::optional<std::int64_t> expires_at;
  std::int64_t now = 0;
  auto* update = app.add_subcommand("update", "Policy updates");
  update->require_subcommand(1);
  auto* del = update->add_subcommand("delete", "Data owner: delete a gate (cloud re-encrypts)");
  del->add_option("--object", object_id, "Cloud object id")->required();
  del->add_option("--gate", gate_id, "Gate id (1-based, as assigned)")->required();
  del->callback([&] {
    action = [&] {
      Workspace w = ws();
      Rng rng = w.rng("update-delete");
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      print_update(mgr.delete_gate(object_id, gate_id, "owner", 0));
    };
  });
  auto* add = update->add_subcommand("add", "Data owner: add a gate");
  add->add_option("--object", object_id, "Cloud object id")->required();
  add->add_option("--gate-file", gate_file, "JSON file with one gate")->required();
  add->add_option("--expires-at", expires_at, "Expiration time");
  add->callback([&] {
    action = [&] {
      Workspace w = ws();
      const Universe u = w.universe();
      json gj = parse_json_text(read_text(gate_file));
      if (gj.is_object() && gj.contains("gates")) {
        if (!gj["gates"].is_array() || gj["gates"].size() != 1) throw InvalidInput("gate file must hold one gate");
        gj = gj["gates"][0];
      }
      const json pj{{"gates", json::array({gj})}};
      std::optional<std::int64_t> expiry = expires_at ? expires_at : policy_expirations(pj)[0];
      const Policy p = policy_from_json(u, pj);
      const auto pk = w.load<SystemPublicKey>("public/pk.huap", "system public key");
      const auto pp = w.load<DataPublicParams>("public/pp.huap", "owner public parameters");
      const auto sp = w.load<DataSecretParams>("owner/sp.huap", "owner secret parameters");
      const auto rk = w.load<ReencKey>("owner/rk.huap", "owner re-encryption key");
      Rng rng = w.rng("update-add");
      const PolicyCiphertext pct = anon_encrypt(pk, pp, sp, rk, u, p, rng);
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      print_update(mgr.add_gate(object_id, pct.gates[0], pct.dims, expiry, "owner", 0));
    };
  });
  auto* sweep = update->add_subcommand("sweep", "Cloud: delete expired gates");
  sweep->add_option("--now", now, "Current time")->required();
  sweep->callback([&] {
    action = [&] {
      Workspace w = ws();
      Rng rng = w.rng("update-sweep");
      DirectoryObjectStore store = w.cloud_store();
      LifecycleManager mgr = cloud_manager(w, store, rng);
      const auto records = mgr.sweep_expirations(now, "cloud");
      if (records.empty()) std::cout << "nothing expired\n";
      for (const auto& r : records) print_update(r);
    };
  });

  // bench
  std::string n_list = "10,20,30,40,50", bench_ops;
  std::size_t ni = 10, m = 1, trials = 3;
  bool as_json = false;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Benchmark operations with exact operation counts");
  bench->add_option("--n", n_list, "Comma-separated attribute counts");
  bench->add_option("--ni", ni, "Values per attribute");
  bench->add_option("--m", m, "Gates per policy");
  bench->add_option("--trials", trials, "Trials per measurement");
  bench->add_option("--ops", bench_ops, "Comma-separated subset of operations");
  bench->add_flag("--json", as_json, "Emit JSON instead of CSV");
  bench->add_option("--out", bench_out, "Write the report here instead of standard output");
  int bench_status = 0;
  bench->callback([&] {
    action = [&] {
      std::vector<GridPoint> grid;
      for (std::size_t n : parse_list(n_list)) grid.push_back({n, ni, m});
      std::vector<std::string> ops(std::begin(kBenchOps), std::end(kBenchOps));
      if (!bench_ops.empty()) {
        ops.clear();
        std::stringstream ss(bench_ops);
        std::string op;
        while (std::getline(ss, op, ',')) ops.push_back(op);
      }
      const std::uint64_t seed = seed_opt ? *seed_opt : env_seed().value_or(1);
      const BenchReport report = bench_run(grid, trials, seed, ops);
      const std::string text = as_json ? to_json(report).dump(2) + "\n" : to_csv(report);
      if (bench_out.empty()) std::cout << text;
      else write_text(bench_out, text);
      for (const auto& r : report.rows) {
        if (!r.ok()) {
          std::cerr << "counter mismatch: " << r.op << " at n=" << r.point.n << "\n";
          bench_status = kExitInternal;
        }
      }
    };
  });

  // scenario
  std::string script_file, store_dir, transcript_out;
  auto* scenario = app.add_subcommand("scenario", "Run a multi-actor scenario script");
  scenario->add_option("--script", script_file, "Scenario JSON file")->required();
  scenario->add_option("--store", store_dir, "Cloud store directory (default: <dir>/scenario-store)");
  scenario->add_option("--out", transcript_out, "Write the transcript here instead of standard output");
  scenario->callback([&] {
    action = [&] {
      const json script = parse_json_text(read_text(script_file));
      const fs::path sdir = store_dir.empty() ? fs::path(dir) / "scenario-store" : fs::path(store_dir);
      std::optional<std::uint64_t> seed = seed_opt ? seed_opt : env_seed();
      const Transcript t = run_scenario(script, sdir, seed);
      if (transcript_out.empty()) std::cout << t.to_jsonl();
      else write_text(transcript_out, t.to_jsonl());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    action();
    return bench_status;
  } catch (const Rejected& e) {
    std::cerr << e.what() << "\n";
    return kExitRejected;
  } catch (const AuthFailure& e) {
    std::cerr << "payload authentication failed: " << e.what() << "\n";
    return kExitRejected;
  } catch (const ScenarioFailure& e) {
    std::cerr << "scenario failed: " << e.what() << "\n";
    return kExitInternal;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ProtocolError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
