#include "huap/harness.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "huap/payload.hpp"
#include "huap/policy_json.hpp"
#include "huap/wire.hpp"

namespace huap {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(ByteView data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

namespace {

std::string hex_name(const std::string& id) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : id) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  return out;
}

std::optional<std::string> unhex_name(const std::string& name) {
  if (name.size() % 2 != 0) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < name.size(); i += 2) {
    int v = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      const char c = name[i + k];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else return std::nullopt;
      v = v * 16 + d;
    }
    out.push_back(static_cast<char>(v));
  }
  return out;
}

[[noreturn]] void io_failure(const std::string& what, const fs::path& path) {
  throw Error(what + " " + path.string() + ": " + std::strerror(errno));
}

void write_fully(int fd, ByteView data, const fs::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t k = ::write(fd, data.data() + done, data.size() - done);
    if (k < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_failure("write", path);
    }
    done += static_cast<std::size_t>(k);
  }
}

void fsync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) io_failure("open", dir);
  ::fsync(fd);
  ::close(fd);
}

// Temp-write, fsync, rename, fsync the directory.
void atomic_replace(const fs::path& target, ByteView data) {
  const fs::path tmp = target.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) io_failure("open", tmp);
  write_fully(fd, data, tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_failure("fsync", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), target.c_str()) != 0) io_failure("rename", tmp);
  fsync_directory(target.parent_path());
}

void append_line(const fs::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0600);
  if (fd < 0) io_failure("open", path);
  const std::string text = line + "\n";
  write_fully(fd, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), path);
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_failure("fsync", path);
  }
  ::close(fd);
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Bytes text_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

Bytes parse_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw InvalidInput("odd-length hex payload");
  Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const auto byte = unhex_name(hex.substr(i, 2));
    if (!byte) throw InvalidInput("bad hex payload");
    out.push_back(static_cast<std::uint8_t>((*byte)[0]));
  }
  return out;
}

template <class T>
T required(const json& a, const char* field) {
  if (!a.contains(field)) throw InvalidInput(std::string("action is missing '") + field + "'");
  try {
    return a.at(field).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("action field '") + field + "' has the wrong type");
  }
}

template <class T>
T optional_field(const json& a, const char* field, T fallback) {
  if (!a.contains(field) || a.at(field).is_null()) return fallback;
  try {
    return a.at(field).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("action field '") + field + "' has the wrong type");
  }
}

std::string error_class(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const CapabilityError&) {
    return "capability";
  } catch (const ProtocolError&) {
    return "protocol";
  } catch (const InvalidInput&) {
    return "invalid";
  } catch (...) {
    return "other";
  }
}

}  // namespace

// --- DirectoryObjectStore ----------------------------------------------------

DirectoryObjectStore::DirectoryObjectStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "objects");
  const fs::path log_path = root_ / "updates.jsonl";
  if (!fs::exists(log_path)) return;
  std::ifstream in(log_path);
  std::string line;
  std::uint64_t kept_bytes = 0;
  bool torn = false;
  while (std::getline(in, line)) {
    const bool terminated = !in.eof();
    try {
      if (!terminated) throw InvalidInput("unterminated");
      log_.push_back(update_record_from_json(json::parse(line)));
      kept_bytes += line.size() + 1;
    } catch (const std::exception&) {
      // Only a torn final line is tolerated; it is dropped.
      if (terminated) throw InvalidInput("corrupt update log line " + std::to_string(log_.size() + 1));
      torn = true;
    }
  }
  if (torn) fs::resize_file(log_path, kept_bytes);
}

fs::path DirectoryObjectStore::object_path(const std::string& object_id) const {
  if (object_id.empty()) throw InvalidInput("empty object id");
  return root_ / "objects" / (hex_name(object_id) + ".obj");
}

std::optional<StoredObject> DirectoryObjectStore::load_locked(const std::string& object_id) {
  if (auto it = cache_.find(object_id); it != cache_.end()) return it->second;
  const fs::path path = object_path(object_id);
  if (!fs::exists(path)) return std::nullopt;
  StoredObject obj = decode_stored_object(read_file(path));
  if (obj.object_id != object_id) throw InvalidInput("object file does not match its name");
  cache_.emplace(object_id, obj);
  return obj;
}

std::optional<StoredObject> DirectoryObjectStore::load(const std::string& object_id) {
  std::lock_guard lock(mu_);
  return load_locked(object_id);
}

void DirectoryObjectStore::save(const StoredObject& object) {
  std::lock_guard lock(mu_);
  if (auto old = load_locked(object.object_id); old && object.epoch < old->epoch) {
    throw ProtocolError("refusing to lower the epoch of '" + object.object_id + "'");
  }
  atomic_replace(object_path(object.object_id), encode(object));
  cache_[object.object_id] = object;
}

std::vector<std::string> DirectoryObjectStore::list() {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / "objects")) {
    if (entry.path().extension() != ".obj") continue;
    if (auto id = unhex_name(entry.path().stem().string())) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

UpdateRecord DirectoryObjectStore::append_log(UpdateRecord record) {
  std::lock_guard lock(mu_);
  record.seq = log_.size() + 1;
  append_line(root_ / "updates.jsonl", to_json(record).dump());
  log_.push_back(record);
  return record;
}

std::vector<UpdateRecord> DirectoryObjectStore::log() {
  std::lock_guard lock(mu_);
  return log_;
}

// --- Transcript ----------------------------------------------------------------

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) out += e.dump() + "\n";
  return out;
}

std::vector<json> Transcript::messages_from(const std::string& actor) const {
  std::vector<json> out;
  for (const auto& e : entries) {
    if (e.value("event", "") == "message" && e.value("from", "") == actor) out.push_back(e);
  }
  return out;
}

// --- Scenario --------------------------------------------------------------------

Scenario::Scenario(std::uint64_t seed, Universe universe, fs::path store_dir)
    : seed_(seed),
      universe_(std::move(universe)),
      store_dir_(std::move(store_dir)),
      aa_{std::nullopt, Rng(seed, "AA")},
      do_{std::nullopt, std::nullopt, std::nullopt, Rng(seed, "DO")} {
  if (const auto v = validate(universe_); !v.empty()) throw InvalidInput(v.front().message);
  csp_.store = std::make_unique<DirectoryObjectStore>(store_dir_);
}

const Device& Scenario::device(const std::string& name) const {
  auto it = devices_.find(name);
  if (it == devices_.end()) throw InvalidInput("unknown device '" + name + "'");
  return it->second;
}

const DataUser& Scenario::user(const std::string& name) const {
  auto it = users_.find(name);
  if (it == users_.end()) throw InvalidInput("unknown user '" + name + "'");
  return it->second;
}

Device& Scenario::device_mut(const std::string& name) {
  if (name.empty()) throw InvalidInput("empty device name");
  auto it = devices_.find(name);
  if (it == devices_.end()) {
    it = devices_.emplace(name, Device{name, std::nullopt, std::nullopt, {}, Rng(seed_, "Dev:" + name)}).first;
  }
  return it->second;
}

DataUser& Scenario::user_mut(const std::string& name) {
  if (name.empty()) throw InvalidInput("empty user name");
  return users_.try_emplace(name, DataUser{name, std::nullopt, std::nullopt, std::nullopt, {}}).first->second;
}

const SystemPublicKey& Scenario::public_key(std::optional<SystemPublicKey>& slot, const std::string& actor) {
  if (!slot) {
    if (!published_pk_) throw CapabilityError(actor + " has no system public key (setup has not run)");
    slot = decode<SystemPublicKey>(*published_pk_);
  }
  return *slot;
}

const DataPublicParams& Scenario::public_params(std::optional<DataPublicParams>& slot, const std::string& actor) {
  if (!slot) {
    if (!published_pp_) throw CapabilityError(actor + " has no owner parameters (param-setup has not run)");
    slot = decode<DataPublicParams>(*published_pp_);
  }
  return *slot;
}

LifecycleManager Scenario::cloud_manager(Rng& rng) {
  if (!csp_.pk || !csp_.pp) throw CapabilityError("CSP has no public parameters");
  if (!csp_.rk) throw CapabilityError("CSP has no re-encryption key (rkey has not run)");
  return LifecycleManager(*csp_.pk, *csp_.pp, *csp_.rk, *csp_.store, rng);
}

Bytes Scenario::send(const std::string& from, const std::string& to, const std::string& kind, Bytes bytes,
                     json meta) {
  json e{{"event", "message"}, {"from", from}, {"to", to}, {"kind", kind},
         {"size", bytes.size()}, {"sha256", sha256_hex(bytes)}};
  if (!meta.is_null()) e["meta"] = std::move(meta);
  note(std::move(e));
  return bytes;
}

void Scenario::note(json entry) { transcript_.entries.push_back(std::move(entry)); }

void Scenario::note_update(const UpdateRecord& r) {
  note({{"event", "update"},
        {"kind", to_string(r.kind)},
        {"object", r.object_id},
        {"gates", r.gate_ids},
        {"epoch_before", r.epoch_before},
        {"epoch_after", r.epoch_after},
        {"issued_by", r.issued_by}});
  if (r.epoch_after != r.epoch_before) {
    note({{"event", "epoch"}, {"object", r.object_id}, {"from", r.epoch_before}, {"to", r.epoch_after}});
  }
}

void Scenario::run_all(const json& actions) {
  if (!actions.is_array()) throw InvalidInput("actions must be an array");
  for (const auto& a : actions) run(a);
}

void Scenario::run(const json& a) {
  if (!a.is_object()) throw InvalidInput("action must be an object");
  const std::string op = required<std::string>(a, "op");
  const auto expected = optional_field<std::string>(a, "expect_error", "");
  const std::int64_t now = optional_field<std::int64_t>(a, "at", static_cast<std::int64_t>(step_));
  if (op != "restart") ++step_;
  try {
    dispatch(op, a, now);
  } catch (const ScenarioFailure&) {
    throw;
  } catch (const Error&) {
    if (expected.empty()) throw;
    const std::string got = error_class(std::current_exception());
    if (got != expected) {
      throw ScenarioFailure("action '" + op + "' failed with " + got + " error, expected " + expected);
    }
    note({{"event", "rejected"}, {"op", op}, {"error", got}});
    return;
  }
  if (!expected.empty()) throw ScenarioFailure("action '" + op + "' succeeded, expected " + expected + " error");
}

void Scenario::dispatch(const std::string& op, const json& a, std::int64_t now) {
  if (op == "setup") return do_setup();
  if (op == "keygen") return do_keygen(a);
  if (op == "param-setup") return do_param_setup();
  if (op == "rkey") return do_rkey();
  if (op == "offline-pool") return do_offline_pool(a);
  if (op == "encrypt") return do_encrypt(a, now);
  if (op == "define-policy") return do_define_policy(a, now);
  if (op == "reencrypt") return do_reencrypt(a, now);
  if (op == "access") return do_access(a);
  if (op == "delete") return do_delete(a, now);
  if (op == "add") return do_add(a, now);
  if (op == "sweep") return do_sweep(a, now);
  if (op == "restart") return do_restart();
  throw InvalidInput("unknown action '" + op + "'");
}

void Scenario::do_setup() {
  if (aa_.keys) throw ProtocolError("system setup already ran");
  aa_.keys = system_setup(aa_.rng);
  published_pk_ = send("AA", "*", "system-public-key", encode(aa_.keys->pk));
  csp_.pk = decode<SystemPublicKey>(*published_pk_);
}

void Scenario::do_keygen(const json& a) {
  if (!aa_.keys) throw CapabilityError("AA has no master key (setup has not run)");
  DataUser& u = user_mut(required<std::string>(a, "user"));
  const AttributeList list = attribute_list_from_json(universe_, required<json>(a, "attributes"));
  const AttrSecretKey key = attr_keygen(aa_.keys->pk, aa_.keys->mk, universe_, list, aa_.rng);
  const Bytes wire = send("AA", u.name, "attribute-secret-key", encode(key));
  AttrSecretKey received = decode<AttrSecretKey>(wire);
  if (!attr_key_self_test(public_key(u.pk, u.name), universe_, received)) {
    throw ProtocolError(u.name + " received a key that fails its self-test");
  }
  u.key = std::move(received);
  u.cached_dk.clear();
}

void Scenario::do_param_setup() {
  if (do_.params) throw ProtocolError("owner parameters already set up");
  do_.params = owner_param_setup(public_key(do_.pk, "DO"), do_.rng);
  published_pp_ = send("DO", "*", "data-public-params", encode(do_.params->pp));
  csp_.pp = decode<DataPublicParams>(*published_pp_);
}

void Scenario::do_rkey() {
  if (!do_.params) throw CapabilityError("DO has no owner parameters (param-setup has not run)");
  if (do_.rk) throw ProtocolError("re-encryption key already issued");
  do_.rk = reenc_keygen(do_.rng);
  // Pre-shared secure channel: the key is injected, only its delivery is logged.
  send("DO", "CSP", "reencryption-key", encode(*do_.rk), json{{"channel", "secure"}});
  csp_.rk = do_.rk;
}

void Scenario::do_offline_pool(const json& a) {
  Device& d = device_mut(required<std::string>(a, "device"));
  const auto size = optional_field<std::size_t>(a, "size", kDefaultPoolSize);
  if (size == 0 || size > 4096) throw InvalidInput("offline pool size out of range");
  const SystemPublicKey& pk = public_key(d.pk, d.name);
  const DataPublicParams& pp = public_params(d.pp, d.name);
  for (std::size_t k = 0; k < size; ++k) d.pool.push_back(offline_encrypt(pk, pp, d.rng));
  note({{"event", "offline-pool"}, {"device", d.name}, {"added", size}, {"pool", d.pool.size()}});
}

void Scenario::do_encrypt(const json& a, std::int64_t now) {
  Device& d = device_mut(required<std::string>(a, "device"));
  const std::string object = required<std::string>(a, "object");
  Bytes payload;
  if (a.contains("payload_hex")) {
    payload = parse_hex(required<std::string>(a, "payload_hex"));
  } else {
    const std::string text = required<std::string>(a, "payload");
    payload.assign(text.begin(), text.end());
  }
  if (d.pool.empty()) throw ProtocolError("offline pool of " + d.name + " is empty");
  const TargetElem m = random_target_elem(d.rng);
  const Bytes sealed = seal_payload(m, payload, d.rng);
  const MessageCiphertext ct = online_encrypt(m, d.pool.front());
  d.pool.pop_front();

  const Bytes ct_wire = send(d.name, "CSP", "message-ciphertext", encode(ct), json{{"object", object}});
  const Bytes sealed_wire = send(d.name, "CSP", "sealed-payload", sealed, json{{"object", object}});
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  note_update(mgr.store_message(object, decode<MessageCiphertext>(ct_wire), sealed_wire, d.name, now));
}

void Scenario::do_define_policy(const json& a, std::int64_t now) {
  if (!do_.params) throw CapabilityError("DO has no owner parameters (param-setup has not run)");
  if (!do_.rk) throw CapabilityError("DO has no re-encryption key (rkey has not run)");
  const std::string object = required<std::string>(a, "object");
  if (!a.contains("policy")) throw InvalidInput("action is missing 'policy'");
  const json& policy_json = a.at("policy");
  const Policy policy = policy_from_json(universe_, policy_json);
  const auto expirations = policy_expirations(policy_json);
  const PolicyCiphertext pct =
      anon_encrypt(*do_.pk, do_.params->pp, do_.params->sp, *do_.rk, universe_, policy, do_.rng);
  json meta{{"object", object}, {"expirations", json::array()}};
  for (const auto& e : expirations) meta["expirations"].push_back(e ? json(*e) : json(nullptr));
  const Bytes wire = send("DO", "CSP", "policy-ciphertext", encode(pct), meta);
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  note_update(mgr.store_policy(object, decode<PolicyCiphertext>(wire), expirations, "DO", now));
}

void Scenario::do_reencrypt(const json& a, std::int64_t now) {
  const std::string object = required<std::string>(a, "object");
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  const std::uint64_t current = mgr.object(object).epoch;
  const auto epoch = optional_field<std::uint64_t>(a, "epoch", current + 1);
  const UserCiphertext uct = mgr.publish(object, epoch, "CSP", now);
  const auto log = csp_.store->log();
  note_update(log.back());
  note({{"event", "published"}, {"object", object}, {"epoch", uct.epoch}, {"size", encode(uct).size()}});
}

void Scenario::do_access(const json& a) {
  DataUser& u = user_mut(required<std::string>(a, "user"));
  const std::string object = required<std::string>(a, "object");
  const auto index = optional_field<std::size_t>(a, "message", 0);
  const bool use_cached = optional_field<bool>(a, "use_cached_dk", false);
  const auto expect = optional_field<std::string>(a, "expect", "");
  const DataPublicParams& pp = public_params(u.pp, u.name);
  if (!use_cached && !u.key) throw CapabilityError(u.name + " holds no attribute key");
  if (use_cached && !u.cached_dk.count(object)) throw CapabilityError(u.name + " holds no cached key for " + object);

  send(u.name, "CSP", "access-request", text_bytes(object), json{{"object", object}, {"message", index}});
  json entry{{"event", "access"}, {"user", u.name}, {"object", object}, {"message", index}};
  std::string outcome;

  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  const auto published = mgr.published(object);
  if (!published) {
    send("CSP", u.name, "access-refused", text_bytes(object), json{{"reason", "not published"}});
    outcome = "unavailable";
  } else {
    if (index >= published->messages.size()) throw InvalidInput("message index out of range");
    const UserCiphertext uct = decode<UserCiphertext>(send("CSP", u.name, "user-ciphertext", encode(*published)));
    const Bytes sealed = send("CSP", u.name, "sealed-payload", mgr.payload(object, index));
    entry["epoch"] = uct.epoch;

    std::optional<TargetElem> m;
    if (use_cached) {
      m = decrypt_message(pp, uct.messages[index], u.cached_dk.at(object).dk);
    } else if (auto d = anon_decrypt(pp, uct, *u.key, index)) {
      u.cached_dk[object] = d->dk;
      entry["gate"] = d->gate;
      m = d->message;
    }
    if (!m) {
      outcome = "denied";
    } else {
      try {
        entry["payload_sha256"] = sha256_hex(open_payload(*m, sealed));
        outcome = "granted";
      } catch (const AuthFailure&) {
        outcome = "auth-failure";
      }
    }
  }
  entry["outcome"] = outcome;
  note(entry);
  if (!expect.empty() && expect != outcome) {
    throw ScenarioFailure(u.name + " access to " + object + " was " + outcome + ", expected " + expect);
  }
}

void Scenario::do_delete(const json& a, std::int64_t now) {
  if (!do_.params) throw CapabilityError("DO has no owner parameters (param-setup has not run)");
  const std::string object = required<std::string>(a, "object");
  const auto gate = required<std::uint32_t>(a, "gate");
  const json request{{"action", "delete"}, {"object", object}, {"gate", gate}};
  send("DO", "CSP", "update-request", text_bytes(request.dump()), request);
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  note_update(mgr.delete_gate(object, gate, "DO", now));
}

void Scenario::do_add(const json& a, std::int64_t now) {
  if (!do_.params) throw CapabilityError("DO has no owner parameters (param-setup has not run)");
  if (!do_.rk) throw CapabilityError("DO has no re-encryption key (rkey has not run)");
  const std::string object = required<std::string>(a, "object");
  const json gate_json = required<json>(a, "gate");
  const Policy single = policy_from_json(universe_, json{{"gates", json::array({gate_json})}});
  std::optional<std::int64_t> expires;
  if (a.contains("expires_at") && !a.at("expires_at").is_null()) expires = required<std::int64_t>(a, "expires_at");
  const PolicyCiphertext pct =
      anon_encrypt(*do_.pk, do_.params->pp, do_.params->sp, *do_.rk, universe_, single, do_.rng);
  json meta{{"object", object}};
  if (expires) meta["expires_at"] = *expires;
  const Bytes wire = send("DO", "CSP", "gate-ciphertext", encode(pct.gates[0], pct.dims), meta);
  Dimensions dims;
  const GatePair pair = decode_gate_pair(wire, dims);
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  note_update(mgr.add_gate(object, pair, dims, expires, "DO", now));
}

void Scenario::do_sweep(const json& a, std::int64_t now) {
  const auto at = optional_field<std::int64_t>(a, "now", now);
  Rng rng(seed_, "CSP:" + std::to_string(step_));
  LifecycleManager mgr = cloud_manager(rng);
  const auto records = mgr.sweep_expirations(at, "CSP");
  note({{"event", "sweep"}, {"now", at}, {"objects", records.size()}});
  for (const auto& r : records) note_update(r);
}

void Scenario::do_restart() {
  csp_.store.reset();
  csp_.store = std::make_unique<DirectoryObjectStore>(store_dir_);
  note({{"event", "restart"}, {"actor", "CSP"}, {"objects", csp_.store->list().size()}});
}

Transcript run_scenario(const json& script, const fs::path& store_dir, std::optional<std::uint64_t> seed_override) {
  if (!script.is_object()) throw InvalidInput("scenario script must be an object");
  std::uint64_t seed = 0;
  if (seed_override) {
    seed = *seed_override;
  } else {
    seed = optional_field<std::uint64_t>(script, "seed", 0);
  }
  Scenario s(seed, universe_from_json(required<json>(script, "universe")), store_dir);
  s.run_all(required<json>(script, "actions"));
  return s.transcript();
}

}  // namespace huap
