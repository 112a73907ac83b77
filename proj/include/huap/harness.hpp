// Multi-actor protocol harness: attribute authority, data owner, devices,
// cloud provider and data users exchanging encoded objects over an in-process
// bus, with the cloud persisting through a directory-backed store.
//
// Role records physically lack material the role must never hold: a Device
// has no owner secrets or re-encryption key, the CloudProvider has no owner
// secrets and no attribute keys, a DataUser has no re-encryption key.

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "huap/errors.hpp"
#include "huap/lifecycle.hpp"
#include "huap/rng.hpp"
#include "huap/scheme.hpp"

namespace huap {

// A scripted expectation did not hold.
class ScenarioFailure : public Error {
 public:
  using Error::Error;
};

// Layout under root:
//   objects/<hex(object_id)>.obj   encoded StoredObject, replaced atomically
//   updates.jsonl                  update log, one record per line
// Saves write a temp file, fsync it and rename it over the target, so a crash
// leaves either the old or the new object. Epochs never decrease: a save that
// would lower an object's epoch is refused. Reads are served from a
// write-through cache populated on first access.
class DirectoryObjectStore : public ObjectStore {
 public:
  explicit DirectoryObjectStore(std::filesystem::path root);

  std::optional<StoredObject> load(const std::string& object_id) override;
  void save(const StoredObject& object) override;
  std::vector<std::string> list() override;
  UpdateRecord append_log(UpdateRecord record) override;
  std::vector<UpdateRecord> log() override;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path object_path(const std::string& object_id) const;
  std::optional<StoredObject> load_locked(const std::string& object_id);

  std::filesystem::path root_;
  std::map<std::string, StoredObject> cache_;
  std::vector<UpdateRecord> log_;
  std::mutex mu_;
};

// --- actors ------------------------------------------------------------------

struct AttributeAuthority {
  std::optional<SystemKeys> keys;
  Rng rng;
};

struct DataOwner {
  std::optional<SystemPublicKey> pk;
  std::optional<OwnerParams> params;
  std::optional<ReencKey> rk;
  Rng rng;
};

struct Device {
  std::string name;
  std::optional<SystemPublicKey> pk;
  std::optional<DataPublicParams> pp;
  std::deque<OfflineCiphertext> pool;  // front is consumed next
  Rng rng;
};

struct CloudProvider {
  std::optional<SystemPublicKey> pk;
  std::optional<DataPublicParams> pp;
  std::optional<ReencKey> rk;
  std::unique_ptr<DirectoryObjectStore> store;
};

struct DataUser {
  std::string name;
  std::optional<SystemPublicKey> pk;
  std::optional<DataPublicParams> pp;
  std::optional<AttrSecretKey> key;
  std::map<std::string, DataDecryptionKey> cached_dk;  // last dk recovered per object
};

// --- transcript ----------------------------------------------------------------

// Totally ordered record of bus messages, epoch changes, update records,
// access outcomes, expected rejections and restarts. Entries carry sizes and
// SHA-256 digests of exchanged bytes, never the bytes themselves.
struct Transcript {
  std::vector<nlohmann::json> entries;

  std::string to_jsonl() const;
  // Bus messages sent by `actor`, in order.
  std::vector<nlohmann::json> messages_from(const std::string& actor) const;
};

inline constexpr std::size_t kDefaultPoolSize = 16;

// Script format (JSON):
//   {"seed": 7,
//    "universe": {"attributes": [...]},
//    "actions": [{"op": "setup"}, {"op": "keygen", "user": "alice", "attributes": {...}}, ...]}
//
// Actions and their arguments:
//   setup                                   AA generates and publishes PK
//   keygen        user, attributes          AA -> DU attribute key
//   param-setup                             DO generates and publishes PP
//   rkey                                    DO -> CSP re-encryption key (secure channel)
//   offline-pool  device, size?             Dev fills its offline pool (default 16)
//   encrypt       device, object, payload | payload_hex
//   define-policy object, policy            DO -> CSP policy ciphertext (gates may carry expires_at)
//   reencrypt     object, epoch?            CSP publishes (default: current epoch + 1)
//   access        user, object, message?, use_cached_dk?, expect?
//   delete        object, gate              DO -> CSP update request
//   add           object, gate, expires_at? DO -> CSP freshly encrypted gate
//   sweep         now                       CSP deletes expired gates
//   restart                                 CSP reopens its store from disk
// Any action may carry "at" (logical time, default: step number) and
// "expect_error" ("capability" | "protocol" | "invalid"); access may carry
// "expect" ("granted" | "denied" | "auth-failure" | "unavailable").
//
// Randomness: every actor except the cloud draws from its own stream
// Rng(seed, "<role>:<name>"); the cloud draws from a per-step stream, so a
// restart does not perturb later bytes.
class Scenario {
 public:
  Scenario(std::uint64_t seed, Universe universe, std::filesystem::path store_dir);

  void run(const nlohmann::json& action);
  void run_all(const nlohmann::json& actions);

  const Transcript& transcript() const { return transcript_; }
  const Universe& universe() const { return universe_; }
  const AttributeAuthority& authority() const { return aa_; }
  const DataOwner& owner() const { return do_; }
  const CloudProvider& cloud() const { return csp_; }
  const Device& device(const std::string& name) const;
  const DataUser& user(const std::string& name) const;

 private:
  void dispatch(const std::string& op, const nlohmann::json& a, std::int64_t now);
  Bytes send(const std::string& from, const std::string& to, const std::string& kind, Bytes bytes,
             nlohmann::json meta = nullptr);
  void note(nlohmann::json entry);
  void note_update(const UpdateRecord& r);

  Device& device_mut(const std::string& name);
  DataUser& user_mut(const std::string& name);
  const SystemPublicKey& public_key(std::optional<SystemPublicKey>& slot, const std::string& actor);
  const DataPublicParams& public_params(std::optional<DataPublicParams>& slot, const std::string& actor);
  LifecycleManager cloud_manager(Rng& rng);

  void do_setup();
  void do_keygen(const nlohmann::json& a);
  void do_param_setup();
  void do_rkey();
  void do_offline_pool(const nlohmann::json& a);
  void do_encrypt(const nlohmann::json& a, std::int64_t now);
  void do_define_policy(const nlohmann::json& a, std::int64_t now);
  void do_reencrypt(const nlohmann::json& a, std::int64_t now);
  void do_access(const nlohmann::json& a);
  void do_delete(const nlohmann::json& a, std::int64_t now);
  void do_add(const nlohmann::json& a, std::int64_t now);
  void do_sweep(const nlohmann::json& a, std::int64_t now);
  void do_restart();

  std::uint64_t seed_;
  Universe universe_;
  std::filesystem::path store_dir_;
  std::uint64_t step_ = 0;  // non-restart actions executed

  // Public bulletin: what AA and DO have published.
  std::optional<Bytes> published_pk_;
  std::optional<Bytes> published_pp_;

  AttributeAuthority aa_;
  DataOwner do_;
  CloudProvider csp_;
  std::map<std::string, Device> devices_;
  std::map<std::string, DataUser> users_;
  Transcript transcript_;
};

// Runs a whole script. The seed comes from the script unless overridden.
Transcript run_scenario(const nlohmann::json& script, const std::filesystem::path& store_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

// Hex SHA-256 of bytes.
std::string sha256_hex(ByteView data);

}  // namespace huap
