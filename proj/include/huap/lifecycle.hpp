// Cloud-side object lifecycle: storage of epoch-0 ciphertexts, publication at
// an epoch, gate deletion and addition, and expiration sweeps.
//
// Invariants per object:
//   - the stored policy part is always the epoch-0 form; publication
//     re-encrypts from it;
//   - at most one published ciphertext exists and it carries the current
//     epoch; older publications are replaced, never retained;
//   - epochs only grow; deletion and sweeps bump the epoch by one, additions
//     keep it.

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "huap/scheme.hpp"

namespace huap {

struct GateRecord {
  std::uint32_t gate_id = 0;
  std::optional<std::int64_t> expires_at;
  bool operator==(const GateRecord&) const = default;
};

struct StoredObject {
  std::string object_id;
  CloudCiphertext cloud;                 // epoch-0 form; dims empty until a policy arrives
  std::vector<GateRecord> gate_records;  // parallel to cloud.gates
  std::vector<Bytes> payloads;           // sealed payloads parallel to cloud.messages
  std::uint64_t epoch = 0;               // last published epoch; 0 = never published
  std::uint32_t next_gate_id = 1;
  std::optional<UserCiphertext> published;
  bool operator==(const StoredObject&) const = default;
};

Bytes encode(const StoredObject& v);
StoredObject decode_stored_object(ByteView data);

enum class UpdateKind { kCreate, kAppendMessage, kPublish, kDelete, kAdd, kSweep };
std::string to_string(UpdateKind kind);

struct UpdateRecord {
  std::uint64_t seq = 0;
  UpdateKind kind = UpdateKind::kCreate;
  std::string object_id;
  std::vector<std::uint32_t> gate_ids;
  std::uint64_t epoch_before = 0;
  std::uint64_t epoch_after = 0;
  std::string issued_by;
  std::int64_t timestamp = 0;
  bool operator==(const UpdateRecord&) const = default;
};

nlohmann::json to_json(const UpdateRecord& r);
UpdateRecord update_record_from_json(const nlohmann::json& j);

class ObjectStore {
 public:
  virtual ~ObjectStore() = default;
  virtual std::optional<StoredObject> load(const std::string& object_id) = 0;
  virtual void save(const StoredObject& object) = 0;
  virtual std::vector<std::string> list() = 0;
  // Append-only; seq is assigned by the store.
  virtual UpdateRecord append_log(UpdateRecord record) = 0;
  virtual std::vector<UpdateRecord> log() = 0;
};

class MemoryObjectStore : public ObjectStore {
 public:
  std::optional<StoredObject> load(const std::string& object_id) override;
  void save(const StoredObject& object) override;
  std::vector<std::string> list() override;
  UpdateRecord append_log(UpdateRecord record) override;
  std::vector<UpdateRecord> log() override;

 private:
  std::map<std::string, StoredObject> objects_;
  std::vector<UpdateRecord> log_;
};

class LifecycleManager {
 public:
  LifecycleManager(SystemPublicKey pk, DataPublicParams pp, ReencKey rk, ObjectStore& store, Rng& rng);

  // Installs the policy part of a new or message-only object. ProtocolError if
  // the object already has a policy.
  UpdateRecord store_policy(const std::string& object_id, const PolicyCiphertext& policy,
                            const std::vector<std::optional<std::int64_t>>& expirations,
                            const std::string& issued_by, std::int64_t now);
  // Appends a message part; re-encrypted at the current epoch if published.
  UpdateRecord store_message(const std::string& object_id, const MessageCiphertext& message, Bytes payload,
                             const std::string& issued_by, std::int64_t now);
  // Publishes at `epoch`, which must exceed the current epoch.
  UserCiphertext publish(const std::string& object_id, std::uint64_t epoch, const std::string& issued_by,
                         std::int64_t now);

  // Removes one gate, bumps the epoch and republishes from epoch 0. Deleting
  // the last gate withdraws the publication.
  UpdateRecord delete_gate(const std::string& object_id, std::uint32_t gate_id, const std::string& issued_by,
                           std::int64_t now);
  // Appends one gate; if published, only the new pair is re-encrypted at the
  // current epoch. Returns the record; the new id is record.gate_ids[0].
  UpdateRecord add_gate(const std::string& object_id, const GatePair& gate, const Dimensions& dims,
                        std::optional<std::int64_t> expires_at, const std::string& issued_by, std::int64_t now);
  // Deletes every gate with expires_at <= now, one epoch bump per object.
  std::vector<UpdateRecord> sweep_expirations(std::int64_t now, const std::string& issued_by);

  std::optional<UserCiphertext> published(const std::string& object_id);
  Bytes payload(const std::string& object_id, std::size_t index);
  StoredObject object(const std::string& object_id);

 private:
  StoredObject require(const std::string& object_id);
  void republish(StoredObject& obj, std::uint64_t epoch);
  UpdateRecord record(UpdateKind kind, const StoredObject& obj, std::vector<std::uint32_t> gate_ids,
                      std::uint64_t epoch_before, const std::string& issued_by, std::int64_t now);

  SystemPublicKey pk_;
  DataPublicParams pp_;
  ReencKey rk_;
  ObjectStore& store_;
  Rng& rng_;
  std::mutex mu_;
};

}  // namespace huap
