#include "huap/lifecycle.hpp"

#include <algorithm>

#include "huap/errors.hpp"
#include "huap/rng.hpp"
#include "huap/wire.hpp"

namespace huap {

// --- stored object encoding --------------------------------------------------

Bytes encode(const StoredObject& v) {
  if (v.gate_records.size() != v.cloud.gates.size() || v.payloads.size() != v.cloud.messages.size()) {
    throw InvalidInput("stored object bookkeeping out of step");
  }
  WireWriter w(WireType::kStoredObject);
  w.string(v.object_id);
  w.u64(v.epoch);
  w.u32(v.next_gate_id);
  const bool has_dims = !v.cloud.dims.values_per_attribute.empty();
  w.u8(has_dims ? 1 : 0);
  if (has_dims) w.dims(v.cloud.dims);
  w.u32(static_cast<std::uint32_t>(v.cloud.messages.size()));
  for (std::size_t k = 0; k < v.cloud.messages.size(); ++k) {
    write_message(w, v.cloud.messages[k]);
    w.bytes(v.payloads[k]);
  }
  w.u32(static_cast<std::uint32_t>(v.cloud.gates.size()));
  for (std::size_t j = 0; j < v.cloud.gates.size(); ++j) {
    w.u32(v.gate_records[j].gate_id);
    w.u8(v.gate_records[j].expires_at ? 1 : 0);
    w.i64(v.gate_records[j].expires_at.value_or(0));
    write_gate(w, v.cloud.gates[j], v.cloud.dims);
  }
  w.u8(v.published ? 1 : 0);
  if (v.published) {
    w.u64(v.published->epoch);
    w.u32(static_cast<std::uint32_t>(v.published->messages.size()));
    for (const auto& m : v.published->messages) write_message(w, m);
    w.u32(static_cast<std::uint32_t>(v.published->gates.size()));
    for (const auto& g : v.published->gates) write_gate(w, g, v.cloud.dims);
  }
  return std::move(w).finish();
}

StoredObject decode_stored_object(ByteView data) {
  WireReader r(data, WireType::kStoredObject);
  StoredObject v;
  v.object_id = r.string();
  v.epoch = r.u64();
  v.next_gate_id = r.u32();
  const std::uint8_t has_dims = r.u8();
  if (has_dims > 1) throw InvalidInput("bad flag");
  if (has_dims) v.cloud.dims = r.dims();
  const std::uint32_t messages = r.count(kMaxMessages, "messages");
  for (std::uint32_t k = 0; k < messages; ++k) {
    v.cloud.messages.push_back(read_message(r));
    v.payloads.push_back(r.bytes());
  }
  const std::uint32_t gates = r.count(kMaxGates, "gates");
  if (gates > 0 && !has_dims) throw InvalidInput("gates without dimensions");
  for (std::uint32_t j = 0; j < gates; ++j) {
    GateRecord rec;
    rec.gate_id = r.u32();
    const std::uint8_t has_expiry = r.u8();
    const std::int64_t expiry = r.i64();
    if (has_expiry > 1) throw InvalidInput("bad flag");
    if (has_expiry) rec.expires_at = expiry;
    v.gate_records.push_back(rec);
    v.cloud.gates.push_back(read_gate(r, v.cloud.dims));
  }
  const std::uint8_t has_published = r.u8();
  if (has_published > 1) throw InvalidInput("bad flag");
  if (has_published) {
    UserCiphertext u;
    u.epoch = r.u64();
    u.dims = v.cloud.dims;
    const std::uint32_t pm = r.count(kMaxMessages, "messages");
    for (std::uint32_t k = 0; k < pm; ++k) u.messages.push_back(read_message(r));
    const std::uint32_t pg = r.count(kMaxGates, "gates");
    for (std::uint32_t j = 0; j < pg; ++j) u.gates.push_back(read_gate(r, v.cloud.dims));
    v.published = std::move(u);
  }
  r.expect_end();
  return v;
}

// --- update records ----------------------------------------------------------

std::string to_string(UpdateKind kind) {
  switch (kind) {
    case UpdateKind::kCreate: return "create";
    case UpdateKind::kAppendMessage: return "append-message";
    case UpdateKind::kPublish: return "publish";
    case UpdateKind::kDelete: return "delete";
    case UpdateKind::kAdd: return "add";
    case UpdateKind::kSweep: return "sweep";
  }
  return "unknown";
}

nlohmann::json to_json(const UpdateRecord& r) {
  return {{"seq", r.seq},
          {"kind", to_string(r.kind)},
          {"object", r.object_id},
          {"gates", r.gate_ids},
          {"epoch_before", r.epoch_before},
          {"epoch_after", r.epoch_after},
          {"issued_by", r.issued_by},
          {"timestamp", r.timestamp}};
}

UpdateRecord update_record_from_json(const nlohmann::json& j) {
  try {
    UpdateRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    const std::string kind = j.at("kind").get<std::string>();
    bool known = false;
    for (auto k : {UpdateKind::kCreate, UpdateKind::kAppendMessage, UpdateKind::kPublish, UpdateKind::kDelete,
                   UpdateKind::kAdd, UpdateKind::kSweep}) {
      if (to_string(k) == kind) {
        r.kind = k;
        known = true;
      }
    }
    if (!known) throw InvalidInput("unknown update kind '" + kind + "'");
    r.object_id = j.at("object").get<std::string>();
    r.gate_ids = j.at("gates").get<std::vector<std::uint32_t>>();
    r.epoch_before = j.at("epoch_before").get<std::uint64_t>();
    r.epoch_after = j.at("epoch_after").get<std::uint64_t>();
    r.issued_by = j.at("issued_by").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed update record: ") + e.what());
  }
}

// --- memory store ------------------------------------------------------------

std::optional<StoredObject> MemoryObjectStore::load(const std::string& object_id) {
  auto it = objects_.find(object_id);
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

void MemoryObjectStore::save(const StoredObject& object) { objects_[object.object_id] = object; }

std::vector<std::string> MemoryObjectStore::list() {
  std::vector<std::string> out;
  for (const auto& [id, obj] : objects_) out.push_back(id);
  return out;
}

UpdateRecord MemoryObjectStore::append_log(UpdateRecord record) {
  record.seq = log_.size() + 1;
  log_.push_back(record);
  return record;
}

std::vector<UpdateRecord> MemoryObjectStore::log() { return log_; }

// --- manager -----------------------------------------------------------------

LifecycleManager::LifecycleManager(SystemPublicKey pk, DataPublicParams pp, ReencKey rk, ObjectStore& store,
                                   Rng& rng)
    : pk_(std::move(pk)), pp_(std::move(pp)), rk_(std::move(rk)), store_(store), rng_(rng) {}

StoredObject LifecycleManager::require(const std::string& object_id) {
  auto obj = store_.load(object_id);
  if (!obj) throw ProtocolError("unknown object '" + object_id + "'");
  return std::move(*obj);
}

void LifecycleManager::republish(StoredObject& obj, std::uint64_t epoch) {
  obj.epoch = epoch;
  if (obj.cloud.gates.empty()) {
    obj.published.reset();
    return;
  }
  obj.published = reencrypt(pk_, pp_, rk_, epoch, obj.cloud, rng_);
}

UpdateRecord LifecycleManager::record(UpdateKind kind, const StoredObject& obj, std::vector<std::uint32_t> gate_ids,
                                      std::uint64_t epoch_before, const std::string& issued_by, std::int64_t now) {
  UpdateRecord r;
  r.kind = kind;
  r.object_id = obj.object_id;
  r.gate_ids = std::move(gate_ids);
  r.epoch_before = epoch_before;
  r.epoch_after = obj.epoch;
  r.issued_by = issued_by;
  r.timestamp = now;
  return store_.append_log(r);
}

UpdateRecord LifecycleManager::store_policy(const std::string& object_id, const PolicyCiphertext& policy,
                                            const std::vector<std::optional<std::int64_t>>& expirations,
                                            const std::string& issued_by, std::int64_t now) {
  std::lock_guard lock(mu_);
  if (object_id.empty()) throw InvalidInput("empty object id");
  if (policy.gates.empty()) throw InvalidInput("policy has no gates");
  if (!expirations.empty() && expirations.size() != policy.gates.size()) {
    throw InvalidInput("expirations do not match the gate count");
  }
  for (const auto& g : policy.gates) {
    if (g.gate.entries.size() != policy.dims.total() || g.blind.entries.size() != policy.dims.total()) {
      throw InvalidInput("gate does not match dimensions");
    }
  }
  StoredObject obj;
  if (auto existing = store_.load(object_id)) {
    if (!existing->cloud.gates.empty() || existing->epoch != 0) {
      throw ProtocolError("object '" + object_id + "' already has a policy");
    }
    obj = std::move(*existing);
  }
  obj.object_id = object_id;
  obj.cloud.dims = policy.dims;
  obj.cloud.gates = policy.gates;
  std::vector<std::uint32_t> ids;
  for (std::size_t j = 0; j < policy.gates.size(); ++j) {
    obj.gate_records.push_back({obj.next_gate_id, expirations.empty() ? std::nullopt : expirations[j]});
    ids.push_back(obj.next_gate_id++);
  }
  store_.save(obj);
  return record(UpdateKind::kCreate, obj, ids, obj.epoch, issued_by, now);
}

UpdateRecord LifecycleManager::store_message(const std::string& object_id, const MessageCiphertext& message,
                                             Bytes payload, const std::string& issued_by, std::int64_t now) {
  std::lock_guard lock(mu_);
  if (object_id.empty()) throw InvalidInput("empty object id");
  StoredObject obj;
  if (auto existing = store_.load(object_id)) {
    obj = std::move(*existing);
  } else {
    obj.object_id = object_id;
  }
  obj.cloud.messages.push_back(message);
  obj.payloads.push_back(std::move(payload));
  if (obj.published) {
    obj.published->messages.push_back(reencrypt_message(pk_, pp_, epoch_secret(rk_, obj.epoch), message, rng_));
  }
  store_.save(obj);
  return record(UpdateKind::kAppendMessage, obj, {}, obj.epoch, issued_by, now);
}

UserCiphertext LifecycleManager::publish(const std::string& object_id, std::uint64_t epoch,
                                         const std::string& issued_by, std::int64_t now) {
  std::lock_guard lock(mu_);
  StoredObject obj = require(object_id);
  if (epoch <= obj.epoch) {
    throw ProtocolError("epoch " + std::to_string(epoch) + " is not greater than published epoch " +
                        std::to_string(obj.epoch));
  }
  if (obj.cloud.gates.empty()) throw ProtocolError("object '" + object_id + "' has no policy");
  const std::uint64_t before = obj.epoch;
  republish(obj, epoch);
  store_.save(obj);
  record(UpdateKind::kPublish, obj, {}, before, issued_by, now);
  return *obj.published;
}

UpdateRecord LifecycleManager::delete_gate(const std::string& object_id, std::uint32_t gate_id,
                                           const std::string& issued_by, std::int64_t now) {
  std::lock_guard lock(mu_);
  StoredObject obj = require(object_id);
  auto it = std::find_if(obj.gate_records.begin(), obj.gate_records.end(),
                         [&](const GateRecord& r) { return r.gate_id == gate_id; });
  if (it == obj.gate_records.end()) {
    throw ProtocolError("object '" + object_id + "' has no gate " + std::to_string(gate_id));
  }
  const auto index = static_cast<std::ptrdiff_t>(it - obj.gate_records.begin());
  obj.gate_records.erase(it);
  obj.cloud.gates.erase(obj.cloud.gates.begin() + index);
  const std::uint64_t before = obj.epoch;
  if (obj.epoch > 0) republish(obj, obj.epoch + 1);
  store_.save(obj);
  return record(UpdateKind::kDelete, obj, {gate_id}, before, issued_by, now);
}

UpdateRecord LifecycleManager::add_gate(const std::string& object_id, const GatePair& gate, const Dimensions& dims,
                                        std::optional<std::int64_t> expires_at, const std::string& issued_by,
                                        std::int64_t now) {
  std::lock_guard lock(mu_);
  StoredObject obj = require(object_id);
  if (obj.cloud.dims.values_per_attribute.empty()) {
    obj.cloud.dims = dims;
  } else if (!(obj.cloud.dims == dims)) {
    throw InvalidInput("gate dimensions differ from the object's");
  }
  if (gate.gate.entries.size() != dims.total() || gate.blind.entries.size() != dims.total()) {
    throw InvalidInput("gate does not match dimensions");
  }
  const std::uint64_t before = obj.epoch;
  const std::uint32_t id = obj.next_gate_id++;
  obj.cloud.gates.push_back(gate);
  obj.gate_records.push_back({id, expires_at});
  if (obj.published) {
    obj.published->gates.push_back(
        reencrypt_gate(pk_, pp_, epoch_secret(rk_, obj.epoch), epoch_secret(rk_, 0), gate, rng_));
  } else if (obj.epoch > 0) {
    // Publication was withdrawn after the last gate went away; resume at a
    // fresh epoch.
    republish(obj, obj.epoch + 1);
  }
  store_.save(obj);
  return record(UpdateKind::kAdd, obj, {id}, before, issued_by, now);
}

std::vector<UpdateRecord> LifecycleManager::sweep_expirations(std::int64_t now, const std::string& issued_by) {
  std::lock_guard lock(mu_);
  std::vector<UpdateRecord> out;
  for (const auto& id : store_.list()) {
    StoredObject obj = require(id);
    std::vector<std::uint32_t> expired;
    for (std::size_t j = obj.gate_records.size(); j-- > 0;) {
      const auto& rec = obj.gate_records[j];
      if (rec.expires_at && *rec.expires_at <= now) {
        expired.insert(expired.begin(), rec.gate_id);
        obj.gate_records.erase(obj.gate_records.begin() + static_cast<std::ptrdiff_t>(j));
        obj.cloud.gates.erase(obj.cloud.gates.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    if (expired.empty()) continue;
    const std::uint64_t before = obj.epoch;
    if (obj.epoch > 0) republish(obj, obj.epoch + 1);
    store_.save(obj);
    out.push_back(record(UpdateKind::kSweep, obj, expired, before, issued_by, now));
  }
  return out;
}

std::optional<UserCiphertext> LifecycleManager::published(const std::string& object_id) {
  std::lock_guard lock(mu_);
  return require(object_id).published;
}

Bytes LifecycleManager::payload(const std::string& object_id, std::size_t index) {
  std::lock_guard lock(mu_);
  StoredObject obj = require(object_id);
  if (index >= obj.payloads.size()) throw InvalidInput("payload index out of range");
  return obj.payloads[index];
}

StoredObject LifecycleManager::object(const std::string& object_id) {
  std::lock_guard lock(mu_);
  return require(object_id);
}

}  // namespace huap
