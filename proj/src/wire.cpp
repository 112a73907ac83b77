#include "huap/wire.hpp"

#include "huap/errors.hpp"

namespace huap {

namespace {

constexpr std::size_t kHeaderBytes = kWireMagic.size() + 2;

void check_dims(const Dimensions& d) {
  if (d.attributes() == 0) throw InvalidInput("dimensions: no attributes");
  std::size_t total = 0;
  for (auto ni : d.values_per_attribute) {
    if (ni == 0 || ni > kMaxValuesPerAttribute) throw InvalidInput("dimensions: bad value count");
    total += ni;
  }
  if (total > kMaxTotalValues) throw InvalidInput("dimensions: too many values");
}

}  // namespace

std::string to_string(WireType type) {
  switch (type) {
    case WireType::kSystemPublicKey: return "system-public-key";
    case WireType::kSystemMasterKey: return "system-master-key";
    case WireType::kDataPublicParams: return "data-public-params";
    case WireType::kDataSecretParams: return "data-secret-params";
    case WireType::kReencKey: return "reencryption-key";
    case WireType::kAttrSecretKey: return "attribute-secret-key";
    case WireType::kOfflineCiphertext: return "offline-ciphertext";
    case WireType::kMessageCiphertext: return "message-ciphertext";
    case WireType::kPolicyCiphertext: return "policy-ciphertext";
    case WireType::kCloudCiphertext: return "cloud-ciphertext";
    case WireType::kUserCiphertext: return "user-ciphertext";
    case WireType::kDataDecryptionKey: return "data-decryption-key";
    case WireType::kGatePair: return "gate-pair";
    case WireType::kStoredObject: return "stored-object";
  }
  return "unknown";
}

// --- writer ------------------------------------------------------------------

WireWriter::WireWriter(WireType type) {
  out_.assign(kWireMagic.begin(), kWireMagic.end());
  out_.push_back(kWireVersion);
  out_.push_back(static_cast<std::uint8_t>(type));
}

void WireWriter::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
}

void WireWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void WireWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void WireWriter::group(const GroupElem& g) {
  const auto e = g.encode();
  out_.insert(out_.end(), e.begin(), e.end());
}

void WireWriter::target(const TargetElem& t) {
  const auto e = t.encode();
  out_.insert(out_.end(), e.begin(), e.end());
}

void WireWriter::scalar(const Scalar& s) {
  const auto e = s.encode();
  out_.insert(out_.end(), e.begin(), e.end());
}

void WireWriter::bytes(ByteView b) {
  u32(static_cast<std::uint32_t>(b.size()));
  out_.insert(out_.end(), b.begin(), b.end());
}

void WireWriter::string(const std::string& s) {
  bytes(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void WireWriter::dims(const Dimensions& d) {
  check_dims(d);
  u32(static_cast<std::uint32_t>(d.attributes()));
  for (auto ni : d.values_per_attribute) u32(ni);
}

// --- reader ------------------------------------------------------------------

WireType peek_type(ByteView data) {
  if (data.size() < kHeaderBytes) throw InvalidInput("truncated envelope");
  if (!std::equal(kWireMagic.begin(), kWireMagic.end(), data.begin())) throw InvalidInput("bad magic");
  if (data[4] != kWireVersion) throw InvalidInput("unsupported wire version " + std::to_string(data[4]));
  const auto type = static_cast<WireType>(data[5]);
  if (data[5] < 0x01 || data[5] > static_cast<std::uint8_t>(WireType::kStoredObject)) {
    throw InvalidInput("unknown wire type " + std::to_string(data[5]));
  }
  return type;
}

WireReader::WireReader(ByteView data, WireType expected) : data_(data) {
  const WireType type = peek_type(data);
  if (type != expected) throw InvalidInput("expected " + to_string(expected) + ", found " + to_string(type));
  pos_ = kHeaderBytes;
}

ByteView WireReader::take(std::size_t n) {
  if (data_.size() - pos_ < n) throw InvalidInput("truncated input");
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t WireReader::u8() { return take(1)[0]; }

std::uint16_t WireReader::u16() {
  const auto b = take(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t WireReader::u32() {
  std::uint32_t v = 0;
  for (auto b : take(4)) v = (v << 8) | b;
  return v;
}

std::uint64_t WireReader::u64() {
  std::uint64_t v = 0;
  for (auto b : take(8)) v = (v << 8) | b;
  return v;
}

GroupElem WireReader::group() { return GroupElem::decode(take(kGroupElemBytes)); }
TargetElem WireReader::target() { return TargetElem::decode(take(kTargetElemBytes)); }
Scalar WireReader::scalar() { return Scalar::decode(take(kScalarBytes)); }

Bytes WireReader::bytes(std::size_t max_len) {
  const std::uint32_t len = u32();
  if (len > max_len) throw InvalidInput("byte string too long");
  const auto b = take(len);
  return Bytes(b.begin(), b.end());
}

std::string WireReader::string(std::size_t max_len) {
  const Bytes b = bytes(max_len);
  return std::string(b.begin(), b.end());
}

std::uint32_t WireReader::count(std::uint32_t max, const char* what) {
  const std::uint32_t c = u32();
  if (c > max) throw InvalidInput(std::string("too many ") + what);
  return c;
}

Dimensions WireReader::dims() {
  const std::uint32_t n = count(kMaxAttributes, "attributes");
  Dimensions d;
  d.values_per_attribute.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) d.values_per_attribute.push_back(u32());
  check_dims(d);
  return d;
}

void WireReader::expect_end() const {
  if (pos_ != data_.size()) throw InvalidInput("trailing bytes after " + std::to_string(pos_));
}

// --- shared bodies -----------------------------------------------------------

void write_message(WireWriter& w, const MessageCiphertext& v) {
  w.group(v.u0);
  w.group(v.u1);
  w.target(v.v);
}

MessageCiphertext read_message(WireReader& r) {
  MessageCiphertext v;
  v.u0 = r.group();
  v.u1 = r.group();
  v.v = r.target();
  return v;
}

void write_gate(WireWriter& w, const GatePair& v, const Dimensions& dims) {
  const std::size_t total = dims.total();
  if (v.gate.entries.size() != total || v.blind.entries.size() != total) {
    throw InvalidInput("gate does not match dimensions");
  }
  w.group(v.gate.c_tilde);
  w.target(v.gate.c_delta);
  w.group(v.gate.c0_hat);
  w.group(v.gate.c1);
  w.group(v.gate.c1_hat);
  for (const auto& e : v.gate.entries) {
    w.group(e.delta);
    w.group(e.zero);
    w.group(e.zero_hat);
  }
  w.target(v.blind.c_tilde);
  w.group(v.blind.c1);
  w.group(v.blind.c1_hat);
  for (const auto& e : v.blind.entries) {
    w.group(e.zero);
    w.group(e.zero_hat);
  }
}

GatePair read_gate(WireReader& r, const Dimensions& dims) {
  const std::size_t total = dims.total();
  GatePair v;
  v.gate.c_tilde = r.group();
  v.gate.c_delta = r.target();
  v.gate.c0_hat = r.group();
  v.gate.c1 = r.group();
  v.gate.c1_hat = r.group();
  v.gate.entries.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    GateCiphertext::Entry e;
    e.delta = r.group();
    e.zero = r.group();
    e.zero_hat = r.group();
    v.gate.entries.push_back(e);
  }
  v.blind.c_tilde = r.target();
  v.blind.c1 = r.group();
  v.blind.c1_hat = r.group();
  v.blind.entries.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    BlindGateCiphertext::Entry e;
    e.zero = r.group();
    e.zero_hat = r.group();
    v.blind.entries.push_back(e);
  }
  return v;
}

namespace {

void write_gates(WireWriter& w, const std::vector<GatePair>& gates, const Dimensions& dims) {
  w.u32(static_cast<std::uint32_t>(gates.size()));
  for (const auto& g : gates) write_gate(w, g, dims);
}

std::vector<GatePair> read_gates(WireReader& r, const Dimensions& dims) {
  const std::uint32_t m = r.count(kMaxGates, "gates");
  std::vector<GatePair> out;
  out.reserve(m);
  for (std::uint32_t j = 0; j < m; ++j) out.push_back(read_gate(r, dims));
  return out;
}

void write_messages(WireWriter& w, const std::vector<MessageCiphertext>& messages) {
  w.u32(static_cast<std::uint32_t>(messages.size()));
  for (const auto& m : messages) write_message(w, m);
}

std::vector<MessageCiphertext> read_messages(WireReader& r) {
  const std::uint32_t count = r.count(kMaxMessages, "messages");
  std::vector<MessageCiphertext> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) out.push_back(read_message(r));
  return out;
}

}  // namespace

// --- encoders ----------------------------------------------------------------

Bytes encode(const SystemPublicKey& v) {
  WireWriter w(WireType::kSystemPublicKey);
  for (const auto* g : {&v.g, &v.g1, &v.g2, &v.g3, &v.g4}) w.group(*g);
  w.target(v.y);
  return std::move(w).finish();
}

Bytes encode(const SystemMasterKey& v) {
  WireWriter w(WireType::kSystemMasterKey);
  w.scalar(v.y);
  return std::move(w).finish();
}

Bytes encode(const DataPublicParams& v) {
  WireWriter w(WireType::kDataPublicParams);
  w.group(v.q0);
  w.target(v.pp0);
  w.group(v.pp1);
  return std::move(w).finish();
}

Bytes encode(const DataSecretParams& v) {
  WireWriter w(WireType::kDataSecretParams);
  w.scalar(v.mk0);
  w.scalar(v.mk1);
  w.scalar(v.sk);
  w.group(v.sk1);
  return std::move(w).finish();
}

Bytes encode(const ReencKey& v) {
  WireWriter w(WireType::kReencKey);
  w.scalar(v.s);
  return std::move(w).finish();
}

Bytes encode(const AttrSecretKey& v) {
  if (v.components.size() != v.list.selections.size() || v.components.empty()) {
    throw InvalidInput("attribute key components do not match its list");
  }
  WireWriter w(WireType::kAttrSecretKey);
  w.u32(static_cast<std::uint32_t>(v.list.selections.size()));
  for (auto t : v.list.selections) w.u32(t);
  w.group(v.d0);
  w.group(v.d0_hat);
  w.group(v.delta0);
  w.group(v.delta0_hat);
  for (const auto& c : v.components) {
    w.group(c.delta);
    w.group(c.zero);
    w.group(c.zero_hat);
  }
  return std::move(w).finish();
}

Bytes encode(const OfflineCiphertext& v) {
  WireWriter w(WireType::kOfflineCiphertext);
  w.u8(v.consumed ? 1 : 0);
  w.group(v.u0);
  w.group(v.u1);
  w.target(v.v0);
  return std::move(w).finish();
}

Bytes encode(const MessageCiphertext& v) {
  WireWriter w(WireType::kMessageCiphertext);
  write_message(w, v);
  return std::move(w).finish();
}

Bytes encode(const PolicyCiphertext& v) {
  WireWriter w(WireType::kPolicyCiphertext);
  w.dims(v.dims);
  write_gates(w, v.gates, v.dims);
  return std::move(w).finish();
}

Bytes encode(const CloudCiphertext& v) {
  WireWriter w(WireType::kCloudCiphertext);
  w.dims(v.dims);
  write_messages(w, v.messages);
  write_gates(w, v.gates, v.dims);
  return std::move(w).finish();
}

Bytes encode(const UserCiphertext& v) {
  WireWriter w(WireType::kUserCiphertext);
  w.u64(v.epoch);
  w.dims(v.dims);
  write_messages(w, v.messages);
  write_gates(w, v.gates, v.dims);
  return std::move(w).finish();
}

Bytes encode(const DataDecryptionKey& v) {
  WireWriter w(WireType::kDataDecryptionKey);
  w.u64(v.epoch);
  w.group(v.dk);
  return std::move(w).finish();
}

Bytes encode(const GatePair& v, const Dimensions& dims) {
  WireWriter w(WireType::kGatePair);
  w.dims(dims);
  write_gate(w, v, dims);
  return std::move(w).finish();
}

// --- decoders ----------------------------------------------------------------

template <>
SystemPublicKey decode<SystemPublicKey>(ByteView data) {
  WireReader r(data, WireType::kSystemPublicKey);
  SystemPublicKey v;
  for (auto* g : {&v.g, &v.g1, &v.g2, &v.g3, &v.g4}) *g = r.group();
  v.y = r.target();
  r.expect_end();
  return v;
}

template <>
SystemMasterKey decode<SystemMasterKey>(ByteView data) {
  WireReader r(data, WireType::kSystemMasterKey);
  SystemMasterKey v{r.scalar()};
  r.expect_end();
  return v;
}

template <>
DataPublicParams decode<DataPublicParams>(ByteView data) {
  WireReader r(data, WireType::kDataPublicParams);
  DataPublicParams v;
  v.q0 = r.group();
  v.pp0 = r.target();
  v.pp1 = r.group();
  r.expect_end();
  return v;
}

template <>
DataSecretParams decode<DataSecretParams>(ByteView data) {
  WireReader r(data, WireType::kDataSecretParams);
  DataSecretParams v;
  v.mk0 = r.scalar();
  v.mk1 = r.scalar();
  v.sk = r.scalar();
  v.sk1 = r.group();
  r.expect_end();
  return v;
}

template <>
ReencKey decode<ReencKey>(ByteView data) {
  WireReader r(data, WireType::kReencKey);
  ReencKey v{r.scalar()};
  r.expect_end();
  return v;
}

template <>
AttrSecretKey decode<AttrSecretKey>(ByteView data) {
  WireReader r(data, WireType::kAttrSecretKey);
  const std::uint32_t n = r.count(kMaxAttributes, "attributes");
  if (n == 0) throw InvalidInput("attribute key covers no attributes");
  AttrSecretKey v;
  for (std::uint32_t i = 0; i < n; ++i) v.list.selections.push_back(r.u32());
  v.d0 = r.group();
  v.d0_hat = r.group();
  v.delta0 = r.group();
  v.delta0_hat = r.group();
  for (std::uint32_t i = 0; i < n; ++i) {
    AttrSecretKey::Component c;
    c.delta = r.group();
    c.zero = r.group();
    c.zero_hat = r.group();
    v.components.push_back(c);
  }
  r.expect_end();
  return v;
}

template <>
OfflineCiphertext decode<OfflineCiphertext>(ByteView data) {
  WireReader r(data, WireType::kOfflineCiphertext);
  OfflineCiphertext v;
  const std::uint8_t flag = r.u8();
  if (flag > 1) throw InvalidInput("bad consumed flag");
  v.consumed = flag == 1;
  v.u0 = r.group();
  v.u1 = r.group();
  v.v0 = r.target();
  r.expect_end();
  return v;
}

template <>
MessageCiphertext decode<MessageCiphertext>(ByteView data) {
  WireReader r(data, WireType::kMessageCiphertext);
  MessageCiphertext v = read_message(r);
  r.expect_end();
  return v;
}

template <>
PolicyCiphertext decode<PolicyCiphertext>(ByteView data) {
  WireReader r(data, WireType::kPolicyCiphertext);
  PolicyCiphertext v;
  v.dims = r.dims();
  v.gates = read_gates(r, v.dims);
  r.expect_end();
  return v;
}

template <>
CloudCiphertext decode<CloudCiphertext>(ByteView data) {
  WireReader r(data, WireType::kCloudCiphertext);
  CloudCiphertext v;
  v.dims = r.dims();
  v.messages = read_messages(r);
  v.gates = read_gates(r, v.dims);
  r.expect_end();
  return v;
}

template <>
UserCiphertext decode<UserCiphertext>(ByteView data) {
  WireReader r(data, WireType::kUserCiphertext);
  UserCiphertext v;
  v.epoch = r.u64();
  v.dims = r.dims();
  v.messages = read_messages(r);
  v.gates = read_gates(r, v.dims);
  r.expect_end();
  return v;
}

template <>
DataDecryptionKey decode<DataDecryptionKey>(ByteView data) {
  WireReader r(data, WireType::kDataDecryptionKey);
  DataDecryptionKey v;
  v.epoch = r.u64();
  v.dk = r.group();
  r.expect_end();
  return v;
}

GatePair decode_gate_pair(ByteView data, Dimensions& dims) {
  WireReader r(data, WireType::kGatePair);
  dims = r.dims();
  GatePair v = read_gate(r, dims);
  r.expect_end();
  return v;
}

// --- measurement -------------------------------------------------------------

namespace {

ElementCount count_gates(const std::vector<GatePair>& gates) {
  ElementCount c;
  for (const auto& g : gates) {
    c.group += 4 + 3 * g.gate.entries.size();  // c_tilde, c0_hat, c1, c1_hat
    c.group += 2 + 2 * g.blind.entries.size();
    c.target += 2;
  }
  return c;
}

ElementCount count_messages(const std::vector<MessageCiphertext>& messages) {
  return {2 * messages.size(), messages.size(), 0, 0};
}

ElementCount combine(ElementCount a, const ElementCount& b, std::size_t bytes) {
  a.group += b.group;
  a.target += b.target;
  a.scalars += b.scalars;
  a.bytes = bytes;
  return a;
}

}  // namespace

ElementCount measure(const SystemPublicKey& v) { return {5, 1, 0, encode(v).size()}; }

ElementCount measure(const DataPublicParams& v) { return {2, 1, 0, encode(v).size()}; }

ElementCount measure(const AttrSecretKey& v) { return {4 + 3 * v.components.size(), 0, 0, encode(v).size()}; }

ElementCount measure(const MessageCiphertext& v) { return {2, 1, 0, encode(v).size()}; }

ElementCount measure(const PolicyCiphertext& v) { return combine(count_gates(v.gates), {}, encode(v).size()); }

ElementCount measure(const CloudCiphertext& v) {
  return combine(count_gates(v.gates), count_messages(v.messages), encode(v).size());
}

ElementCount measure(const UserCiphertext& v) {
  return combine(count_gates(v.gates), count_messages(v.messages), encode(v).size());
}

}  // namespace huap
