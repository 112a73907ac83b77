// Binary encoding of keys and ciphertexts.
//
// envelope := "HUAP" || version (u8) || type (u8) || body
// Integers are big-endian. Group elements are 65 bytes, target elements 128,
// scalars 32. Bodies that depend on the universe start with the dimensions:
// u32 n || n * u32 n_i. Decoding validates every element and rejects
// truncated input, trailing bytes and inconsistent dimensions.

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "huap/algebra.hpp"
#include "huap/scheme.hpp"

namespace huap {

inline constexpr std::array<std::uint8_t, 4> kWireMagic{'H', 'U', 'A', 'P'};
inline constexpr std::uint8_t kWireVersion = 1;

// Upper bounds enforced while decoding.
inline constexpr std::uint32_t kMaxAttributes = 1024;
inline constexpr std::uint32_t kMaxValuesPerAttribute = 4096;
inline constexpr std::uint32_t kMaxTotalValues = 1U << 16;
inline constexpr std::uint32_t kMaxGates = 4096;
inline constexpr std::uint32_t kMaxMessages = 1U << 16;

enum class WireType : std::uint8_t {
  kSystemPublicKey = 0x01,
  kSystemMasterKey = 0x02,
  kDataPublicParams = 0x03,
  kDataSecretParams = 0x04,
  kReencKey = 0x05,
  kAttrSecretKey = 0x06,
  kOfflineCiphertext = 0x07,
  kMessageCiphertext = 0x08,
  kPolicyCiphertext = 0x09,
  kCloudCiphertext = 0x0a,
  kUserCiphertext = 0x0b,
  kDataDecryptionKey = 0x0c,
  kGatePair = 0x0d,
  kStoredObject = 0x0e,
};

std::string to_string(WireType type);

class WireWriter {
 public:
  explicit WireWriter(WireType type);
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void group(const GroupElem& g);
  void target(const TargetElem& t);
  void scalar(const Scalar& s);
  void bytes(ByteView b);   // u32 length prefix
  void string(const std::string& s);
  void dims(const Dimensions& d);
  Bytes finish() && { return std::move(out_); }

 private:
  Bytes out_;
};

class WireReader {
 public:
  // Checks magic, version and type.
  WireReader(ByteView data, WireType expected);
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  GroupElem group();
  TargetElem target();
  Scalar scalar();
  Bytes bytes(std::size_t max_len = 1U << 26);
  std::string string(std::size_t max_len = 4096);
  Dimensions dims();
  // u32 count with an upper bound.
  std::uint32_t count(std::uint32_t max, const char* what);
  void expect_end() const;

 private:
  ByteView take(std::size_t n);
  ByteView data_;
  std::size_t pos_ = 0;
};

// Type tag of an envelope, after checking magic and version.
WireType peek_type(ByteView data);

Bytes encode(const SystemPublicKey& v);
Bytes encode(const SystemMasterKey& v);
Bytes encode(const DataPublicParams& v);
Bytes encode(const DataSecretParams& v);
Bytes encode(const ReencKey& v);
Bytes encode(const AttrSecretKey& v);
Bytes encode(const OfflineCiphertext& v);
Bytes encode(const MessageCiphertext& v);
Bytes encode(const PolicyCiphertext& v);
Bytes encode(const CloudCiphertext& v);
Bytes encode(const UserCiphertext& v);
Bytes encode(const DataDecryptionKey& v);
Bytes encode(const GatePair& v, const Dimensions& dims);

template <class T>
T decode(ByteView data);
GatePair decode_gate_pair(ByteView data, Dimensions& dims);

// Body writers shared with other envelope types.
void write_message(WireWriter& w, const MessageCiphertext& v);
MessageCiphertext read_message(WireReader& r);
void write_gate(WireWriter& w, const GatePair& v, const Dimensions& dims);
GatePair read_gate(WireReader& r, const Dimensions& dims);

// Logical element counts and exact encoded size.
struct ElementCount {
  std::size_t group = 0;
  std::size_t target = 0;
  std::size_t scalars = 0;
  std::size_t bytes = 0;
  bool operator==(const ElementCount&) const = default;
};

ElementCount measure(const SystemPublicKey& v);
ElementCount measure(const AttrSecretKey& v);
ElementCount measure(const MessageCiphertext& v);
ElementCount measure(const PolicyCiphertext& v);
ElementCount measure(const CloudCiphertext& v);
ElementCount measure(const UserCiphertext& v);
ElementCount measure(const DataPublicParams& v);

}  // namespace huap
