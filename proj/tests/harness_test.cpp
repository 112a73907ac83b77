#include <gtest/gtest.h>

#include <fstream>

#include "huap/harness.hpp"
#include "huap/policy_json.hpp"
#include "huap/wire.hpp"
#include "temp_dir.hpp"

using namespace huap;
using nlohmann::json;

namespace {

json load_script(const std::string& name) {
  std::ifstream in(std::string(HUAP_SCENARIO_DIR) + "/" + name);
  return json::parse(in);
}

std::string digest_of(const std::string& text) {
  return sha256_hex(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<json> events(const Transcript& t, const std::string& kind) {
  std::vector<json> out;
  for (const auto& e : t.entries) {
    if (e["event"] == kind) out.push_back(e);
  }
  return out;
}

Transcript run_with(const json& script, const std::string& tag) {
  TempDir dir(tag);
  return run_scenario(script, dir.path());
}

json small_universe() {
  return json::parse(R"({"attributes": [{"name": "role", "values": ["doctor", "nurse"]},
                                        {"name": "shift", "values": ["day", "night"]}]})");
}

}  // namespace

// Role records physically lack material their role must never hold.
template <class T>
concept HoldsOwnerSecrets = requires(T t) { t.params; } || requires(T t) { t.sp; };
template <class T>
concept HoldsReencKey = requires(T t) { t.rk; };
template <class T>
concept HoldsAttrKey = requires(T t) { t.key; };
template <class T>
concept HoldsMasterKey = requires(T t) { t.keys; } || requires(T t) { t.mk; };

static_assert(!HoldsOwnerSecrets<Device> && !HoldsReencKey<Device> && !HoldsMasterKey<Device>);
static_assert(!HoldsAttrKey<Device>);
static_assert(!HoldsOwnerSecrets<CloudProvider> && !HoldsAttrKey<CloudProvider> && !HoldsMasterKey<CloudProvider>);
static_assert(!HoldsReencKey<DataUser> && !HoldsOwnerSecrets<DataUser> && !HoldsMasterKey<DataUser>);
static_assert(HoldsOwnerSecrets<DataOwner> && HoldsReencKey<DataOwner> && HoldsReencKey<CloudProvider>);
static_assert(HoldsAttrKey<DataUser> && HoldsMasterKey<AttributeAuthority>);

TEST(Harness, BodySensorNetworkFlow) {
  const json script = load_script("bsn.json");
  const Transcript t = run_with(script, "bsn");

  std::vector<std::string> payloads;
  for (const auto& a : script["actions"]) {
    if (a["op"] == "encrypt") payloads.push_back(a["payload"]);
  }
  const auto access = events(t, "access");
  ASSERT_EQ(access.size(), 4u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(access[k]["user"], "alice");
    EXPECT_EQ(access[k]["outcome"], "granted");
    EXPECT_EQ(access[k]["epoch"], 1);
    EXPECT_EQ(access[k]["gate"], 0);
    EXPECT_EQ(access[k]["payload_sha256"], digest_of(payloads[k]));
  }
  EXPECT_EQ(access[3]["user"], "bob");
  EXPECT_EQ(access[3]["outcome"], "denied");
  EXPECT_FALSE(access[3].contains("payload_sha256"));

  // Every device spoke only to the cloud, and only ciphertext.
  for (const std::string dev : {"ecg", "glucose", "pressure"}) {
    const auto sent = t.messages_from(dev);
    ASSERT_EQ(sent.size(), 2u) << dev;
    EXPECT_EQ(sent[0]["kind"], "message-ciphertext");
    EXPECT_EQ(sent[0]["to"], "CSP");
    EXPECT_EQ(sent[0]["size"], measure(MessageCiphertext{}).bytes);
  }
}

TEST(Harness, RevocationScript) {
  const Transcript t = run_with(load_script("revocation.json"), "revocation");
  const auto epochs = events(t, "epoch");
  ASSERT_EQ(epochs.size(), 2u);
  EXPECT_EQ(epochs[0]["to"], 1);
  EXPECT_EQ(epochs[1]["from"], 1);
  EXPECT_EQ(epochs[1]["to"], 2);
  const auto rejected = events(t, "rejected");
  ASSERT_EQ(rejected.size(), 1u);
  EXPECT_EQ(rejected[0]["error"], "protocol");
}

TEST(Harness, ExpirySweepNeedsNoOwnerMessages) {
  const Transcript t = run_with(load_script("expiry.json"), "expiry");
  const auto from_owner = t.messages_from("DO");
  ASSERT_FALSE(from_owner.empty());
  EXPECT_EQ(from_owner.back()["kind"], "policy-ciphertext");
  const auto epochs = events(t, "epoch");
  ASSERT_EQ(epochs.size(), 2u);
  EXPECT_EQ(epochs[1]["to"], 2);
}

TEST(Harness, ScriptedExpectationMismatchFails) {
  json script = load_script("bsn.json");
  script["actions"].back()["expect"] = "granted";
  EXPECT_THROW(run_with(script, "mismatch"), ScenarioFailure);
  script["actions"].back().erase("expect");
  script["actions"].back()["expect_error"] = "protocol";
  EXPECT_THROW(run_with(script, "mismatch2"), ScenarioFailure);
}

TEST(Harness, CapabilityAndOrderErrors) {
  auto expect_class = [](json actions, const std::string& cls) {
    actions.back()["expect_error"] = cls;
    const Transcript t = run_with(json{{"seed", 1}, {"universe", small_universe()}, {"actions", actions}}, "cap");
    const auto rejected = events(t, "rejected");
    ASSERT_EQ(rejected.size(), 1u) << actions.dump();
    EXPECT_EQ(rejected[0]["error"], cls);
  };
  const json setup = {{"op", "setup"}}, params = {{"op", "param-setup"}}, rkey = {{"op", "rkey"}};
  const json keygen = {{"op", "keygen"}, {"user", "u"}, {"attributes", {{"role", "nurse"}, {"shift", "day"}}}};
  const json policy = json::parse(
      R"({"op": "define-policy", "object": "o", "policy": {"gates": [{"role": ["nurse"], "shift": "*"}]}})");

  expect_class(json::array({keygen}), "capability");
  expect_class(json::array({setup, {{"op", "offline-pool"}, {"device", "d"}}}), "capability");
  expect_class(json::array({setup, params, policy}), "capability");
  expect_class(json::array({setup, params, rkey, keygen, policy, {{"op", "reencrypt"}, {"object", "o"}},
                            {{"op", "access"}, {"user", "v"}, {"object", "o"}}}),
               "capability");
  expect_class(json::array({setup, params, {{"op", "offline-pool"}, {"device", "d"}, {"size", 1}},
                            {{"op", "encrypt"}, {"device", "d"}, {"object", "o"}, {"payload", "a"}}}),
               "capability");
  expect_class(json::array({setup, params, rkey, {{"op", "offline-pool"}, {"device", "d"}, {"size", 1}},
                            {{"op", "encrypt"}, {"device", "d"}, {"object", "o"}, {"payload", "a"}},
                            {{"op", "encrypt"}, {"device", "d"}, {"object", "o"}, {"payload", "b"}}}),
               "protocol");
  expect_class(json::array({setup, params, {{"op", "encrypt"}, {"device", "d"}, {"object", "o"}, {"payload", "a"}}}),
               "protocol");
  expect_class(json::array({setup, setup}), "protocol");
  expect_class(json::array({setup, params, rkey, policy, {{"op", "reencrypt"}, {"object", "o"}, {"epoch", 0}}}),
               "protocol");
  expect_class(json::array({setup, params, rkey, {{"op", "delete"}, {"object", "nothing"}, {"gate", 1}}}),
               "protocol");
  expect_class(json::array({setup, {{"op", "dance"}}}), "invalid");
  expect_class(json::array({setup, params, rkey,
                            {{"op", "keygen"}, {"user", "u"}, {"attributes", {{"role", "surgeon"}, {"shift", "day"}}}}}),
               "invalid");
}

TEST(Harness, DeviceBytesIgnorePolicy) {
  json a = load_script("bsn.json");
  json b = a;
  for (auto& act : b["actions"]) {
    if (act["op"] == "define-policy") {
      act["policy"] = json::parse(R"({"gates": [{"role": ["nurse"], "dept": "*", "level": ["junior"]},
                                                {"role": "*", "dept": ["oncology"], "level": "*"},
                                                {"role": ["researcher"], "dept": "*", "level": "*"}]})");
    }
    if (act["op"] == "access") act.erase("expect");
  }
  const Transcript ta = run_with(a, "policy-a"), tb = run_with(b, "policy-b");
  for (const std::string dev : {"ecg", "glucose", "pressure"}) {
    EXPECT_EQ(ta.messages_from(dev), tb.messages_from(dev)) << dev;
  }
  EXPECT_NE(ta.messages_from("DO"), tb.messages_from("DO"));
}

TEST(Harness, DeviceStreamsAreIndependent) {
  json full = load_script("bsn.json");
  json without = full;
  json kept = json::array();
  for (const auto& act : without["actions"]) {
    if (act.value("device", "") == "glucose") continue;
    if (act["op"] == "access" && act.value("message", 0) > 0) continue;
    kept.push_back(act);
  }
  without["actions"] = kept;
  const Transcript tf = run_with(full, "iso-full"), tw = run_with(without, "iso-without");
  EXPECT_EQ(tf.messages_from("ecg"), tw.messages_from("ecg"));
  EXPECT_EQ(tf.messages_from("pressure"), tw.messages_from("pressure"));
  EXPECT_NE(tf.messages_from("ecg")[0]["sha256"], tf.messages_from("pressure")[0]["sha256"]);
}

TEST(Harness, RestartMidScriptKeepsTranscriptTail) {
  const json script = load_script("revocation.json");
  const Transcript reference = run_with(script, "restart-ref");
  const std::size_t actions = script["actions"].size();
  for (std::size_t cut : {std::size_t{9}, std::size_t{13}, actions - 3}) {
    json restarted = script;
    restarted["actions"].insert(restarted["actions"].begin() + static_cast<std::ptrdiff_t>(cut),
                                json{{"op", "restart"}});
    const Transcript t = run_with(restarted, "restart-" + std::to_string(cut));
    std::size_t at = 0;
    while (at < t.entries.size() && t.entries[at]["event"] != "restart") ++at;
    ASSERT_LT(at, t.entries.size());
    const std::vector<json> tail(t.entries.begin() + static_cast<std::ptrdiff_t>(at) + 1, t.entries.end());
    ASSERT_LE(tail.size(), reference.entries.size());
    const std::vector<json> ref_tail(reference.entries.end() - static_cast<std::ptrdiff_t>(tail.size()),
                                     reference.entries.end());
    EXPECT_EQ(tail, ref_tail) << "restart before action " << cut;
    const std::vector<json> head(t.entries.begin(), t.entries.begin() + static_cast<std::ptrdiff_t>(at));
    EXPECT_EQ(head.size() + tail.size(), reference.entries.size());
  }
}

TEST(DirectoryStore, PersistsAndRefusesEpochRollback) {
  TempDir dir("store");
  StoredObject obj;
  obj.object_id = "a/../b";  // never used as a raw path
  obj.epoch = 3;
  {
    DirectoryObjectStore store(dir.path());
    store.save(obj);
    UpdateRecord r;
    r.kind = UpdateKind::kPublish;
    r.object_id = obj.object_id;
    r.epoch_after = 3;
    EXPECT_EQ(store.append_log(r).seq, 1u);
  }
  DirectoryObjectStore reopened(dir.path());
  ASSERT_EQ(reopened.list(), std::vector<std::string>{"a/../b"});
  EXPECT_EQ(reopened.load("a/../b")->epoch, 3u);
  EXPECT_EQ(reopened.log().size(), 1u);
  StoredObject older = obj;
  older.epoch = 2;
  EXPECT_THROW(reopened.save(older), ProtocolError);
  EXPECT_EQ(DirectoryObjectStore(dir.path()).load("a/../b")->epoch, 3u);
  EXPECT_FALSE(reopened.load("missing").has_value());
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "objects")) {
    EXPECT_EQ(entry.path().extension(), ".obj");  // no temp file left behind
  }
}

TEST(DirectoryStore, TornLogTailIsDropped) {
  TempDir dir("torn");
  {
    DirectoryObjectStore store(dir.path());
    UpdateRecord r;
    r.object_id = "x";
    store.append_log(r);
    store.append_log(r);
  }
  {
    std::ofstream out(dir.path() / "updates.jsonl", std::ios::app);
    out << "{\"seq\": 3, \"kin";
  }
  DirectoryObjectStore store(dir.path());
  EXPECT_EQ(store.log().size(), 2u);
  UpdateRecord r;
  r.object_id = "x";
  EXPECT_EQ(store.append_log(r).seq, 3u);
  EXPECT_EQ(DirectoryObjectStore(dir.path()).log().size(), 3u);

  {
    std::ofstream out(dir.path() / "updates.jsonl", std::ios::app);
    out << "garbage\n";
  }
  EXPECT_THROW(DirectoryObjectStore{dir.path()}, InvalidInput);
}
