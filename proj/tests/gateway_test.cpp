// Copyright 2026 The nlifact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <httplib.h>
#include <json.hpp>

#include "nlifact/errors.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/nli.hpp"
#include "nlifact/score_cache.hpp"
#include "nlifact/sidecar_client.hpp"
#include "oracles.hpp"

using namespace nlifact;
using json = nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "nlifact_gateway_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

/// Backend that counts calls and answers with the overlap mock.
class CountingBackend : public NliBackend {
 public:
  const BackendId& id() const override { return id_; }
  std::vector<NliDistribution> score(std::span<const ScoreRequest> requests) override {
    ++calls;
    pairs += requests.size();
    std::vector<NliDistribution> out;
    for (const auto& r : requests) out.push_back(mock_score(r.premise, r.hypothesis));
    return out;
  }
  BackendId id_ = BackendId::mock("counting");
  int calls = 0;
  std::size_t pairs = 0;
};

/// Local HTTP server standing in for the model sidecar.
class FakeSidecar {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit FakeSidecar(Handler batch) {
    server_.Post("/nli/batch", [this, batch](const httplib::Request& req,
                                             httplib::Response& res) {
      ++requests;
      batch(req, res);
    });
    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok","model":"fake-nli","class_order":["entailment","neutral","contradiction"]})",
                      "application/json");
    });
    server_.Post("/scu/extract", [this](const httplib::Request& req, httplib::Response& res) {
      scu_handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> requests{0};
  Handler scu_handler = [](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
  };

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

/// Answers every pair with the overlap mock, as a well-behaved sidecar would.
void honest(const httplib::Request& req, httplib::Response& res) {
  const json in = json::parse(req.body);
  json scores = json::array();
  for (const auto& p : in["pairs"]) {
    const auto d = mock_score(p["premise"].get<std::string>(), p["hypothesis"].get<std::string>());
    scores.push_back({{"p_e", d.entailment}, {"p_n", d.neutral}, {"p_c", d.contradiction}});
  }
  res.set_content(json{{"scores", scores}}.dump(), "application/json");
}

RemoteOptions fast_options() {
  RemoteOptions o;
  o.initial_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

std::vector<ScoreRequest> sample_requests(std::mt19937_64& rng, int n) {
  std::vector<ScoreRequest> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({oracle::join_all(oracle::random_sentences(rng, 2)),
                   oracle::random_sentence(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("mock backend scores", "[nli]") {
  CHECK(mock_score("a b c d", "a b") == NliDistribution{1.0, 0.0, 0.0});
  CHECK(mock_score("a b c d", "a x") == NliDistribution{0.5, 0.25, 0.25});
  CHECK(mock_score("x y", "x y") == NliDistribution{1.0, 0.0, 0.0});
  CHECK(mock_score("x y", "q r") == NliDistribution{0.0, 0.5, 0.5});
  CHECK(mock_score("a b c", "a b q r") == NliDistribution{0.5, 0.25, 0.25});
  CHECK(mock_score("The Bridge, opened.", "bridge OPENED") == NliDistribution{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(mock_score("a", "..."), InvalidArgument);
}

TEST_CASE("mock score ignores premise token multiplicity", "[nli][property]") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto premise = oracle::random_sentence(rng);
    const auto hypothesis = oracle::random_sentence(rng);
    const auto d = mock_score(premise, hypothesis);
    REQUIRE(is_valid(d));
    REQUIRE(mock_score(premise + " " + premise, hypothesis) == d);
    REQUIRE(mock_score(premise, hypothesis) == d);
    const auto o = oracle::mock(premise, hypothesis);
    REQUIRE(d == NliDistribution{o.e, o.n, o.c});
  }
}

TEST_CASE("request and backend validation", "[nli]") {
  CHECK_THROWS_AS(validate(ScoreRequest{"  ", "h"}), InvalidArgument);
  CHECK_THROWS_AS(validate(ScoreRequest{"p", ""}), InvalidArgument);
  CHECK_NOTHROW(validate(ScoreRequest{"p", "h"}));
  CHECK_THROWS_AS(validate(BackendId::remote("m", "")), InvalidArgument);
  CHECK_THROWS_AS(validate(BackendId::mock("")), InvalidArgument);
  CHECK(is_valid({0.2, 0.3, 0.5}));
  CHECK_FALSE(is_valid({0.2, 0.3, 0.6}));
  CHECK_FALSE(is_valid({-0.1, 0.6, 0.5}));
}

TEST_CASE("cache keys", "[cache]") {
  const auto k = cache_key("m", "p", "h");
  CHECK(k.size() == 64);
  CHECK(k == cache_key("m", "p", "h"));
  CHECK(k != cache_key("n", "p", "h"));
  // Length prefixes keep field boundaries apart.
  CHECK(cache_key("m", "ab", "c") != cache_key("m", "a", "bc"));
}

TEST_CASE("in-memory cache", "[cache]") {
  ScoreCache cache;
  CHECK_FALSE(cache.lookup("A", "p", "h"));
  cache.put("A", "p", "h", {0.7, 0.2, 0.1});
  CHECK(cache.lookup("A", "p", "h") == NliDistribution{0.7, 0.2, 0.1});
  CHECK_FALSE(cache.lookup("B", "p", "h"));
  cache.put("A", "p", "h", {0.1, 0.2, 0.7});
  CHECK(cache.lookup("A", "p", "h") == NliDistribution{0.7, 0.2, 0.1});
  CHECK(cache.size() == 1);
}

TEST_CASE("file cache round trip", "[cache]") {
  const auto path = temp_file("roundtrip.jsonl");
  const NliDistribution d{0.1 + 0.2, 0.3, 1.0 - (0.1 + 0.2) - 0.3};
  {
    ScoreCache cache(path);
    cache.put("A", "premise", "hypothesis", d);
    cache.put("B", "premise", "hypothesis", {1.0, 0.0, 0.0});
  }
  ScoreCache reopened(path);
  CHECK(reopened.size() == 2);
  CHECK(reopened.lookup("A", "premise", "hypothesis") == d);  // exact bits
  const auto stats = reopened.stats();
  CHECK(stats.records == 2);
  CHECK(stats.per_model.at("A") == 1);
  CHECK(stats.corrupt == 0);
}

TEST_CASE("corrupt cache lines are skipped and reported", "[cache]") {
  const auto path = temp_file("corrupt.jsonl");
  const auto good = cache_key("A", "p", "h");
  {
    std::ofstream out(path);
    out << json{{"key", good}, {"model", "A"}, {"p_e", 0.5}, {"p_n", 0.25}, {"p_c", 0.25}}.dump()
        << "\n";
    out << "{not json\n";
    out << json{{"key", cache_key("A", "p", "x")}, {"model", "A"}, {"p_e", 0.9},
                {"p_n", 0.9}, {"p_c", 0.9}}.dump()
        << "\n";
    out << json{{"model", "A"}, {"p_e", 1.0}, {"p_n", 0.0}, {"p_c", 0.0}}.dump() << "\n";
    out << R"({"key":"abc","model":"A","p_e":1.0)";  // torn final write
  }
  {
    ScoreCache cache(path);
    CHECK(cache.size() == 1);
    CHECK(cache.lookup("A", "p", "h") == NliDistribution{0.5, 0.25, 0.25});
    CHECK_FALSE(cache.lookup("A", "p", "x"));
    const auto bad = cache.corrupt_records();
    REQUIRE(bad.size() == 4);
    CHECK(bad[0].line == 2);
    CHECK(bad[1].line == 3);
    CHECK(bad[2].line == 4);
    CHECK(bad[3].line == 5);
    cache.put("A", "p", "y", {1.0, 0.0, 0.0});
  }
  // The append after a torn tail starts on a fresh line.
  ScoreCache again(path);
  CHECK(again.size() == 2);
  CHECK(again.lookup("A", "p", "y") == NliDistribution{1.0, 0.0, 0.0});
}

TEST_CASE("gateway caches and deduplicates", "[gateway]") {
  auto backend = std::make_shared<CountingBackend>();
  NliGateway gw(backend, std::make_shared<ScoreCache>());
  const std::vector<ScoreRequest> batch = {
      {"a b c d", "a b"}, {"a b c d", "a x"}, {"a b c d", "a b"}};
  const auto first = gw.score_pairs(batch);
  CHECK(backend->calls == 1);
  CHECK(backend->pairs == 2);
  CHECK(first[0] == NliDistribution{1.0, 0.0, 0.0});
  CHECK(first[1] == NliDistribution{0.5, 0.25, 0.25});
  CHECK(first[2] == first[0]);

  const auto second = gw.score_pairs(batch);
  CHECK(second == first);
  CHECK(backend->calls == 1);
  CHECK(gw.backend_invocations() == 1);
  CHECK(gw.cache_hits() == 3);
  CHECK(gw.score_pairs({}).empty());
}

TEST_CASE("gateway rejects blank inputs before scoring", "[gateway]") {
  auto backend = std::make_shared<CountingBackend>();
  NliGateway gw(backend);
  const std::vector<ScoreRequest> batch = {{"a", "b"}, {"a", " "}};
  CHECK_THROWS_AS(gw.score_pairs(batch), InvalidArgument);
  CHECK(backend->calls == 0);
}

TEST_CASE("cache is keyed by model", "[gateway]") {
  auto cache = std::make_shared<ScoreCache>();
  NliGateway a(std::make_shared<MockBackend>(BackendId::mock("model-a")), cache);
  NliGateway b(std::make_shared<MockBackend>(BackendId::mock("model-b")), cache);
  a.score_pair({"x y", "x"});
  b.score_pair({"x y", "x"});
  CHECK(a.backend_invocations() == 1);
  CHECK(b.backend_invocations() == 1);
  CHECK(cache->size() == 2);
}

TEST_CASE("result order follows request order under permutation", "[gateway][property]") {
  std::mt19937_64 rng(5);
  NliGateway gw(std::make_shared<MockBackend>());
  for (int round = 0; round < 50; ++round) {
    auto requests = sample_requests(rng, 12);
    const auto base = gw.score_pairs(requests);
    std::vector<std::size_t> perm(requests.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ScoreRequest> shuffled;
    for (auto i : perm) shuffled.push_back(requests[i]);
    const auto out = gw.score_pairs(shuffled);
    for (std::size_t j = 0; j < perm.size(); ++j) REQUIRE(out[j] == base[perm[j]]);
  }
}

TEST_CASE("wire protocol encoding and decoding", "[sidecar]") {
  const std::vector<ScoreRequest> reqs = {{"p \"1\"", "h"}};
  const json body = json::parse(make_batch_request(reqs));
  CHECK(body["pairs"][0]["premise"] == "p \"1\"");
  CHECK(body["pairs"][0]["hypothesis"] == "h");

  const auto parsed = parse_batch_response(
      R"({"scores":[{"p_e":0.7,"p_n":0.2,"p_c":0.1},{"p_e":0.33333,"p_n":0.33333,"p_c":0.33334}]})",
      2);
  CHECK(parsed[0] == NliDistribution{0.7, 0.2, 0.1});
  CHECK(parsed[1].entailment == 0.33333);
}

TEST_CASE("adversarial sidecar responses are protocol errors", "[sidecar][property]") {
  const std::vector<std::string> bad = {
      "",
      "[]",
      "{}",
      "not json",
      R"({"scores":{}})",
      R"({"scores":[]})",
      R"({"scores":[{"p_e":0.5,"p_n":0.5,"p_c":0.0},{"p_e":1,"p_n":0,"p_c":0}]})",
      R"({"scores":[{"p_e":0.5,"p_n":0.5}]})",
      R"({"scores":[{"p_e":"0.5","p_n":0.5,"p_c":0}]})",
      R"({"scores":[{"p_e":0.6,"p_n":0.6,"p_c":0.0}]})",
      R"({"scores":[{"p_e":1.2,"p_n":-0.2,"p_c":0.0}]})",
      R"({"scores":[{"p_e":0.5,"p_n":0.5,"p_c":0.001}]})",
      R"({"scores":[{"p_e":null,"p_n":0.5,"p_c":0.5}]})",
      R"({"scores":[[0.5,0.25,0.25]]})",
      R"({"scores":[{"p_e":1e400,"p_n":0,"p_c":0}]})",
  };
  for (const auto& body : bad) {
    INFO(body);
    CHECK_THROWS_AS(parse_batch_response(body, 1), ProtocolError);
  }

  // Random perturbations of a valid distribution outside the wire tolerance.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    double e = u(rng), n = u(rng) * (1 - e), c = 1 - e - n;
    const double delta = (u(rng) < 0.5 ? -1 : 1) * (2e-4 + u(rng));
    switch (i % 3) {
      case 0: e += delta; break;
      case 1: n += delta; break;
      default: c += delta; break;
    }
    const json body = {{"scores", {{{"p_e", e}, {"p_n", n}, {"p_c", c}}}}};
    REQUIRE_THROWS_AS(parse_batch_response(body.dump(), 1), ProtocolError);
  }
}

TEST_CASE("remote backend against a well-behaved sidecar", "[sidecar]") {
  FakeSidecar sidecar(honest);
  auto options = fast_options();
  options.max_batch_size = 4;
  auto backend = std::make_shared<RemoteBackend>(BackendId::remote("fake-nli", sidecar.endpoint()),
                                                 options);
  NliGateway gw(backend, std::make_shared<ScoreCache>());
  std::mt19937_64 rng(21);
  const auto requests = sample_requests(rng, 18);
  const auto out = gw.score_pairs(requests);
  REQUIRE(out.size() == requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    REQUIRE(out[i] == mock_score(requests[i].premise, requests[i].hypothesis));
  }
  CHECK(backend->http_requests() == 5);  // ceil(18 / 4)

  const int before = sidecar.requests.load();
  CHECK(gw.score_pairs(requests) == out);
  CHECK(sidecar.requests.load() == before);

  const auto health = fetch_health(sidecar.endpoint());
  CHECK(health.status == "ok");
  CHECK(health.model == "fake-nli");
  CHECK(health.class_order ==
        std::vector<std::string>{"entailment", "neutral", "contradiction"});
}

TEST_CASE("remote backend retries server errors", "[sidecar]") {
  std::atomic<int> failures{2};
  FakeSidecar sidecar([&](const httplib::Request& req, httplib::Response& res) {
    if (failures.fetch_sub(1) > 0) {
      res.status = 503;
      return;
    }
    honest(req, res);
  });
  RemoteBackend backend(BackendId::remote("fake", sidecar.endpoint()), fast_options());
  const std::vector<ScoreRequest> reqs = {{"a b", "a"}};
  CHECK(backend.score(reqs)[0] == NliDistribution{1.0, 0.0, 0.0});
  CHECK(sidecar.requests.load() == 3);
}

TEST_CASE("exhausted retries raise backend-unavailable", "[sidecar]") {
  FakeSidecar sidecar([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  RemoteBackend backend(BackendId::remote("fake", sidecar.endpoint()), fast_options());
  const std::vector<ScoreRequest> reqs = {{"a b", "a"}, {"c", "d"}};
  try {
    backend.score(reqs);
    FAIL("expected BackendUnavailable");
  } catch (const BackendUnavailable& e) {
    CHECK(std::string(e.what()).find("[0, 2)") != std::string::npos);
  }
  CHECK(sidecar.requests.load() == 3);

  // Nothing listening at all.
  RemoteBackend nowhere(BackendId::remote("fake", "http://127.0.0.1:1"), fast_options());
  CHECK_THROWS_AS(nowhere.score(reqs), BackendUnavailable);
  CHECK_THROWS_AS(fetch_health("http://127.0.0.1:1"), BackendUnavailable);
}

TEST_CASE("client errors and malformed bodies are not retried", "[sidecar]") {
  FakeSidecar rejecting([](const httplib::Request&, httplib::Response& res) {
    res.status = 422;
    res.set_content("bad pairs", "text/plain");
  });
  RemoteBackend a(BackendId::remote("fake", rejecting.endpoint()), fast_options());
  const std::vector<ScoreRequest> reqs = {{"a b", "a"}};
  CHECK_THROWS_AS(a.score(reqs), ProtocolError);
  CHECK(rejecting.requests.load() == 1);

  FakeSidecar unnormalised([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"scores":[{"p_e":0.9,"p_n":0.9,"p_c":0.9}]})", "application/json");
  });
  NliGateway gw(std::make_shared<RemoteBackend>(
                    BackendId::remote("fake", unnormalised.endpoint()), fast_options()),
                std::make_shared<ScoreCache>());
  CHECK_THROWS_AS(gw.score_pairs(reqs), ProtocolError);
  CHECK(gw.cache()->size() == 0);
}

TEST_CASE("scu extraction client", "[sidecar]") {
  const auto parsed = parse_scu_response(
      R"({"sentences":["A b.","C d."],"scus":[["A","b"],[{"text":"C d"}]]})");
  CHECK(parsed.sentences == std::vector<std::string>{"A b.", "C d."});
  CHECK(parsed.scus == std::vector<std::vector<std::string>>{{"A", "b"}, {"C d"}});
  CHECK_THROWS_AS(parse_scu_response(R"({"sentences":["A."],"scus":[]})"), ProtocolError);
  CHECK_THROWS_AS(parse_scu_response(R"({"sentences":["A."]})"), ProtocolError);
  CHECK_THROWS_AS(parse_scu_response(R"({"sentences":["A."],"scus":[[{"t":1}]]})"),
                  ProtocolError);

  FakeSidecar sidecar(honest);
  sidecar.scu_handler = [](const httplib::Request& req, httplib::Response& res) {
    const json in = json::parse(req.body);
    const std::string text = in["text"];
    json out;
    out["sentences"] = json::array({text});
    out["scus"] = json::array({json::array({text + " (1)", text + " (2)"})});
    res.set_content(out.dump(), "application/json");
  };
  const auto got = extract_scus(sidecar.endpoint(), "One fact.", fast_options());
  CHECK(got.sentences == std::vector<std::string>{"One fact."});
  CHECK(got.scus[0] == std::vector<std::string>{"One fact. (1)", "One fact. (2)"});
}
