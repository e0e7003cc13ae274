// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <fstream>
#include <thread>

#include "support/temp_dir.hpp"
#include "teekv/secure_storage.hpp"
#include "teekv/supplicant.hpp"
#include "teekv/tee_core.hpp"

using namespace teekv;
using namespace teekv::core;
using testing::ScopedTempDir;

namespace {

const Uuid kUserUuid = *Uuid::Parse("00000000-0000-4000-8000-0000000000aa");
const Uuid kOtherUserUuid = *Uuid::Parse("00000000-0000-4000-8000-0000000000ab");
const Uuid kPseudoUuid = *Uuid::Parse("00000000-0000-4000-8000-0000000000bb");

// Command 0: echo p0.a as return code. Command 1: sleep p0.a microseconds.
// Command 2: throw (panic). Command 3: alloc p0.a bytes, keep it. Command 4:
// free everything kept. Command 5: storage create probe.
class ProbeTa : public TrustedApp {
 public:
  uint32_t OnInvoke(TaServices& services, uint32_t command_id, TaParams params) override {
    TaValue* v = ValueAt(params, 0);
    switch (command_id) {
      case 0:
        return v != nullptr ? *v->a : kSuccess;
      case 1:
        std::this_thread::sleep_for(std::chrono::microseconds(v != nullptr ? *v->a : 0));
        return kSuccess;
      case 2:
        throw std::runtime_error("ta panic");
      case 3: {
        void* p = services.Alloc(v != nullptr ? *v->a : 0);
        if (p == nullptr) return kOutOfMemory;
        held_.push_back(p);
        return kSuccess;
      }
      case 4:
        for (void* p : held_) services.Free(p);
        held_.clear();
        return kSuccess;
      case 5: {
        static constexpr uint8_t kId[] = {'p', 'r', 'o', 'b', 'e'};
        auto created = services.CreateObject(kId, {});
        if (created.ok()) created.value().Remove();
        return created.ok() ? kSuccess : created.code();
      }
      default:
        return kBadParameters;
    }
  }

 private:
  std::vector<void*> held_;
};

struct CoreFixture {
  ScopedTempDir dir{"core"};
  supplicant::Supplicant supp{dir.path() / "store", dir.path() / "manifest.txt"};
  storage::StorageService storage{storage::Huk::StaticFallback(), supp, 7};
  TeeCore core{supp, storage};

  CoreFixture() {
    std::ofstream manifest(dir.path() / "manifest.txt");
    manifest << kUserUuid.ToString() << " user 1048576\n";
    manifest << kOtherUserUuid.ToString() << " user 1048576\n";
    manifest.close();

    core.RegisterUserTaFactory(kUserUuid, [] { return std::make_unique<ProbeTa>(); });
    core.RegisterUserTaFactory(kOtherUserUuid, [] { return std::make_unique<ProbeTa>(); });
    TaDescriptor pseudo{kPseudoUuid, TaKind::kPseudo, kDefaultTaMemoryLimit};
    core.RegisterPseudoTa(pseudo, [] { return std::make_unique<ProbeTa>(); });
  }

  uint32_t InvokeValue(uint64_t session, uint32_t command, uint32_t a) {
    uint32_t b = 0;
    TaParam params[] = {TaValue{&a, &b}};
    return core.Dispatch(session, command, TaParams(params, 1));
  }
};

}  // namespace

TEST_CASE("fresh system reports zeroed stats") {
  CoreFixture fx;
  BoundaryStats stats = fx.core.ReadStats();
  CHECK(stats.world_switches == 0);
  CHECK(stats.supplicant_rpcs == 0);
}

TEST_CASE("duplicate registrations are rejected") {
  CoreFixture fx;
  TaDescriptor pseudo{kPseudoUuid, TaKind::kPseudo, kDefaultTaMemoryLimit};
  CHECK(fx.core.RegisterPseudoTa(pseudo, [] { return std::make_unique<ProbeTa>(); }) ==
        kDuplicateUuid);
  CHECK(fx.core.RegisterUserTaFactory(kUserUuid, [] { return std::make_unique<ProbeTa>(); }) ==
        kDuplicateUuid);
  TaDescriptor not_pseudo{kPseudoUuid, TaKind::kUser, kDefaultTaMemoryLimit};
  CHECK(fx.core.RegisterPseudoTa(not_pseudo, [] { return std::make_unique<ProbeTa>(); }) ==
        kBadParameters);
}

TEST_CASE("user TA load goes through the supplicant, pseudo does not") {
  CoreFixture fx;

  auto pseudo_session = fx.core.OpenSession(kPseudoUuid);
  REQUIRE(pseudo_session.ok());
  CHECK(fx.supp.rpcs(supplicant::RpcKind::kLoadTa) == 0);

  auto user_session = fx.core.OpenSession(kUserUuid);
  REQUIRE(user_session.ok());
  CHECK(fx.supp.rpcs(supplicant::RpcKind::kLoadTa) == 1);

  // Instance reuse: a second session issues no second LOAD_TA.
  auto second = fx.core.OpenSession(kUserUuid);
  REQUIRE(second.ok());
  CHECK(fx.supp.rpcs(supplicant::RpcKind::kLoadTa) == 1);

  auto unknown = fx.core.OpenSession(*Uuid::Parse("00000000-0000-4000-8000-0000000000ff"));
  CHECK(unknown.code() == kTaNotFound);
}

TEST_CASE("hook return codes pass through dispatch") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  CHECK(fx.InvokeValue(session.value(), 0, kItemNotFound) == kItemNotFound);
  CHECK(fx.InvokeValue(session.value(), 0, kSuccess) == kSuccess);
  CHECK(fx.core.Dispatch(999999, 0, {}) == kStaleHandle);
}

TEST_CASE("panic destroys the instance and poisons its sessions") {
  CoreFixture fx;
  auto s1 = fx.core.OpenSession(kUserUuid);
  auto s2 = fx.core.OpenSession(kUserUuid);
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());

  CHECK(fx.InvokeValue(s1.value(), 2, 0) == kTargetDead);
  CHECK(fx.core.GetInstanceInfo(kUserUuid)->state == InstanceState::kDestroyed);
  CHECK(fx.InvokeValue(s2.value(), 0, 0) == kTargetDead);
  CHECK(fx.core.CloseSession(s2.value()) == kSuccess);

  // A fresh open re-loads the TA (new LOAD_TA) and works again.
  uint64_t loads_before = fx.supp.rpcs(supplicant::RpcKind::kLoadTa);
  auto s3 = fx.core.OpenSession(kUserUuid);
  REQUIRE(s3.ok());
  CHECK(fx.supp.rpcs(supplicant::RpcKind::kLoadTa) == loads_before + 1);
  CHECK(fx.InvokeValue(s3.value(), 0, 0) == kSuccess);
}

TEST_CASE("ta heap accounting: exact limit, free and realloc") {
  TaHeap heap(kDefaultTaMemoryLimit);

  SUBCASE("full-limit alloc then one more byte") {
    void* all = heap.Alloc(kDefaultTaMemoryLimit);
    REQUIRE(all != nullptr);
    CHECK(heap.used() == kDefaultTaMemoryLimit);
    CHECK(heap.Alloc(1) == nullptr);
    CHECK(heap.Free(all) == kSuccess);
    CHECK(heap.used() == 0);
    CHECK(heap.Alloc(kDefaultTaMemoryLimit) != nullptr);
  }

  SUBCASE("1024 allocations of 1 KiB fill the accounted megabyte") {
    std::vector<void*> blocks;
    for (int i = 0; i < 1024; ++i) {
      void* p = heap.Alloc(1024);
      REQUIRE(p != nullptr);
      blocks.push_back(p);
    }
    CHECK(heap.used() == kDefaultTaMemoryLimit);
    CHECK(heap.Alloc(1) == nullptr);
    for (void* p : blocks) CHECK(heap.Free(p) == kSuccess);
    CHECK(heap.used() == 0);
  }

  SUBCASE("zero-size and foreign pointers are rejected") {
    CHECK(heap.Alloc(0) == nullptr);
    int x = 0;
    CHECK(heap.Free(&x) == kBadParameters);
  }
}

TEST_CASE("heap accounting equals the sum of live allocations through dispatch") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());

  CHECK(fx.InvokeValue(session.value(), 3, 1000) == kSuccess);
  CHECK(fx.InvokeValue(session.value(), 3, 24) == kSuccess);
  CHECK(fx.core.GetInstanceInfo(kUserUuid)->heap_used == 1024);
  CHECK(fx.InvokeValue(session.value(), 4, 0) == kSuccess);
  CHECK(fx.core.GetInstanceInfo(kUserUuid)->heap_used == 0);
}

TEST_CASE("world switches count opens, closes and invokes exactly") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  uint64_t after_open = fx.core.ReadStats().world_switches;
  CHECK(after_open == 1);

  const int n = 57;
  for (int i = 0; i < n; ++i) {
    CHECK(fx.InvokeValue(session.value(), 0, 0) == kSuccess);
  }
  CHECK(fx.core.ReadStats().world_switches == after_open + n);

  CHECK(fx.core.CloseSession(session.value()) == kSuccess);
  CHECK(fx.core.ReadStats().world_switches == after_open + n + 1);
  CHECK(fx.core.ReadStats().world_switches == n + kSessionSwitchOverhead);
}

TEST_CASE("stats are monotonic and storage flushes show up as rpcs") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  uint64_t rpcs_before = fx.core.ReadStats().supplicant_rpcs;
  CHECK(fx.InvokeValue(session.value(), 5, 0) == kSuccess);  // create+remove object
  CHECK(fx.core.ReadStats().supplicant_rpcs > rpcs_before);
}

TEST_CASE("injected latency bounds the invoke round trip from below") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  fx.core.set_injected_latency(std::chrono::milliseconds(2));

  auto t0 = std::chrono::steady_clock::now();
  const int n = 5;
  for (int i = 0; i < n; ++i) fx.InvokeValue(session.value(), 0, 0);
  auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(elapsed >= n * std::chrono::milliseconds(2));
  CHECK(fx.core.ReadStats().injected_latency == std::chrono::milliseconds(2));
}

TEST_CASE("dispatches to one instance never overlap") {
  CoreFixture fx;
  fx.core.set_trace_enabled(true);
  auto s1 = fx.core.OpenSession(kUserUuid);
  auto s2 = fx.core.OpenSession(kUserUuid);
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());

  auto worker = [&fx](uint64_t session) {
    for (int i = 0; i < 40; ++i) {
      uint32_t us = 100;
      uint32_t b = 0;
      TaParam params[] = {TaValue{&us, &b}};
      CHECK(fx.core.Dispatch(session, 1, TaParams(params, 1)) == kSuccess);
    }
  };
  std::thread t1(worker, s1.value());
  std::thread t2(worker, s2.value());
  t1.join();
  t2.join();

  auto trace = fx.core.TakeTrace();
  REQUIRE(trace.size() == 160);
  int depth = 0;
  for (const DispatchEvent& event : trace) {
    depth += event.phase == DispatchEvent::Phase::kEnter ? 1 : -1;
    CHECK(depth >= 0);
    CHECK(depth <= 1);  // never two enters without an exit between
  }
  CHECK(depth == 0);
}

TEST_CASE("distinct instances may run concurrently") {
  CoreFixture fx;
  fx.core.set_trace_enabled(true);
  auto s1 = fx.core.OpenSession(kUserUuid);
  auto s2 = fx.core.OpenSession(kOtherUserUuid);
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());

  auto worker = [&fx](uint64_t session) {
    for (int i = 0; i < 20; ++i) {
      uint32_t us = 200;
      uint32_t b = 0;
      TaParam params[] = {TaValue{&us, &b}};
      fx.core.Dispatch(session, 1, TaParams(params, 1));
    }
  };
  std::thread t1(worker, s1.value());
  std::thread t2(worker, s2.value());
  t1.join();
  t2.join();

  // Per-instance alternation still holds within each instance id.
  auto trace = fx.core.TakeTrace();
  std::map<uint64_t, int> depth;
  for (const DispatchEvent& event : trace) {
    int& d = depth[event.instance_id];
    d += event.phase == DispatchEvent::Phase::kEnter ? 1 : -1;
    CHECK(d >= 0);
    CHECK(d <= 1);
  }
}

TEST_CASE("pseudo TAs are denied the trusted-storage api") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kPseudoUuid);
  REQUIRE(session.ok());
  CHECK(fx.InvokeValue(session.value(), 5, 0) == kAccessDenied);
}

TEST_CASE("close of a closed session is stale") {
  CoreFixture fx;
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  CHECK(fx.core.CloseSession(session.value()) == kSuccess);
  CHECK(fx.core.CloseSession(session.value()) == kStaleHandle);
}

TEST_CASE("instance state tracks open sessions") {
  CoreFixture fx;
  CHECK(!fx.core.GetInstanceInfo(kUserUuid).has_value());
  auto session = fx.core.OpenSession(kUserUuid);
  REQUIRE(session.ok());
  CHECK(fx.core.GetInstanceInfo(kUserUuid)->state == InstanceState::kSessionsOpen);
  CHECK(fx.core.CloseSession(session.value()) == kSuccess);
  CHECK(fx.core.GetInstanceInfo(kUserUuid)->state == InstanceState::kCreated);
}
