// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "support/temp_dir.hpp"
#include "teekv/rng.hpp"
#include "teekv/supplicant.hpp"
#include "teekv/well_known.hpp"

using namespace teekv;
using supplicant::Supplicant;
using testing::ScopedTempDir;

namespace {

std::unique_ptr<Supplicant> MakeSupplicant(const ScopedTempDir& dir) {
  return std::make_unique<Supplicant>(dir.path() / "store", dir.path() / "manifest.txt");
}

void WriteManifest(const ScopedTempDir& dir, const std::string& content) {
  std::ofstream out(dir.path() / "manifest.txt");
  out << content;
}

}  // namespace

TEST_CASE("fs write then read round-trips byte-exactly") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  auto open = supp->FsOpen("aa/bb.obj", true);
  REQUIRE(open.ok());
  CHECK(open.value().size == 0);

  std::vector<uint8_t> bytes = {1, 2, 3, 250, 251, 252};
  CHECK(supp->FsWrite(open.value().file_id, 0, bytes) == kSuccess);

  auto read = supp->FsRead(open.value().file_id, 0, bytes.size());
  REQUIRE(read.ok());
  CHECK(read.value() == bytes);

  auto reopened = supp->FsOpen("aa/bb.obj", false);
  REQUIRE(reopened.ok());
  CHECK(reopened.value().size == bytes.size());
  CHECK(reopened.value().file_id == open.value().file_id);
}

TEST_CASE("randomized offset/length writes read back exactly") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);
  auto open = supp->FsOpen("t/random.obj", true);
  REQUIRE(open.ok());
  uint64_t id = open.value().file_id;

  Rng rng(1234);
  std::vector<uint8_t> shadow(8192, 0);
  for (int round = 0; round < 200; ++round) {
    uint64_t offset = rng.Below(shadow.size() - 1);
    uint64_t length = 1 + rng.Below(shadow.size() - offset);
    std::vector<uint8_t> chunk(length);
    rng.Fill(chunk);
    std::copy(chunk.begin(), chunk.end(), shadow.begin() + offset);
    REQUIRE(supp->FsWrite(id, offset, chunk) == kSuccess);
  }

  auto read = supp->FsRead(id, 0, shadow.size());
  REQUIRE(read.ok());
  // The file only extends as far as the highest write; compare that prefix.
  REQUIRE(read.value().size() <= shadow.size());
  CHECK(std::equal(read.value().begin(), read.value().end(), shadow.begin()));

  // Reads past EOF come back short, not failed.
  auto tail = supp->FsRead(id, shadow.size() + 100, 64);
  REQUIRE(tail.ok());
  CHECK(tail.value().empty());
}

TEST_CASE("path traversal and malformed names are rejected") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  CHECK(supp->FsOpen("../etc/x", true).code() == kPathViolation);
  CHECK(supp->FsOpen("/abs/path", true).code() == kPathViolation);
  CHECK(supp->FsOpen("a/b/c", true).code() == kPathViolation);
  CHECK(supp->FsOpen("a/..", true).code() == kPathViolation);
  CHECK(supp->FsOpen("..", true).code() == kPathViolation);
  CHECK(supp->FsOpen(".", true).code() == kPathViolation);
  CHECK(supp->FsOpen("", true).code() == kPathViolation);
  CHECK(supp->FsOpen("a//b", true).code() == kPathViolation);
  CHECK(supp->FsOpen("a\\b", true).code() == kPathViolation);
  CHECK(supp->FsOpen("sp ace", true).code() == kPathViolation);
  CHECK(supp->FsRemove("../oops") == kPathViolation);

  // Nothing escaped the store root.
  CHECK(!std::filesystem::exists(dir.path() / "etc"));
}

TEST_CASE("create-exclusive open conflicts on existing files") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  REQUIRE(supp->FsOpen("x/y.obj", true).ok());
  CHECK(supp->FsOpen("x/y.obj", true).code() == kAccessConflict);
  CHECK(supp->FsOpen("missing.obj", false).code() == kItemNotFound);
}

TEST_CASE("remove deletes and misses report not-found") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  REQUIRE(supp->FsOpen("x/y.obj", true).ok());
  CHECK(supp->FsRemove("x/y.obj") == kSuccess);
  CHECK(supp->FsOpen("x/y.obj", false).code() == kItemNotFound);
  CHECK(supp->FsRemove("x/y.obj") == kItemNotFound);
}

TEST_CASE("list filters by prefix") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  REQUIRE(supp->FsOpen("aaaa/1.obj", true).ok());
  REQUIRE(supp->FsOpen("aaaa/2.obj", true).ok());
  REQUIRE(supp->FsOpen("bbbb/1.obj", true).ok());

  auto all = supp->FsList("");
  REQUIRE(all.ok());
  CHECK(all.value().size() == 3);

  auto filtered = supp->FsList("aaaa/");
  REQUIRE(filtered.ok());
  CHECK(filtered.value() == std::vector<std::string>{"aaaa/1.obj", "aaaa/2.obj"});
}

TEST_CASE("load_ta consults the manifest") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  SUBCASE("no manifest file") { CHECK(supp->LoadTa(kKvTaUuid).code() == kTaNotFound); }

  SUBCASE("entry found") {
    WriteManifest(dir, "# comment line\n\n" + kKvTaUuid.ToString() + " user 1048576\n");
    auto entry = supp->LoadTa(kKvTaUuid);
    REQUIRE(entry.ok());
    CHECK(entry.value().uuid == kKvTaUuid);
    CHECK(entry.value().kind == TaKind::kUser);
    CHECK(entry.value().memory_limit == 1048576);
  }

  SUBCASE("uuid missing") {
    WriteManifest(dir, kKvTaUuid.ToString() + " user 1048576\n");
    CHECK(supp->LoadTa(kStatsPtaUuid).code() == kTaNotFound);
  }

  SUBCASE("pseudo entries are not loadable from the REE") {
    WriteManifest(dir, kKvTaUuid.ToString() + " pseudo 1048576\n");
    CHECK(supp->LoadTa(kKvTaUuid).code() == kTaNotFound);
  }

  SUBCASE("malformed lines are skipped") {
    WriteManifest(dir, "not-a-uuid user 10\n" + kKvTaUuid.ToString() + " user 2048\n");
    auto entry = supp->LoadTa(kKvTaUuid);
    REQUIRE(entry.ok());
    CHECK(entry.value().memory_limit == 2048);
  }
}

TEST_CASE("every call increments the rpc counters") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);

  CHECK(supp->total_rpcs() == 0);
  (void)supp->LoadTa(kKvTaUuid);
  auto open = supp->FsOpen("q/w.obj", true);
  REQUIRE(open.ok());
  (void)supp->FsWrite(open.value().file_id, 0, std::vector<uint8_t>{1});
  (void)supp->FsRead(open.value().file_id, 0, 1);
  (void)supp->FsRemove("q/w.obj");
  (void)supp->FsList("");

  CHECK(supp->total_rpcs() == 6);
  CHECK(supp->rpcs(supplicant::RpcKind::kLoadTa) == 1);
  CHECK(supp->rpcs(supplicant::RpcKind::kFsOpen) == 1);
  CHECK(supp->rpcs(supplicant::RpcKind::kFsWrite) == 1);
  CHECK(supp->rpcs(supplicant::RpcKind::kFsRead) == 1);
  CHECK(supp->rpcs(supplicant::RpcKind::kFsRemove) == 1);
  CHECK(supp->rpcs(supplicant::RpcKind::kFsList) == 1);
}

TEST_CASE("write is durable in the backing file when the call returns") {
  ScopedTempDir dir("supp");
  auto supp = MakeSupplicant(dir);
  auto open = supp->FsOpen("d/durable.obj", true);
  REQUIRE(open.ok());
  std::vector<uint8_t> bytes = {9, 8, 7};
  REQUIRE(supp->FsWrite(open.value().file_id, 0, bytes) == kSuccess);

  // Independent read, no supplicant involved.
  std::ifstream in(dir.path() / "store" / "d" / "durable.obj", std::ios::binary);
  std::vector<uint8_t> on_disk((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
  CHECK(on_disk == bytes);
}
