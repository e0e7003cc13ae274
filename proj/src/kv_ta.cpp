// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/kv_ta.hpp"

#include <cstring>
#include <new>

namespace teekv::kv {

namespace {

uint64_t KeyOf(const core::TaValue& v) {
  return (static_cast<uint64_t>(*v.b) << 32) | *v.a;
}

// Resolves the value window for PUT/GET. Two parameters: the memref is the
// value itself. Three parameters (whole-region carrier): the chunk sits at
// offset = key; for PUT the length is p2.a, for GET the stored length.
struct ValueWindow {
  uint8_t* data = nullptr;
  size_t capacity = 0;
  bool whole_carrier = false;
};

enum class WindowStatus { kOk, kMalformed, kOutOfBounds };

WindowStatus ResolveWindow(core::TaParams params, uint64_t key, size_t whole_len,
                           ValueWindow* out) {
  core::TaMem* mem = core::MemAt(params, 1);
  if (mem == nullptr) return WindowStatus::kMalformed;
  if (params.size() == 2) {
    out->data = mem->bytes.data();
    out->capacity = mem->bytes.size();
    out->whole_carrier = false;
    return WindowStatus::kOk;
  }
  if (params.size() == 3 && core::ValueAt(params, 2) != nullptr) {
    if (whole_len > mem->bytes.size() || key > mem->bytes.size() - whole_len) {
      return WindowStatus::kOutOfBounds;
    }
    out->data = mem->bytes.data() + key;
    out->capacity = whole_len;
    out->whole_carrier = true;
    return WindowStatus::kOk;
  }
  return WindowStatus::kMalformed;
}

}  // namespace

KvTa::Node* KvTa::Find(uint64_t key, Node*** prev_link) {
  Node** link = &chains_[HashIndex(key)];
  while (*link != nullptr) {
    if ((*link)->key == key) {
      if (prev_link != nullptr) *prev_link = link;
      return *link;
    }
    link = &(*link)->next;
  }
  return nullptr;
}

uint32_t KvTa::OnInvoke(core::TaServices& services, uint32_t command_id, core::TaParams params) {
  switch (command_id) {
    case kCmdPut:
      return DoPut(services, params);
    case kCmdGet:
      return DoGet(services, params);
    case kCmdDel:
      return DoDel(services, params);
    case kCmdClear:
      if (!params.empty()) return kBadParameters;
      return DoClear(services);
    default:
      return kBadParameters;
  }
}

uint32_t KvTa::DoPut(core::TaServices& services, core::TaParams params) {
  core::TaValue* key_param = core::ValueAt(params, 0);
  if (key_param == nullptr || params.size() < 2 || params.size() > 3) return kBadParameters;
  uint64_t key = KeyOf(*key_param);

  size_t len = 0;
  if (params.size() == 3) {
    core::TaValue* chunk = core::ValueAt(params, 2);
    if (chunk == nullptr) return kBadParameters;
    len = *chunk->a;
  } else if (core::TaMem* mem = core::MemAt(params, 1); mem != nullptr) {
    len = mem->bytes.size();
  } else {
    return kBadParameters;
  }
  if (len == 0 || len > kMaxValueSize) return kBadParameters;

  ValueWindow window;
  if (ResolveWindow(params, key, len, &window) != WindowStatus::kOk) return kBadParameters;
  if (window.capacity < len) return kBadParameters;

  // Alloc-first: the new entry must fit before the old one is released.
  Node* node = static_cast<Node*>(services.Alloc(sizeof(Node)));
  if (node == nullptr) return kOutOfMemory;
  uint8_t* data = static_cast<uint8_t*>(services.Alloc(len));
  if (data == nullptr) {
    services.Free(node);
    return kOutOfMemory;
  }
  std::memcpy(data, window.data, len);

  Node** prev_link = nullptr;
  if (Node* old = Find(key, &prev_link); old != nullptr) {
    *prev_link = old->next;
    services.Free(old->data);
    services.Free(old);
    count_.fetch_sub(1);
  }

  size_t chain = HashIndex(key);
  new (node) Node{key, chains_[chain], data, static_cast<uint32_t>(len)};
  chains_[chain] = node;
  count_.fetch_add(1);
  return kSuccess;
}

uint32_t KvTa::DoGet(core::TaServices&, core::TaParams params) {
  core::TaValue* key_param = core::ValueAt(params, 0);
  if (key_param == nullptr || params.size() < 2 || params.size() > 3) return kBadParameters;
  uint64_t key = KeyOf(*key_param);

  Node* node = Find(key, nullptr);
  if (node == nullptr) return kItemNotFound;

  ValueWindow window;
  switch (ResolveWindow(params, key, node->len, &window)) {
    case WindowStatus::kOk:
      break;
    case WindowStatus::kMalformed:
      return kBadParameters;
    case WindowStatus::kOutOfBounds:
      *key_param->b = node->len;
      return kShortBuffer;  // value does not fit at [key, key+len)
  }
  if (window.capacity < node->len) {
    *key_param->b = node->len;  // required length
    return kShortBuffer;
  }
  std::memcpy(window.data, node->data, node->len);
  *key_param->b = node->len;
  return kSuccess;
}

uint32_t KvTa::DoDel(core::TaServices& services, core::TaParams params) {
  core::TaValue* key_param = core::ValueAt(params, 0);
  if (key_param == nullptr || params.size() != 1) return kBadParameters;
  uint64_t key = KeyOf(*key_param);

  Node** prev_link = nullptr;
  Node* node = Find(key, &prev_link);
  if (node == nullptr) return kItemNotFound;

  *prev_link = node->next;
  services.Free(node->data);
  services.Free(node);
  count_.fetch_sub(1);
  return kSuccess;
}

uint32_t KvTa::DoClear(core::TaServices& services) {
  for (Node*& chain : chains_) {
    Node* node = chain;
    while (node != nullptr) {
      Node* next = node->next;
      services.Free(node->data);
      services.Free(node);
      node = next;
    }
    chain = nullptr;
  }
  count_.store(0);
  return kSuccess;
}

void KvTa::OnDestroy(core::TaServices& services) { DoClear(services); }

std::vector<uint64_t> KvTa::ChainKeys(size_t chain) const {
  std::vector<uint64_t> keys;
  if (chain >= kChainCount) return keys;
  for (const Node* node = chains_[chain]; node != nullptr; node = node->next) {
    keys.push_back(node->key);
  }
  return keys;
}

}  // namespace teekv::kv
