// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/secure_storage.hpp"

#include <algorithm>
#include <cstring>

namespace teekv::storage {

namespace {

constexpr std::string_view kStaticHukText = "static-huk-fallback";

void AppendLe64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// Associated data binding an object's ciphertexts to its identity.
std::vector<uint8_t> FekAad(const Uuid& ta, std::span<const uint8_t> object_id) {
  std::vector<uint8_t> aad(ta.bytes().begin(), ta.bytes().end());
  aad.insert(aad.end(), object_id.begin(), object_id.end());
  return aad;
}

std::vector<uint8_t> DataAad(const Uuid& ta, std::span<const uint8_t> object_id,
                             uint64_t data_len) {
  std::vector<uint8_t> aad = FekAad(ta, object_id);
  AppendLe64(aad, data_len);
  return aad;
}

}  // namespace

Huk Huk::StaticFallback() {
  Huk huk;
  huk.source = Source::kStaticFallback;
  std::memcpy(huk.bytes.data(), kStaticHukText.data(), kStaticHukText.size());
  return huk;
}

Ssk DeriveSsk(const Huk& huk) {
  Ssk ssk;
  ssk.bytes = crypto::HmacSha256(
      huk.bytes, std::span<const uint8_t>(
                     reinterpret_cast<const uint8_t*>(kSskDerivationMessage.data()),
                     kSskDerivationMessage.size()));
  return ssk;
}

Tsk DeriveTsk(const Ssk& ssk, const Uuid& ta) {
  Tsk tsk;
  tsk.ta = ta;
  tsk.bytes = crypto::HmacSha256(ssk.bytes, ta.bytes());
  return tsk;
}

StorageService::StorageService(Huk huk, supplicant::Supplicant& supplicant, uint64_t prng_seed)
    : supplicant_(supplicant), ssk_(DeriveSsk(huk)), rng_(prng_seed) {}

std::string StorageService::ObjectFileName(const Uuid& ta, std::span<const uint8_t> object_id) {
  return ta.ToString() + "/" + HexEncode(object_id) + ".obj";
}

void StorageService::FillRandom(std::span<uint8_t> out) {
  std::lock_guard<std::mutex> lock(rng_mu_);
  rng_.Fill(out);
}

std::vector<uint8_t> StorageService::EncodeObject(const PersistentObject& obj) {
  std::vector<uint8_t> file;
  file.reserve(kObjectEnvelopeSize + obj.data_.size());
  file.insert(file.end(), kObjectMagic.begin(), kObjectMagic.end());
  file.push_back(kObjectVersion);
  file.insert(file.end(), obj.ta_.bytes().begin(), obj.ta_.bytes().end());
  file.insert(file.end(), obj.fek_nonce_.begin(), obj.fek_nonce_.end());
  file.insert(file.end(), obj.wrapped_fek_.begin(), obj.wrapped_fek_.end());

  std::array<uint8_t, crypto::kAeadNonceSize> data_nonce{};
  FillRandom(data_nonce);
  crypto::Sealed sealed = crypto::AeadSeal(obj.fek_, data_nonce, obj.data_,
                                           DataAad(obj.ta_, obj.object_id_, obj.data_.size()));

  file.insert(file.end(), data_nonce.begin(), data_nonce.end());
  file.insert(file.end(), sealed.ciphertext.begin(), sealed.ciphertext.end());
  file.insert(file.end(), sealed.tag.begin(), sealed.tag.end());
  return file;
}

Result<PersistentObject> StorageService::Create(const Uuid& ta,
                                                std::span<const uint8_t> object_id,
                                                std::span<const uint8_t> initial) {
  using R = Result<PersistentObject>;
  if (object_id.empty() || object_id.size() > kMaxObjectIdSize) return R::Error(kBadParameters);
  if (initial.size() > kObjectQuota) return R::Error(kQuotaExceeded);

  std::string name = ObjectFileName(ta, object_id);
  auto open = supplicant_.FsOpen(name, /*create=*/true);
  if (!open.ok()) return R::Error(open.code());  // kAccessConflict when it exists

  PersistentObject obj;
  obj.service_ = this;
  obj.ta_ = ta;
  obj.object_id_.assign(object_id.begin(), object_id.end());
  obj.file_name_ = std::move(name);
  obj.file_id_ = open.value().file_id;
  obj.data_.assign(initial.begin(), initial.end());

  FillRandom(obj.fek_);
  FillRandom(obj.fek_nonce_);
  crypto::Sealed wrapped =
      crypto::AeadSeal(TskFor(ta).bytes, obj.fek_nonce_, obj.fek_, FekAad(ta, object_id));
  std::copy(wrapped.ciphertext.begin(), wrapped.ciphertext.end(), obj.wrapped_fek_.begin());
  std::copy(wrapped.tag.begin(), wrapped.tag.end(), obj.wrapped_fek_.begin() + 32);

  if (uint32_t code = obj.Flush(); code != kSuccess) return R::Error(code);
  return obj;
}

Result<PersistentObject> StorageService::Open(const Uuid& ta,
                                              std::span<const uint8_t> object_id) {
  using R = Result<PersistentObject>;
  if (object_id.empty() || object_id.size() > kMaxObjectIdSize) return R::Error(kBadParameters);

  std::string name = ObjectFileName(ta, object_id);
  auto open = supplicant_.FsOpen(name, /*create=*/false);
  if (!open.ok()) {
    return R::Error(open.code() == kItemNotFound ? kItemNotFound : open.code());
  }
  uint64_t file_size = open.value().size;
  if (file_size < kObjectEnvelopeSize) return R::Error(kCorruptObject);

  auto read = supplicant_.FsRead(open.value().file_id, 0, file_size);
  if (!read.ok()) return R::Error(read.code());
  const std::vector<uint8_t>& file = read.value();
  if (file.size() != file_size) return R::Error(kCorruptObject);

  size_t at = 0;
  if (!std::equal(kObjectMagic.begin(), kObjectMagic.end(), file.begin())) {
    return R::Error(kCorruptObject);
  }
  at += kObjectMagic.size();
  if (file[at] != kObjectVersion) return R::Error(kCorruptObject);
  at += 1;

  std::array<uint8_t, 16> uuid_bytes{};
  std::copy_n(file.begin() + at, 16, uuid_bytes.begin());
  at += 16;
  if (Uuid(uuid_bytes) != ta) return R::Error(kCorruptObject);

  PersistentObject obj;
  obj.service_ = this;
  obj.ta_ = ta;
  obj.object_id_.assign(object_id.begin(), object_id.end());
  obj.file_name_ = std::move(name);
  obj.file_id_ = open.value().file_id;

  std::copy_n(file.begin() + at, obj.fek_nonce_.size(), obj.fek_nonce_.begin());
  at += obj.fek_nonce_.size();
  std::copy_n(file.begin() + at, obj.wrapped_fek_.size(), obj.wrapped_fek_.begin());
  at += obj.wrapped_fek_.size();

  std::span<const uint8_t> wrapped_ct(obj.wrapped_fek_.data(), 32);
  std::span<const uint8_t, crypto::kAeadTagSize> wrapped_tag(obj.wrapped_fek_.data() + 32,
                                                             crypto::kAeadTagSize);
  auto fek = crypto::AeadOpen(TskFor(ta).bytes, obj.fek_nonce_, wrapped_ct, wrapped_tag,
                              FekAad(ta, object_id));
  if (!fek || fek->size() != obj.fek_.size()) return R::Error(kCorruptObject);
  std::copy(fek->begin(), fek->end(), obj.fek_.begin());

  std::array<uint8_t, crypto::kAeadNonceSize> data_nonce{};
  std::copy_n(file.begin() + at, data_nonce.size(), data_nonce.begin());
  at += data_nonce.size();

  size_t data_len = file_size - kObjectEnvelopeSize;
  std::span<const uint8_t> ciphertext(file.data() + at, data_len);
  at += data_len;
  std::span<const uint8_t, crypto::kAeadTagSize> tag(file.data() + at, crypto::kAeadTagSize);

  auto plaintext =
      crypto::AeadOpen(obj.fek_, data_nonce, ciphertext, tag, DataAad(ta, object_id, data_len));
  if (!plaintext) return R::Error(kCorruptObject);
  obj.data_ = std::move(*plaintext);
  return obj;
}

PersistentObject::PersistentObject(PersistentObject&& other) noexcept { *this = std::move(other); }

PersistentObject& PersistentObject::operator=(PersistentObject&& other) noexcept {
  if (this != &other) {
    service_ = other.service_;
    ta_ = other.ta_;
    object_id_ = std::move(other.object_id_);
    file_name_ = std::move(other.file_name_);
    file_id_ = other.file_id_;
    fek_ = other.fek_;
    fek_nonce_ = other.fek_nonce_;
    wrapped_fek_ = other.wrapped_fek_;
    data_ = std::move(other.data_);
    cursor_ = other.cursor_;
    closed_ = other.closed_;
    other.service_ = nullptr;
    other.closed_ = true;
  }
  return *this;
}

PersistentObject::~PersistentObject() = default;

uint32_t PersistentObject::Flush() {
  std::vector<uint8_t> file = service_->EncodeObject(*this);
  return service_->supplicant_.FsWrite(file_id_, 0, file);
}

Result<std::vector<uint8_t>> PersistentObject::ReadChunk(size_t len) {
  using R = Result<std::vector<uint8_t>>;
  if (closed_) return R::Error(kStaleHandle);
  if (len > kMaxChunkSize) return R::Error(kBadParameters);
  size_t n = std::min(len, data_.size() - cursor_);
  std::vector<uint8_t> out(data_.begin() + cursor_, data_.begin() + cursor_ + n);
  cursor_ += n;
  return out;
}

uint32_t PersistentObject::WriteChunk(std::span<const uint8_t> bytes) {
  if (closed_) return kStaleHandle;
  if (bytes.size() > kMaxChunkSize) return kBadParameters;
  size_t end = cursor_ + bytes.size();
  if (end > kObjectQuota) return kQuotaExceeded;
  if (end > data_.size()) data_.resize(end);
  std::copy(bytes.begin(), bytes.end(), data_.begin() + cursor_);
  cursor_ = end;
  return Flush();
}

uint32_t PersistentObject::Seek(size_t pos) {
  if (closed_) return kStaleHandle;
  if (pos > data_.size()) return kBadParameters;
  cursor_ = pos;
  return kSuccess;
}

uint32_t PersistentObject::Remove() {
  if (closed_) return kStaleHandle;
  uint32_t code = service_->supplicant_.FsRemove(file_name_);
  closed_ = true;
  return code;
}

}  // namespace teekv::storage
