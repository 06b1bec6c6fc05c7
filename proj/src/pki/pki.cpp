#include "paarc/pki/pki.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

namespace paarc::pki {

std::string to_hex(std::string_view bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out += digits[c >> 4];
        out += digits[c & 0x0f];
    }
    return out;
}

std::string from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument(std::string("non-hex character '") + c + "'");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out += static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1]));
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), md);
    return to_hex(std::string_view(reinterpret_cast<const char*>(md), sizeof md));
}

bool Signer::verify(std::string_view bytes, std::string_view signature) const {
    const std::string expected = sign(bytes);
    return expected.size() == signature.size() &&
           CRYPTO_memcmp(expected.data(), signature.data(), expected.size()) == 0;
}

std::string HmacSigner::sign(std::string_view bytes) const {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    HMAC(EVP_sha256(), key_.data(), static_cast<int>(key_.size()), reinterpret_cast<const unsigned char*>(bytes.data()),
         bytes.size(), md, &len);
    return to_hex(std::string_view(reinterpret_cast<const char*>(md), len));
}

std::string canonical_cert_bytes(const Certificate& c) {
    std::string out;
    out += std::to_string(c.serial) + '\n';
    out += c.subject + '\n';
    out += c.issuer + '\n';
    out += std::to_string(c.not_before) + '\n';
    out += std::to_string(c.not_after) + '\n';
    out += c.key_fingerprint + '\n';
    return out;
}

void RegistrationAuthority::register_secret(const std::string& subject, std::string secret) {
    secrets_.insert_or_assign(subject, std::move(secret));
}

RaVerdict RegistrationAuthority::verify(const IdentityClaim& claim) const {
    auto it = secrets_.find(claim.subject);
    if (it == secrets_.end()) throw UnknownSubject(claim.subject);
    RaVerdict v;
    v.claim = claim;
    if (claim.not_before >= claim.not_after) {
        v.reason = "bad-validity";
    } else if (claim.proof != it->second) {
        v.reason = "proof-mismatch";
    } else {
        v.approved = true;
    }
    return v;
}

Certificate CertificateAuthority::issue(const RaVerdict& verdict) {
    if (!verdict.approved) throw NotApproved(verdict.claim.subject);
    Certificate c;
    c.subject = verdict.claim.subject;
    c.issuer = id_;
    c.not_before = verdict.claim.not_before;
    c.not_after = verdict.claim.not_after;
    c.key_fingerprint = verdict.claim.key_fingerprint.empty() ? sha256_hex("device-key:" + c.subject).substr(0, 32)
                                                              : verdict.claim.key_fingerprint;
    {
        std::lock_guard lock(mutex_);
        c.serial = ++last_serial_;
    }
    c.signature = signer_->sign(canonical_cert_bytes(c));
    return c;
}

void CertificateAuthority::revoke(std::uint64_t serial, Seconds when) {
    std::lock_guard lock(mutex_);
    if (serial == 0 || serial > last_serial_) throw UnknownSerial(serial);
    revoked_.emplace(serial, when);
}

bool CertificateAuthority::is_revoked(std::uint64_t serial) const {
    std::lock_guard lock(mutex_);
    return revoked_.count(serial) != 0;
}

RevocationList CertificateAuthority::revocations() const {
    std::lock_guard lock(mutex_);
    return revoked_;
}

std::uint64_t CertificateAuthority::issued_count() const {
    std::lock_guard lock(mutex_);
    return last_serial_;
}

std::string_view to_string(CertStatus s) {
    switch (s) {
    case CertStatus::valid: return "valid";
    case CertStatus::expired: return "expired";
    case CertStatus::not_yet_valid: return "not-yet-valid";
    case CertStatus::revoked: return "revoked";
    case CertStatus::bad_signature: return "bad-signature";
    case CertStatus::unknown_issuer: return "unknown-issuer";
    }
    return "?";
}

void ValidationAuthority::trust(const CertificateAuthority& ca) {
    issuers_.insert_or_assign(ca.id(), &ca);
}

CertStatus ValidationAuthority::validate(const Certificate& cert, Seconds now) const {
    auto it = issuers_.find(cert.issuer);
    if (it == issuers_.end()) return CertStatus::unknown_issuer;
    const CertificateAuthority& ca = *it->second;
    if (!ca.signer().verify(canonical_cert_bytes(cert), cert.signature)) return CertStatus::bad_signature;
    if (ca.is_revoked(cert.serial)) return CertStatus::revoked;
    if (now < cert.not_before) return CertStatus::not_yet_valid;
    if (now > cert.not_after) return CertStatus::expired;
    return CertStatus::valid;
}

}  // namespace paarc::pki
