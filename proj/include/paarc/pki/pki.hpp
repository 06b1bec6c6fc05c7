#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paarc::pki {

using Seconds = std::int64_t;

std::string to_hex(std::string_view bytes);
/// Throws std::invalid_argument on odd length or non-hex characters.
std::string from_hex(std::string_view hex);
std::string sha256_hex(std::string_view bytes);

/// Pluggable signing contract. Signatures are hex strings.
class Signer {
public:
    virtual ~Signer() = default;
    virtual std::string sign(std::string_view bytes) const = 0;
    virtual bool verify(std::string_view bytes, std::string_view signature) const;
};

/// Deterministic keyed digest: HMAC-SHA256 under a shared key.
class HmacSigner final : public Signer {
public:
    explicit HmacSigner(std::string key) : key_(std::move(key)) {}
    static HmacSigner from_hex_key(std::string_view hex) { return HmacSigner(from_hex(hex)); }
    std::string sign(std::string_view bytes) const override;

private:
    std::string key_;
};

struct Certificate {
    std::uint64_t serial = 0;
    std::string subject;
    std::string issuer;
    Seconds not_before = 0;
    Seconds not_after = 0;
    std::string key_fingerprint;
    std::string signature;

    bool operator==(const Certificate&) const = default;
};

/// `serial\nsubject\nissuer\nnot_before\nnot_after\nkey_fingerprint\n`,
/// integers in decimal. The signature field is not part of it.
std::string canonical_cert_bytes(const Certificate& c);

struct IdentityClaim {
    std::string subject;
    std::string proof;
    Seconds not_before = 0;
    Seconds not_after = 0;
    /// Device key fingerprint; derived from the subject when empty.
    std::string key_fingerprint;
};

struct RaVerdict {
    bool approved = false;
    std::string reason;
    IdentityClaim claim;
};

class PkiError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSubject : public PkiError {
public:
    explicit UnknownSubject(const std::string& s) : PkiError("no identity secret registered for '" + s + "'") {}
};

class NotApproved : public PkiError {
public:
    explicit NotApproved(const std::string& s) : PkiError("identity claim for '" + s + "' was not approved") {}
};

class UnknownSerial : public PkiError {
public:
    explicit UnknownSerial(std::uint64_t s) : PkiError("serial " + std::to_string(s) + " was never issued") {}
};

class RegistrationAuthority {
public:
    void register_secret(const std::string& subject, std::string secret);
    bool knows(const std::string& subject) const { return secrets_.count(subject) != 0; }

    /// Approved iff the proof equals the registered secret. A claim with
    /// not_before >= not_after is rejected as "bad-validity". Throws
    /// UnknownSubject.
    RaVerdict verify(const IdentityClaim& claim) const;

private:
    std::map<std::string, std::string> secrets_;
};

/// Revoked serials with their revocation time. Entries are never removed.
using RevocationList = std::map<std::uint64_t, Seconds>;

class CertificateAuthority {
public:
    CertificateAuthority(std::string id, std::shared_ptr<const Signer> signer)
        : id_(std::move(id)), signer_(std::move(signer)) {}

    const std::string& id() const noexcept { return id_; }
    const Signer& signer() const noexcept { return *signer_; }

    /// serial = previous + 1, starting at 1. Throws NotApproved.
    Certificate issue(const RaVerdict& verdict);
    /// Idempotent; throws UnknownSerial.
    void revoke(std::uint64_t serial, Seconds when);

    bool is_revoked(std::uint64_t serial) const;
    RevocationList revocations() const;
    std::uint64_t issued_count() const;

private:
    std::string id_;
    std::shared_ptr<const Signer> signer_;
    mutable std::mutex mutex_;
    std::uint64_t last_serial_ = 0;
    RevocationList revoked_;
};

enum class CertStatus { valid, expired, not_yet_valid, revoked, bad_signature, unknown_issuer };

std::string_view to_string(CertStatus s);

class ValidationAuthority {
public:
    void trust(const CertificateAuthority& ca);

    /// Checks, first failure wins: issuer known, signature, revocation,
    /// not_before <= now <= not_after.
    CertStatus validate(const Certificate& cert, Seconds now) const;

private:
    std::map<std::string, const CertificateAuthority*> issuers_;
};

}  // namespace paarc::pki
