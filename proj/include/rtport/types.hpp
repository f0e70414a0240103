#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtport {

using Addr = uint32_t;
using Bytes = std::vector<uint8_t>;

enum class Arch { X86_32, ARM32 };
enum class Endian { LE, BE };

enum class ErrorCode {
    // image
    MalformedContainer,
    UnsupportedClass,
    MisalignedBase,
    Unmapped,
    ReadOnlyViolation,
    SpanTooLarge,
    // isa
    OutOfRange,
    Misaligned,
    LiteralOutOfRange,
    EncodingError,
    // symrec
    LayoutMismatch,
    // anchor
    NoReference,
    BoundaryUnbound,
    // drvloc
    AnchorUnbound,
    SymbolMissing,
    RegionMisaligned,
    // patchkit
    ArchMismatch,
    UnsupportedRelocKind,
    UnresolvedExternal,
    RelocOutOfRange,
    // rewrite
    VictimNotFunction,
    TargetOutsidePatch,
    // ioserver
    BindFailure,
    ScenarioInvalid,
    DecodeError,
    // fidelity
    EmptyRegion,
    // synth
    SpecInvalid,
    // generic
    Usage,
    Analysis,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

const char* error_code_name(ErrorCode code);

const char* arch_name(Arch a);
const char* endian_name(Endian e);

// Byte-order helpers over raw buffers.
inline uint16_t get_u16(const uint8_t* p, Endian e) {
    return e == Endian::LE ? uint16_t(p[0] | (p[1] << 8)) : uint16_t((p[0] << 8) | p[1]);
}
inline uint32_t get_u32(const uint8_t* p, Endian e) {
    return e == Endian::LE
               ? (uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) | (uint32_t(p[3]) << 24))
               : ((uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]));
}
inline void put_u16(uint8_t* p, uint16_t v, Endian e) {
    if (e == Endian::LE) {
        p[0] = uint8_t(v);
        p[1] = uint8_t(v >> 8);
    } else {
        p[0] = uint8_t(v >> 8);
        p[1] = uint8_t(v);
    }
}
inline void put_u32(uint8_t* p, uint32_t v, Endian e) {
    if (e == Endian::LE) {
        p[0] = uint8_t(v);
        p[1] = uint8_t(v >> 8);
        p[2] = uint8_t(v >> 16);
        p[3] = uint8_t(v >> 24);
    } else {
        p[0] = uint8_t(v >> 24);
        p[1] = uint8_t(v >> 16);
        p[2] = uint8_t(v >> 8);
        p[3] = uint8_t(v);
    }
}
inline void append_u16(Bytes& b, uint16_t v, Endian e) {
    uint8_t tmp[2];
    put_u16(tmp, v, e);
    b.insert(b.end(), tmp, tmp + 2);
}
inline void append_u32(Bytes& b, uint32_t v, Endian e) {
    uint8_t tmp[4];
    put_u32(tmp, v, e);
    b.insert(b.end(), tmp, tmp + 4);
}

inline uint32_t align_up(uint32_t v, uint32_t align) {
    return (v + align - 1) & ~(align - 1);
}

std::string to_hex(uint32_t v, int width = 8);
bool parse_hex(const std::string& s, uint32_t& out);

}  // namespace rtport
