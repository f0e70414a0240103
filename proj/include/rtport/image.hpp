#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtport/types.hpp"

namespace rtport {

enum class SegmentKind { CODE, DATA, BSS, UNKNOWN };
enum class SourceFormat { ELF_CONTAINER, RAW };

struct Segment {
    std::string name;
    Addr start = 0;
    uint32_t length = 0;  // BSS segments carry length but no stored bytes
    Bytes data;           // empty for BSS
    SegmentKind kind = SegmentKind::UNKNOWN;
    bool writable = true;
    bool executable = false;

    Addr end() const { return start + length; }
    bool contains(Addr a) const { return a >= start && a < end(); }
};

// A firmware image modeled as an addressed 32-bit byte space with
// non-overlapping segments sorted by start address.
class FirmwareImage {
public:
    Arch arch = Arch::X86_32;
    Endian endianness = Endian::LE;
    Addr base_address = 0;
    std::optional<Addr> entry_point;
    SourceFormat source_format = SourceFormat::RAW;
    // When set, write() refuses to touch segments without the writable flag.
    bool enforce_write_protect = false;

    const std::vector<Segment>& segments() const { return segments_; }
    void add_segment(Segment seg);

    bool is_mapped(Addr a) const { return find_segment(a) != nullptr; }
    const Segment* find_segment(Addr a) const;

    // Reads resolve through the segment map; BSS reads return zeros.
    Bytes read(Addr addr, uint32_t len) const;
    bool try_read(Addr addr, uint32_t len, Bytes& out) const;
    uint32_t read_u32(Addr addr) const;
    bool try_read_u32(Addr addr, uint32_t& out) const;
    // NUL-terminated string at addr, or nullopt if unmapped / no NUL within max_len.
    std::optional<std::string> read_cstring(Addr addr, uint32_t max_len = 256) const;

    void write(Addr addr, std::span<const uint8_t> bytes);
    void write_u32(Addr addr, uint32_t v);

    Addr min_start() const;
    Addr max_end() const;

    // Contiguous bytes from min start to max end; gaps and BSS take `fill`.
    Bytes emit_flat(uint8_t fill = 0x00, uint64_t span_cap = kDefaultSpanCap) const;

    static constexpr uint64_t kDefaultSpanCap = 512ull * 1024 * 1024;

private:
    std::vector<Segment> segments_;
    Segment* find_segment_mut(Addr a);
};

FirmwareImage load_elf(std::span<const uint8_t> bytes);
FirmwareImage load_raw(std::span<const uint8_t> bytes, Addr base, Arch arch, Endian endianness);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace rtport
