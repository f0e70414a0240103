#include "rtport/image.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "rtport/elf.hpp"

namespace rtport {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedContainer: return "MalformedContainer";
        case ErrorCode::UnsupportedClass: return "UnsupportedClass";
        case ErrorCode::MisalignedBase: return "MisalignedBase";
        case ErrorCode::Unmapped: return "Unmapped";
        case ErrorCode::ReadOnlyViolation: return "ReadOnlyViolation";
        case ErrorCode::SpanTooLarge: return "SpanTooLarge";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::Misaligned: return "Misaligned";
        case ErrorCode::LiteralOutOfRange: return "LiteralOutOfRange";
        case ErrorCode::EncodingError: return "EncodingError";
        case ErrorCode::LayoutMismatch: return "LayoutMismatch";
        case ErrorCode::NoReference: return "NoReference";
        case ErrorCode::BoundaryUnbound: return "BoundaryUnbound";
        case ErrorCode::AnchorUnbound: return "AnchorUnbound";
        case ErrorCode::SymbolMissing: return "SymbolMissing";
        case ErrorCode::RegionMisaligned: return "RegionMisaligned";
        case ErrorCode::ArchMismatch: return "ArchMismatch";
        case ErrorCode::UnsupportedRelocKind: return "UnsupportedRelocKind";
        case ErrorCode::UnresolvedExternal: return "UnresolvedExternal";
        case ErrorCode::RelocOutOfRange: return "RelocOutOfRange";
        case ErrorCode::VictimNotFunction: return "VictimNotFunction";
        case ErrorCode::TargetOutsidePatch: return "TargetOutsidePatch";
        case ErrorCode::BindFailure: return "BindFailure";
        case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
        case ErrorCode::DecodeError: return "DecodeError";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
        case ErrorCode::Usage: return "Usage";
        case ErrorCode::Analysis: return "Analysis";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

const char* arch_name(Arch a) { return a == Arch::X86_32 ? "x86" : "arm"; }
const char* endian_name(Endian e) { return e == Endian::LE ? "le" : "be"; }

std::string to_hex(uint32_t v, int width) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%0*x", width, v);
    return buf;
}

bool parse_hex(const std::string& s, uint32_t& out) {
    if (s.empty()) return false;
    size_t pos = 0;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) pos = 2;
    uint64_t v = 0;
    size_t digits = 0;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        uint32_t d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = 10 + c - 'a';
        else if (c >= 'A' && c <= 'F') d = 10 + c - 'A';
        else return false;
        v = (v << 4) | d;
        if (++digits > 8) return false;
    }
    if (digits == 0) return false;
    out = uint32_t(v);
    return true;
}

void FirmwareImage::add_segment(Segment seg) {
    if (seg.kind != SegmentKind::BSS && seg.data.size() != seg.length)
        fail(ErrorCode::Analysis, "segment data size does not match declared length");
    uint64_t end = uint64_t(seg.start) + seg.length;
    if (end > 0x100000000ull)
        fail(ErrorCode::MalformedContainer, "segment wraps the 32-bit address space");
    for (const auto& other : segments_) {
        if (seg.start < other.end() && other.start < seg.end())
            fail(ErrorCode::MalformedContainer,
                 "overlapping segments at " + to_hex(seg.start) + " and " + to_hex(other.start));
    }
    segments_.push_back(std::move(seg));
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
}

const Segment* FirmwareImage::find_segment(Addr a) const {
    for (const auto& s : segments_)
        if (s.contains(a)) return &s;
    return nullptr;
}

Segment* FirmwareImage::find_segment_mut(Addr a) {
    for (auto& s : segments_)
        if (s.contains(a)) return &s;
    return nullptr;
}

bool FirmwareImage::try_read(Addr addr, uint32_t len, Bytes& out) const {
    out.clear();
    out.reserve(len);
    Addr a = addr;
    uint32_t remaining = len;
    while (remaining > 0) {
        const Segment* seg = find_segment(a);
        if (!seg) return false;
        uint32_t chunk = std::min<uint32_t>(remaining, seg->end() - a);
        if (seg->kind == SegmentKind::BSS) {
            out.insert(out.end(), chunk, 0);
        } else {
            uint32_t off = a - seg->start;
            out.insert(out.end(), seg->data.begin() + off, seg->data.begin() + off + chunk);
        }
        a += chunk;
        remaining -= chunk;
    }
    return true;
}

Bytes FirmwareImage::read(Addr addr, uint32_t len) const {
    Bytes out;
    if (!try_read(addr, len, out))
        fail(ErrorCode::Unmapped, "read of " + std::to_string(len) + " bytes at " + to_hex(addr) + " hits unmapped space");
    return out;
}

uint32_t FirmwareImage::read_u32(Addr addr) const {
    Bytes b = read(addr, 4);
    return get_u32(b.data(), endianness);
}

bool FirmwareImage::try_read_u32(Addr addr, uint32_t& out) const {
    Bytes b;
    if (!try_read(addr, 4, b)) return false;
    out = get_u32(b.data(), endianness);
    return true;
}

std::optional<std::string> FirmwareImage::read_cstring(Addr addr, uint32_t max_len) const {
    std::string s;
    for (uint32_t i = 0; i < max_len; ++i) {
        const Segment* seg = find_segment(addr + i);
        if (!seg) return std::nullopt;
        uint8_t c = seg->kind == SegmentKind::BSS ? 0 : seg->data[addr + i - seg->start];
        if (c == 0) return s;
        s.push_back(char(c));
    }
    return std::nullopt;  // no terminator within max_len
}

void FirmwareImage::write(Addr addr, std::span<const uint8_t> bytes) {
    // Validate the whole range first so a failing write stays atomic.
    Addr a = addr;
    uint32_t remaining = uint32_t(bytes.size());
    while (remaining > 0) {
        const Segment* seg = find_segment(a);
        if (!seg)
            fail(ErrorCode::Unmapped, "write at " + to_hex(a) + " hits unmapped space");
        if (enforce_write_protect && !seg->writable)
            fail(ErrorCode::ReadOnlyViolation, "write at " + to_hex(a) + " into read-only segment " + seg->name);
        uint32_t chunk = std::min<uint32_t>(remaining, seg->end() - a);
        a += chunk;
        remaining -= chunk;
    }
    a = addr;
    size_t idx = 0;
    while (idx < bytes.size()) {
        Segment* seg = find_segment_mut(a);
        if (seg->kind == SegmentKind::BSS) {
            // Materialize on first write; reads before this saw zeros.
            seg->data.assign(seg->length, 0);
            seg->kind = SegmentKind::DATA;
        }
        uint32_t chunk = std::min<uint32_t>(uint32_t(bytes.size() - idx), seg->end() - a);
        std::memcpy(seg->data.data() + (a - seg->start), bytes.data() + idx, chunk);
        a += chunk;
        idx += chunk;
    }
}

void FirmwareImage::write_u32(Addr addr, uint32_t v) {
    uint8_t tmp[4];
    put_u32(tmp, v, endianness);
    write(addr, tmp);
}

Addr FirmwareImage::min_start() const {
    if (segments_.empty()) fail(ErrorCode::Analysis, "image has no segments");
    return segments_.front().start;
}

Addr FirmwareImage::max_end() const {
    if (segments_.empty()) fail(ErrorCode::Analysis, "image has no segments");
    Addr end = 0;
    for (const auto& s : segments_) end = std::max(end, s.end());
    return end;
}

Bytes FirmwareImage::emit_flat(uint8_t fill, uint64_t span_cap) const {
    Addr lo = min_start();
    Addr hi = max_end();
    uint64_t span = uint64_t(hi) - lo;
    if (span > span_cap)
        fail(ErrorCode::SpanTooLarge, "flat span " + std::to_string(span) + " exceeds cap " + std::to_string(span_cap));
    Bytes out(size_t(span), fill);
    for (const auto& s : segments_) {
        if (s.kind == SegmentKind::BSS) {
            std::fill(out.begin() + (s.start - lo), out.begin() + (s.start - lo) + s.length, fill);
        } else {
            std::copy(s.data.begin(), s.data.end(), out.begin() + (s.start - lo));
        }
    }
    return out;
}

FirmwareImage load_raw(std::span<const uint8_t> bytes, Addr base, Arch arch, Endian endianness) {
    if (arch == Arch::ARM32 && (base & 3) != 0)
        fail(ErrorCode::MisalignedBase, "ARM32 base " + to_hex(base) + " is not 4-aligned");
    FirmwareImage img;
    img.arch = arch;
    img.endianness = endianness;
    img.base_address = base;
    img.entry_point = base;
    img.source_format = SourceFormat::RAW;
    Segment seg;
    seg.name = "flat";
    seg.start = base;
    seg.length = uint32_t(bytes.size());
    seg.data.assign(bytes.begin(), bytes.end());
    seg.kind = SegmentKind::CODE;
    seg.writable = true;
    seg.executable = true;
    img.add_segment(std::move(seg));
    return img;
}

FirmwareImage load_elf(std::span<const uint8_t> bytes) {
    elf::Reader rd(bytes);
    elf::Header hdr = rd.header();

    FirmwareImage img;
    img.source_format = SourceFormat::ELF_CONTAINER;
    img.endianness = hdr.endianness;
    switch (hdr.machine) {
        case elf::EM_386: img.arch = Arch::X86_32; break;
        case elf::EM_ARM: img.arch = Arch::ARM32; break;
        default:
            fail(ErrorCode::MalformedContainer, "unsupported machine type " + std::to_string(hdr.machine));
    }
    if (hdr.entry != 0) img.entry_point = hdr.entry;

    auto phdrs = rd.program_headers();
    int loadable = 0;
    for (size_t i = 0; i < phdrs.size(); ++i) {
        const auto& ph = phdrs[i];
        if (ph.type != elf::PT_LOAD || ph.memsz == 0) continue;
        ++loadable;
        bool exec = (ph.flags & elf::PF_X) != 0;
        bool writable = (ph.flags & elf::PF_W) != 0;
        if (ph.filesz > 0) {
            Segment seg;
            seg.name = "load" + std::to_string(i);
            seg.start = ph.vaddr;
            seg.length = ph.filesz;
            seg.data = rd.bytes_at(ph.offset, ph.filesz);
            seg.kind = exec ? SegmentKind::CODE : SegmentKind::DATA;
            seg.writable = writable;
            seg.executable = exec;
            img.add_segment(std::move(seg));
        }
        if (ph.memsz > ph.filesz) {
            Segment bss;
            bss.name = "load" + std::to_string(i) + ".bss";
            bss.start = ph.vaddr + ph.filesz;
            bss.length = ph.memsz - ph.filesz;
            bss.kind = SegmentKind::BSS;
            bss.writable = writable;
            bss.executable = false;
            img.add_segment(std::move(bss));
        }
    }
    if (loadable == 0)
        fail(ErrorCode::MalformedContainer, "container has no loadable regions");
    img.base_address = img.min_start();
    return img;
}

Bytes read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) fail(ErrorCode::Io, "cannot open " + path);
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    Bytes out(static_cast<size_t>(size), 0);
    size_t got = size > 0 ? std::fread(out.data(), 1, size_t(size), f) : 0;
    std::fclose(f);
    if (got != size_t(size)) fail(ErrorCode::Io, "short read from " + path);
    return out;
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) fail(ErrorCode::Io, "cannot create " + path);
    size_t put = bytes.empty() ? 0 : std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (put != bytes.size()) fail(ErrorCode::Io, "short write to " + path);
}

}  // namespace rtport
