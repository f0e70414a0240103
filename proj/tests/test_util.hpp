#pragma once

// Test-side helpers kept independent of the library code they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testutil {

using Bytes = std::vector<uint8_t>;

inline void put32(Bytes& b, size_t off, uint32_t v, bool be) {
    if (be) {
        b[off] = uint8_t(v >> 24);
        b[off + 1] = uint8_t(v >> 16);
        b[off + 2] = uint8_t(v >> 8);
        b[off + 3] = uint8_t(v);
    } else {
        b[off] = uint8_t(v);
        b[off + 1] = uint8_t(v >> 8);
        b[off + 2] = uint8_t(v >> 16);
        b[off + 3] = uint8_t(v >> 24);
    }
}

inline void put16(Bytes& b, size_t off, uint16_t v, bool be) {
    if (be) {
        b[off] = uint8_t(v >> 8);
        b[off + 1] = uint8_t(v);
    } else {
        b[off] = uint8_t(v);
        b[off + 1] = uint8_t(v >> 8);
    }
}

struct ElfSegment {
    uint32_t vaddr = 0;
    Bytes data;
    uint32_t extra_bss = 0;
    uint32_t flags = 5;  // PF_R | PF_X
};

// Hand-rolled 32-bit executable ELF writer used as the reference container
// builder: field offsets written out longhand, nothing shared with the
// library's reader.
inline Bytes build_elf32(uint16_t machine, bool big_endian, uint32_t entry,
                         const std::vector<ElfSegment>& segs) {
    const uint32_t ehsize = 52, phentsize = 32;
    uint32_t phnum = uint32_t(segs.size());
    uint32_t data_off = ehsize + phnum * phentsize;

    Bytes out(data_off, 0);
    out[0] = 0x7f;
    out[1] = 'E';
    out[2] = 'L';
    out[3] = 'F';
    out[4] = 1;  // ELFCLASS32
    out[5] = big_endian ? 2 : 1;
    out[6] = 1;  // EV_CURRENT
    put16(out, 16, 2, big_endian);        // ET_EXEC
    put16(out, 18, machine, big_endian);  // e_machine
    put32(out, 20, 1, big_endian);        // e_version
    put32(out, 24, entry, big_endian);
    put32(out, 28, ehsize, big_endian);  // e_phoff
    put32(out, 32, 0, big_endian);       // e_shoff
    put16(out, 40, ehsize, big_endian);  // e_ehsize
    put16(out, 42, phentsize, big_endian);
    put16(out, 44, uint16_t(phnum), big_endian);

    uint32_t off = data_off;
    for (size_t i = 0; i < segs.size(); ++i) {
        uint32_t ph = ehsize + uint32_t(i) * phentsize;
        put32(out, ph + 0, 1, big_endian);  // PT_LOAD
        put32(out, ph + 4, off, big_endian);
        put32(out, ph + 8, segs[i].vaddr, big_endian);
        put32(out, ph + 12, segs[i].vaddr, big_endian);
        put32(out, ph + 16, uint32_t(segs[i].data.size()), big_endian);
        put32(out, ph + 20, uint32_t(segs[i].data.size()) + segs[i].extra_bss, big_endian);
        put32(out, ph + 24, segs[i].flags, big_endian);
        put32(out, ph + 28, 4, big_endian);  // p_align
        off += uint32_t(segs[i].data.size());
    }
    for (const auto& s : segs) out.insert(out.end(), s.data.begin(), s.data.end());
    return out;
}

// Deterministic RNG for property-style tests.
struct Rng {
    std::mt19937 gen;
    explicit Rng(uint32_t seed) : gen(seed) {}
    uint32_t u32() { return gen(); }
    uint32_t below(uint32_t n) { return n ? gen() % n : 0; }
    uint32_t range(uint32_t lo, uint32_t hi) { return lo + below(hi - lo + 1); }
};

}  // namespace testutil
