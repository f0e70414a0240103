#include "rtport/elf.hpp"

namespace rtport::elf {

namespace {
constexpr uint8_t kMagic[4] = {0x7f, 'E', 'L', 'F'};
}

uint8_t Reader::u8(uint32_t off) const {
    if (off >= bytes_.size()) fail(ErrorCode::MalformedContainer, "truncated container");
    return bytes_[off];
}

uint16_t Reader::u16(uint32_t off) const {
    if (uint64_t(off) + 2 > bytes_.size()) fail(ErrorCode::MalformedContainer, "truncated container");
    return get_u16(bytes_.data() + off, hdr_.endianness);
}

uint32_t Reader::u32(uint32_t off) const {
    if (uint64_t(off) + 4 > bytes_.size()) fail(ErrorCode::MalformedContainer, "truncated container");
    return get_u32(bytes_.data() + off, hdr_.endianness);
}

Bytes Reader::bytes_at(uint32_t offset, uint32_t size) const {
    if (uint64_t(offset) + size > bytes_.size()) fail(ErrorCode::MalformedContainer, "truncated container");
    return Bytes(bytes_.begin() + offset, bytes_.begin() + offset + size);
}

void Reader::parse_header() {
    if (bytes_.size() < 52) fail(ErrorCode::MalformedContainer, "input shorter than a 32-bit header");
    for (int i = 0; i < 4; ++i)
        if (bytes_[i] != kMagic[i]) fail(ErrorCode::MalformedContainer, "bad magic");
    uint8_t cls = bytes_[4];
    if (cls == 2) fail(ErrorCode::UnsupportedClass, "64-bit containers are not supported");
    if (cls != 1) fail(ErrorCode::MalformedContainer, "unknown class byte");
    uint8_t data = bytes_[5];
    if (data != 1 && data != 2) fail(ErrorCode::MalformedContainer, "unknown data encoding");
    hdr_.endianness = data == 1 ? Endian::LE : Endian::BE;
    hdr_.type = u16(16);
    hdr_.machine = u16(18);
    hdr_.entry = u32(24);
    hdr_.phoff = u32(28);
    hdr_.shoff = u32(32);
    hdr_.phentsize = u16(42);
    hdr_.phnum = u16(44);
    hdr_.shentsize = u16(46);
    hdr_.shnum = u16(48);
    hdr_.shstrndx = u16(50);
}

std::vector<ProgramHeader> Reader::program_headers() const {
    std::vector<ProgramHeader> out;
    if (hdr_.phnum == 0) return out;
    if (hdr_.phentsize < 32) fail(ErrorCode::MalformedContainer, "bad program header entry size");
    for (uint16_t i = 0; i < hdr_.phnum; ++i) {
        uint32_t off = hdr_.phoff + uint32_t(i) * hdr_.phentsize;
        ProgramHeader ph;
        ph.type = u32(off + 0);
        ph.offset = u32(off + 4);
        ph.vaddr = u32(off + 8);
        ph.filesz = u32(off + 16);
        ph.memsz = u32(off + 20);
        ph.flags = u32(off + 24);
        out.push_back(ph);
    }
    return out;
}

std::vector<SectionHeader> Reader::section_headers() const {
    std::vector<SectionHeader> out;
    if (hdr_.shnum == 0) return out;
    if (hdr_.shentsize < 40) fail(ErrorCode::MalformedContainer, "bad section header entry size");
    for (uint16_t i = 0; i < hdr_.shnum; ++i) {
        uint32_t off = hdr_.shoff + uint32_t(i) * hdr_.shentsize;
        SectionHeader sh;
        sh.name_off = u32(off + 0);
        sh.type = u32(off + 4);
        sh.flags = u32(off + 8);
        sh.addr = u32(off + 12);
        sh.offset = u32(off + 16);
        sh.size = u32(off + 20);
        sh.link = u32(off + 24);
        sh.info = u32(off + 28);
        sh.addralign = u32(off + 32);
        sh.entsize = u32(off + 36);
        out.push_back(sh);
    }
    if (hdr_.shstrndx < out.size()) {
        const SectionHeader& strtab = out[hdr_.shstrndx];
        for (auto& sh : out) sh.name = string_at(strtab, sh.name_off);
    }
    return out;
}

std::string Reader::string_at(const SectionHeader& strtab, uint32_t off) const {
    std::string s;
    uint32_t pos = strtab.offset + off;
    while (pos < strtab.offset + strtab.size) {
        uint8_t c = u8(pos++);
        if (c == 0) break;
        s.push_back(char(c));
    }
    return s;
}

std::vector<Symbol> Reader::symbols(const SectionHeader& symtab) const {
    if (symtab.entsize != 16) fail(ErrorCode::MalformedContainer, "bad symbol entry size");
    auto sections = section_headers();
    if (symtab.link >= sections.size()) fail(ErrorCode::MalformedContainer, "symbol table has no string table");
    const SectionHeader& strtab = sections[symtab.link];
    std::vector<Symbol> out;
    for (uint32_t off = symtab.offset; off + 16 <= symtab.offset + symtab.size; off += 16) {
        Symbol sym;
        sym.name = string_at(strtab, u32(off + 0));
        sym.value = u32(off + 4);
        sym.size = u32(off + 8);
        sym.info = u8(off + 12);
        sym.shndx = u16(off + 14);
        out.push_back(std::move(sym));
    }
    return out;
}

std::vector<RelocEntry> Reader::relocs(const SectionHeader& sec) const {
    bool rela = sec.type == SHT_RELA;
    uint32_t entsize = rela ? 12 : 8;
    if (sec.entsize != entsize) fail(ErrorCode::MalformedContainer, "bad relocation entry size");
    std::vector<RelocEntry> out;
    for (uint32_t off = sec.offset; off + entsize <= sec.offset + sec.size; off += entsize) {
        RelocEntry re;
        re.offset = u32(off + 0);
        uint32_t info = u32(off + 4);
        re.type = info & 0xff;
        re.sym_index = info >> 8;
        if (rela) {
            re.addend = int32_t(u32(off + 8));
            re.has_addend = true;
        }
        out.push_back(re);
    }
    return out;
}

}  // namespace rtport::elf
