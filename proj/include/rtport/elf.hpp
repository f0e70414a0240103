#pragma once

#include <span>
#include <string>
#include <vector>

#include "rtport/types.hpp"

// Minimal 32-bit ELF reading, enough for firmware executables and
// relocatable patch objects. Field layout per the System V gABI.
namespace rtport::elf {

constexpr uint16_t ET_EXEC = 2;
constexpr uint16_t ET_REL = 1;
constexpr uint16_t EM_386 = 3;
constexpr uint16_t EM_ARM = 40;
constexpr uint32_t PT_LOAD = 1;
constexpr uint32_t PF_X = 1;
constexpr uint32_t PF_W = 2;
constexpr uint32_t SHT_PROGBITS = 1;
constexpr uint32_t SHT_SYMTAB = 2;
constexpr uint32_t SHT_STRTAB = 3;
constexpr uint32_t SHT_RELA = 4;
constexpr uint32_t SHT_NOBITS = 8;
constexpr uint32_t SHT_REL = 9;
constexpr uint32_t SHF_ALLOC = 2;
constexpr uint16_t SHN_UNDEF = 0;
constexpr uint16_t SHN_ABS = 0xfff1;

struct Header {
    Endian endianness = Endian::LE;
    uint16_t type = 0;
    uint16_t machine = 0;
    uint32_t entry = 0;
    uint32_t phoff = 0, shoff = 0;
    uint16_t phentsize = 0, phnum = 0;
    uint16_t shentsize = 0, shnum = 0, shstrndx = 0;
};

struct ProgramHeader {
    uint32_t type = 0, offset = 0, vaddr = 0, filesz = 0, memsz = 0, flags = 0;
};

struct SectionHeader {
    std::string name;
    uint32_t name_off = 0, type = 0, flags = 0, addr = 0, offset = 0, size = 0;
    uint32_t link = 0, info = 0, addralign = 0, entsize = 0;
};

struct Symbol {
    std::string name;
    uint32_t value = 0, size = 0;
    uint8_t info = 0;
    uint16_t shndx = 0;
};

struct RelocEntry {
    uint32_t offset = 0;
    uint32_t type = 0;
    uint32_t sym_index = 0;
    int32_t addend = 0;  // explicit for RELA, zero for REL
    bool has_addend = false;
};

class Reader {
public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) { parse_header(); }

    const Header& header() const { return hdr_; }
    Endian endianness() const { return hdr_.endianness; }

    std::vector<ProgramHeader> program_headers() const;
    std::vector<SectionHeader> section_headers() const;
    std::vector<Symbol> symbols(const SectionHeader& symtab) const;
    std::vector<RelocEntry> relocs(const SectionHeader& sec) const;

    Bytes bytes_at(uint32_t offset, uint32_t size) const;
    uint8_t u8(uint32_t off) const;
    uint16_t u16(uint32_t off) const;
    uint32_t u32(uint32_t off) const;

private:
    void parse_header();
    std::string string_at(const SectionHeader& strtab, uint32_t off) const;

    std::span<const uint8_t> bytes_;
    Header hdr_;
};

}  // namespace rtport::elf
