#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtport/image.hpp"

namespace rtport::symrec {

// Fixed-stride embedded symbol record layout. The default follows the
// 20-byte on-image record format with the name pointer at offset 0 and the
// value at offset 4; the variant with a list node first (name at +4,
// value at +8) is expressible through the same fields.
struct SymbolLayout {
    uint32_t stride = 20;
    uint32_t name_ptr_offset = 0;
    uint32_t value_offset = 4;
    std::optional<uint32_t> type_offset = 14;

    void validate() const;
    static SymbolLayout parse(const std::string& spec);  // "stride,name_off,value_off[,type_off]"
    std::string to_string() const;
};

enum class Provenance { EMBEDDED_TABLE, MATCHED, ANALYST };

struct SymbolEntry {
    std::string name;
    Addr value = 0;
    std::optional<uint8_t> sym_type;
    Addr record_addr = 0;
    Provenance provenance = Provenance::EMBEDDED_TABLE;
    bool external = false;  // value not mapped in the image
};

class SymbolTable {
public:
    void add(SymbolEntry entry);
    const std::vector<SymbolEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    const SymbolEntry* lookup(const std::string& name) const;
    // Aliases allowed: every name bound to an address.
    std::vector<std::string> names_at(Addr value) const;

private:
    std::vector<SymbolEntry> entries_;
    std::map<std::string, size_t> by_name_;
    std::multimap<Addr, size_t> by_addr_;
};

struct TableRegion {
    Addr start = 0;
    Addr end = 0;  // exclusive
};

// Maximal runs of >= min_run consecutive well-formed records.
std::vector<TableRegion> scan_for_table(const FirmwareImage& image, const SymbolLayout& layout,
                                        uint32_t min_run = 50);

struct ParseStats {
    uint32_t parsed = 0;
    uint32_t skipped = 0;
};

SymbolTable parse_table(const FirmwareImage& image, const TableRegion& region,
                        const SymbolLayout& layout, ParseStats* stats = nullptr);

std::string export_map(const SymbolTable& table);        // "HEXADDR NAME" lines
SymbolTable import_map(const std::string& text);

}  // namespace rtport::symrec
