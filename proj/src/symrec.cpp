#include "rtport/symrec.hpp"

#include <algorithm>
#include <sstream>

namespace rtport::symrec {

void SymbolLayout::validate() const {
    if (stride == 0 || name_ptr_offset == value_offset)
        fail(ErrorCode::LayoutMismatch, "symbol layout: name and value offsets must differ");
    if (name_ptr_offset + 4 > stride || value_offset + 4 > stride)
        fail(ErrorCode::LayoutMismatch, "symbol layout: field offsets exceed the record stride");
    if (type_offset && *type_offset >= stride)
        fail(ErrorCode::LayoutMismatch, "symbol layout: type offset exceeds the record stride");
}

SymbolLayout SymbolLayout::parse(const std::string& spec) {
    SymbolLayout l;
    l.type_offset.reset();
    std::stringstream ss(spec);
    std::string part;
    std::vector<uint32_t> vals;
    while (std::getline(ss, part, ','))
        vals.push_back(uint32_t(std::stoul(part, nullptr, 0)));
    if (vals.size() < 3)
        fail(ErrorCode::Usage, "symbol layout spec needs stride,name_off,value_off");
    l.stride = vals[0];
    l.name_ptr_offset = vals[1];
    l.value_offset = vals[2];
    if (vals.size() > 3) l.type_offset = vals[3];
    l.validate();
    return l;
}

std::string SymbolLayout::to_string() const {
    std::string s = std::to_string(stride) + "," + std::to_string(name_ptr_offset) + "," +
                    std::to_string(value_offset);
    if (type_offset) s += "," + std::to_string(*type_offset);
    return s;
}

void SymbolTable::add(SymbolEntry entry) {
    size_t idx = entries_.size();
    by_name_.emplace(entry.name, idx);
    by_addr_.emplace(entry.value, idx);
    entries_.push_back(std::move(entry));
}

const SymbolEntry* SymbolTable::lookup(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> SymbolTable::names_at(Addr value) const {
    std::vector<std::string> out;
    auto [lo, hi] = by_addr_.equal_range(value);
    for (auto it = lo; it != hi; ++it) out.push_back(entries_[it->second].name);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool printable(uint8_t c) { return c >= 0x20 && c <= 0x7e; }

// Name strings: NUL-terminated, 2..255 chars, >= 90% printable bytes.
bool plausible_name(const FirmwareImage& image, Addr addr, std::string* out) {
    auto s = image.read_cstring(addr, 256);
    if (!s || s->size() < 2 || s->size() > 255) return false;
    size_t printable_count = 0;
    for (char c : *s)
        if (printable(uint8_t(c))) ++printable_count;
    if (printable_count * 10 < s->size() * 9) return false;
    if (out) *out = *s;
    return true;
}

bool record_valid(const FirmwareImage& image, const SymbolLayout& layout, Addr rec,
                  std::string* name, Addr* value, bool* external) {
    uint32_t name_ptr, val;
    if (!image.try_read_u32(rec + layout.name_ptr_offset, name_ptr)) return false;
    if (!image.try_read_u32(rec + layout.value_offset, val)) return false;
    if (!plausible_name(image, name_ptr, name)) return false;
    if (value) *value = val;
    if (external) *external = !image.is_mapped(val);
    return true;
}

}  // namespace

std::vector<TableRegion> scan_for_table(const FirmwareImage& image, const SymbolLayout& layout,
                                        uint32_t min_run) {
    layout.validate();
    if (min_run < 8) fail(ErrorCode::Usage, "min_run must be at least 8");
    std::vector<TableRegion> out;
    for (const auto& seg : image.segments()) {
        if (seg.kind == SegmentKind::BSS || seg.length < layout.stride) continue;
        Addr a = (seg.start + 3) & ~3u;
        Addr limit = seg.end() - layout.stride;
        while (a <= limit) {
            Addr value;
            bool ext;
            // Records must carry a mapped value during scanning; external
            // values are only tolerated once a region is given to parse.
            if (record_valid(image, layout, a, nullptr, &value, &ext) && !ext) {
                Addr run_end = a;
                while (run_end + layout.stride <= seg.end()) {
                    if (!record_valid(image, layout, run_end, nullptr, &value, &ext) || ext) break;
                    run_end += layout.stride;
                }
                uint32_t count = (run_end - a) / layout.stride;
                if (count >= min_run) {
                    out.push_back({a, run_end});
                    a = run_end;
                    continue;
                }
            }
            a += 4;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const TableRegion& x, const TableRegion& y) { return x.start < y.start; });
    return out;
}

SymbolTable parse_table(const FirmwareImage& image, const TableRegion& region,
                        const SymbolLayout& layout, ParseStats* stats) {
    layout.validate();
    SymbolTable table;
    ParseStats local;
    uint32_t total = 0;
    for (Addr rec = region.start; rec + layout.stride <= region.end; rec += layout.stride) {
        ++total;
        std::string name;
        Addr value;
        bool external;
        if (!record_valid(image, layout, rec, &name, &value, &external)) {
            ++local.skipped;
            continue;
        }
        SymbolEntry e;
        e.name = std::move(name);
        e.value = value;
        e.record_addr = rec;
        e.provenance = Provenance::EMBEDDED_TABLE;
        e.external = external;
        if (layout.type_offset) {
            Bytes t;
            if (image.try_read(rec + *layout.type_offset, 1, t)) e.sym_type = t[0];
        }
        table.add(std::move(e));
        ++local.parsed;
    }
    if (total > 0 && local.skipped * 2 > total)
        fail(ErrorCode::LayoutMismatch,
             "more than half of the records in " + to_hex(region.start) + ".." +
                 to_hex(region.end) + " are invalid; wrong layout?");
    if (stats) *stats = local;
    return table;
}

std::string export_map(const SymbolTable& table) {
    std::string out;
    for (const auto& e : table.entries()) {
        out += to_hex(e.value);
        out += ' ';
        out += e.name;
        out += '\n';
    }
    return out;
}

SymbolTable import_map(const std::string& text) {
    SymbolTable table;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto sp = line.find(' ');
        if (sp == std::string::npos) continue;
        SymbolEntry e;
        uint32_t addr;
        if (!parse_hex(line.substr(0, sp), addr)) continue;
        e.value = addr;
        e.name = line.substr(sp + 1);
        e.provenance = Provenance::ANALYST;
        if (!e.name.empty()) table.add(std::move(e));
    }
    return table;
}

}  // namespace rtport::symrec
