#include "rtport/isa.hpp"

namespace rtport::isa {

const char* instr_kind_name(InstrKind k) {
    switch (k) {
        case InstrKind::FAR_JMP_ABS: return "FAR_JMP_ABS";
        case InstrKind::NEAR_JMP_REL32: return "NEAR_JMP_REL32";
        case InstrKind::CALL_REL32: return "CALL_REL32";
        case InstrKind::PUSH_EBP: return "PUSH_EBP";
        case InstrKind::ARM_B: return "ARM_B";
        case InstrKind::ARM_BL: return "ARM_BL";
        case InstrKind::ARM_BX: return "ARM_BX";
        case InstrKind::ARM_BLX: return "ARM_BLX";
        case InstrKind::ARM_MOV_PC_REG: return "ARM_MOV_PC_REG";
        case InstrKind::ARM_LDR_PC_LITERAL: return "ARM_LDR_PC_LITERAL";
        case InstrKind::ARM_PUSH_REG: return "ARM_PUSH_REG";
        case InstrKind::ARM_POP_REG: return "ARM_POP_REG";
        case InstrKind::ARM_LDR_REG_LITERAL: return "ARM_LDR_REG_LITERAL";
        case InstrKind::ARM_STMFD_LR: return "ARM_STMFD_LR";
        case InstrKind::OTHER: return "OTHER";
    }
    return "OTHER";
}

namespace {

int32_t sign_extend_24(uint32_t v) {
    v &= 0x00ffffff;
    if (v & 0x00800000) v |= 0xff000000;
    return int32_t(v);
}

Instr other(std::span<const uint8_t> bytes, Addr pc, uint32_t len) {
    Instr in;
    in.kind = InstrKind::OTHER;
    in.length = len;
    in.pc = pc;
    in.raw.assign(bytes.begin(), bytes.begin() + len);
    return in;
}

Instr decode_x86(std::span<const uint8_t> bytes, Addr pc) {
    uint8_t op = bytes[0];
    auto take = [&](InstrKind kind, uint32_t len) {
        Instr in;
        in.kind = kind;
        in.length = len;
        in.pc = pc;
        in.raw.assign(bytes.begin(), bytes.begin() + len);
        return in;
    };
    if (op == 0x55) return take(InstrKind::PUSH_EBP, 1);
    if (op == 0xe9 && bytes.size() >= 5) {
        Instr in = take(InstrKind::NEAR_JMP_REL32, 5);
        int32_t rel = int32_t(get_u32(bytes.data() + 1, Endian::LE));
        in.target = pc + 5 + uint32_t(rel);
        return in;
    }
    if (op == 0xe8 && bytes.size() >= 5) {
        Instr in = take(InstrKind::CALL_REL32, 5);
        int32_t rel = int32_t(get_u32(bytes.data() + 1, Endian::LE));
        in.target = pc + 5 + uint32_t(rel);
        return in;
    }
    if (op == 0xea && bytes.size() >= 7) {
        Instr in = take(InstrKind::FAR_JMP_ABS, 7);
        in.target = get_u32(bytes.data() + 1, Endian::LE);
        in.selector = get_u16(bytes.data() + 5, Endian::LE);
        return in;
    }
    // push imm32 / mov r32, imm32: decoded as OTHER but with their true
    // length so linear sweeps stay aligned and immediates stay scannable.
    if ((op == 0x68 || (op >= 0xb8 && op <= 0xbf)) && bytes.size() >= 5)
        return other(bytes, pc, 5);
    return other(bytes, pc, 1);
}

Instr decode_arm(Endian endianness, std::span<const uint8_t> bytes, Addr pc) {
    if (bytes.size() < 4) return other(bytes, pc, uint32_t(bytes.size()));
    uint32_t w = get_u32(bytes.data(), endianness);
    Instr in;
    in.length = 4;
    in.pc = pc;
    in.raw.assign(bytes.begin(), bytes.begin() + 4);
    if ((w & 0xff000000) == 0xea000000) {
        in.kind = InstrKind::ARM_B;
        in.target = pc + 8 + uint32_t(sign_extend_24(w) << 2);
        return in;
    }
    if ((w & 0xff000000) == 0xeb000000) {
        in.kind = InstrKind::ARM_BL;
        in.target = pc + 8 + uint32_t(sign_extend_24(w) << 2);
        return in;
    }
    if ((w & 0xfffffff0) == 0xe12fff10) {
        in.kind = InstrKind::ARM_BX;
        in.reg = w & 0xf;
        return in;
    }
    if ((w & 0xfffffff0) == 0xe12fff30) {
        in.kind = InstrKind::ARM_BLX;
        in.reg = w & 0xf;
        return in;
    }
    if ((w & 0xfffffff0) == 0xe1a0f000) {
        in.kind = InstrKind::ARM_MOV_PC_REG;
        in.reg = w & 0xf;
        return in;
    }
    if ((w & 0xff7ff000) == 0xe51ff000 || (w & 0xff7f0000) == 0xe51f0000) {
        uint32_t imm = w & 0xfff;
        bool up = (w & 0x00800000) != 0;
        uint8_t rd = (w >> 12) & 0xf;
        in.kind = rd == kRegPC ? InstrKind::ARM_LDR_PC_LITERAL : InstrKind::ARM_LDR_REG_LITERAL;
        in.reg = rd;
        in.target = up ? pc + 8 + imm : pc + 8 - imm;
        return in;
    }
    if ((w & 0xffff0fff) == 0xe52d0004) {
        in.kind = InstrKind::ARM_PUSH_REG;
        in.reg = (w >> 12) & 0xf;
        return in;
    }
    if ((w & 0xffff0fff) == 0xe49d0004) {
        in.kind = InstrKind::ARM_POP_REG;
        in.reg = (w >> 12) & 0xf;
        return in;
    }
    if ((w & 0xffff4000) == 0xe92d4000) {
        in.kind = InstrKind::ARM_STMFD_LR;
        in.reglist = uint16_t(w & 0xffff);
        return in;
    }
    in.kind = InstrKind::OTHER;
    return in;
}

}  // namespace

Instr decode(Arch arch, Endian endianness, std::span<const uint8_t> bytes, Addr pc) {
    if (bytes.empty()) fail(ErrorCode::EncodingError, "decode needs at least one byte");
    return arch == Arch::X86_32 ? decode_x86(bytes, pc) : decode_arm(endianness, bytes, pc);
}

Bytes word_bytes(uint32_t word, Endian endianness) {
    Bytes b(4);
    put_u32(b.data(), word, endianness);
    return b;
}

Bytes encode_far_jump_x86(Addr target, uint16_t selector) {
    Bytes b;
    b.push_back(0xea);
    append_u32(b, target, Endian::LE);
    append_u16(b, selector, Endian::LE);
    return b;
}

Bytes encode_x86_jmp_rel32(Addr from_pc, Addr target) {
    Bytes b;
    b.push_back(0xe9);
    append_u32(b, target - from_pc - 5, Endian::LE);
    return b;
}

Bytes encode_x86_call_rel32(Addr from_pc, Addr target) {
    Bytes b;
    b.push_back(0xe8);
    append_u32(b, target - from_pc - 5, Endian::LE);
    return b;
}

bool arm_b_reachable(Addr from_pc, Addr target) {
    int64_t disp = int64_t(target) - int64_t(from_pc) - 8;
    return disp > -(1ll << 25) && disp < (1ll << 25);
}

namespace {
int32_t arm_branch_offset(Addr from_pc, Addr target) {
    if ((from_pc & 3) || (target & 3))
        fail(ErrorCode::Misaligned, "branch endpoints must be 4-aligned");
    int64_t disp = int64_t(target) - int64_t(from_pc) - 8;
    if (disp <= -(1ll << 25) || disp >= (1ll << 25))
        fail(ErrorCode::OutOfRange,
             "branch from " + to_hex(from_pc) + " to " + to_hex(target) + " exceeds +/-32M");
    return int32_t(disp >> 2);
}
}  // namespace

uint32_t arm_b_word(Addr from_pc, Addr target) {
    return 0xea000000 | (uint32_t(arm_branch_offset(from_pc, target)) & 0x00ffffff);
}

uint32_t arm_bl_word(Addr from_pc, Addr target) {
    return 0xeb000000 | (uint32_t(arm_branch_offset(from_pc, target)) & 0x00ffffff);
}

uint32_t arm_bx_word(uint8_t reg) { return 0xe12fff10 | (reg & 0xf); }
uint32_t arm_mov_pc_word(uint8_t reg) { return 0xe1a0f000 | (reg & 0xf); }
uint32_t arm_push_word(uint8_t reg) { return 0xe52d0004 | (uint32_t(reg & 0xf) << 12); }
uint32_t arm_pop_word(uint8_t reg) { return 0xe49d0004 | (uint32_t(reg & 0xf) << 12); }
uint32_t arm_stmfd_word(uint16_t reglist) { return 0xe92d0000 | reglist; }

uint32_t arm_ldr_literal_word(uint8_t reg, Addr from_pc, Addr literal_addr) {
    if (literal_addr & 3) fail(ErrorCode::Misaligned, "literal must be 4-aligned");
    int64_t off = int64_t(literal_addr) - int64_t(from_pc) - 8;
    if (off < -4095 || off > 4095)
        fail(ErrorCode::LiteralOutOfRange,
             "literal at " + to_hex(literal_addr) + " is outside LDR range of " + to_hex(from_pc));
    uint32_t base = off >= 0 ? 0xe59f0000 : 0xe51f0000;
    uint32_t imm = uint32_t(off >= 0 ? off : -off);
    return base | (uint32_t(reg & 0xf) << 12) | imm;
}

Bytes encode_arm_b(Addr from_pc, Addr target, Endian endianness) {
    return word_bytes(arm_b_word(from_pc, target), endianness);
}

Bytes encode_arm_indirect_entry(uint8_t reg, Addr literal_addr, Addr from_pc, Endian endianness) {
    Bytes b = word_bytes(arm_push_word(reg), endianness);
    Bytes ldr = word_bytes(arm_ldr_literal_word(reg, from_pc + 4, literal_addr), endianness);
    b.insert(b.end(), ldr.begin(), ldr.end());
    Bytes mov = word_bytes(arm_mov_pc_word(reg), endianness);
    b.insert(b.end(), mov.begin(), mov.end());
    return b;
}

Bytes encode(const Instr& instr, Endian endianness) {
    switch (instr.kind) {
        case InstrKind::FAR_JMP_ABS:
            return encode_far_jump_x86(instr.target, instr.selector);
        case InstrKind::NEAR_JMP_REL32:
            return encode_x86_jmp_rel32(instr.pc, instr.target);
        case InstrKind::CALL_REL32:
            return encode_x86_call_rel32(instr.pc, instr.target);
        case InstrKind::PUSH_EBP:
            return {0x55};
        case InstrKind::ARM_B:
            return word_bytes(arm_b_word(instr.pc, instr.target), endianness);
        case InstrKind::ARM_BL:
            return word_bytes(arm_bl_word(instr.pc, instr.target), endianness);
        case InstrKind::ARM_BX:
            return word_bytes(arm_bx_word(instr.reg), endianness);
        case InstrKind::ARM_BLX:
            return word_bytes(0xe12fff30 | (instr.reg & 0xf), endianness);
        case InstrKind::ARM_MOV_PC_REG:
            return word_bytes(arm_mov_pc_word(instr.reg), endianness);
        case InstrKind::ARM_LDR_PC_LITERAL:
            return word_bytes(arm_ldr_literal_word(kRegPC, instr.pc, instr.target), endianness);
        case InstrKind::ARM_LDR_REG_LITERAL:
            return word_bytes(arm_ldr_literal_word(instr.reg, instr.pc, instr.target), endianness);
        case InstrKind::ARM_PUSH_REG:
            return word_bytes(arm_push_word(instr.reg), endianness);
        case InstrKind::ARM_POP_REG:
            return word_bytes(arm_pop_word(instr.reg), endianness);
        case InstrKind::ARM_STMFD_LR:
            return word_bytes(arm_stmfd_word(instr.reglist), endianness);
        case InstrKind::OTHER:
            return instr.raw;
    }
    fail(ErrorCode::EncodingError, "unencodable instruction");
}

bool match_prologue(Arch arch, Endian endianness, std::span<const uint8_t> bytes) {
    if (arch == Arch::X86_32) {
        return bytes.size() >= 3 && bytes[0] == 0x55 && bytes[1] == 0x8b && bytes[2] == 0xec;
    }
    if (bytes.size() < 4) return false;
    uint32_t w = get_u32(bytes.data(), endianness);
    return (w & 0xffff4000) == 0xe92d4000;
}

}  // namespace rtport::isa
