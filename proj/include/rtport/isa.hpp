#pragma once

#include <span>

#include "rtport/types.hpp"

namespace rtport::isa {

enum class InstrKind {
    FAR_JMP_ABS,
    NEAR_JMP_REL32,
    CALL_REL32,
    PUSH_EBP,
    ARM_B,
    ARM_BL,
    ARM_BX,
    ARM_BLX,
    ARM_MOV_PC_REG,
    ARM_LDR_PC_LITERAL,
    ARM_PUSH_REG,
    ARM_POP_REG,
    ARM_LDR_REG_LITERAL,
    ARM_STMFD_LR,
    OTHER,
};

constexpr uint8_t kRegR0 = 0;
constexpr uint8_t kRegSP = 13;
constexpr uint8_t kRegLR = 14;
constexpr uint8_t kRegPC = 15;
constexpr uint16_t kDefaultSelector = 0x0008;

struct Instr {
    InstrKind kind = InstrKind::OTHER;
    uint32_t length = 0;
    Addr pc = 0;          // address the instruction was decoded at
    Addr target = 0;      // absolute branch target / literal address, when meaningful
    uint8_t reg = 0;      // register operand, when meaningful
    uint16_t selector = 0;  // far jump code segment selector
    uint16_t reglist = 0;   // STMFD register mask
    Bytes raw;

    bool is_branch() const {
        return kind == InstrKind::FAR_JMP_ABS || kind == InstrKind::NEAR_JMP_REL32 ||
               kind == InstrKind::ARM_B || kind == InstrKind::ARM_BL;
    }
    // Control never falls through to the next instruction.
    bool is_terminator() const {
        return kind == InstrKind::FAR_JMP_ABS || kind == InstrKind::NEAR_JMP_REL32 ||
               kind == InstrKind::ARM_B || kind == InstrKind::ARM_BX ||
               kind == InstrKind::ARM_MOV_PC_REG || kind == InstrKind::ARM_LDR_PC_LITERAL;
    }
    bool is_call() const { return kind == InstrKind::CALL_REL32 || kind == InstrKind::ARM_BL; }
};

const char* instr_kind_name(InstrKind k);

Instr decode(Arch arch, Endian endianness, std::span<const uint8_t> bytes, Addr pc);
Bytes encode(const Instr& instr, Endian endianness);

// 7 bytes: EA, 4-byte LE target, 2-byte LE selector.
Bytes encode_far_jump_x86(Addr target, uint16_t selector = kDefaultSelector);
Bytes encode_x86_jmp_rel32(Addr from_pc, Addr target);
Bytes encode_x86_call_rel32(Addr from_pc, Addr target);

// True when B/BL from from_pc reaches target per the +/-32M rule.
bool arm_b_reachable(Addr from_pc, Addr target);

uint32_t arm_b_word(Addr from_pc, Addr target);
uint32_t arm_bl_word(Addr from_pc, Addr target);
uint32_t arm_bx_word(uint8_t reg);
uint32_t arm_mov_pc_word(uint8_t reg);
uint32_t arm_push_word(uint8_t reg);
uint32_t arm_pop_word(uint8_t reg);
uint32_t arm_stmfd_word(uint16_t reglist);
// LDR reg, [PC, #imm] addressing literal_addr; reg may be PC.
uint32_t arm_ldr_literal_word(uint8_t reg, Addr from_pc, Addr literal_addr);

Bytes word_bytes(uint32_t word, Endian endianness);

Bytes encode_arm_b(Addr from_pc, Addr target, Endian endianness);
// 12-byte entry stub: save reg, load reg from a PC-relative literal, move reg to PC.
Bytes encode_arm_indirect_entry(uint8_t reg, Addr literal_addr, Addr from_pc, Endian endianness);

bool match_prologue(Arch arch, Endian endianness, std::span<const uint8_t> bytes);

}  // namespace rtport::isa
