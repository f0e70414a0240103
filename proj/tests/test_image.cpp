#include <doctest.h>

#include "rtport/image.hpp"
#include "test_util.hpp"

using namespace rtport;

TEST_CASE("load_elf: minimal 32-bit LE container with one code segment") {
    testutil::ElfSegment seg;
    seg.vaddr = 0x00308000;
    seg.data = {0x55, 0x8b, 0xec, 0x90};
    auto bytes = testutil::build_elf32(3 /*EM_386*/, false, 0x00308000, {seg});

    FirmwareImage img = load_elf(bytes);
    CHECK(img.arch == Arch::X86_32);
    CHECK(img.endianness == Endian::LE);
    CHECK(img.base_address == 0x00308000);
    CHECK(img.source_format == SourceFormat::ELF_CONTAINER);
    REQUIRE(img.segments().size() == 1);
    CHECK(img.segments()[0].start == 0x00308000);
    CHECK(img.segments()[0].length == 4);
    CHECK(img.segments()[0].kind == SegmentKind::CODE);
    REQUIRE(img.entry_point.has_value());
    CHECK(*img.entry_point == 0x00308000);
    CHECK(img.read(0x00308000, 4) == Bytes{0x55, 0x8b, 0xec, 0x90});
}

TEST_CASE("load_elf: big-endian ARM container decodes header fields") {
    testutil::ElfSegment seg;
    seg.vaddr = 0x00100000;
    seg.data = {0xe9, 0x2d, 0x48, 0x00};
    auto bytes = testutil::build_elf32(40 /*EM_ARM*/, true, 0x00100000, {seg});
    FirmwareImage img = load_elf(bytes);
    CHECK(img.arch == Arch::ARM32);
    CHECK(img.endianness == Endian::BE);
    CHECK(img.base_address == 0x00100000);
}

TEST_CASE("load_elf: filesz < memsz yields a trailing BSS segment") {
    testutil::ElfSegment seg;
    seg.vaddr = 0x1000;
    seg.data = {1, 2, 3, 4};
    seg.extra_bss = 8;
    seg.flags = 6;  // PF_R | PF_W
    auto bytes = testutil::build_elf32(3, false, 0x1000, {seg});
    FirmwareImage img = load_elf(bytes);
    REQUIRE(img.segments().size() == 2);
    CHECK(img.segments()[1].kind == SegmentKind::BSS);
    CHECK(img.segments()[1].start == 0x1004);
    CHECK(img.segments()[1].length == 8);
    CHECK(img.read(0x1008, 4) == Bytes{0, 0, 0, 0});
}

TEST_CASE("load_elf: empty input is rejected") {
    CHECK_THROWS_WITH_AS(load_elf(Bytes{}), doctest::Contains("shorter"), Error);
}

TEST_CASE("load_elf: 64-bit class is rejected") {
    testutil::ElfSegment seg;
    seg.vaddr = 0x1000;
    seg.data = {1};
    auto bytes = testutil::build_elf32(3, false, 0x1000, {seg});
    bytes[4] = 2;  // ELFCLASS64
    try {
        load_elf(bytes);
        FAIL("expected UnsupportedClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedClass);
    }
}

TEST_CASE("load_elf: overlapping loadable regions are rejected") {
    testutil::ElfSegment a, b;
    a.vaddr = 0x1000;
    a.data.assign(16, 0xaa);
    b.vaddr = 0x1008;
    b.data.assign(16, 0xbb);
    auto bytes = testutil::build_elf32(3, false, 0x1000, {a, b});
    try {
        load_elf(bytes);
        FAIL("expected MalformedContainer");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedContainer);
    }
}

TEST_CASE("load_raw: identity layout") {
    Bytes data(1024, 0x41);
    FirmwareImage img = load_raw(data, 0x0, Arch::X86_32, Endian::LE);
    REQUIRE(img.segments().size() == 1);
    CHECK(img.segments()[0].start == 0);
    CHECK(img.segments()[0].length == 0x400);
    CHECK(*img.entry_point == 0);
}

TEST_CASE("load_raw: ARM base must be 4-aligned") {
    Bytes data(16, 0);
    try {
        load_raw(data, 0x00000002, Arch::ARM32, Endian::LE);
        FAIL("expected MisalignedBase");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MisalignedBase);
    }
}

TEST_CASE("load_raw: empty input leaves every read unmapped") {
    FirmwareImage img = load_raw(Bytes{}, 0x1000, Arch::X86_32, Endian::LE);
    REQUIRE(img.segments().size() == 1);
    CHECK(img.segments()[0].length == 0);
    Bytes out;
    CHECK_FALSE(img.try_read(0x1000, 1, out));
}

TEST_CASE("read/write semantics") {
    FirmwareImage img;
    img.arch = Arch::X86_32;
    Segment code;
    code.name = "code";
    code.start = 0x100;
    code.length = 16;
    code.data.assign(16, 0x90);
    code.kind = SegmentKind::CODE;
    code.writable = false;
    code.executable = true;
    img.add_segment(code);
    Segment bss;
    bss.name = "bss";
    bss.start = 0x200;
    bss.length = 16;
    bss.kind = SegmentKind::BSS;
    img.add_segment(bss);

    SUBCASE("bss reads return zeros") {
        CHECK(img.read(0x204, 4) == Bytes{0, 0, 0, 0});
    }
    SUBCASE("write then read back round-trips") {
        Bytes v{0xde, 0xad, 0xbe, 0xef};
        img.write(0x104, v);
        CHECK(img.read(0x104, 4) == v);
    }
    SUBCASE("read straddling a gap between segments is unmapped") {
        Bytes out;
        CHECK_FALSE(img.try_read(0x10e, 4, out));
        CHECK_THROWS_AS(img.read(0x10e, 4), Error);
    }
    SUBCASE("write-protect policy flag") {
        img.enforce_write_protect = true;
        try {
            img.write(0x100, Bytes{0x00});
            FAIL("expected ReadOnlyViolation");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ReadOnlyViolation);
        }
        img.enforce_write_protect = false;  // patching code is the default
        CHECK_NOTHROW(img.write(0x100, Bytes{0x00}));
    }
    SUBCASE("write into bss materializes it") {
        img.write(0x208, Bytes{1, 2, 3, 4});
        CHECK(img.read(0x208, 4) == Bytes{1, 2, 3, 4});
        CHECK(img.read(0x200, 4) == Bytes{0, 0, 0, 0});
    }
}

TEST_CASE("emit_flat: gaps and bss take the fill byte") {
    FirmwareImage img;
    Segment a;
    a.name = "a";
    a.start = 0x0;
    a.length = 4;
    a.data = {0xde, 0xad, 0xbe, 0xef};
    a.kind = SegmentKind::CODE;
    img.add_segment(a);
    Segment b;
    b.name = "b";
    b.start = 0x8;
    b.length = 4;
    b.data = {0xca, 0xfe, 0xba, 0xbe};
    b.kind = SegmentKind::DATA;
    img.add_segment(b);

    Bytes flat = img.emit_flat();
    REQUIRE(flat.size() == 12);
    CHECK(flat == Bytes{0xde, 0xad, 0xbe, 0xef, 0, 0, 0, 0, 0xca, 0xfe, 0xba, 0xbe});

    Bytes flat_ff = img.emit_flat(0xff);
    CHECK(flat_ff[4] == 0xff);
    CHECK(flat_ff[0] == 0xde);
}

TEST_CASE("emit_flat: bss between two code segments emits zero bytes") {
    // Expected bytes computed by independent concatenation.
    Bytes left{1, 2, 3, 4};
    Bytes right{5, 6, 7, 8};
    Bytes expected;
    expected.insert(expected.end(), left.begin(), left.end());
    expected.insert(expected.end(), 8, 0);
    expected.insert(expected.end(), right.begin(), right.end());

    FirmwareImage img;
    Segment a{"a", 0x10, 4, left, SegmentKind::CODE, true, true};
    img.add_segment(a);
    Segment mid;
    mid.name = "bss";
    mid.start = 0x14;
    mid.length = 8;
    mid.kind = SegmentKind::BSS;
    img.add_segment(mid);
    Segment b{"b", 0x1c, 4, right, SegmentKind::CODE, true, true};
    img.add_segment(b);
    CHECK(img.emit_flat() == expected);
}

TEST_CASE("emit_flat: span cap") {
    FirmwareImage img;
    Segment a{"a", 0x0, 4, Bytes{1, 2, 3, 4}, SegmentKind::CODE, true, true};
    img.add_segment(a);
    Segment b{"b", 0x10000000, 4, Bytes{5, 6, 7, 8}, SegmentKind::CODE, true, true};
    img.add_segment(b);
    try {
        img.emit_flat(0x00, 0x1000);
        FAIL("expected SpanTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SpanTooLarge);
    }
}

TEST_CASE("property: emit_flat(load_raw(b)) == b") {
    testutil::Rng rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        Bytes data(rng.below(512));
        for (auto& c : data) c = uint8_t(rng.u32());
        Addr base = rng.below(0x10000) * 4;
        FirmwareImage img = load_raw(data, base, Arch::ARM32, Endian::LE);
        if (data.empty()) continue;  // no span to emit
        CHECK(img.emit_flat() == data);
        // Byte at (a - min_start) equals read(a, 1) for sampled addresses.
        for (int probe = 0; probe < 8; ++probe) {
            Addr a = base + rng.below(uint32_t(data.size()));
            CHECK(img.emit_flat()[a - base] == img.read(a, 1)[0]);
        }
    }
}
