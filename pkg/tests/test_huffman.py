from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srcodec.errors import StreamFormatError
from srcodec.huffman import (
    MAX_CODE_LEN,
    BitReader,
    BitWriter,
    canonical_codes,
    code_lengths,
    decode_symbols,
    encode_symbols,
)


def roundtrip(symbols):
    table, payload = encode_symbols(symbols)
    reader = BitReader(payload)
    return decode_symbols(table, reader, len(symbols))


def test_bit_io_roundtrip():
    writer = BitWriter()
    writer.write(0b101, 3)
    writer.write(0b0110, 4)
    writer.write(0xABCD, 16)
    data = writer.getvalue()
    reader = BitReader(data)
    got = 0
    for _ in range(23):
        got = (got << 1) | reader.read_bit()
    assert got == (0b101 << 20) | (0b0110 << 16) | 0xABCD


def test_bit_reader_exhaustion():
    reader = BitReader(b"\xff")
    for _ in range(8):
        reader.read_bit()
    with pytest.raises(StreamFormatError):
        reader.read_bit()


def test_single_symbol_degenerate():
    symbols = [42] * 37
    table, payload = encode_symbols(symbols)
    assert table == [(42, 1)]
    assert len(payload) <= (len(symbols) + 7) // 8
    assert roundtrip(symbols) == symbols


def test_empty_sequence():
    table, payload = encode_symbols([])
    assert table == [] and payload == b""
    assert decode_symbols(table, BitReader(b""), 0) == []


def test_skewed_two_symbols_one_bit_each():
    symbols = [0] * 90 + [1] * 10
    table, payload = encode_symbols(symbols)
    assert all(length == 1 for _, length in table)
    assert len(payload) == (100 + 7) // 8


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 500), min_size=1, max_size=400))
def test_roundtrip_random(symbols):
    assert roundtrip(symbols) == symbols


def test_canonical_codes_prefix_free():
    lengths = code_lengths(Counter({0: 5, 1: 3, 2: 2, 3: 1, 4: 1}))
    codes = canonical_codes(lengths)
    bits = {format(code, f"0{n}b") for code, n in codes.values()}
    for a in bits:
        for b in bits:
            if a != b:
                assert not b.startswith(a)


def test_length_limit_on_fibonacci_frequencies():
    # Fibonacci-like counts force a deep Huffman tree; cap must kick in.
    freqs = {}
    a, b = 1, 1
    for sym in range(26):
        freqs[sym] = a
        a, b = b, a + b
    lengths = code_lengths(Counter(freqs))
    assert max(lengths.values()) <= MAX_CODE_LEN
    assert sum(2.0**-l for l in lengths.values()) <= 1.0 + 1e-12
    symbols = [s for s, c in freqs.items() for _ in range(min(c, 50))]
    assert roundtrip(symbols) == symbols


def test_corrupt_payload_detected():
    table, payload = encode_symbols([7, 8, 9, 7, 7])
    bad = payload[:-1]  # drop the tail
    with pytest.raises(StreamFormatError):
        decode_symbols(table, BitReader(bad), 5)


def test_mean_length_beats_fixed_width_on_skew():
    symbols = [0] * 900 + list(range(1, 20))
    table, payload = encode_symbols(symbols)
    assert len(payload) * 8 / len(symbols) < 2.0
