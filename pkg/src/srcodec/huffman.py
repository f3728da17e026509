"""Canonical Huffman coding over nonnegative integer symbols, plus MSB-first
bit I/O. Code lengths are capped at 16 bits so tables stay compact."""

import heapq
from collections import Counter

from .errors import StreamFormatError

MAX_CODE_LEN = 16


class BitWriter:
    def __init__(self):
        self._chunks = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, code: int, nbits: int):
        self._acc = (self._acc << nbits) | (code & ((1 << nbits) - 1))
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self._chunks.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> bytes:
        out = bytearray(self._chunks)
        if self._nbits:
            out.append((self._acc << (8 - self._nbits)) & 0xFF)
        return bytes(out)


class BitReader:
    def __init__(self, data: bytes, pos: int = 0):
        self._data = data
        self._pos = pos  # byte position
        self._bit = 0  # bits consumed of current byte, MSB first

    def read_bit(self) -> int:
        if self._pos >= len(self._data):
            raise StreamFormatError(f"bitstream exhausted at byte {self._pos}")
        bit = (self._data[self._pos] >> (7 - self._bit)) & 1
        self._bit += 1
        if self._bit == 8:
            self._bit = 0
            self._pos += 1
        return bit

    def align(self):
        if self._bit:
            self._bit = 0
            self._pos += 1

    @property
    def byte_pos(self) -> int:
        return self._pos


def code_lengths(freqs: Counter) -> dict:
    """Huffman code lengths per symbol, capped at MAX_CODE_LEN bits."""
    if not freqs:
        return {}
    if len(freqs) >= (1 << MAX_CODE_LEN):
        raise ValueError(f"alphabet too large for {MAX_CODE_LEN}-bit codes")
    if len(freqs) == 1:
        return {next(iter(freqs)): 1}
    heap = [(weight, i, sym) for i, (sym, weight) in enumerate(sorted(freqs.items()))]
    heapq.heapify(heap)
    tick = len(heap)
    while len(heap) > 1:
        w1, _, n1 = heapq.heappop(heap)
        w2, _, n2 = heapq.heappop(heap)
        heapq.heappush(heap, (w1 + w2, tick, (n1, n2)))
        tick += 1
    lengths = {}
    stack = [(heap[0][2], 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], depth + 1))
            stack.append((node[1], depth + 1))
        else:
            lengths[node] = max(depth, 1)
    if max(lengths.values()) > MAX_CODE_LEN:
        lengths = _limit_lengths(lengths, MAX_CODE_LEN)
    assert sum(2.0 ** -l for l in lengths.values()) <= 1.0 + 1e-9
    return lengths


def _limit_lengths(lengths: dict, limit: int) -> dict:
    # Shorten over-long codes by moving pairs up the tree; Kraft stays <= 1.
    max_len = max(lengths.values())
    bl = [0] * (max_len + 1)
    for l in lengths.values():
        bl[l] += 1
    for l in range(max_len, limit, -1):
        while bl[l] > 0:
            j = l - 2
            while bl[j] == 0:
                j -= 1
            bl[l] -= 2
            bl[l - 1] += 1
            bl[j + 1] += 2
            bl[j] -= 1
    new_lengths = [l for l in range(1, limit + 1) for _ in range(bl[l])]
    order = sorted(lengths, key=lambda s: (lengths[s], s))
    return dict(zip(order, new_lengths))


def canonical_codes(lengths: dict) -> dict:
    """Assign canonical codes: symbols ordered by (length, symbol)."""
    codes = {}
    code = 0
    prev_len = 0
    for sym, length in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        code <<= length - prev_len
        codes[sym] = (code, length)
        code += 1
        prev_len = length
    return codes


def encode_symbols(symbols) -> tuple[list, bytes]:
    """Huffman-encode a symbol sequence.

    Returns (table, payload) where table is the canonical descriptor, a list
    of (symbol, bit_length) pairs, and payload is the byte-aligned bitstream.
    """
    symbols = list(symbols)
    if not symbols:
        return [], b""
    lengths = code_lengths(Counter(symbols))
    codes = canonical_codes(lengths)
    writer = BitWriter()
    for s in symbols:
        code, nbits = codes[s]
        writer.write(code, nbits)
    table = sorted(lengths.items(), key=lambda kv: (kv[1], kv[0]))
    return table, writer.getvalue()


def decode_symbols(table: list, reader: BitReader, count: int) -> list:
    """Decode `count` symbols; leaves the reader aligned to the next byte."""
    if count == 0:
        reader.align()
        return []
    if not table:
        raise StreamFormatError("empty code table for nonempty payload")
    codes = canonical_codes(dict(table))
    lookup = {(length, code): sym for sym, (code, length) in codes.items()}
    max_len = max(length for _, length in table)
    out = []
    for _ in range(count):
        code = 0
        length = 0
        while True:
            code = (code << 1) | reader.read_bit()
            length += 1
            sym = lookup.get((length, code))
            if sym is not None:
                out.append(sym)
                break
            if length > max_len:
                raise StreamFormatError(
                    f"invalid Huffman code near byte {reader.byte_pos}"
                )
    reader.align()
    return out
