"""Encoding and decoding with a built code system, plus on-disk formats.

Wire format of an encoded stream:

    magic    4 bytes  b"AIVF"
    version  1 byte   0x01
    kind     1 byte   0 = tunstall, 1 = aivf
    |S|      2 bytes  big endian
    D        4 bytes  big endian dictionary size
    count    8 bytes  big endian number of source symbols
    payload  ceil(words * w / 8) bytes, codeword indices minus one packed
             MSB-first at w = ceil(log2 D) bits each, zero padded

The encoder always starts in tree 0 and, per word, walks the current tree as
far as the input allows; the node it stops at necessarily carries a codeword
(complete nodes cannot cause a mismatch, and a fresh tree always covers the
pending symbol), except when the input runs out inside a complete node, in
which case the most probable symbol is appended until a codeword is reached.
The header's symbol count lets the decoder drop those padding symbols.

Code systems round-trip through a JSON file that stores the tree shapes
together with the derived dictionaries and exact ``num/den`` probabilities;
loading revalidates everything and refuses inconsistent files.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    CodeFileError,
    CodingError,
    HeaderMismatchError,
    IndexOutOfRangeError,
    InvalidTreeError,
    TruncatedStreamError,
    UnknownSymbolError,
)
from .parse_tree import (
    DictEntry,
    ParseTree,
    TreeNode,
    occurrence_probs,
    validate_tree,
)
from .source_model import SourceModel

MAGIC = b"AIVF"
VERSION = 1
_HEADER = struct.Struct(">4sBBHIQ")
_KIND_CODES = {"tunstall": 0, "aivf": 1}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


@dataclass(frozen=True)
class CodeSystem:
    """A complete code: source, dictionary size, and one tree per state.

    ``kind`` is "aivf" (n-1 trees, one per type) or "tunstall" (a single
    complete type-0 tree). Trees are validated on construction.
    """

    source: SourceModel
    dict_size: int
    trees: tuple[ParseTree, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise CodeFileError(f"unknown code kind {self.kind!r}")
        n = len(self.source)
        expected = 1 if self.kind == "tunstall" else n - 1
        if len(self.trees) != expected:
            raise CodeFileError(
                f"{self.kind} system over {n} symbols needs {expected} trees, "
                f"got {len(self.trees)}"
            )
        for k, tree in enumerate(self.trees):
            if tree.type_index != k:
                raise CodeFileError(f"tree {k} has type {tree.type_index}")
            if tree.codeword_count != self.dict_size:
                raise CodeFileError(
                    f"tree {k} has {tree.codeword_count} codewords, "
                    f"dictionary size is {self.dict_size}"
                )
            violations = validate_tree(tree, self.source)
            if violations:
                raise InvalidTreeError(violations)

    @property
    def codeword_bits(self) -> int:
        return max(1, (self.dict_size - 1).bit_length())


class _BitWriter:
    def __init__(self):
        self.buffer = bytearray()
        self._acc = 0
        self._bits = 0

    def write(self, value: int, width: int):
        self._acc = (self._acc << width) | value
        self._bits += width
        while self._bits >= 8:
            self._bits -= 8
            self.buffer.append((self._acc >> self._bits) & 0xFF)
        self._acc &= (1 << self._bits) - 1

    def flush(self) -> bytes:
        if self._bits:
            self.buffer.append((self._acc << (8 - self._bits)) & 0xFF)
            self._acc = 0
            self._bits = 0
        return bytes(self.buffer)


class _BitReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0  # bit position

    def read(self, width: int) -> int:
        if self.pos + width > 8 * len(self.data):
            raise TruncatedStreamError(
                f"needed {width} bits at bit {self.pos}, stream has {8 * len(self.data)}"
            )
        out = 0
        for _ in range(width):
            byte = self.data[self.pos >> 3]
            out = (out << 1) | ((byte >> (7 - (self.pos & 7))) & 1)
            self.pos += 1
        return out


def parse_words(
    cs: CodeSystem, symbols: Sequence[int]
) -> Iterator[tuple[int, DictEntry, int]]:
    """Greedy parse into dictionary words.

    Yields (tree index, entry, padding count) triples; the padding count is
    nonzero only for the final word and counts invented symbols.
    """
    n = len(cs.source)
    total = len(symbols)
    pos = 0
    current = 0
    while pos < total:
        tree = cs.trees[current]
        node = tree.root
        word: list[int] = []
        while pos + len(word) < total:
            sym = symbols[pos + len(word)]
            if not 0 <= sym < n:
                raise UnknownSymbolError(f"symbol index {sym} outside alphabet of {n}")
            child = node.children.get(sym)
            if child is None:
                break
            node = child
            word.append(sym)
        entry = tree.entry_for(word)
        padding = 0
        if entry is None:
            if pos + len(word) < total:  # pragma: no cover - structural guarantee
                raise CodingError("parse stalled at a node without a codeword")
            while entry is None:  # input exhausted inside a complete node
                node = node.children[0]
                word.append(0)
                padding += 1
                entry = tree.entry_for(word)
        yield current, entry, padding
        pos += entry.length - padding
        current = entry.target_type


def encode(cs: CodeSystem, symbols: Sequence[int]) -> bytes:
    """Encode a symbol-index sequence into a framed bitstream."""
    writer = _BitWriter()
    width = cs.codeword_bits
    for _, entry, _ in parse_words(cs, symbols):
        writer.write(entry.index - 1, width)
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        _KIND_CODES[cs.kind],
        len(cs.source),
        cs.dict_size,
        len(symbols),
    )
    return header + writer.flush()


def decode_words(
    cs: CodeSystem, indices: Iterable[int]
) -> Iterator[tuple[int, DictEntry]]:
    """Replay codeword indices (1-based) into (tree index, entry) pairs."""
    current = 0
    for index in indices:
        if not 1 <= index <= cs.dict_size:
            raise IndexOutOfRangeError(
                f"codeword index {index} outside 1..{cs.dict_size}"
            )
        entry = cs.trees[current].dictionary[index - 1]
        yield current, entry
        current = entry.target_type


def decode(cs: CodeSystem, blob: bytes) -> list[int]:
    """Decode a framed bitstream back into symbol indices."""
    if len(blob) < _HEADER.size:
        raise TruncatedStreamError(
            f"stream of {len(blob)} bytes is shorter than the {_HEADER.size}-byte header"
        )
    magic, version, kind_code, n, dict_size, count = _HEADER.unpack_from(blob)
    if magic != MAGIC or version != VERSION:
        raise HeaderMismatchError(f"bad magic/version {magic!r}/{version}")
    kind = _KIND_NAMES.get(kind_code)
    if kind != cs.kind or n != len(cs.source) or dict_size != cs.dict_size:
        raise HeaderMismatchError(
            f"stream is {kind}/{n} symbols/D={dict_size}, code system is "
            f"{cs.kind}/{len(cs.source)} symbols/D={cs.dict_size}"
        )
    reader = _BitReader(blob[_HEADER.size :])
    width = cs.codeword_bits
    out: list[int] = []
    current = 0
    while len(out) < count:
        index = reader.read(width) + 1
        if index > cs.dict_size:
            raise IndexOutOfRangeError(
                f"codeword index {index} outside 1..{cs.dict_size}"
            )
        entry = cs.trees[current].dictionary[index - 1]
        out.extend(entry.word)
        current = entry.target_type
    del out[count:]  # drop encoder padding
    return out


def _node_record(tree: ParseTree, node: TreeNode, word: tuple, src: SourceModel) -> dict:
    record: dict = {}
    entry = tree.entry_for(word)
    if entry is not None:
        record["codeword"] = entry.index
        record["target"] = entry.target_type
    if node.children:
        record["children"] = {
            src.symbols[sym]: _node_record(
                tree, node.children[sym], word + (sym,), src
            )
            for sym in sorted(node.children)
        }
    return record


def _node_from_record(record: dict, src: SourceModel, where: str) -> TreeNode:
    children = record.get("children", {})
    if not isinstance(children, dict):
        raise CodeFileError(f"{where}: children must be an object")
    out: dict[int, TreeNode] = {}
    for name, child in children.items():
        try:
            sym = src.index_of(name)
        except KeyError:
            raise CodeFileError(f"{where}: unknown symbol {name!r}") from None
        out[sym] = _node_from_record(child, src, f"{where}/{name}")
    return TreeNode(out)


def save_code_system(cs: CodeSystem, path) -> None:
    """Write a code system to a self-describing JSON file."""
    doc = {
        "format": "aivf-code-system",
        "version": 1,
        "kind": cs.kind,
        "dict_size": cs.dict_size,
        "codeword_bits": cs.codeword_bits,
        "symbols": list(cs.source.symbols),
        "probabilities": [str(p) for p in cs.source.probs],
        "trees": [],
    }
    for tree in cs.trees:
        entries = occurrence_probs(tree, cs.source)
        doc["trees"].append(
            {
                "type": tree.type_index,
                "root": _node_record(tree, tree.root, (), cs.source),
                "dictionary": [
                    {
                        "index": e.index,
                        "word": [cs.source.symbols[s] for s in e.word],
                        "length": e.length,
                        "target": e.target_type,
                        "prob": str(e.occurrence_prob),
                    }
                    for e in entries
                ],
            }
        )
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def load_code_system(path) -> CodeSystem:
    """Read a code system back, revalidating structure and probabilities."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise CodeFileError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != "aivf-code-system":
        raise CodeFileError(f"{path}: not a code-system file")
    if doc.get("version") != 1:
        raise CodeFileError(f"{path}: unsupported version {doc.get('version')!r}")
    try:
        symbols = [str(s) for s in doc["symbols"]]
        probs = [Fraction(p) for p in doc["probabilities"]]
        kind = doc["kind"]
        dict_size = int(doc["dict_size"])
        tree_docs = doc["trees"]
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise CodeFileError(f"{path}: malformed field: {exc}") from None
    try:
        src = SourceModel.from_probs(probs, symbols)
    except CodingError as exc:
        raise CodeFileError(f"{path}: {exc}") from None
    if list(src.symbols) != symbols:
        raise CodeFileError(f"{path}: symbols are not in descending-probability order")
    trees = []
    for k, tree_doc in enumerate(tree_docs):
        root = _node_from_record(tree_doc.get("root", {}), src, f"tree {k}")
        tree = ParseTree(int(tree_doc.get("type", k)), root, len(src))
        trees.append(tree)
    try:
        cs = CodeSystem(src, dict_size, tuple(trees), kind)
    except CodingError as exc:
        raise CodeFileError(f"{path}: {exc}") from None
    for k, (tree, tree_doc) in enumerate(zip(cs.trees, tree_docs)):
        entries = occurrence_probs(tree, src)
        stored = tree_doc.get("dictionary", [])
        if len(stored) != len(entries):
            raise CodeFileError(
                f"{path}: tree {k} stores {len(stored)} dictionary rows, "
                f"derived {len(entries)}"
            )
        for e, row in zip(entries, stored):
            words_match = [src.index_of(s) for s in row.get("word", [])] == list(e.word)
            if (
                not words_match
                or int(row.get("index", -1)) != e.index
                or int(row.get("target", -1)) != e.target_type
                or Fraction(row.get("prob", "0")) != e.occurrence_prob
            ):
                raise CodeFileError(
                    f"{path}: tree {k} dictionary row {row.get('index')} "
                    f"disagrees with the derived dictionary"
                )
    return cs
