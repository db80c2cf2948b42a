"""The multi-role record store used throughout the toolkit.

One structure, four jobs: message queue, event-handler registry, argument
pack, and a schemaless relational table. Records ("atoms") carry named
tagged values ("electrons") and directed, ordered links to other atoms
("bonds"). Handler ids are plain integers so the whole store stays
serializable; it never holds executable code.

The text serialization (one record per line) is also the file format for
themes, desktop configuration and saved forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fnmatch import fnmatchcase
from typing import Callable, Iterable, Iterator, Optional, Union


class Tag(Enum):
    NULL = "null"
    BOOL = "bool"
    INT = "int"
    REAL = "real"
    TEXT = "text"
    BLOB = "blob"
    LIST = "list"
    REF = "ref"


ElectronValue = Union[None, bool, int, float, str, bytes, tuple]


@dataclass(frozen=True)
class Electron:
    """A tagged value; lists nest, refs point at atom ids."""

    tag: Tag
    value: ElectronValue = None

    @staticmethod
    def of(value) -> "Electron":
        if isinstance(value, Electron):
            return value
        if value is None:
            return Electron(Tag.NULL)
        if isinstance(value, bool):
            return Electron(Tag.BOOL, value)
        if isinstance(value, int):
            return Electron(Tag.INT, value)
        if isinstance(value, float):
            return Electron(Tag.REAL, value)
        if isinstance(value, str):
            return Electron(Tag.TEXT, value)
        if isinstance(value, (bytes, bytearray)):
            return Electron(Tag.BLOB, bytes(value))
        if isinstance(value, (list, tuple)):
            return Electron(Tag.LIST, tuple(Electron.of(v) for v in value))
        raise TypeError(f"no electron tag for {type(value).__name__}")

    @staticmethod
    def ref(atom_id: int) -> "Electron":
        return Electron(Tag.REF, int(atom_id))

    def unwrap(self):
        """Back to a plain Python value (lists become lists, refs ints)."""
        if self.tag is Tag.LIST:
            return [e.unwrap() for e in self.value]
        return self.value

    @property
    def is_null(self) -> bool:
        return self.tag is Tag.NULL


NULL = Electron(Tag.NULL)


class UnknownAtomError(KeyError):
    def __init__(self, atom_id: int):
        super().__init__(atom_id)
        self.atom_id = atom_id

    def __str__(self):
        return f"no atom with id {self.atom_id}"


class ChemParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Atom:
    id: int
    name: str
    electrons: dict[str, Electron] = field(default_factory=dict)
    bonds: list[int] = field(default_factory=list)

    def get(self, name: str) -> Electron:
        """Missing fields read as null (schemaless tables rely on this)."""
        return self.electrons.get(name, NULL)

    def value(self, name: str):
        return self.get(name).unwrap()

    def set(self, name: str, value) -> None:
        self.electrons[name] = Electron.of(value)


Predicate = Callable[[Atom], bool]


class ChemSystem:
    """Id-indexed atom collection with insertion-ordered iteration."""

    def __init__(self):
        self._atoms: dict[int, Atom] = {}
        self._next_id = 1

    def __len__(self) -> int:
        return len(self._atoms)

    def __contains__(self, atom_id: int) -> bool:
        return atom_id in self._atoms

    def atoms(self) -> Iterator[Atom]:
        return iter(self._atoms.values())

    def atom(self, atom_id: int) -> Atom:
        try:
            return self._atoms[atom_id]
        except KeyError:
            raise UnknownAtomError(atom_id) from None

    # -- construction ------------------------------------------------------

    def add_atom(self, name: str, fields: Optional[dict] = None) -> int:
        atom_id = self._next_id
        self._next_id += 1
        atom = Atom(atom_id, name)
        for key, value in (fields or {}).items():
            atom.set(key, value)
        self._atoms[atom_id] = atom
        return atom_id

    def remove_atom(self, atom_id: int) -> None:
        if atom_id not in self._atoms:
            raise UnknownAtomError(atom_id)
        del self._atoms[atom_id]
        for atom in self._atoms.values():
            if atom_id in atom.bonds:
                atom.bonds = [b for b in atom.bonds if b != atom_id]

    def bond(self, from_id: int, to_id: int) -> None:
        if from_id not in self._atoms:
            raise UnknownAtomError(from_id)
        if to_id not in self._atoms:
            raise UnknownAtomError(to_id)
        self._atoms[from_id].bonds.append(to_id)

    # -- relational role ---------------------------------------------------

    def select(self, name_pattern: str,
               predicate: Optional[Predicate] = None) -> list[int]:
        """Atom ids matching the name glob and predicate, insertion order."""
        out = []
        for atom in self._atoms.values():
            if not fnmatchcase(atom.name, name_pattern):
                continue
            if predicate is not None and not predicate(atom):
                continue
            out.append(atom.id)
        return out

    def update(self, selection: Iterable[int], field_name: str, value) -> None:
        for atom_id in selection:
            self.atom(atom_id).set(field_name, value)

    def delete(self, selection: Iterable[int]) -> None:
        for atom_id in list(selection):
            self.remove_atom(atom_id)

    # -- queue role ---------------------------------------------------------

    def enqueue(self, queue_name: str, fields: Optional[dict] = None) -> int:
        return self.add_atom(queue_name, fields)

    def dequeue(self, queue_name: str) -> Optional[Atom]:
        for atom in self._atoms.values():
            if atom.name == queue_name:
                removed = atom
                self.remove_atom(atom.id)
                return removed
        return None

    # -- event registry role -------------------------------------------------

    def bind_handler(self, event_name: str, handler_id: int) -> int:
        return self.add_atom("binding", {"event": event_name, "handler": int(handler_id)})

    def unbind_handler(self, event_name: str, handler_id: int) -> bool:
        """Remove the earliest matching binding; False if none existed."""
        for atom in self._atoms.values():
            if (atom.name == "binding" and atom.value("event") == event_name
                    and atom.value("handler") == handler_id):
                self.remove_atom(atom.id)
                return True
        return False

    def handlers_for(self, event_name: str) -> list[int]:
        return [self.atom(a).value("handler")
                for a in self.select("binding", lambda at: at.value("event") == event_name)]

    # -- copies and equality --------------------------------------------------

    def clone(self) -> "ChemSystem":
        out = ChemSystem()
        for atom in self._atoms.values():
            copy = Atom(atom.id, atom.name, dict(atom.electrons), list(atom.bonds))
            out._atoms[copy.id] = copy
        out._next_id = self._next_id
        return out

    def observed(self):
        """Canonical snapshot: what two equal systems must agree on."""
        return [(a.id, a.name, list(a.electrons.items()), list(a.bonds))
                for a in self._atoms.values()]

    def __eq__(self, other):
        if not isinstance(other, ChemSystem):
            return NotImplemented
        return self.observed() == other.observed()

    # -- serialization ---------------------------------------------------------

    def serialize(self) -> str:
        lines = []
        for atom in self._atoms.values():
            lines.append(f"ATOM {atom.id} {_token(atom.name)}")
            for key, electron in atom.electrons.items():
                lines.append(f"FIELD {atom.id} {_token(key)} {_encode(electron)}")
        for atom in self._atoms.values():
            for to_id in atom.bonds:
                lines.append(f"BOND {atom.id} {to_id}")
        return "".join(line + "\n" for line in lines)


_BARE_OK = re.compile(rb"\A[^\s]+\Z")
_PREFIXED = re.compile(rb"\A\d+:")


def _token(s: str) -> str:
    """Bare when unambiguous, else length-prefixed (byte count of UTF-8)."""
    raw = s.encode("utf-8")
    if _BARE_OK.match(raw) and not _PREFIXED.match(raw):
        return s
    return f"{len(raw)}:" + s


def _encode(e: Electron) -> str:
    if e.tag is Tag.NULL:
        return "null:"
    if e.tag is Tag.BOOL:
        return "bool:true" if e.value else "bool:false"
    if e.tag is Tag.INT:
        return f"int:{e.value}"
    if e.tag is Tag.REAL:
        return f"real:{e.value!r}"
    if e.tag is Tag.TEXT:
        return "text:" + _token(e.value)
    if e.tag is Tag.BLOB:
        return "blob:" + e.value.hex()
    if e.tag is Tag.REF:
        return f"ref:{e.value}"
    inner = " ".join(_encode(child) for child in e.value)
    return f"list:{len(inner.encode('utf-8'))}:" + inner


class _Reader:
    """Cursor over the serialized bytes; tracks line numbers for errors."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    @property
    def line(self) -> int:
        return self.data[:self.pos].count(b"\n") + 1

    def fail(self, message: str):
        raise ChemParseError(self.line, message)

    def at_end(self) -> bool:
        return self.pos >= len(self.data)

    def skip_blank(self) -> None:
        while self.pos < len(self.data) and self.data[self.pos] in b"\r\n":
            self.pos += 1

    def skip_spaces(self) -> None:
        while self.pos < len(self.data) and self.data[self.pos] in b" \t":
            self.pos += 1

    def read_word(self) -> str:
        self.skip_spaces()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos] not in b" \t\r\n":
            self.pos += 1
        if self.pos == start:
            self.fail("expected a token")
        return self.data[start:self.pos].decode("utf-8")

    def read_token(self) -> str:
        """A name or text token: bare word or `<len>:<raw bytes>`."""
        self.skip_spaces()
        m = _PREFIXED.match(self.data[self.pos:self.pos + 24])
        if m:
            header = m.group(0)
            n = int(header[:-1])
            self.pos += len(header)
            raw = self.data[self.pos:self.pos + n]
            if len(raw) < n:
                self.fail("length-prefixed value truncated")
            self.pos += n
            return raw.decode("utf-8")
        return self.read_word()

    def read_int(self, what: str) -> int:
        word = self.read_word()
        try:
            return int(word)
        except ValueError:
            self.fail(f"bad {what}: {word!r}")

    def expect_eol(self) -> None:
        self.skip_spaces()
        if self.pos < len(self.data) and self.data[self.pos] not in b"\r\n":
            self.fail("trailing junk on line")


def _decode_electron(r: _Reader) -> Electron:
    r.skip_spaces()
    colon = r.data.find(b":", r.pos)
    if colon < 0:
        r.fail("expected <tag>:<value>")
    tag_word = r.data[r.pos:colon].decode("utf-8", "replace")
    try:
        tag = Tag(tag_word)
    except ValueError:
        r.fail(f"unknown electron tag {tag_word!r}")
    r.pos = colon + 1
    if tag is Tag.NULL:
        return NULL
    if tag is Tag.BOOL:
        word = r.read_word()
        if word not in ("true", "false"):
            r.fail(f"bad bool {word!r}")
        return Electron(Tag.BOOL, word == "true")
    if tag is Tag.INT:
        return Electron(Tag.INT, r.read_int("int"))
    if tag is Tag.REAL:
        word = r.read_word()
        try:
            return Electron(Tag.REAL, float(word))
        except ValueError:
            r.fail(f"bad real {word!r}")
    if tag is Tag.TEXT:
        return Electron(Tag.TEXT, r.read_token())
    if tag is Tag.BLOB:
        start = r.pos
        while r.pos < len(r.data) and r.data[r.pos] not in b" \t\r\n":
            r.pos += 1
        hexpart = r.data[start:r.pos]
        try:
            return Electron(Tag.BLOB, bytes.fromhex(hexpart.decode("ascii")))
        except ValueError:
            r.fail("bad blob hex")
    if tag is Tag.REF:
        return Electron(Tag.REF, r.read_int("ref"))
    # list: <byte-count>:<inner encodings>
    m = _PREFIXED.match(r.data[r.pos:r.pos + 24])
    if not m:
        r.fail("list needs a byte-count prefix")
    n = int(m.group(0)[:-1])
    r.pos += len(m.group(0))
    inner = _Reader(r.data[r.pos:r.pos + n])
    if len(inner.data) < n:
        r.fail("list value truncated")
    r.pos += n
    children = []
    inner.skip_spaces()
    while not inner.at_end():
        children.append(_decode_electron(inner))
        inner.skip_spaces()
    return Electron(Tag.LIST, tuple(children))


def deserialize(text: Union[str, bytes]) -> ChemSystem:
    data = text.encode("utf-8") if isinstance(text, str) else text
    r = _Reader(data)
    sys = ChemSystem()
    while True:
        r.skip_blank()
        if r.at_end():
            break
        keyword = r.read_word()
        if keyword == "ATOM":
            atom_id = r.read_int("atom id")
            name = r.read_token()
            if atom_id in sys._atoms:
                r.fail(f"duplicate atom id {atom_id}")
            sys._atoms[atom_id] = Atom(atom_id, name)
            sys._next_id = max(sys._next_id, atom_id + 1)
        elif keyword == "FIELD":
            atom_id = r.read_int("atom id")
            if atom_id not in sys._atoms:
                r.fail(f"FIELD references unknown atom {atom_id}")
            fname = r.read_token()
            sys._atoms[atom_id].electrons[fname] = _decode_electron(r)
        elif keyword == "BOND":
            from_id = r.read_int("atom id")
            to_id = r.read_int("atom id")
            if from_id not in sys._atoms:
                r.fail(f"BOND references unknown atom {from_id}")
            if to_id not in sys._atoms:
                r.fail(f"BOND references unknown atom {to_id}")
            sys._atoms[from_id].bonds.append(to_id)
        else:
            r.fail(f"unknown record {keyword!r}")
        r.expect_eol()
    return sys


def pack(**fields) -> ChemSystem:
    """Small argument-pack helper: one atom named "args" holding the fields."""
    sys = ChemSystem()
    sys.add_atom("args", fields)
    return sys


def pack_args(sys: ChemSystem) -> Atom:
    """The atom written by pack(); creates it when absent."""
    for atom in sys.atoms():
        if atom.name == "args":
            return atom
    return sys.atom(sys.add_atom("args"))
