"""Vocabularies, values, and states-as-structures.

A vocabulary fixes the typed function symbols a program may use: a predeclared
static core (integer arithmetic, comparisons, boolean connectives, and the
plane-geometry constructors), plus per-program dynamic and oracle symbols and
enum sorts. A state interprets the dynamic symbols over the builtin carriers
and the finite enum universes; static symbols are interpreted once and for all
by the table below, and oracle symbols are answered by a session at evaluation
time.

`undef` is a value of every sort. Reading an absent location yields `undef`,
writing `undef` removes the location again, and `undef` compares equal only to
itself. Static functions other than equality are strict: any `undef` argument
gives an `undef` result, except that the boolean connectives use the usual
three-valued reading (false absorbs `and`, true absorbs `or`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional

from . import geometry
from .errors import BasmError
from .geometry import Circle, Line, Point

STATIC = "static"
DYNAMIC = "dynamic"
ORACLE = "oracle"


@dataclass(frozen=True)
class Sort:
    name: str
    kind: str  # builtin sorts carry their own name as kind; enum sorts use "Enum"
    members: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind == "Enum":
            if not self.members:
                raise BasmError("sort", f"enum sort {self.name} needs at least one member")
            if len(set(self.members)) != len(self.members):
                raise BasmError("sort", f"enum sort {self.name} repeats a member")
        elif self.members is not None:
            raise BasmError("sort", f"builtin sort {self.name} cannot carry members")

    @property
    def is_enum(self) -> bool:
        return self.kind == "Enum"


INTEGER = Sort("Integer", "Integer")
BOOLEAN = Sort("Boolean", "Boolean")
POINT = Sort("Point", "Point")
CIRCLE = Sort("Circle", "Circle")
LINE = Sort("Line", "Line")
# Internal sort of the polymorphic equality operators and the undef literal.
ANY = Sort("Any", "Any")

BUILTIN_SORTS = {s.name: s for s in (INTEGER, BOOLEAN, POINT, CIRCLE, LINE)}


def enum_sort(name: str, members: Iterable[str]) -> Sort:
    return Sort(name, "Enum", tuple(members))


class _Undef:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "undef"

    def __reduce__(self):
        return (_Undef, ())


UNDEF = _Undef()


@dataclass(frozen=True)
class EnumValue:
    sort_name: str
    member: str

    def __repr__(self):
        return self.member


def sort_of_value(value, vocabulary: "Vocabulary | None" = None) -> Sort:
    if value is UNDEF:
        return ANY
    if isinstance(value, bool):
        return BOOLEAN
    if isinstance(value, int):
        return INTEGER
    if isinstance(value, Point):
        return POINT
    if isinstance(value, Circle):
        return CIRCLE
    if isinstance(value, Line):
        return LINE
    if isinstance(value, EnumValue):
        if vocabulary is not None:
            sort = vocabulary.sorts.get(value.sort_name)
            if sort is not None:
                return sort
        return Sort(value.sort_name, "Enum", (value.member,))
    raise BasmError("sort", f"not a value: {value!r}")


def value_conforms(value, sort: Sort, vocabulary: "Vocabulary | None" = None) -> bool:
    if value is UNDEF or sort is ANY:
        return True
    if sort is BOOLEAN:
        return isinstance(value, bool)
    if sort is INTEGER:
        return isinstance(value, int) and not isinstance(value, bool)
    if sort is POINT:
        return isinstance(value, Point)
    if sort is CIRCLE:
        return isinstance(value, Circle)
    if sort is LINE:
        return isinstance(value, Line)
    if sort.is_enum:
        return (
            isinstance(value, EnumValue)
            and value.sort_name == sort.name
            and value.member in sort.members
        )
    return False


def values_equal(a, b) -> bool:
    """Semantic value equality; geometry payloads compare within the kernel EPS."""
    if a is UNDEF or b is UNDEF:
        return a is UNDEF and b is UNDEF
    if isinstance(a, Point):
        return isinstance(b, Point) and geometry.points_close(a, b)
    if isinstance(a, Circle):
        return (
            isinstance(b, Circle)
            and geometry.points_close(a.center, b.center)
            and geometry.points_close(a.through, b.through)
        )
    if isinstance(a, Line):
        return (
            isinstance(b, Line)
            and geometry.points_close(a.p1, b.p1)
            and geometry.points_close(a.p2, b.p2)
        )
    if type(a) is not type(b):
        return False
    return a == b


@dataclass(frozen=True)
class Symbol:
    name: str
    arg_sorts: tuple[Sort, ...]
    result_sort: Sort
    kind: str  # static | dynamic | oracle

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


# --- predeclared static core -------------------------------------------------

def _mod(a, b):
    if b == 0:
        raise BasmError("arith", "mod by zero")
    return a % b


def _powmod(a, e, m):
    if m == 0:
        raise BasmError("arith", "powmod with zero modulus")
    if e < 0:
        raise BasmError("arith", "powmod with negative exponent")
    return pow(a, e, m)


def _and(a, b):
    if a is False or b is False:
        return False
    if a is UNDEF or b is UNDEF:
        return UNDEF
    return True


def _or(a, b):
    if a is True or b is True:
        return True
    if a is UNDEF or b is UNDEF:
        return UNDEF
    return False


def _not(a):
    return UNDEF if a is UNDEF else not a


# (name, arg sorts, result sort, implementation, strict-on-undef)
_STATIC_DEFS = [
    ("+", (INTEGER, INTEGER), INTEGER, lambda a, b: a + b, True),
    ("-", (INTEGER, INTEGER), INTEGER, lambda a, b: a - b, True),
    ("*", (INTEGER, INTEGER), INTEGER, lambda a, b: a * b, True),
    ("mod", (INTEGER, INTEGER), INTEGER, _mod, True),
    ("powmod", (INTEGER, INTEGER, INTEGER), INTEGER, _powmod, True),
    ("<", (INTEGER, INTEGER), BOOLEAN, lambda a, b: a < b, True),
    ("<=", (INTEGER, INTEGER), BOOLEAN, lambda a, b: a <= b, True),
    (">", (INTEGER, INTEGER), BOOLEAN, lambda a, b: a > b, True),
    (">=", (INTEGER, INTEGER), BOOLEAN, lambda a, b: a >= b, True),
    ("=", (ANY, ANY), BOOLEAN, values_equal, False),
    ("!=", (ANY, ANY), BOOLEAN, lambda a, b: not values_equal(a, b), False),
    ("and", (BOOLEAN, BOOLEAN), BOOLEAN, _and, False),
    ("or", (BOOLEAN, BOOLEAN), BOOLEAN, _or, False),
    ("not", (BOOLEAN,), BOOLEAN, _not, False),
    ("Cl", (POINT, POINT), CIRCLE, geometry.circle_through, True),
    ("L", (POINT, POINT), LINE, geometry.line_through, True),
    ("M", (POINT, POINT), POINT, geometry.midpoint, True),
    ("Inc", (POINT, CIRCLE), BOOLEAN, geometry.incident, True),
]

STATIC_SYMBOLS: dict[str, Symbol] = {
    name: Symbol(name, args, res, STATIC) for name, args, res, _fn, _strict in _STATIC_DEFS
}
STATIC_IMPL: dict[str, tuple[Callable, bool]] = {
    name: (fn, strict) for name, _args, _res, fn, strict in _STATIC_DEFS
}


class Vocabulary:
    """Symbol table for one program.

    Built once while declarations are loaded, then used read-only. Any name in
    `oracle_statics` reclassifies that predeclared static symbol as an oracle:
    it keeps its signature, but evaluation routes it through the session (so it
    is logged, cached per step, and forbidden in implicit-iteration programs).
    """

    def __init__(self, oracle_statics: Iterable[str] = ()):
        self.sorts: dict[str, Sort] = dict(BUILTIN_SORTS)
        self.symbols: dict[str, Symbol] = {}
        self.declarations: list[tuple[str, object]] = []
        self.oracle_statics = frozenset(oracle_statics)
        unknown = self.oracle_statics - set(STATIC_SYMBOLS)
        if unknown:
            raise BasmError(
                "sort", "cannot reclassify unknown static: " + ", ".join(sorted(unknown))
            )
        for name, sym in STATIC_SYMBOLS.items():
            if name in self.oracle_statics:
                sym = Symbol(sym.name, sym.arg_sorts, sym.result_sort, ORACLE)
            self.symbols[name] = sym
        self._members: dict[str, EnumValue] = {}

    def _check_fresh(self, name: str):
        if name in self.sorts:
            raise BasmError("sort", f"name already used by a sort: {name}")
        if name in self.symbols:
            raise BasmError("sort", f"symbol already declared: {name}")
        if name in self._members:
            raise BasmError("sort", f"name already used by an enum member: {name}")

    def declare_enum(self, name: str, members: Iterable[str]) -> Sort:
        self._check_fresh(name)
        sort = enum_sort(name, members)
        for m in sort.members:
            if m in self.symbols or m in self._members or m in self.sorts:
                raise BasmError("sort", f"enum member name already in use: {m}")
        self.sorts[name] = sort
        for m in sort.members:
            self._members[m] = EnumValue(name, m)
        self.declarations.append(("enum", sort))
        return sort

    def declare(self, name: str, arg_sorts: Iterable[Sort], result_sort: Sort, kind: str) -> Symbol:
        if kind not in (DYNAMIC, ORACLE):
            raise BasmError("sort", f"cannot declare symbol of kind {kind}")
        self._check_fresh(name)
        sym = Symbol(name, tuple(arg_sorts), result_sort, kind)
        self.symbols[name] = sym
        self.declarations.append(("var" if kind == DYNAMIC else "oracle", sym))
        return sym

    def redeclare_static(self, name: str, arg_sorts: Iterable[Sort], result_sort: Sort) -> Symbol:
        """Record an explicit mention of a predeclared static; the signature must match."""
        base = STATIC_SYMBOLS.get(name)
        if base is None:
            raise BasmError("sort", f"unknown static symbol: {name}")
        if base.arg_sorts != tuple(arg_sorts) or base.result_sort is not result_sort:
            raise BasmError("sort", f"static {name} redeclared with a different signature")
        sym = self.symbols[name]
        self.declarations.append(("static", sym))
        return sym

    def sort(self, name: str) -> Sort:
        try:
            return self.sorts[name]
        except KeyError:
            raise BasmError("sort", f"unknown sort: {name}") from None

    def symbol(self, name: str) -> Symbol | None:
        return self.symbols.get(name)

    def member(self, name: str) -> EnumValue | None:
        return self._members.get(name)

    def dynamic_symbols(self) -> list[Symbol]:
        return [s for s in self.symbols.values() if s.kind == DYNAMIC]

    @property
    def universes(self) -> dict[str, tuple[str, ...]]:
        return {s.name: s.members for s in self.sorts.values() if s.is_enum}

    def copy(self) -> "Vocabulary":
        clone = Vocabulary(self.oracle_statics)
        clone.sorts = dict(self.sorts)
        clone.symbols = dict(self.symbols)
        clone.declarations = list(self.declarations)
        clone._members = dict(self._members)
        return clone

    def __eq__(self, other):
        return (
            isinstance(other, Vocabulary)
            and self.sorts == other.sorts
            and self.symbols == other.symbols
            and self.declarations == other.declarations
        )

    def __repr__(self):
        declared = [d[1].name if hasattr(d[1], "name") else str(d[1]) for d in self.declarations]
        return f"Vocabulary({', '.join(declared)})"


@dataclass(frozen=True, eq=False)
class Location:
    symbol: Symbol
    args: tuple

    def __eq__(self, other):
        return (
            isinstance(other, Location)
            and self.symbol.name == other.symbol.name
            and self.args == other.args
        )

    def __hash__(self):
        return hash((self.symbol.name, self.args))

    def render(self) -> str:
        from .literals import render_value

        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({','.join(render_value(a) for a in self.args)})"

    def __repr__(self):
        return self.render()


@dataclass(frozen=True, eq=False)
class Query:
    """One oracle question: an oracle symbol applied to evaluated arguments."""

    symbol: Symbol
    args: tuple

    def __eq__(self, other):
        return (
            isinstance(other, Query)
            and self.symbol.name == other.symbol.name
            and self.args == other.args
        )

    def __hash__(self):
        return hash((self.symbol.name, self.args))

    def render(self) -> str:
        from .literals import render_value

        return f"{self.symbol.name}({','.join(render_value(a) for a in self.args)})"

    def __repr__(self):
        return self.render()


@dataclass(frozen=True)
class Update:
    location: Location
    value: object


class UpdateSet:
    """A consistent set of updates; inserting a conflicting value raises "clash"."""

    __slots__ = ("_entries",)

    def __init__(self, updates: Iterable[Update] = ()):
        self._entries: dict[Location, object] = {}
        for u in updates:
            self.add(u.location, u.value)

    def add(self, location: Location, value):
        present = self._entries.get(location, _MISSING)
        if present is _MISSING:
            self._entries[location] = value
        elif not values_equal(present, value):
            raise BasmError("clash", f"clash at {location.render()}")

    def get(self, location: Location, default=None):
        return self._entries.get(location, default)

    def items(self) -> list[tuple[Location, object]]:
        return sorted(self._entries.items(), key=lambda kv: kv[0].render())

    def locations(self) -> set[Location]:
        return set(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self) -> Iterator[Update]:
        for loc, value in self.items():
            yield Update(loc, value)

    def __eq__(self, other):
        if not isinstance(other, UpdateSet):
            return NotImplemented
        if set(self._entries) != set(other._entries):
            return False
        return all(values_equal(v, other._entries[loc]) for loc, v in self._entries.items())

    def __repr__(self):
        from .literals import render_value

        inner = ", ".join(f"{loc.render()}:={render_value(v)}" for loc, v in self.items())
        return f"{{{inner}}}"


_MISSING = object()


class State:
    """Immutable snapshot: a vocabulary plus a finite interpretation of dynamic locations."""

    __slots__ = ("vocabulary", "interp")

    def __init__(self, vocabulary: Vocabulary, interp: Mapping[Location, object] | None = None,
                 validate: bool = True):
        self.vocabulary = vocabulary
        self.interp: dict[Location, object] = dict(interp) if interp else {}
        if validate:
            for loc, value in self.interp.items():
                self._check_binding(loc, value)
            for loc in [l for l, v in self.interp.items() if v is UNDEF]:
                del self.interp[loc]

    def _check_binding(self, loc: Location, value):
        sym = self.vocabulary.symbol(loc.symbol.name)
        if sym is None or sym.kind != DYNAMIC:
            raise BasmError("sort", f"not a dynamic symbol: {loc.symbol.name}")
        if len(loc.args) != sym.arity:
            raise BasmError("sort", f"arity mismatch at {loc.render()}")
        for a, s in zip(loc.args, sym.arg_sorts):
            if not value_conforms(a, s, self.vocabulary):
                raise BasmError("sort", f"ill-sorted argument in {loc.render()}")
        if not value_conforms(value, sym.result_sort, self.vocabulary):
            raise BasmError("sort", f"ill-sorted value for {loc.render()}")

    def read(self, location: Location):
        return self.interp.get(location, UNDEF)

    @property
    def universes(self) -> dict[str, tuple[str, ...]]:
        return self.vocabulary.universes

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        if self.vocabulary != other.vocabulary:
            return False
        if set(self.interp) != set(other.interp):
            return False
        return all(values_equal(v, other.interp[loc]) for loc, v in self.interp.items())

    def __repr__(self):
        from .literals import render_value

        inner = ", ".join(
            f"{loc.render()}={render_value(v)}"
            for loc, v in sorted(self.interp.items(), key=lambda kv: kv[0].render())
        )
        return f"State({inner})"


def apply_updates(state: State, updates: UpdateSet) -> State:
    """A fresh state with the updates applied; `undef` writes clear locations."""
    interp = dict(state.interp)
    for loc, value in updates.items():
        state._check_binding(loc, value)
        if value is UNDEF:
            interp.pop(loc, None)
        else:
            interp[loc] = value
    return State(state.vocabulary, interp, validate=False)


def changes_nothing(state: State, updates: UpdateSet) -> bool:
    return all(values_equal(state.read(loc), value) for loc, value in updates.items())


def transport(state: State, bijection: Mapping[str, Mapping[str, str]]) -> State:
    """Rename enum universe members throughout a state.

    `bijection` maps enum sort names to total member-to-member bijections.
    Sorts not mentioned are left alone; builtin sorts cannot be moved.
    """
    vocab = state.vocabulary
    maps: dict[str, dict[str, str]] = {}
    for sort_name, perm in bijection.items():
        sort = vocab.sorts.get(sort_name)
        if sort is None:
            raise BasmError("iso", f"unknown sort in bijection: {sort_name}")
        if not sort.is_enum:
            raise BasmError("unsupported-iso", f"bijection touches builtin sort {sort_name}")
        members = set(sort.members)
        if set(perm.keys()) != members or set(perm.values()) != members:
            raise BasmError("iso", f"map on {sort_name} is not a bijection of its universe")
        maps[sort_name] = dict(perm)

    def move(value):
        if isinstance(value, EnumValue) and value.sort_name in maps:
            return EnumValue(value.sort_name, maps[value.sort_name][value.member])
        return value

    interp = {
        Location(loc.symbol, tuple(move(a) for a in loc.args)): move(v)
        for loc, v in state.interp.items()
    }
    return State(vocab, interp, validate=False)
