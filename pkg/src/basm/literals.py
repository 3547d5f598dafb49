"""Text forms for values, locations, and initial-state files.

The same literal syntax is used everywhere a value crosses a boundary: state
files, trace files, oracle scripts, and interactive answers.

  42   -7   true   false   undef
  point(2.5,-4.330127018922193)
  circle(point(0.0,0.0),point(5.0,0.0))
  line(point(10.0,0.0),point(2.5,4.330127018922193))
  red                                   (enum member)

A state file holds one binding per line, `symbol := literal` for a variable or
`symbol(literal, ...) := literal` for an entry of an n-ary dynamic function.
Blank lines and `#` comments are ignored. Unlisted locations are undef.
"""
from __future__ import annotations

import re

from .errors import BasmError, ParseError
from .geometry import Circle, Line, Point
from .state import (
    ANY,
    BOOLEAN,
    CIRCLE,
    DYNAMIC,
    INTEGER,
    LINE,
    POINT,
    UNDEF,
    EnumValue,
    Location,
    Sort,
    State,
    Vocabulary,
    value_conforms,
)

_INT_RE = re.compile(r"[-+]?\d+$")
_FLOAT_RE = re.compile(r"[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?$")


def _render_float(x: float) -> str:
    return repr(float(x))


def render_value(value) -> str:
    if value is UNDEF:
        return "undef"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Point):
        return f"point({_render_float(value.x)},{_render_float(value.y)})"
    if isinstance(value, Circle):
        return f"circle({render_value(value.center)},{render_value(value.through)})"
    if isinstance(value, Line):
        return f"line({render_value(value.p1)},{render_value(value.p2)})"
    if isinstance(value, EnumValue):
        return value.member
    raise BasmError("sort", f"not a value: {value!r}")


def _split_args(text: str, where: str) -> list[str]:
    """Split a comma-separated argument list at depth zero."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {where}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {where}")
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _call_body(text: str, head: str) -> str | None:
    if text.startswith(head + "(") and text.endswith(")"):
        return text[len(head) + 1 : -1]
    return None


def _parse_float(text: str) -> float:
    if not _FLOAT_RE.match(text):
        raise ParseError(f"bad number: {text!r}")
    return float(text)


def _parse_point(text: str) -> Point:
    body = _call_body(text, "point")
    if body is None:
        raise ParseError(f"expected point(x,y), got {text!r}")
    args = _split_args(body, text)
    if len(args) != 2:
        raise ParseError(f"point takes two coordinates, got {text!r}")
    return Point(_parse_float(args[0]), _parse_float(args[1]))


def parse_value(text: str, sort: Sort, vocabulary: Vocabulary | None = None):
    """Parse one literal of the given sort; `undef` is accepted at any sort."""
    text = text.strip()
    if text == "undef":
        return UNDEF
    if sort is ANY:
        return _infer_value(text, vocabulary)
    if sort is INTEGER:
        if not _INT_RE.match(text):
            raise ParseError(f"expected an integer literal, got {text!r}")
        return int(text)
    if sort is BOOLEAN:
        if text == "true":
            return True
        if text == "false":
            return False
        raise ParseError(f"expected true or false, got {text!r}")
    if sort is POINT:
        return _parse_point(text)
    if sort is CIRCLE:
        body = _call_body(text, "circle")
        if body is None:
            raise ParseError(f"expected circle(point(..),point(..)), got {text!r}")
        args = _split_args(body, text)
        if len(args) != 2:
            raise ParseError(f"circle takes two points, got {text!r}")
        return Circle(_parse_point(args[0]), _parse_point(args[1]))
    if sort is LINE:
        body = _call_body(text, "line")
        if body is None:
            raise ParseError(f"expected line(point(..),point(..)), got {text!r}")
        args = _split_args(body, text)
        if len(args) != 2:
            raise ParseError(f"line takes two points, got {text!r}")
        return Line(_parse_point(args[0]), _parse_point(args[1]))
    if sort.is_enum:
        if text in sort.members:
            return EnumValue(sort.name, text)
        raise ParseError(f"{text!r} is not a member of {sort.name}")
    raise BasmError("sort", f"cannot parse a literal of sort {sort.name}")


def _infer_value(text: str, vocabulary: Vocabulary | None):
    if text == "true":
        return True
    if text == "false":
        return False
    if _INT_RE.match(text):
        return int(text)
    for head, sort in (("point", POINT), ("circle", CIRCLE), ("line", LINE)):
        if text.startswith(head + "("):
            return parse_value(text, sort, vocabulary)
    if vocabulary is not None:
        member = vocabulary.member(text)
        if member is not None:
            return member
    raise ParseError(f"cannot read literal {text!r}")


def parse_location(text: str, vocabulary: Vocabulary) -> Location:
    """Parse `name` or `name(literal, ...)` against the vocabulary."""
    text = text.strip()
    m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*(\((.*)\))?$", text)
    if not m:
        raise ParseError(f"bad location: {text!r}")
    name, _, argtext = m.groups()
    sym = vocabulary.symbol(name)
    if sym is None:
        raise ParseError(f"unknown symbol: {name}", kind="sort")
    if sym.kind != DYNAMIC:
        raise ParseError(f"not a dynamic symbol: {name}", kind="sort")
    if argtext is None:
        args: tuple = ()
    else:
        parts = _split_args(argtext, text) if argtext.strip() else []
        args = tuple(
            parse_value(part, s, vocabulary) for part, s in zip(parts, sym.arg_sorts)
        )
        if len(parts) != sym.arity:
            raise ParseError(f"arity mismatch at {text!r}", kind="sort")
    if sym.arity != len(args):
        raise ParseError(f"arity mismatch at {text!r}", kind="sort")
    return Location(sym, args)


def load_state(text: str, vocabulary: Vocabulary, source: str = "<state>") -> State:
    interp = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":=" not in line:
            raise ParseError(f"{source}: expected `location := literal`", line=lineno, column=1)
        lhs, rhs = line.split(":=", 1)
        try:
            loc = parse_location(lhs, vocabulary)
            value = parse_value(rhs, loc.symbol.result_sort, vocabulary)
        except ParseError as e:
            raise ParseError(f"{source}: {e.message}", line=lineno, column=1, kind=e.kind) from None
        if loc in interp:
            raise ParseError(f"{source}: repeated binding for {loc.render()}", line=lineno, column=1)
        if value is not UNDEF:
            interp[loc] = value
    return State(vocabulary, interp)


def state_bindings(state: State) -> dict[str, str]:
    """Rendered location -> literal map, sorted by location text."""
    return {
        loc.render(): render_value(v)
        for loc, v in sorted(state.interp.items(), key=lambda kv: kv[0].render())
    }


def render_state(state: State) -> str:
    lines = [f"{loc} := {lit}" for loc, lit in state_bindings(state).items()]
    return "\n".join(lines) + ("\n" if lines else "")


def state_from_bindings(bindings: dict[str, str], vocabulary: Vocabulary) -> State:
    interp = {}
    for loc_text, lit in bindings.items():
        loc = parse_location(loc_text, vocabulary)
        value = parse_value(lit, loc.symbol.result_sort, vocabulary)
        if value is not UNDEF:
            interp[loc] = value
    return State(vocabulary, interp)
