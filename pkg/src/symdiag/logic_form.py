"""Logic-form language for geometric diagrams.

A logic form is a small symbolic program describing a diagram through five
ordered layers: named points with normalized coordinates, line segments,
shapes, shape indicators, and geometric relations.  This module defines the
domain types, a line-oriented text grammar with a parser, a deterministic
serializer, canonicalization, validation, and a JSON-shaped structural form.

Grammar (one declaration per line, ``#`` starts a comment)::

    Point(a, 0.1, 0.2)
    Line(ab)                    # or Line(a, b); endpoint order is irrelevant
    Shape(Triangle(a, b, c))
    Shape(Circle(o))            # optional explicit radius: Circle(o, 0.4)
    Indicator(Triangle(a, b, c), RightAngle(b))
    Relation(PointLiesOnLine(n, Line(a, b)))

A bare relation call such as ``PointLiesOnLine(n, Line(a, b))`` is also
accepted at the top level.  Whitespace inside parentheses is insignificant.
Point names are lowercase (``[a-z][a-z0-9]*``); uppercase input is folded to
lowercase while parsing.  Coordinates accept up to six fractional digits and
are stored on a 1e-4 grid, which is what the serializer emits, so that
``parse(serialize(lf))`` reproduces ``lf`` exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import (
    LogicArityError,
    LogicReferenceError,
    LogicSyntaxError,
    LogicValidationError,
)

__all__ = [
    "SHAPE_KINDS",
    "SHAPE_ARITY",
    "TRIANGLE_KINDS",
    "QUAD_KINDS",
    "INDICATOR_PROPERTIES",
    "RELATION_KINDS",
    "PointDecl",
    "LineDecl",
    "ShapeDecl",
    "IndicatorDecl",
    "RelationDecl",
    "PointTerm",
    "LineTerm",
    "CircleTerm",
    "ShapeTerm",
    "LogicForm",
    "parse",
    "serialize",
    "canonicalize",
    "validate",
    "to_dict",
    "from_dict",
]

_NAME_RE = re.compile(r"[a-z][a-z0-9]*\Z")

# 13 shape categories; Circle is the only non-polygon (arity = center point).
SHAPE_ARITY = {
    "Triangle": 3,
    "RightTriangle": 3,
    "IsoscelesTriangle": 3,
    "EquilateralTriangle": 3,
    "Quadrilateral": 4,
    "Square": 4,
    "Rectangle": 4,
    "Parallelogram": 4,
    "Trapezoid": 4,
    "Rhombus": 4,
    "Pentagon": 5,
    "Hexagon": 6,
    "Circle": 1,
}
SHAPE_KINDS = frozenset(SHAPE_ARITY)
TRIANGLE_KINDS = frozenset({"Triangle", "RightTriangle", "IsoscelesTriangle", "EquilateralTriangle"})
QUAD_KINDS = frozenset({"Quadrilateral", "Square", "Rectangle", "Parallelogram", "Trapezoid", "Rhombus"})

INDICATOR_PROPERTIES = {
    # property name -> operand count (side pairs, or one right-angle vertex)
    "Parallel": 2,
    "Perpendicular": 2,
    "Equals": 2,
    "RightAngle": 1,
}

# Relation signatures: tuple of slot specs, or a ("variadic", spec, min) marker.
# Slot specs name the accepted term types.
RELATION_KINDS = {
    "PointLiesOnLine": ("point", "line"),
    "PointLiesOnCircle": ("point", "circle"),
    "Equals": ("line", "line"),
    "Perpendicular": ("line", "line"),
    "Parallel": ("line", "line"),
    "Incircle": ("circle", "shape"),
    "Tangent": ("line", "circle"),
    "ConcyclicPoints": ("variadic", "point", 3),
    "IntersectAt": ("line|circle", "line|circle", "point"),
    "AngleBisector": ("point", "point", "point", "line"),
}

_COORD_GRID = 4  # fractional digits stored and serialized


def _quantize(value: float) -> float:
    return round(float(value), _COORD_GRID)


@dataclass(frozen=True)
class PointDecl:
    """A named point with coordinates in the unit square."""

    name: str
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _quantize(self.x))
        object.__setattr__(self, "y", _quantize(self.y))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class LineDecl:
    """An unordered segment between two named points; stored in lexicographic order."""

    a: str
    b: str

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def endpoints(self) -> tuple[str, str]:
        return (self.a, self.b)


@dataclass(frozen=True)
class ShapeDecl:
    """A shape instance: a kind plus an ordered vertex tuple.

    Circles carry a single center point and, optionally, an explicit radius.
    Vertex order is significant and preserved verbatim.
    """

    kind: str
    vertices: tuple[str, ...]
    radius: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if self.radius is not None:
            object.__setattr__(self, "radius", _quantize(self.radius))

    @property
    def key(self) -> tuple[str, tuple[str, ...]]:
        """Matching identity: kind and exact vertex order (radius excluded)."""
        return (self.kind, self.vertices)


@dataclass(frozen=True)
class IndicatorDecl:
    """A property annotation on a shape (parallel/perpendicular/equal sides, right angle).

    Operands are side identifiers (two vertex names of the shape, stored
    sorted) or a single vertex name for ``RightAngle``.
    """

    shape_kind: str
    shape_vertices: tuple[str, ...]
    prop: str
    operands: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "shape_vertices", tuple(self.shape_vertices))
        object.__setattr__(
            self, "operands", tuple(tuple(sorted(op)) for op in self.operands)
        )

    @property
    def key(self):
        """Matching identity: shape reference, property, and sorted operands."""
        return (self.shape_kind, self.shape_vertices, self.prop, tuple(sorted(self.operands)))


@dataclass(frozen=True)
class PointTerm:
    name: str


@dataclass(frozen=True)
class LineTerm:
    a: str
    b: str

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class CircleTerm:
    center: str
    radius: float | None = None

    def __post_init__(self):
        if self.radius is not None:
            object.__setattr__(self, "radius", _quantize(self.radius))


@dataclass(frozen=True)
class ShapeTerm:
    kind: str
    vertices: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))


Term = Union[PointTerm, LineTerm, CircleTerm, ShapeTerm]


@dataclass(frozen=True)
class RelationDecl:
    """An inter-primitive predicate with an ordered, typed argument list."""

    kind: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class LogicForm:
    """The symbolic latent of a diagram: five layers over a shared point namespace.

    Points and lines have set semantics (structural equality ignores their
    order); shapes, indicators, and relations are order-preserving lists.
    """

    points: tuple[PointDecl, ...] = ()
    lines: tuple[LineDecl, ...] = ()
    shapes: tuple[ShapeDecl, ...] = ()
    indicators: tuple[IndicatorDecl, ...] = ()
    relations: tuple[RelationDecl, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "shapes", tuple(self.shapes))
        object.__setattr__(self, "indicators", tuple(self.indicators))
        object.__setattr__(self, "relations", tuple(self.relations))

    def point_map(self) -> dict[str, tuple[float, float]]:
        return {p.name: (p.x, p.y) for p in self.points}

    def point_names(self) -> set[str]:
        return {p.name for p in self.points}

    def _structural_key(self):
        return (
            frozenset(self.points),
            frozenset(self.lines),
            self.shapes,
            self.indicators,
            self.relations,
        )

    def __eq__(self, other):
        if not isinstance(other, LogicForm):
            return NotImplemented
        return self._structural_key() == other._structural_key()

    def __hash__(self):
        return hash(self._structural_key())

    @property
    def is_empty(self) -> bool:
        return not (self.points or self.lines or self.shapes or self.indicators or self.relations)


# ---------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<num>\d+(?:\.\d+)?)|(?P<sym>[(),]))"
)


@dataclass
class _Tok:
    kind: str  # "ident" | "num" | "sym" | "end"
    text: str
    col: int


def _tokenize(text: str, lineno: int) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped) + 1
            raise LogicSyntaxError(
                f"unexpected character {stripped[0]!r}", lineno, col, "identifier, number, '(', ')' or ','"
            )
        if m.group("ident"):
            toks.append(_Tok("ident", m.group("ident"), m.start("ident") + 1))
        elif m.group("num"):
            num = m.group("num")
            if "." in num and len(num.split(".", 1)[1]) > 6:
                raise LogicSyntaxError(
                    f"number {num!r} has more than 6 fractional digits", lineno, m.start("num") + 1
                )
            toks.append(_Tok("num", num, m.start("num") + 1))
        else:
            toks.append(_Tok("sym", m.group("sym"), m.start("sym") + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


@dataclass
class _Call:
    """Parse-tree node: ``head(arg, ...)`` where args are calls, idents, or numbers."""

    head: str
    args: list
    line: int
    col: int


@dataclass
class _Ident:
    text: str
    line: int
    col: int


@dataclass
class _Num:
    text: str
    line: int
    col: int

    @property
    def value(self) -> float:
        return float(self.text)


class _LineParser:
    def __init__(self, toks: list[_Tok], lineno: int):
        self.toks = toks
        self.lineno = lineno
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != sym:
            raise LogicSyntaxError(
                f"found {tok.text!r}" if tok.kind != "end" else "unexpected end of line",
                self.lineno,
                tok.col,
                repr(sym),
            )
        return self.advance()

    def parse_decl(self) -> _Call:
        call = self.parse_term()
        if not isinstance(call, _Call):
            raise LogicSyntaxError(
                "a declaration must be a call like Point(...)", self.lineno, call.col, "'('"
            )
        end = self.peek()
        if end.kind != "end":
            raise LogicSyntaxError(
                f"trailing content {end.text!r}", self.lineno, end.col, "end of line"
            )
        return call

    def parse_term(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return _Num(tok.text, self.lineno, tok.col)
        if tok.kind == "ident":
            self.advance()
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "(":
                self.advance()
                args = []
                if not (self.peek().kind == "sym" and self.peek().text == ")"):
                    args.append(self.parse_term())
                    while self.peek().kind == "sym" and self.peek().text == ",":
                        self.advance()
                        args.append(self.parse_term())
                self.expect_sym(")")
                return _Call(tok.text, args, self.lineno, tok.col)
            return _Ident(tok.text, self.lineno, tok.col)
        raise LogicSyntaxError(
            f"found {tok.text!r}" if tok.kind != "end" else "unexpected end of line",
            self.lineno,
            tok.col,
            "identifier or number",
        )


# ---------------------------------------------------------------------------
# Interpretation of parse trees
# ---------------------------------------------------------------------------


def _fold_name(node, what: str = "point name") -> str:
    if not isinstance(node, _Ident):
        col = getattr(node, "col", 0)
        raise LogicSyntaxError(f"expected a {what}", node.line, col, "identifier")
    name = node.text.lower()
    if not _NAME_RE.match(name):
        raise LogicValidationError(
            f"line {node.line}: invalid {what} {node.text!r} (must match [a-z][a-z0-9]*)"
        )
    return name


def _coord(node, line: int) -> float:
    if not isinstance(node, _Num):
        col = getattr(node, "col", 0)
        raise LogicSyntaxError("expected a coordinate", line, col, "number")
    return node.value


def _split_pair(token: str, known: Iterable[str], line: int) -> tuple[str, str]:
    """Split a concatenated point pair such as ``ab`` or ``a1b2``.

    Prefers splits where both halves are declared names; falls back to the
    unique syntactically valid split so missing points still raise a
    reference error naming the culprit.
    """
    known = set(known)
    both_known = []
    syntactic = []
    for i in range(1, len(token)):
        left, right = token[:i], token[i:]
        if _NAME_RE.match(left) and _NAME_RE.match(right):
            syntactic.append((left, right))
            if left in known and right in known:
                both_known.append((left, right))
    if both_known:
        return both_known[0]
    if len(syntactic) == 1:
        return syntactic[0]
    if len(token) == 2 and syntactic:
        return syntactic[0]
    raise LogicReferenceError(token, line)


class _Interpreter:
    def __init__(self):
        self.points: list[PointDecl] = []
        self.point_index: dict[str, PointDecl] = {}
        self.lines: list[LineDecl] = []
        self.line_seen: set[LineDecl] = set()
        self.shapes: list[ShapeDecl] = []
        self.indicators: list[_Call] = []
        self.relations: list[_Call] = []
        self.line_decls: list[_Call] = []
        self.shape_decls: list[_Call] = []
        self.warnings: list[str] = []

    # -- pass 1: collect declarations, register points ---------------------

    def collect(self, call: _Call) -> None:
        head = call.head
        if head == "Point":
            self._add_point(call)
        elif head == "Line":
            self.line_decls.append(call)
        elif head == "Shape":
            self.shape_decls.append(call)
        elif head == "Indicator":
            self.indicators.append(call)
        elif head == "Relation":
            if len(call.args) != 1 or not isinstance(call.args[0], _Call):
                raise LogicArityError(
                    f"line {call.line}: Relation(...) wraps exactly one relation call"
                )
            self.relations.append(call.args[0])
        elif head in RELATION_KINDS:
            self.relations.append(call)
        else:
            raise LogicSyntaxError(
                f"unknown declaration {head!r}",
                call.line,
                call.col,
                "Point, Line, Shape, Indicator or Relation",
            )

    def _add_point(self, call: _Call) -> None:
        if len(call.args) != 3:
            raise LogicArityError(
                f"line {call.line}: Point takes (name, x, y), got {len(call.args)} arguments"
            )
        name = _fold_name(call.args[0])
        x = _coord(call.args[1], call.line)
        y = _coord(call.args[2], call.line)
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise LogicValidationError(
                f"line {call.line}: point {name!r} coordinates ({x}, {y}) outside [0, 1]"
            )
        decl = PointDecl(name, x, y)
        prev = self.point_index.get(name)
        if prev is not None:
            if prev == decl:
                self.warnings.append(f"duplicate declaration of point {name!r} collapsed")
                return
            raise LogicValidationError(
                f"line {call.line}: point {name!r} redeclared with different coordinates"
            )
        self.point_index[name] = decl
        self.points.append(decl)

    # -- pass 2: resolve everything against the point set ------------------

    def resolve(self) -> LogicForm:
        for call in self.line_decls:
            self._resolve_line(call)
        for call in self.shape_decls:
            self.shapes.append(self._resolve_shape_call(call, decl_line=call.line))
        indicators = [self._resolve_indicator(c) for c in self.indicators]
        relations = [self._resolve_relation(c) for c in self.relations]
        return LogicForm(
            points=tuple(self.points),
            lines=tuple(self.lines),
            shapes=tuple(self.shapes),
            indicators=tuple(indicators),
            relations=tuple(relations),
        )

    def _point_pair(self, args: list, line: int) -> tuple[str, str]:
        if len(args) == 1:
            name = _fold_name(args[0], "point pair")
            a, b = _split_pair(name, self.point_index, line)
        elif len(args) == 2:
            a = _fold_name(args[0])
            b = _fold_name(args[1])
        else:
            raise LogicArityError(f"line {line}: Line takes one pair or two point names")
        for n in (a, b):
            if n not in self.point_index:
                raise LogicReferenceError(n, line)
        if a == b:
            raise LogicValidationError(f"line {line}: line endpoints must be distinct ({a!r})")
        return a, b

    def _resolve_line(self, call: _Call) -> None:
        a, b = self._point_pair(call.args, call.line)
        decl = LineDecl(a, b)
        if decl in self.line_seen:
            self.warnings.append(f"duplicate line ({decl.a}{decl.b}) collapsed")
            return
        self.line_seen.add(decl)
        self.lines.append(decl)

    def _resolve_shape_call(self, call: _Call, decl_line: int) -> ShapeDecl:
        if call.head == "Shape":
            if len(call.args) != 1 or not isinstance(call.args[0], _Call):
                raise LogicArityError(f"line {decl_line}: Shape(...) wraps exactly one shape call")
            call = call.args[0]
        kind = call.head
        if kind not in SHAPE_KINDS:
            raise LogicSyntaxError(
                f"unknown shape kind {kind!r}", call.line, call.col, "one of " + ", ".join(sorted(SHAPE_KINDS))
            )
        arity = SHAPE_ARITY[kind]
        radius = None
        args = call.args
        if kind == "Circle":
            if len(args) == 2 and isinstance(args[1], _Num):
                radius = args[1].value
                if radius <= 0:
                    raise LogicValidationError(f"line {call.line}: circle radius must be positive")
                args = args[:1]
            if len(args) != 1:
                raise LogicArityError(
                    f"line {call.line}: Circle takes a center point and an optional radius"
                )
        elif len(args) != arity:
            raise LogicArityError(
                f"line {call.line}: {kind} takes {arity} vertices, got {len(args)}"
            )
        names = []
        for node in args:
            name = _fold_name(node)
            if name not in self.point_index:
                raise LogicReferenceError(name, call.line)
            names.append(name)
        return ShapeDecl(kind, tuple(names), radius)

    def _resolve_indicator(self, call: _Call) -> IndicatorDecl:
        if len(call.args) != 2 or not all(isinstance(a, _Call) for a in call.args):
            raise LogicArityError(
                f"line {call.line}: Indicator takes a shape call and a property call"
            )
        shape = self._resolve_shape_call(call.args[0], decl_line=call.line)
        if shape.key not in {s.key for s in self.shapes}:
            raise LogicValidationError(
                f"line {call.line}: indicator references undeclared shape "
                f"{shape.kind}({', '.join(shape.vertices)})"
            )
        prop_call = call.args[1]
        prop = prop_call.head
        if prop not in INDICATOR_PROPERTIES:
            raise LogicSyntaxError(
                f"unknown indicator property {prop!r}",
                prop_call.line,
                prop_call.col,
                "one of " + ", ".join(sorted(INDICATOR_PROPERTIES)),
            )
        want = INDICATOR_PROPERTIES[prop]
        if len(prop_call.args) != want:
            raise LogicArityError(
                f"line {call.line}: {prop} takes {want} operand(s), got {len(prop_call.args)}"
            )
        operands = []
        for node in prop_call.args:
            token = _fold_name(node, "side or vertex")
            if prop == "RightAngle":
                if token not in shape.vertices:
                    raise LogicValidationError(
                        f"line {call.line}: right-angle vertex {token!r} is not a vertex of the shape"
                    )
                operands.append((token,))
            else:
                operands.append(self._side_of(token, shape, call.line))
        return IndicatorDecl(shape.kind, shape.vertices, prop, tuple(operands))

    def _side_of(self, token: str, shape: ShapeDecl, line: int) -> tuple[str, str]:
        if token in shape.vertices:
            raise LogicValidationError(
                f"line {line}: operand {token!r} names a vertex where a side pair is required"
            )
        a, b = _split_pair(token, shape.vertices, line)
        sides = set()
        verts = shape.vertices
        for i in range(len(verts)):
            sides.add(frozenset((verts[i], verts[(i + 1) % len(verts)])))
        if frozenset((a, b)) not in sides:
            raise LogicValidationError(
                f"line {line}: {a}{b} is not a side of {shape.kind}({', '.join(verts)})"
            )
        return (a, b)

    def _resolve_relation(self, call: _Call) -> RelationDecl:
        kind = call.head
        sig = RELATION_KINDS.get(kind)
        if sig is None:
            raise LogicSyntaxError(
                f"unknown relation kind {kind!r}",
                call.line,
                call.col,
                "one of " + ", ".join(sorted(RELATION_KINDS)),
            )
        if sig[0] == "variadic":
            _, slot, minimum = sig
            if len(call.args) < minimum:
                raise LogicArityError(
                    f"line {call.line}: {kind} takes at least {minimum} arguments"
                )
            slots = [slot] * len(call.args)
        else:
            if len(call.args) != len(sig):
                raise LogicArityError(
                    f"line {call.line}: {kind} takes {len(sig)} arguments, got {len(call.args)}"
                )
            slots = list(sig)
        args = tuple(self._resolve_term(node, slot, call.line) for node, slot in zip(call.args, slots))
        return RelationDecl(kind, args)

    def _resolve_term(self, node, slot: str, line: int) -> Term:
        allowed = slot.split("|")
        if isinstance(node, _Ident):
            if "point" not in allowed:
                raise LogicSyntaxError(
                    f"expected a {slot} term", node.line, node.col, "call expression"
                )
            name = _fold_name(node)
            if name not in self.point_index:
                raise LogicReferenceError(name, line)
            return PointTerm(name)
        if isinstance(node, _Call):
            head = node.head
            if head == "Line" and "line" in allowed:
                a, b = self._point_pair(node.args, node.line)
                return LineTerm(a, b)
            if head == "Circle" and "circle" in allowed:
                shape = self._resolve_shape_call(node, decl_line=node.line)
                return CircleTerm(shape.vertices[0], shape.radius)
            if head in SHAPE_KINDS and "shape" in allowed:
                shape = self._resolve_shape_call(node, decl_line=node.line)
                return ShapeTerm(shape.kind, shape.vertices)
            raise LogicSyntaxError(
                f"term {head!r} not valid here", node.line, node.col, f"a {slot} term"
            )
        raise LogicSyntaxError(f"expected a {slot} term", line, getattr(node, "col", 0))


def parse(text: str, collect_warnings: list[str] | None = None) -> LogicForm:
    """Parse logic-form source text into a validated :class:`LogicForm`.

    Declarations may appear in any order; references are resolved after all
    points are known.  Duplicate point/line declarations collapse with a
    warning (appended to ``collect_warnings`` when given).

    Raises :class:`LogicSyntaxError`, :class:`LogicReferenceError`,
    :class:`LogicArityError`, or :class:`LogicValidationError`.
    """
    interp = _Interpreter()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = _tokenize(line, lineno)
        if toks[0].kind == "end":
            continue
        call = _LineParser(toks, lineno).parse_decl()
        interp.collect(call)
    lf = interp.resolve()
    if collect_warnings is not None:
        collect_warnings.extend(interp.warnings)
    return lf


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _fmt_coord(value: float) -> str:
    return f"{value:.4f}"


def _fmt_line_pair(a: str, b: str) -> str:
    if len(a) == 1 and len(b) == 1:
        return f"{a}{b}"
    return f"{a}, {b}"


def _fmt_shape(shape: ShapeDecl) -> str:
    if shape.kind == "Circle":
        inner = shape.vertices[0]
        if shape.radius is not None:
            inner += f", {_fmt_coord(shape.radius)}"
        return f"Circle({inner})"
    return f"{shape.kind}({', '.join(shape.vertices)})"


def _fmt_term(term: Term) -> str:
    if isinstance(term, PointTerm):
        return term.name
    if isinstance(term, LineTerm):
        return f"Line({term.a}, {term.b})"
    if isinstance(term, CircleTerm):
        if term.radius is not None:
            return f"Circle({term.center}, {_fmt_coord(term.radius)})"
        return f"Circle({term.center})"
    return f"{term.kind}({', '.join(term.vertices)})"


def serialize(lf: LogicForm) -> str:
    """Render a logic form as canonical source text.

    Deterministic ordering: points in declaration order, lines sorted
    lexicographically, shapes/indicators/relations in declaration order.
    The output parses back to a structurally equal value.
    """
    out: list[str] = []
    for p in lf.points:
        out.append(f"Point({p.name}, {_fmt_coord(p.x)}, {_fmt_coord(p.y)})")
    for line in sorted(lf.lines, key=lambda l: (l.a, l.b)):
        out.append(f"Line({_fmt_line_pair(line.a, line.b)})")
    for shape in lf.shapes:
        out.append(f"Shape({_fmt_shape(shape)})")
    for ind in lf.indicators:
        shape_txt = _fmt_shape(ShapeDecl(ind.shape_kind, ind.shape_vertices))
        ops = ", ".join("".join(op) for op in ind.operands)
        out.append(f"Indicator({shape_txt}, {ind.prop}({ops}))")
    for rel in lf.relations:
        args = ", ".join(_fmt_term(t) for t in rel.args)
        out.append(f"Relation({rel.kind}({args}))")
    return "\n".join(out) + ("\n" if out else "")


def _lower_term(term: Term) -> Term:
    if isinstance(term, PointTerm):
        return PointTerm(term.name.lower())
    if isinstance(term, LineTerm):
        return LineTerm(term.a.lower(), term.b.lower())
    if isinstance(term, CircleTerm):
        return CircleTerm(term.center.lower(), term.radius)
    return ShapeTerm(term.kind, tuple(v.lower() for v in term.vertices))


def canonicalize(lf: LogicForm) -> LogicForm:
    """Normalize a logic form for comparison: lowercase names, canonical line
    order, duplicate points/lines collapsed.  Idempotent; never touches
    coordinates or shape vertex order."""
    points: list[PointDecl] = []
    seen_points: set[str] = set()
    for p in lf.points:
        name = p.name.lower()
        if name in seen_points:
            continue
        seen_points.add(name)
        points.append(PointDecl(name, p.x, p.y))
    lines: list[LineDecl] = []
    seen_lines: set[LineDecl] = set()
    for line in lf.lines:
        decl = LineDecl(line.a.lower(), line.b.lower())
        if decl in seen_lines:
            continue
        seen_lines.add(decl)
        lines.append(decl)
    shapes = tuple(
        ShapeDecl(s.kind, tuple(v.lower() for v in s.vertices), s.radius) for s in lf.shapes
    )
    indicators = tuple(
        IndicatorDecl(
            i.shape_kind,
            tuple(v.lower() for v in i.shape_vertices),
            i.prop,
            tuple(tuple(n.lower() for n in op) for op in i.operands),
        )
        for i in lf.indicators
    )
    relations = tuple(
        RelationDecl(r.kind, tuple(_lower_term(t) for t in r.args)) for r in lf.relations
    )
    return LogicForm(tuple(points), tuple(lines), shapes, indicators, relations)


def validate(lf: LogicForm) -> list[str]:
    """Check invariants; raise on hard violations, return a list of warnings.

    Hard errors: bad names, out-of-range coordinates, dangling references,
    wrong arity.  Warnings: duplicate declarations, a ``RightTriangle``
    without a perpendicularity/right-angle indicator.
    """
    warnings: list[str] = []
    names: set[str] = set()
    for p in lf.points:
        if not _NAME_RE.match(p.name):
            raise LogicValidationError(f"invalid point name {p.name!r}")
        if not (0.0 <= p.x <= 1.0 and 0.0 <= p.y <= 1.0):
            raise LogicValidationError(f"point {p.name!r} coordinates outside [0, 1]")
        if p.name in names:
            warnings.append(f"duplicate declaration of point {p.name!r}")
        names.add(p.name)

    def check_ref(name: str, where: str) -> None:
        if name not in names:
            raise LogicValidationError(f"{where} references unknown point {name!r}")

    seen_lines: set[LineDecl] = set()
    for line in lf.lines:
        check_ref(line.a, "line")
        check_ref(line.b, "line")
        if line.a == line.b:
            raise LogicValidationError(f"line endpoints must be distinct ({line.a!r})")
        if line in seen_lines:
            warnings.append(f"duplicate line ({line.a}{line.b})")
        seen_lines.add(line)

    shape_keys = set()
    for shape in lf.shapes:
        if shape.kind not in SHAPE_KINDS:
            raise LogicValidationError(f"unknown shape kind {shape.kind!r}")
        if len(shape.vertices) != SHAPE_ARITY[shape.kind]:
            raise LogicArityError(
                f"{shape.kind} takes {SHAPE_ARITY[shape.kind]} vertices, got {len(shape.vertices)}"
            )
        for v in shape.vertices:
            check_ref(v, shape.kind)
        shape_keys.add(shape.key)

    right_triangles_flagged = set()
    for ind in lf.indicators:
        if (ind.shape_kind, ind.shape_vertices) not in shape_keys:
            raise LogicValidationError(
                f"indicator references undeclared shape {ind.shape_kind}({', '.join(ind.shape_vertices)})"
            )
        if ind.prop not in INDICATOR_PROPERTIES:
            raise LogicValidationError(f"unknown indicator property {ind.prop!r}")
        for op in ind.operands:
            for n in op:
                check_ref(n, "indicator operand")
        if ind.shape_kind == "RightTriangle" and ind.prop in ("RightAngle", "Perpendicular"):
            right_triangles_flagged.add((ind.shape_kind, ind.shape_vertices))

    for shape in lf.shapes:
        if shape.kind == "RightTriangle" and shape.key[:2] not in right_triangles_flagged:
            if (shape.kind, shape.vertices) not in right_triangles_flagged:
                warnings.append(
                    f"RightTriangle({', '.join(shape.vertices)}) has no perpendicularity indicator"
                )

    for rel in lf.relations:
        if rel.kind not in RELATION_KINDS:
            raise LogicValidationError(f"unknown relation kind {rel.kind!r}")
        for term in rel.args:
            if isinstance(term, PointTerm):
                check_ref(term.name, rel.kind)
            elif isinstance(term, LineTerm):
                check_ref(term.a, rel.kind)
                check_ref(term.b, rel.kind)
            elif isinstance(term, CircleTerm):
                check_ref(term.center, rel.kind)
            else:
                for v in term.vertices:
                    check_ref(v, rel.kind)
    return warnings


# ---------------------------------------------------------------------------
# Structural (JSON-shaped) form
# ---------------------------------------------------------------------------


def _term_to_dict(term: Term) -> dict:
    if isinstance(term, PointTerm):
        return {"type": "point", "name": term.name}
    if isinstance(term, LineTerm):
        return {"type": "line", "endpoints": [term.a, term.b]}
    if isinstance(term, CircleTerm):
        return {"type": "circle", "center": term.center, "radius": term.radius}
    return {"type": "shape", "kind": term.kind, "vertices": list(term.vertices)}


def _term_from_dict(d: dict) -> Term:
    t = d.get("type")
    if t == "point":
        return PointTerm(d["name"])
    if t == "line":
        a, b = d["endpoints"]
        return LineTerm(a, b)
    if t == "circle":
        return CircleTerm(d["center"], d.get("radius"))
    if t == "shape":
        return ShapeTerm(d["kind"], tuple(d["vertices"]))
    raise LogicValidationError(f"unknown term type {t!r}")


def to_dict(lf: LogicForm) -> dict:
    """Structural document mirroring the five layers (for the service API)."""
    return {
        "points": [{"name": p.name, "x": p.x, "y": p.y} for p in lf.points],
        "lines": [[l.a, l.b] for l in sorted(lf.lines, key=lambda l: (l.a, l.b))],
        "shapes": [
            {"kind": s.kind, "vertices": list(s.vertices), "radius": s.radius} for s in lf.shapes
        ],
        "indicators": [
            {
                "shape": {"kind": i.shape_kind, "vertices": list(i.shape_vertices)},
                "property": i.prop,
                "operands": [list(op) for op in i.operands],
            }
            for i in lf.indicators
        ],
        "relations": [
            {"kind": r.kind, "args": [_term_to_dict(t) for t in r.args]} for r in lf.relations
        ],
    }


def from_dict(doc: dict) -> LogicForm:
    """Inverse of :func:`to_dict`; validates the reconstructed form."""
    lf = LogicForm(
        points=tuple(PointDecl(p["name"], p["x"], p["y"]) for p in doc.get("points", ())),
        lines=tuple(LineDecl(a, b) for a, b in doc.get("lines", ())),
        shapes=tuple(
            ShapeDecl(s["kind"], tuple(s["vertices"]), s.get("radius"))
            for s in doc.get("shapes", ())
        ),
        indicators=tuple(
            IndicatorDecl(
                i["shape"]["kind"],
                tuple(i["shape"]["vertices"]),
                i["property"],
                tuple(tuple(op) for op in i["operands"]),
            )
            for i in doc.get("indicators", ())
        ),
        relations=tuple(
            RelationDecl(r["kind"], tuple(_term_from_dict(t) for t in r["args"]))
            for r in doc.get("relations", ())
        ),
    )
    validate(lf)
    return lf
