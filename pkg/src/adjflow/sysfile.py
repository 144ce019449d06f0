"""Line-oriented ``key = value`` system files.

Example::

    # Rikitake
    vars = x, y, z
    base = 1, 1, 0
    phi = (x + y)/2, y - x, x^2 + z^2
    G = u/2, -v/2, 1
    R = 1
    integrals = I1: u*v, I2: v^2*exp(w)
    expected_F = y*z, x*z, 1 - x*y

Multi-component values are comma separated; reduced variables are
u, v, w, s (n <= 4) or u1..un.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .construct import SystemSpec, canonical_reduced, reduced_names
from .expr import nodes as N
from .expr.nodes import Expr, NotExact
from .expr.parser import ParseError, parse

KEYS = (
    "name", "vars", "params", "base", "phi", "G", "R", "integrals", "state_integrals",
    "expected_F", "expected_H", "expect", "x0", "t",
)
REQUIRED = ("vars", "phi", "G")


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<input>"):
        self.message, self.line, self.col, self.source = message, line, col, source
        where = f"{source}:{line}:{col}" if line else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class _Field:
    value: str
    line: int
    col: int


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split at commas outside parentheses, keeping each piece's offset."""
    pieces, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append((start, text[start:i]))
            start = i + 1
    pieces.append((start, text[start:]))
    out = []
    for off, piece in pieces:
        stripped = piece.lstrip()
        out.append((off + len(piece) - len(stripped), stripped.rstrip()))
    return out


def read_fields(text: str, source: str = "<input>") -> dict[str, _Field]:
    fields: dict[str, _Field] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise SystemFileError("expected 'key = value'", lineno, 1, source)
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in KEYS:
            raise SystemFileError(f"unknown key {key!r}", lineno, raw.index(key) + 1, source)
        if key in fields:
            raise SystemFileError(f"duplicate key {key!r}", lineno, 1, source)
        col = len(line) - len(value) + (len(value) - len(value.lstrip())) + 1
        fields[key] = _Field(value.strip(), lineno, col)
    for key in REQUIRED:
        if key not in fields:
            raise SystemFileError(f"missing required key {key!r}", 0, 0, source)
    return fields


def _number(e: Expr):
    try:
        return N.evaluate(e, {}, exact=True)
    except NotExact:
        return N.evaluate(e, {}, exact=False)


def spec_from_fields(fields: dict[str, _Field | str], source: str = "<input>") -> SystemSpec:
    fields = {k: v if isinstance(v, _Field) else _Field(str(v), 0, 0) for k, v in fields.items()}

    def fail(msg: str, f: _Field, offset: int = 0) -> SystemFileError:
        return SystemFileError(msg, f.line, f.col + offset, source)

    def items(key: str) -> list[tuple[int, str]]:
        f = fields[key]
        pieces = _split_top(f.value)
        if any(not p for _, p in pieces):
            raise fail("empty component", f)
        return pieces

    state = tuple(p for _, p in items("vars"))
    for off, name in items("vars"):
        if not name.isidentifier() or not name[0].isalpha():
            raise fail(f"invalid variable name {name!r}", fields["vars"], off)
    n = len(state)
    reduced = reduced_names(n)
    canon = canonical_reduced(n)

    constants: dict[str, Expr] = {}
    param_src: list[tuple[str, str]] = []
    if "params" in fields:
        f = fields["params"]
        for off, item in items("params"):
            if "=" not in item:
                raise fail("expected 'name = value' in params", f, off)
            pname, ptext = (s.strip() for s in item.split("=", 1))
            if not pname.isidentifier():
                raise fail(f"invalid parameter name {pname!r}", f, off)
            try:
                pexpr = parse(ptext, (), constants)
            except ParseError as err:
                raise fail(err.message, f, off + item.index(ptext) + err.pos) from None
            try:
                value = N.evaluate(pexpr, {}, exact=True)
                constants[pname] = N.Const(value)
            except NotExact:
                constants[pname] = N.Param(pname, float(N.evaluate(pexpr, {}, exact=False)))
            param_src.append((pname, ptext))

    def exprs(key: str, vars) -> list[Expr]:
        f = fields[key]
        out = []
        for off, piece in items(key):
            try:
                out.append(parse(piece, vars, constants))
            except ParseError as err:
                raise fail(err.message, f, off + err.pos) from None
        return out

    def vector(key: str, vars, length: int | None = n) -> tuple[Expr, ...]:
        out = exprs(key, vars)
        if length is not None and len(out) != length:
            raise fail(f"{key} has {len(out)} components, expected {length}", fields[key])
        return tuple(out)

    def reduced_exprs(key: str, length: int | None = n):
        names = tuple(dict.fromkeys(reduced + canon))
        rename = {c: N.Var(r) for c, r in zip(canon, reduced) if c != r}
        return tuple(N.substitute(e, rename, strict=False) for e in vector(key, names, length))

    def labelled(key: str, vars, prefix: str):
        f = fields[key]
        out = []
        for k, (off, piece) in enumerate(items(key), start=1):
            label, body, shift = f"{prefix}{k}", piece, 0
            if ":" in piece:
                label, body = (s.strip() for s in piece.split(":", 1))
                shift = piece.index(body, piece.index(":"))
            try:
                e = parse(body, vars, constants)
            except ParseError as err:
                raise fail(err.message, f, off + shift + err.pos) from None
            if vars is not state:
                rename = {c: N.Var(r) for c, r in zip(canon, reduced) if c != r}
                e = N.substitute(e, rename, strict=False)
            out.append((label, e))
        return tuple(out)

    def point(key: str):
        return tuple(_number(e) for e in vector(key, ()))

    phi = vector("phi", state)
    G = reduced_exprs("G")
    R = vector("R", state, 1)[0] if "R" in fields else N.ONE
    reduced_vars_all = tuple(dict.fromkeys(reduced + canon))
    try:
        return SystemSpec(
            state_vars=state,
            phi=phi,
            G=G,
            R=R,
            base_point=point("base") if "base" in fields else (),
            reduced_integrals=labelled("integrals", reduced_vars_all, "I") if "integrals" in fields else (),
            state_integrals=labelled("state_integrals", state, "J") if "state_integrals" in fields else (),
            expected_F=vector("expected_F", state) if "expected_F" in fields else None,
            expected_H=vector("expected_H", state, None) if "expected_H" in fields else None,
            params=tuple(param_src),
            name=fields["name"].value if "name" in fields else "",
            expect=fields["expect"].value if "expect" in fields else None,
            x0=point("x0") if "x0" in fields else None,
            t_end=float(fields["t"].value) if "t" in fields else None,
        )
    except SystemFileError:
        raise
    except ValueError as err:
        raise SystemFileError(str(err), 0, 0, source) from None


def parse_system(text: str, source: str = "<input>") -> SystemSpec:
    return spec_from_fields(read_fields(text, source), source)


def load_system(path: str | Path) -> SystemSpec:
    path = Path(path)
    return parse_system(path.read_text(encoding="utf-8"), str(path))


def _num_text(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def format_system(spec: SystemSpec) -> str:
    """Serialize a spec so that :func:`parse_system` reproduces it."""
    lines = []
    if spec.name:
        lines.append(f"name = {spec.name}")
    lines.append("vars = " + ", ".join(spec.state_vars))
    if spec.params:
        lines.append("params = " + ", ".join(f"{k} = {v}" for k, v in spec.params))
    lines.append("base = " + ", ".join(_num_text(v) for v in spec.base_point))
    lines.append("phi = " + ", ".join(str(e) for e in spec.phi))
    lines.append("G = " + ", ".join(str(e) for e in spec.G))
    lines.append(f"R = {spec.R}")
    if spec.reduced_integrals:
        lines.append("integrals = " + ", ".join(f"{lab}: {e}" for lab, e in spec.reduced_integrals))
    if spec.state_integrals:
        lines.append("state_integrals = " + ", ".join(f"{lab}: {e}" for lab, e in spec.state_integrals))
    if spec.expected_F is not None:
        lines.append("expected_F = " + ", ".join(str(e) for e in spec.expected_F))
    if spec.expected_H is not None:
        lines.append("expected_H = " + ", ".join(str(e) for e in spec.expected_H))
    if spec.expect:
        lines.append(f"expect = {spec.expect}")
    if spec.x0 is not None:
        lines.append("x0 = " + ", ".join(_num_text(v) for v in spec.x0))
    if spec.t_end is not None:
        lines.append(f"t = {spec.t_end!r}")
    return "\n".join(lines) + "\n"
