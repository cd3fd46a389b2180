"""Line-oriented cycle-definition format.

    # comment
    field cyclotomic(N)
    cycle <name> n=<int> p=<int>
    component mult=<int> <expr> ; <expr> ; ... ; <expr>

Expressions are built from integers, ``t``, ``zeta`` (the distinguished
primitive N-th root of unity), ``i`` (alias for zeta^(N/4) when 4 | N), the
operators + - * / ^ and parentheses.  Every syntax error carries line and
column numbers.
"""

from __future__ import annotations

import re

from .cycles import CurveComponent, PointComponent, Precycle
from .errors import ChowregError, CycleParseError
from .field import CyclotomicNumber
from .funcfield import RationalFunction, rf_to_expr

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^();]))")


class _Tokens:
    def __init__(self, text, line_no, col_offset=0):
        self.text = text
        self.line_no = line_no
        self.col_offset = col_offset
        self.pos = 0
        self.items = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                raise CycleParseError(
                    f"unexpected character {stripped[0]!r}",
                    line_no, col_offset + pos + 1)
            if m.group(1):
                self.items.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2):
                self.items.append(("name", m.group(2), m.start(2)))
            else:
                self.items.append(("op", m.group(3), m.start(3)))
            pos = m.end()

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val, col = self.next()
        if kind != "op" or val != op:
            raise CycleParseError(f"expected {op!r}", self.line_no,
                                  self.col_offset + col + 1)

    def done(self):
        return self.pos >= len(self.items)

    def error(self, message, col=None):
        if col is None:
            col = self.peek()[2]
        raise CycleParseError(message, self.line_no, self.col_offset + col + 1)


class _ExprParser:
    """Recursive descent over +- / */ / unary - / ^ with parentheses."""

    def __init__(self, tokens, order):
        self.toks = tokens
        self.order = order
        self.t_var = RationalFunction.t(order)
        self.one = RationalFunction.from_rational(1, order)

    def parse(self):
        value = self._expr()
        if not self.toks.done():
            self.toks.error("trailing input after expression")
        return value

    def _expr(self):
        value = self._term()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "+-":
                self.toks.next()
                rhs = self._term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            kind, val, col = self.toks.peek()
            if kind == "op" and val in "*/":
                self.toks.next()
                rhs = self._factor()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        self.toks.error("division by zero", col)
                    value = value / rhs
            else:
                return value

    def _factor(self):
        kind, val, _ = self.toks.peek()
        if kind == "op" and val == "-":
            self.toks.next()
            return -self._factor()
        return self._power()

    def _power(self):
        base = self._atom()
        kind, val, col = self.toks.peek()
        if kind == "op" and val == "^":
            self.toks.next()
            sign = 1
            kind, val, col = self.toks.peek()
            if kind == "op" and val == "-":
                self.toks.next()
                sign = -1
            kind, val, col = self.toks.next()
            if kind != "int":
                self.toks.error("exponent must be an integer", col)
            if sign < 0 and base.is_zero():
                self.toks.error("zero to a negative power", col)
            return base ** (sign * val)
        return base

    def _atom(self):
        kind, val, col = self.toks.next()
        if kind == "int":
            return RationalFunction.from_rational(val, self.order)
        if kind == "name":
            if val == "t":
                return self.t_var
            if val == "zeta":
                return RationalFunction.constant(CyclotomicNumber.zeta(self.order))
            if val == "i":
                if self.order % 4 != 0:
                    self.toks.error(
                        f"'i' needs a field order divisible by 4, have {self.order}", col)
                return RationalFunction.constant(
                    CyclotomicNumber.zeta(self.order) ** (self.order // 4))
            self.toks.error(f"unknown identifier {val!r}", col)
        if kind == "op" and val == "(":
            inner = self._expr()
            self.toks.expect_op(")")
            return inner
        self.toks.error("expected a value")


_FIELD_RE = re.compile(r"^field\s+cyclotomic\((\d+)\)\s*$")
_CYCLE_RE = re.compile(r"^cycle\s+([A-Za-z_][A-Za-z_0-9]*)\s+n=(\d+)\s+p=(\d+)\s*$")
_COMP_RE = re.compile(r"^component\s+mult=(-?\d+)\s+(.*)$")


def parse_expression(text, order, line_no=1, col_offset=0):
    toks = _Tokens(text, line_no, col_offset)
    if toks.done():
        raise CycleParseError("empty expression", line_no, col_offset + 1)
    return _ExprParser(toks, order).parse()


def parse_cycle_file(text):
    """Parse a cycle-definition file into a list of precycles."""
    order = None
    cycles = []
    current = None  # (name, n, p, [components], line)

    def flush():
        nonlocal current
        if current is None:
            return
        name, n, p, comps, line = current
        if not comps:
            raise CycleParseError(f"cycle {name!r} has no components", line, 1)
        try:
            cycles.append(Precycle(n, p, comps, order=order, name=name))
        except ChowregError as exc:
            raise CycleParseError(str(exc), line, 1) from exc
        current = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        m = _FIELD_RE.match(stripped)
        if m:
            if order is not None:
                raise CycleParseError("duplicate field declaration", line_no, 1)
            order = int(m.group(1))
            if order < 1:
                raise CycleParseError("field order must be >= 1", line_no, 1)
            continue
        m = _CYCLE_RE.match(stripped)
        if m:
            if order is None:
                raise CycleParseError("field declaration must precede cycles", line_no, 1)
            flush()
            name, n, p = m.group(1), int(m.group(2)), int(m.group(3))
            if n - p not in (0, 1):
                raise CycleParseError(
                    f"dimension bookkeeping violated: n={n}, p={p} needs n-p in {{0,1}}",
                    line_no, 1)
            current = (name, n, p, [], line_no)
            continue
        m = _COMP_RE.match(stripped)
        if m:
            if current is None:
                raise CycleParseError("component outside a cycle block", line_no, 1)
            mult = int(m.group(1))
            body = m.group(2)
            offset = raw.index(body) if body and body in raw else 0
            pieces = body.split(";")
            name, n, p, comps, _ = current
            if len(pieces) != n:
                raise CycleParseError(
                    f"expected {n} coordinate expressions, got {len(pieces)}",
                    line_no, offset + 1)
            coords = []
            col = offset
            for piece in pieces:
                if not piece.strip():
                    raise CycleParseError("empty coordinate expression",
                                          line_no, col + 1)
                coords.append(parse_expression(piece, order, line_no, col))
                col += len(piece) + 1
            if all(f.is_constant() for f in coords):
                comp = _point_from_constants(coords, n, mult, line_no)
            else:
                try:
                    comp = CurveComponent(n, tuple(coords), mult)
                except ChowregError as exc:
                    raise CycleParseError(str(exc), line_no, offset + 1) from exc
            comps.append(comp)
            continue
        raise CycleParseError(f"unrecognized line: {stripped[:40]!r}", line_no, 1)
    flush()
    if order is None:
        raise CycleParseError("missing field declaration", 1, 1)
    return cycles


def _point_from_constants(coords, n, mult, line_no):
    values = []
    for f in coords:
        v = f.constant_value()
        values.append(v)
    try:
        return PointComponent(n, tuple(values), mult)
    except ChowregError as exc:
        raise CycleParseError(str(exc), line_no, 1) from exc


def serialize_cycles(cycles):
    """Canonical text for a list of precycles over a common field."""
    if not cycles:
        raise ChowregError("nothing to serialize")
    orders = {Z.order for Z in cycles}
    if len(orders) != 1:
        raise ChowregError("cycles to serialize must share a field order")
    out = [f"field cyclotomic({cycles[0].order})"]
    for Z in cycles:
        out.append(f"cycle {Z.name or 'unnamed'} n={Z.n} p={Z.p}")
        for comp in Z.components:
            if isinstance(comp, CurveComponent):
                body = " ; ".join(rf_to_expr(f) for f in comp.coords)
            else:
                parts = []
                for v in comp.coords:
                    parts.append(rf_to_expr(RationalFunction.constant(v)))
                body = " ; ".join(parts)
            out.append(f"component mult={comp.mult} {body}")
    return "\n".join(out) + "\n"
