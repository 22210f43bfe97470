"""JSON/CSV serialization of matrices, pencils, triples, point sets and polynomials.

Matrix schema: a list of rows; an entry is a real number or a two-element list
``[re, im]``.  A pair file is an object with keys ``"T1"`` and ``"T2"``.
Floats are written with ``repr``, the shortest string that round-trips the
binary value exactly.
"""

import csv
import io
import json
import re

import numpy as np

from .bcl import make_triple
from .errors import DegreeCapExceeded, NonSquare, ParseError, PolynomialSyntaxError, SizeMismatch
from .hardy import LinearPencil
from .variety import DEGREE_CAP, BivariatePolynomial, VarietyPointSet

CSV_COLUMNS = ["re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2",
               "re_z", "im_z", "residual1", "residual2"]


# -- matrices ---------------------------------------------------------------

def _entry(x, where):
    if isinstance(x, bool):
        raise ParseError(f"{where}: boolean is not a number")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise ParseError(f"{where}: expected a number or [re, im], got {json.dumps(x)}")


def matrix_from_json(obj, name="matrix"):
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{name}: expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ParseError(f"{name}[{i}]: expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{name}[{i}]: ragged row of length {len(row)}, expected {width}")
        rows.append([_entry(x, f"{name}[{i}][{j}]") for j, x in enumerate(row)])
    m = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise ParseError(f"{name}: non-finite entries")
    return m


def matrix_to_json(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def _load_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_pair(text, source="<input>"):
    """``(T1, T2)`` from the text of a pair file."""
    obj = _load_json(text, source)
    if not isinstance(obj, dict) or "T1" not in obj or "T2" not in obj:
        raise ParseError(f"{source}: expected an object with keys 'T1' and 'T2'")
    t1 = matrix_from_json(obj["T1"], "T1")
    t2 = matrix_from_json(obj["T2"], "T2")
    for name, m in (("T1", t1), ("T2", t2)):
        if m.shape[0] != m.shape[1]:
            raise NonSquare(f"{name} is {m.shape[0]}x{m.shape[1]}")
    if t1.shape != t2.shape:
        raise SizeMismatch(f"T1 is {t1.shape[0]}x{t1.shape[0]}, T2 is {t2.shape[0]}x{t2.shape[0]}")
    return t1, t2


def parse_matrix_file(path):
    """Read a pair file, or a file holding a single square matrix."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    obj = _load_json(text, path)
    if isinstance(obj, list):
        m = matrix_from_json(obj)
        if m.shape[0] != m.shape[1]:
            raise NonSquare(f"matrix is {m.shape[0]}x{m.shape[1]}")
        return m
    return parse_pair(text, path)


def pair_to_json(t1, t2):
    return {"T1": matrix_to_json(t1), "T2": matrix_to_json(t2)}


# -- structured artifacts ---------------------------------------------------

def pencil_to_json(p):
    return {"c0": matrix_to_json(p.c0), "c1": matrix_to_json(p.c1)}


def pencil_from_json(obj):
    return LinearPencil(matrix_from_json(obj["c0"], "c0"), matrix_from_json(obj["c1"], "c1"))


def triple_to_json(t):
    return {"dim": t.dim, "U": matrix_to_json(t.U), "P": matrix_to_json(t.P)}


def triple_from_json(obj, tol=1e-10):
    t = make_triple(matrix_from_json(obj["U"], "U"), matrix_from_json(obj["P"], "P"), tol)
    if t.dim != obj.get("dim", t.dim):
        raise SizeMismatch(f"dim {obj['dim']} does not match U of size {t.dim}")
    return t


def _cplx_pair(z):
    return [float(z.real), float(z.imag)]


def pointset_rows(ps):
    return [[float(a.real), float(a.imag), float(b.real), float(b.imag),
             float(z.real), float(z.imag), float(r1), float(r2)]
            for a, b, z, r1, r2 in zip(ps.lambda1, ps.lambda2, ps.source_z,
                                       ps.residual1, ps.residual2)]


def pointset_to_json(ps):
    return {
        "kind": ps.kind,
        "columns": CSV_COLUMNS,
        "points": pointset_rows(ps),
        "excluded": [_cplx_pair(z) for z in ps.excluded],
    }


def _pointset_from_rows(rows, kind, excluded=()):
    a = np.array(rows, dtype=float).reshape(-1, 8)
    return VarietyPointSet(
        lambda1=a[:, 0] + 1j * a[:, 1],
        lambda2=a[:, 2] + 1j * a[:, 3],
        source_z=a[:, 4] + 1j * a[:, 5],
        residual1=a[:, 6].copy(),
        residual2=a[:, 7].copy(),
        kind=kind,
        excluded=np.array([complex(*z) for z in excluded], dtype=np.complex128),
    )


def pointset_from_json(obj):
    return _pointset_from_rows(obj["points"], obj["kind"], obj.get("excluded", ()))


def pointset_to_csv(ps):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in pointset_rows(ps):
        w.writerow([repr(x) for x in row])
    return buf.getvalue()


def pointset_from_csv(text, kind="boundary"):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_COLUMNS:
        raise ParseError(f"unexpected CSV header {header}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 8:
            raise ParseError(f"line {lineno}: expected 8 fields, got {len(row)}")
        try:
            rows.append([float(x) for x in row])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return _pointset_from_rows(rows, kind)


def _has_dict(obj):
    if isinstance(obj, dict):
        return True
    if isinstance(obj, list):
        return any(_has_dict(x) for x in obj)
    return False


def _dump(obj, level):
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(obj[k], level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list) and _has_dict(obj):
        items = [pad + _dump(x, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj, separators=(", ", ": "), allow_nan=False)


def dumps(obj):
    """Deterministic JSON text: sorted keys, dict-free lists kept on one line."""
    return _dump(obj, 0) + "\n"


# -- polynomials ------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<var>z[12])
  | (?P<op>[-+*^(),])
""", re.VERBOSE)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _PolyParser:
    """Recursive descent over ``term (('+'|'-') term)*``.

    ``term   := factor ('*'? factor)*``
    ``factor := number | '(' signed ',' signed ')' | z1 ['^' int] | z2 ['^' int]``
    """

    def __init__(self, text, degree_cap):
        self.toks = _tokenize(text)
        self.i = 0
        self.cap = degree_cap

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            found = tok[1] or "end of input"
            raise PolynomialSyntaxError(f"expected {want!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def signed(self):
        sign = 1.0
        while self.peek()[1] in "+-" and self.peek()[0] == "op":
            if self.take()[1] == "-":
                sign = -sign
        return sign * float(self.take("num")[1])

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return complex(float(val)), (0, 0)
        if kind == "op" and val == "(":
            self.take()
            re_ = self.signed()
            self.take("op", ",")
            im_ = self.signed()
            self.take("op", ")")
            return complex(re_, im_), (0, 0)
        if kind == "var":
            self.take()
            exp = 1
            if self.peek()[1] == "^":
                self.take()
                tok = self.take("num")
                if not re.fullmatch(r"\d+", tok[1]):
                    raise PolynomialSyntaxError("exponent must be a nonnegative integer", tok[2])
                exp = int(tok[1])
            return 1.0 + 0j, (exp, 0) if val == "z1" else (0, exp)
        raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos)

    def _starts_factor(self):
        kind, val, _ = self.peek()
        return kind in ("num", "var") or (kind == "op" and val == "(")

    def term(self):
        coef, (i, j) = self.factor()
        while True:
            if self.peek()[1] == "*" and self.peek()[0] == "op":
                self.take()
            elif not self._starts_factor():
                break
            c, (a, b) = self.factor()
            coef *= c
            i, j = i + a, j + b
        return coef, (i, j)

    def parse(self):
        coeffs = {}
        first = True
        while True:
            sign = 1.0
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                sign = -1.0 if val == "-" else 1.0
            elif not first:
                break
            c, mono = self.term()
            if max(mono) > self.cap:
                raise DegreeCapExceeded(f"monomial z1^{mono[0]} z2^{mono[1]} exceeds cap {self.cap}")
            coeffs[mono] = coeffs.get(mono, 0) + sign * c
            first = False
        self.take("end")
        return BivariatePolynomial(coeffs)


def parse_polynomial(text, degree_cap=DEGREE_CAP):
    """Parse e.g. ``"1 - 2*z1^2 + (0,1)*z2"``; duplicate monomials are summed."""
    return _PolyParser(text, degree_cap).parse()


def polynomial_to_text(p):
    if not p.coeffs:
        return "0"
    parts = []
    for (i, j), c in p.coeffs.items():
        mono = "".join(f"*z{k}^{e}" for k, e in ((1, i), (2, j)) if e)
        parts.append(f"({c.real!r},{c.imag!r}){mono}")
    return " + ".join(parts)
