"""Plain-text definitions of metrics and structural systems.

Expression grammar (whitespace is free)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('+' | '-') factor | power
    power   := atom ('^' factor)?          # right-associative; -x^2 is -(x^2)
    atom    := number | name | func '(' expr ')' | '(' expr ')'
    func    := sin | cos | tan | exp | ln | sqrt
    name    := x1 .. xm | pi

System files may also reference ``H`` and ``s`` inside tracked-field
expressions. Constraints are chained comparisons of expressions with
``<``, ``<=``, ``>``, ``>=``.

Metric file::

    # unit sphere
    dim = 2
    g[1,1] = 1
    g[2,2] = sin(x1)^2
    domain: x1 > 0
    domain: x1 < pi
    range[1] = 0.3, 2.8        # optional sampling box for checks

``g[i,j]`` entries are 1-based; one off-diagonal entry fills its mirror and
unspecified entries are zero.

System file::

    dim = 2
    canonical = true           # x = (q_1..q_n, p_1..p_n), J defaults to [[0, I], [-I, 0]]
    s = x1
    H = x2^2/2
    J[1,2] = 1                 # optional; a lone entry fills J[j,i] = -J[i,j]
"""

from __future__ import annotations

import ast
import math
import re
from pathlib import Path
from typing import Callable, Mapping, Optional

import numpy as np

from .bracket import StructuralMatrix, StructuralSystem, canonical_matrix
from .errors import ExpressionError
from .fields import ScalarField
from .manifold import Metric

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
}
CONSTANTS = {"pi": math.pi}

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_CMPOPS = (ast.Lt, ast.LtE, ast.Gt, ast.GtE)


def _validate(node, names, allow_compare=False):
    if isinstance(node, ast.Expression):
        return _validate(node.body, names, allow_compare)
    if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
        _validate(node.left, names)
        _validate(node.right, names)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        _validate(node.operand, names)
    elif isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id in FUNCTIONS):
            raise ExpressionError(f"unknown function in {ast.unparse(node)!r}")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(f"{node.func.id} takes exactly one argument")
        _validate(node.args[0], names)
    elif isinstance(node, ast.Name):
        if node.id not in names and node.id not in CONSTANTS:
            raise ExpressionError(f"unknown name {node.id!r}")
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
    elif allow_compare and isinstance(node, ast.Compare):
        if not all(isinstance(op, _CMPOPS) for op in node.ops):
            raise ExpressionError("constraints may only use <, <=, >, >=")
        for part in [node.left, *node.comparators]:
            _validate(part, names)
    else:
        raise ExpressionError(f"unsupported syntax: {ast.unparse(node)!r}")


def _parse(text: str, names, allow_compare=False):
    if "**" in text:
        raise ExpressionError("use '^' for powers")
    src = text.strip().replace("^", "**")
    if not src:
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    _validate(tree, set(names), allow_compare)
    return compile(tree, "<expr>", "eval")


def coordinate_names(m: int) -> list:
    return [f"x{i + 1}" for i in range(m)]


def compile_expression(text: str, m: int, extra: Optional[Mapping[str, Callable]] = None) -> Callable:
    """Compile an expression in x1..xm into a callable of a coordinate vector.

    ``extra`` binds further names to callables of the same vector (e.g. H, s).
    """
    extra = dict(extra or {})
    names = coordinate_names(m) + list(extra)
    code = _parse(text, names)

    def fn(x):
        env = {"__builtins__": {}, **FUNCTIONS, **CONSTANTS}
        env.update({f"x{i + 1}": x[i] for i in range(m)})
        env.update({k: f(x) for k, f in extra.items()})
        with np.errstate(all="ignore"):
            return float(eval(code, env))

    return fn


def compile_constraint(text: str, m: int) -> Callable:
    names = coordinate_names(m)
    code = _parse(text, names, allow_compare=True)

    def ok(x):
        env = {"__builtins__": {}, **FUNCTIONS, **CONSTANTS}
        env.update({f"x{i + 1}": x[i] for i in range(m)})
        with np.errstate(all="ignore"):
            return bool(eval(code, env))

    return ok


def is_constant_expression(text: str) -> bool:
    try:
        _parse(text, [])
    except ExpressionError:
        return False
    return True


def field_from_expression(text: str, m: int, name: Optional[str] = None,
                          extra: Optional[Mapping[str, Callable]] = None) -> ScalarField:
    return ScalarField(compile_expression(text, m, extra), name=name or text.strip(), dim=m)


_ENTRY = re.compile(r"^(g|J)\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]$")
_RANGE = re.compile(r"^range\s*\[\s*(\d+)\s*\]$")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _split(lineno, line):
    if line.startswith("domain:"):
        return "domain", line[len("domain:"):].strip()
    if "=" not in line:
        raise ExpressionError(f"line {lineno}: expected 'key = value', got {line!r}")
    key, value = line.split("=", 1)
    return key.strip(), value.strip()


def _read_dim(pairs) -> int:
    for lineno, key, value in pairs:
        if key == "dim":
            try:
                dim = int(value)
            except ValueError:
                raise ExpressionError(f"line {lineno}: dim must be an integer") from None
            if dim < 1:
                raise ExpressionError(f"line {lineno}: dim must be positive")
            return dim
    raise ExpressionError("missing 'dim = <n>'")


def _index(lineno, i, j, dim):
    i, j = int(i) - 1, int(j) - 1
    if not (0 <= i < dim and 0 <= j < dim):
        raise ExpressionError(f"line {lineno}: index out of range for dim {dim}")
    return i, j


def parse_metric(text: str, name: str = "custom") -> Metric:
    """Build a :class:`Metric` from a metric definition (partials by finite differences)."""
    pairs = [(ln, *_split(ln, line)) for ln, line in _lines(text)]
    dim = _read_dim(pairs)
    entries: dict = {}
    domains = []
    lo, hi = -np.ones(dim), np.ones(dim)
    for lineno, key, value in pairs:
        if key == "dim":
            continue
        if key == "name":
            name = value
            continue
        if key == "domain":
            domains.append(compile_constraint(value, dim))
            continue
        rng = _RANGE.match(key)
        if rng:
            k = int(rng.group(1)) - 1
            if not 0 <= k < dim:
                raise ExpressionError(f"line {lineno}: range index out of bounds")
            try:
                a, b = (float(v) for v in value.split(","))
            except ValueError:
                raise ExpressionError(f"line {lineno}: range needs 'low, high'") from None
            lo[k], hi[k] = a, b
            continue
        m = _ENTRY.match(key)
        if not m or m.group(1) != "g":
            raise ExpressionError(f"line {lineno}: unknown key {key!r}")
        i, j = _index(lineno, m.group(2), m.group(3), dim)
        fn = compile_expression(value, dim)
        if (i, j) in entries or (j, i) in entries:
            raise ExpressionError(f"line {lineno}: g[{i + 1},{j + 1}] given twice")
        entries[(i, j)] = fn
    if not entries:
        raise ExpressionError("metric has no g[i,j] entries")

    def g(x):
        out = np.zeros((dim, dim))
        for (i, j), fn in entries.items():
            out[i, j] = out[j, i] = fn(x)
        return out

    domain = (lambda x: all(c(x) for c in domains)) if domains else None
    return Metric(dim=dim, g=g, domain=domain, name=name, sample_box=(lo, hi))


def parse_system(text: str, name: str = "custom") -> StructuralSystem:
    """Build a :class:`StructuralSystem` from a system definition."""
    pairs = [(ln, *_split(ln, line)) for ln, line in _lines(text)]
    m = _read_dim(pairs)
    canonical = False
    s_text, H_text = "0", None
    J_entries: dict = {}
    for lineno, key, value in pairs:
        if key == "dim":
            continue
        if key == "name":
            name = value
        elif key == "canonical":
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ExpressionError(f"line {lineno}: canonical must be true or false")
            canonical = value.lower() in ("true", "1", "yes")
        elif key == "s":
            s_text = value
        elif key == "H":
            H_text = value
        else:
            mt = _ENTRY.match(key)
            if not mt or mt.group(1) != "J":
                raise ExpressionError(f"line {lineno}: unknown key {key!r}")
            i, j = _index(lineno, mt.group(2), mt.group(3), m)
            J_entries[(i, j)] = value
    if H_text is None:
        raise ExpressionError("system needs 'H = <expr>'")
    if canonical and m % 2:
        raise ExpressionError(f"canonical split needs an even dim, got {m}")
    if not J_entries and not canonical:
        raise ExpressionError("give J[i,j] entries or set canonical = true")

    if J_entries:
        for (i, j), value in list(J_entries.items()):
            if (j, i) not in J_entries and i != j:
                J_entries[(j, i)] = f"-({value})"
        constant = all(is_constant_expression(v) for v in J_entries.values())
        fns = {ij: compile_expression(v, m) for ij, v in J_entries.items()}

        def J(x):
            out = np.zeros((m, m))
            for (i, j), fn in fns.items():
                out[i, j] = fn(x)
            return out

        if constant:
            matrix = StructuralMatrix.constant(J(np.zeros(m)))
        else:
            matrix = StructuralMatrix(dim=m, J=J, constant_flag=False)
    else:
        matrix = StructuralMatrix.constant(canonical_matrix(m // 2))

    s = field_from_expression(s_text, m, "s")
    if is_constant_expression(s_text):
        s = ScalarField.constant(s(np.zeros(m)), "s")
    H = field_from_expression(H_text, m, "H")
    return StructuralSystem(J=matrix, s=s, H=H, n_config=m // 2 if canonical else None, name=name)


def load_metric(path) -> Metric:
    path = Path(path)
    return parse_metric(path.read_text(), name=path.stem)


def load_system(path) -> StructuralSystem:
    path = Path(path)
    return parse_system(path.read_text(), name=path.stem)
