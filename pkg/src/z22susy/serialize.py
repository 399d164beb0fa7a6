"""Text, LaTeX and JSON forms of graded expressions.

The text form is a parenthesized prefix notation.  A document starts with a
context block declaring every generator, so it can be parsed without any other
input; each term sits on its own line::

    (graded-expr 1
     (context
      (truncation 1)
      (coordinate theta_- 01 -1/2)
      ...)
     (term (* 1/2 X[1,0]) (theta_- 1))
    )
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

import sympy
from sympy.core.function import AppliedUndef

from .algebra import (
    COORDINATE,
    FIELD,
    PARAMETER,
    Algebra,
    Generator,
    GradedExpr,
    split_jet_name,
)
from .grading import Degree

__all__ = [
    "ParseError",
    "dumps",
    "loads",
    "coeff_to_prefix",
    "coeff_from_prefix",
    "to_latex",
    "to_text",
    "to_json",
    "derivation_text",
    "derivation_latex",
    "matrix_text",
    "matrix_latex",
]

FORMAT_VERSION = 1
_FUNCS = {"sin": sympy.sin, "cos": sympy.cos, "exp": sympy.exp, "log": sympy.log}


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.col = line, col


# -- s-expressions --------------------------------------------------------------

# names holding delimiters are written between bars: |F_(2)|
_TOKEN = re.compile(r"\s*(?:(\()|(\))|\|([^|]+)\||([^\s()|]+))")
_PLAIN = re.compile(r"^[^\s()|]+$")


def _atom(name: str) -> str:
    return name if _PLAIN.match(name) else f"|{name}|"


class _Atom(str):
    pos: tuple = (0, 0)


def _tokenize(text: str):
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(i):
        ln = max(k for k, s in enumerate(line_starts) if s <= i)
        return ln + 1, i - line_starts[ln] + 1

    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            rest = text[i:].strip()
            if not rest:
                return
            raise ParseError("unexpected character", *where(i))
        tok = m.group(1) or m.group(2) or m.group(3) or m.group(4)
        if tok is None:
            return
        yield tok, where(m.start(m.lastindex)), m.group(3) is not None
        i = m.end()


def _read(text: str):
    stack = [[]]
    for tok, pos, quoted in _tokenize(text):
        if quoted:
            a = _Atom(tok)
            a.pos = pos
            stack[-1].append(a)
        elif tok == "(":
            stack.append([])
            stack[-1].append(pos)
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", *pos)
            lst = stack.pop()
            stack[-1].append(lst)
        else:
            a = _Atom(tok)
            a.pos = pos
            stack[-1].append(a)
    if len(stack) != 1:
        raise ParseError("missing ')'", *(stack[-1][0] if stack[-1] else (0, 0)))
    return stack[0]


def _pos(node):
    if isinstance(node, list):
        return node[0] if node and isinstance(node[0], tuple) else (0, 0)
    return getattr(node, "pos", (0, 0))


def _items(node):
    return node[1:] if node and isinstance(node[0], tuple) else node


# -- coefficients ---------------------------------------------------------------

_NUM = re.compile(r"^-?\d+(/\d+)?$")


def coeff_to_prefix(c: sympy.Expr) -> str:
    c = sympy.sympify(c)
    if c.is_Integer or c.is_Rational:
        return str(c)
    if isinstance(c, sympy.Symbol):
        return _atom(c.name)
    if c.is_Add or c.is_Mul:
        op = "+" if c.is_Add else "*"
        args = sorted(c.args, key=sympy.default_sort_key)
        return f"({op} " + " ".join(coeff_to_prefix(a) for a in args) + ")"
    if c.is_Pow:
        return f"(^ {coeff_to_prefix(c.base)} {coeff_to_prefix(c.exp)})"
    if isinstance(c, AppliedUndef):
        return f"(fn {_atom(c.func.__name__)} " + " ".join(coeff_to_prefix(a) for a in c.args) + ")"
    if isinstance(c, sympy.Derivative):
        parts = [f"({coeff_to_prefix(v)} {n})" for v, n in c.variable_count]
        return f"(D {coeff_to_prefix(c.expr)} " + " ".join(parts) + ")"
    if isinstance(c, sympy.Subs):
        vs = " ".join(coeff_to_prefix(v) for v in c.variables)
        ps = " ".join(coeff_to_prefix(p) for p in c.point)
        return f"(Subs {coeff_to_prefix(c.expr)} ({vs}) ({ps}))"
    if isinstance(c, sympy.Function) and c.func.__name__ in _FUNCS:
        return f"({c.func.__name__} " + " ".join(coeff_to_prefix(a) for a in c.args) + ")"
    raise TypeError(f"cannot serialize coefficient {c!r}")


def _coeff(node) -> sympy.Expr:
    if not isinstance(node, list):
        if _NUM.match(node):
            return sympy.Rational(node)
        return sympy.Symbol(str(node))
    items = _items(node)
    if not items:
        raise ParseError("empty expression", *_pos(node))
    head = items[0]
    args = items[1:]
    if head == "+":
        return sympy.Add(*[_coeff(a) for a in args])
    if head == "*":
        return sympy.Mul(*[_coeff(a) for a in args])
    if head == "^":
        return sympy.Pow(_coeff(args[0]), _coeff(args[1]))
    if head == "fn":
        return sympy.Function(str(args[0]))(*[_coeff(a) for a in args[1:]])
    if head == "D":
        expr = _coeff(args[0])
        vc = [(_coeff(_items(v)[0]), int(_items(v)[1])) for v in args[1:]]
        return sympy.Derivative(expr, *vc)
    if head == "Subs":
        expr = _coeff(args[0])
        vs = [_coeff(v) for v in _items(args[1])]
        ps = [_coeff(p) for p in _items(args[2])]
        return sympy.Subs(expr, vs, ps)
    if head in _FUNCS:
        return _FUNCS[head](*[_coeff(a) for a in args])
    raise ParseError(f"unknown operator {head!r}", *_pos(head))


def coeff_from_prefix(text: str) -> sympy.Expr:
    nodes = _read(text)
    if len(nodes) != 1:
        raise ParseError("expected a single expression", 1, 1)
    return _coeff(nodes[0])


# -- documents ------------------------------------------------------------------

def _frac(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _bits(d: Degree) -> str:
    return "".join(str(b) for b in d.bits)


def context_lines(alg: Algebra) -> list[str]:
    out = [f"  (truncation {'none' if alg.z_truncation is None else alg.z_truncation})"]
    if alg.z_name:
        out.append(f"  (z-name {_atom(alg.z_name)})")
    for x, w in zip(alg.even_coordinates, alg.coordinate_weights):
        out.append(f"  (even-coordinate {_atom(x.name)} {_frac(w)})")
    for g in alg.coordinates:
        out.append(f"  (coordinate {_atom(g.name)} {_bits(g.degree)} {_frac(g.weight)})")
    for g in alg.parameters:
        out.append(f"  (parameter {_atom(g.name)} {_bits(g.degree)} {_frac(g.weight)})")
    for base in sorted(alg.graded_fields):
        d, w = alg.graded_fields[base]
        out.append(f"  (graded-field {_atom(base)} {_bits(d)} {_frac(w)})")
    for base in sorted(alg.even_fields):
        out.append(f"  (even-field {_atom(base)} {_frac(alg.even_fields[base])})")
    for name in sorted(alg._rel):
        k, v = alg._rel[name]
        out.append(f"  (relation {_atom(name)} {k} {coeff_to_prefix(v)})")
    for name in sorted(str(s) for s in alg.invertible):
        out.append(f"  (invertible {_atom(name)})")
    for s in sorted(alg.symbol_weights, key=lambda s: s.name):
        out.append(f"  (symbol-weight {_atom(s.name)} {_frac(alg.symbol_weights[s])})")
    return out


def term_line(c, key) -> str:
    facs = "".join(f" ({_atom(g.name)} {p})" for g, p in key)
    return f" (term {coeff_to_prefix(c)}{facs})"


def dumps(a: GradedExpr) -> str:
    lines = [f"(graded-expr {FORMAT_VERSION}", " (context"]
    lines.extend(context_lines(a.alg))
    lines[-1] += ")"
    for c, key in a:
        lines.append(term_line(c, key))
    lines.append(")")
    return "\n".join(lines) + "\n"


def _algebra_from(ctx_items) -> Algebra:
    coords, params, evens, wts = [], [], [], []
    graded, even, rel, inv, sw = {}, {}, {}, [], {}
    trunc, zname = 1, None
    for node in ctx_items:
        it = _items(node)
        head, args = it[0], it[1:]
        if head == "truncation":
            trunc = None if args[0] == "none" else int(args[0])
        elif head == "z-name":
            zname = str(args[0])
        elif head == "even-coordinate":
            evens.append(sympy.Symbol(str(args[0])))
            wts.append(Fraction(str(args[1])))
        elif head in ("coordinate", "parameter"):
            kind = COORDINATE if head == "coordinate" else PARAMETER
            g = Generator(str(args[0]), kind, Degree(tuple(int(b) for b in args[1])), Fraction(str(args[2])))
            (coords if head == "coordinate" else params).append(g)
        elif head == "graded-field":
            graded[str(args[0])] = (Degree(tuple(int(b) for b in args[1])), Fraction(str(args[2])))
        elif head == "even-field":
            even[str(args[0])] = Fraction(str(args[1]))
        elif head == "relation":
            rel[str(args[0])] = (int(args[1]), _coeff(args[2]))
        elif head == "invertible":
            inv.append(str(args[0]))
        elif head == "symbol-weight":
            sw[sympy.Symbol(str(args[0]))] = Fraction(str(args[1]))
        else:
            raise ParseError(f"unknown context entry {head!r}", *_pos(head))
    return Algebra(
        coordinates=tuple(coords),
        even_coordinates=tuple(evens),
        parameters=tuple(params),
        graded_fields=graded,
        even_fields=even,
        z_name=zname,
        z_truncation=trunc,
        relations=rel,
        invertible=frozenset(inv),
        symbol_weights=sw,
        coordinate_weights=tuple(wts),
        n=len(coords[0].degree.bits) if coords else 2,
    )


def loads(text: str, alg: Algebra | None = None) -> GradedExpr:
    """Parse a document.  With ``alg`` given, generators are resolved in it
    (the embedded context is only used when ``alg`` is None)."""
    nodes = _read(text)
    if len(nodes) != 1 or not isinstance(nodes[0], list):
        raise ParseError("expected one (graded-expr ...) form", 1, 1)
    items = _items(nodes[0])
    if not items or items[0] != "graded-expr":
        raise ParseError("document must start with graded-expr", *_pos(nodes[0]))
    body = items[2:]
    if body and isinstance(body[0], list) and _items(body[0])[0] == "context":
        if alg is None:
            alg = _algebra_from(_items(body[0])[1:])
        body = body[1:]
    if alg is None:
        raise ParseError("no context block and no algebra supplied", *_pos(nodes[0]))
    out = alg.zero()
    for node in body:
        it = _items(node)
        if not it or it[0] != "term":
            raise ParseError("expected (term ...)", *_pos(node))
        c = _coeff(it[1])
        facs = []
        for f in it[2:]:
            fi = _items(f)
            try:
                facs.append((alg.gen(str(fi[0])), int(fi[1])))
            except KeyError:
                raise ParseError(f"unknown generator {fi[0]!r}", *_pos(fi[0])) from None
        out = out + alg.monomial(c, facs)
    return out


# -- human-readable rendering ---------------------------------------------------

_GREEK_TEXT = {
    "theta": "θ", "psi": "ψ", "chi": "χ", "eps": "ε", "alpha": "α", "mu": "μ",
    "eta": "η", "lambda": "λ", "Phi": "Φ", "Psi": "Ψ",
}
_SUB = {"-": "₋", "+": "₊"}
_GREEK_LATEX = {
    "theta": r"\theta", "psi": r"\psi", "chi": r"\chi", "eps": r"\varepsilon",
    "alpha": r"\alpha", "mu": r"\mu", "eta": r"\eta", "lambda": r"\lambda",
    "Phi": r"\Phi", "Psi": r"\Psi", "phi": r"\phi", "sigma": r"\sigma",
}


def _split_name(name: str):
    base, jet = split_jet_name(name)
    sup = None
    if "^" in base and not base.startswith("x^") and not base.startswith("lambda^"):
        base, sup = base.split("^", 1)
    return base, sup, jet


def _covariant(name: str):
    """('-', 'Phi') for a formal covariant-derivative generator 'D_-Phi'."""
    if len(name) > 3 and name[:3] in ("D_-", "D_+"):
        return name[2], name[3:]
    return None


def pretty_name(name: str) -> str:
    cov = _covariant(name)
    if cov:
        return "D" + ("₋" if cov[0] == "-" else "₊") + pretty_name(cov[1])
    base, sup, jet = _split_name(name)
    if base in ("x^-", "x^+"):
        core = "x⁻" if base == "x^-" else "x⁺"
    elif base.startswith("lambda^"):
        core = "λ" + ("⁻" if base.endswith("-") else "⁺")
    else:
        head, _, tail = base.partition("_")
        core = _GREEK_TEXT.get(head, head) + "".join(_SUB.get(ch, ch) for ch in tail)
    if sup:
        core += "^" + sup
    if jet and any(jet):
        pre = ""
        for ch, k in zip("₋₊", jet):
            if k:
                pre += "∂" + ch + (str(k) if k > 1 else "")
        core = pre + core
    return core


def latex_name(name: str) -> str:
    cov = _covariant(name)
    if cov:
        return "D_{" + cov[0] + "}" + latex_name(cov[1])
    base, sup, jet = _split_name(name)
    if base in ("x^-", "x^+"):
        core = "x^{" + base[-1] + "}"
    elif base.startswith("lambda^"):
        core = r"\lambda^{" + base[-1] + "}"
    else:
        head, _, tail = base.partition("_")
        core = _GREEK_LATEX.get(head, head)
        if head == "F" and not tail:
            tail = "+-"
        if tail:
            core += "_{" + tail + "}"
    if sup:
        core = "{" + core + "}^{" + sup + "}"
    if jet and any(jet):
        pre = ""
        for ch, k in zip("-+", jet):
            if k:
                pre += r"\partial_{" + ch + "}" + (f"^{{{k}}}" if k > 1 else "")
        core = pre + " " + core
    return core


def _symbol_map(c: sympy.Expr, fn):
    return {s: sympy.Symbol(fn(s.name)) for s in c.free_symbols if isinstance(s, sympy.Symbol)}


def _coeff_text(c) -> str:
    c = sympy.sympify(c)
    c = c.xreplace(_symbol_map(c, pretty_name))
    return sympy.sstr(c, order="lex").replace("**", "^").replace("*", "·")


_UNICODE_FRAC = {Fraction(1, 2): "½", Fraction(1, 4): "¼", Fraction(3, 4): "¾", Fraction(1, 8): "⅛"}


def _factors_text(key) -> str:
    return "".join(pretty_name(g.name) + (f"^{p}" if p > 1 else "") for g, p in key)


def _term_pieces(c, fac: str, render_coeff):
    """Return (sign, body) for a coefficient times a rendered factor string."""
    c = sympy.sympify(c)
    # a sum keeps its own signs; pulling one out would misread as -(a + b)
    neg = not c.is_Add and c.could_extract_minus_sign()
    if neg:
        c = -c
    q, rest = c.as_coeff_Mul() if not c.is_Add else (sympy.Integer(1), c)
    text_mode = render_coeff is _coeff_text
    if q.is_Rational and q != 1:
        fq = Fraction(int(q.p), int(q.q))
        if text_mode:
            qs = _UNICODE_FRAC.get(fq, str(fq))
        else:
            qs = sympy.latex(q) + " "
    else:
        qs, rest = "", c
    if rest == 1:
        body = (qs + fac) if (qs or fac) else "1"
        if not fac and not qs:
            body = "1"
        elif not fac:
            body = str(fq) if text_mode else sympy.latex(q)
    else:
        cs = render_coeff(rest)
        if rest.is_Add and (fac or qs):
            cs = f"({cs})"
        sep = "·" if text_mode else " "
        body = qs + cs + (sep + fac if fac else "")
    return neg, body.strip()


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = ""
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out = ("−" if neg else "") + body
        else:
            out += (" − " if neg else " + ") + body
    return out


def to_text(a: GradedExpr) -> str:
    pieces = []
    for c, key in a:
        c = sympy.sympify(c)
        # a purely even sum reads better as separate terms
        parts = c.as_ordered_terms(order="lex") if (c.is_Add and not key) else [c]
        pieces.extend(_term_pieces(t, _factors_text(key), _coeff_text) for t in parts)
    return _join(pieces)


def _coeff_latex(c) -> str:
    c = sympy.sympify(c)
    return sympy.latex(c.xreplace(_symbol_map(c, latex_name)))


def _factors_latex(key) -> str:
    parts = []
    for g, p in key:
        n = latex_name(g.name)
        parts.append(n if p == 1 else "{" + n + "}^{" + str(p) + "}")
    return " ".join(parts)


def to_latex(a: GradedExpr) -> str:
    pieces = [_term_pieces(c, _factors_latex(key), _coeff_latex) for c, key in a]
    if not pieces:
        return "0"
    out = ""
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def to_json(a: GradedExpr) -> dict:
    return {
        "terms": [
            {"coeff": coeff_to_prefix(c), "factors": [[g.name, p] for g, p in key]}
            for c, key in a
        ]
    }


def expr_json_text(a: GradedExpr) -> str:
    return json.dumps(to_json(a), indent=2, sort_keys=True) + "\n"


# -- derivations and matrices -------------------------------------------------------

def _op_text(alg, t) -> str:
    if isinstance(t, Generator):
        if t.name == alg.z_name:
            return "∂_z"
        return "∂/∂" + pretty_name(t.name)
    if t.name == "x^-":
        return "∂₋"
    if t.name == "x^+":
        return "∂₊"
    return "∂/∂" + pretty_name(t.name)


def _op_latex(alg, t) -> str:
    if isinstance(t, Generator):
        if t.name == alg.z_name:
            return r"\partial_{z}"
        return r"\frac{\partial}{\partial " + latex_name(t.name) + "}"
    if t.name in ("x^-", "x^+"):
        return r"\partial_{" + t.name[-1] + "}"
    return r"\frac{\partial}{\partial " + latex_name(t.name) + "}"


def derivation_text(D) -> str:
    pieces = []
    for coeff, t in D.terms:
        op = _op_text(D.alg, t)
        for c, key in coeff:
            neg, body = _term_pieces(c, _factors_text(key) + op, _coeff_text)
            pieces.append((neg, body))
    return _join(pieces)


def derivation_latex(D) -> str:
    pieces = []
    for coeff, t in D.terms:
        op = _op_latex(D.alg, t)
        for c, key in coeff:
            fac = (_factors_latex(key) + " " + op).strip()
            pieces.append(_term_pieces(c, fac, _coeff_latex))
    out = ""
    for i, (neg, body) in enumerate(pieces):
        out += (("-" if neg else "") if i == 0 else (" - " if neg else " + ")) + body
    return out or "0"


def matrix_text(m) -> str:
    er, orr = m.even_rows(), m.odd_rows()
    ec, oc = m.even_cols(), m.odd_cols()
    cells = [[to_text(m.entries[i][j]) for j in ec + oc] for i in er + orr]
    width = max((len(s) for r in cells for s in r), default=1)
    lines = []
    for k, row in enumerate(cells):
        if k == len(er) and er and orr:
            lines.append("-" * ((width + 2) * len(row) + 2))
        left = "  ".join(s.rjust(width) for s in row[: len(ec)])
        right = "  ".join(s.rjust(width) for s in row[len(ec):])
        lines.append(f"{left} | {right}" if oc else left)
    return "\n".join(lines)


def matrix_latex(m) -> str:
    er, orr = m.even_rows(), m.odd_rows()
    ec, oc = m.even_cols(), m.odd_cols()
    spec = "c" * len(ec) + ("|" + "c" * len(oc) if oc else "")
    rows = []
    for k, i in enumerate(er + orr):
        cells = [to_latex(m.entries[i][j]) for j in ec + oc]
        line = " & ".join(cells) + r" \\"
        if k == len(er) and er and orr:
            rows.append(r"\hline")
        rows.append(line)
    return r"\left(\begin{array}{" + spec + "}\n" + "\n".join(rows) + "\n" + r"\end{array}\right)"
