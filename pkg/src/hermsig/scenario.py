"""Scenario files (TOML): loading, validation, serialisation, corpus.

Layout::

    [base]
    factors = [[-2, 0, 1]]            # monic squarefree, lowest degree first

    [extension]                       # optional: T = K[y]/(f)
    poly = [[0, -1], [0], [1]]        # coefficients of f, each a base element

    [algebra]                         # optional; [target] has the same shape
    n = 1
    division = { kind = "quaternion", a = [-1], b = [-1] }
    standard = "conj-transpose"
    twist = "identity"

    [form.h]
    over = "extended"                 # algebra | extended | target | target-extended
    epsilon = 1
    diagonal = [1, { scalar = [0, 1] }]

    [quadform.q]
    over = "total"                    # base | total
    diagonal = [[[1]], [[0], [1]]]

    [params]
    seed = 0

Rationals are integers or ``"p/q"`` strings.  A base element is a list of
coefficients (one factor, or the same polynomial in every factor) or a list of
per-factor lists.  An element of the extension is a list of base-element
coefficients of ``y^k``.  Algebra elements are numbers (central scalars) or
tables with one of ``scalar``, ``d`` (a ``D`` element times the identity) or
``matrix``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import tomli_w

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .algebras import (
    BASE,
    CONJ_TRANSPOSE,
    QUADRATIC,
    QUATERNION,
    TRANSPOSE,
    DivisionSpec,
    InvolutiveAlgebra,
)
from .etale import EtaleAlgebra, RelativeEtale
from .hermitian import HermForm
from .numerics import DomainError, NotAUnit, UniPoly, as_fraction
from .quadratic import QuadForm

__all__ = [
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioInvariantError",
    "ScenarioReferenceError",
    "Scenario",
    "load_scenario",
    "loads_scenario",
    "dump_scenario",
    "corpus_generate",
]


class ScenarioError(Exception):
    """Base class; ``location`` names the section (and line when known)."""

    kind = "error"

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{self.kind} at {location}: {message}" if location else message)


class ScenarioParseError(ScenarioError):
    kind = "parse error"


class ScenarioInvariantError(ScenarioError):
    kind = "invariant violation"


class ScenarioReferenceError(ScenarioError):
    kind = "unresolved reference"


FORM_TARGETS = ("algebra", "extended", "target", "target-extended")
QUAD_TARGETS = ("base", "total")
PARAM_KEYS = (
    "seed",
    "corpus_size",
    "height",
    "pfister_length",
    "max_m",
    "max_candidates",
    "eta",
    "targets",
    "template",
)


@dataclass
class Scenario:
    base: EtaleAlgebra
    extension: Optional[RelativeEtale] = None
    algebra: Optional[InvolutiveAlgebra] = None
    target: Optional[InvolutiveAlgebra] = None
    forms: dict = field(default_factory=dict)  # name -> (over, HermForm)
    quadforms: dict = field(default_factory=dict)  # name -> (over, QuadForm)
    params: dict = field(default_factory=dict)

    def algebra_for(self, over: str) -> InvolutiveAlgebra:
        if over == "algebra":
            return self.algebra
        if over == "target":
            return self.target
        if over == "extended":
            return self.algebra.extend(self.extension)
        if over == "target-extended":
            return self.target.extend(self.extension)
        raise KeyError(over)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return dump_scenario(self) == dump_scenario(other)


# ---------------------------------------------------------------------------
# element codecs


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ScenarioParseError(f"expected an integer or 'p/q' string, got {v!r}", where)
    try:
        return as_fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioParseError(f"bad rational {v!r}: {exc}", where) from None


def _dump_rational(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _is_scalar(v) -> bool:
    return isinstance(v, (int, str)) and not isinstance(v, bool)


def parse_ring_element(R: EtaleAlgebra, v, where: str):
    if R.base is None:
        if _is_scalar(v):
            return R.from_fraction(_rational(v, where))
        if not isinstance(v, list) or not v:
            raise ScenarioParseError(f"expected a base element, got {v!r}", where)
        if all(_is_scalar(c) for c in v):
            coeffs = tuple(_rational(c, where) for c in v)
            return R.element([coeffs] * len(R.factors))
        if len(v) != len(R.factors) or not all(isinstance(p, list) for p in v):
            raise ScenarioParseError(
                f"per-factor element needs {len(R.factors)} coefficient lists", where
            )
        return R.element([tuple(_rational(c, where) for c in p) for p in v])
    K = R.base
    if _is_scalar(v):
        return R.embed(K.from_fraction(_rational(v, where)))
    if not isinstance(v, list) or not v:
        raise ScenarioParseError(f"expected a list of base coefficients, got {v!r}", where)
    coeffs = [parse_ring_element(K, c, f"{where}[{k}]") for k, c in enumerate(v)]
    parts = []
    for i, F in enumerate(R.factors):
        parts.append(tuple(c[i] for c in coeffs))
    return R.element(parts)


def dump_ring_element(R: EtaleAlgebra, x):
    if R.base is None:
        parts = [[_dump_rational(c) for c in _trim(p)] for p in x]
        return parts[0] if len(parts) == 1 else parts
    K = R.base
    deg = R.factors[0].degree
    coeffs = [tuple(part[k] for part in x) for k in range(deg)]
    while len(coeffs) > 1 and K.is_zero(coeffs[-1]):
        coeffs.pop()
    return [dump_ring_element(K, c) for c in coeffs]


def _trim(p) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def parse_d_element(A: InvolutiveAlgebra, v, where: str):
    D = A.D
    if D.dim == 1:
        return (parse_ring_element(A.base, v, where),)
    if _is_scalar(v):
        return D.scalar(parse_ring_element(A.base, v, where))
    if not isinstance(v, list) or len(v) != D.dim:
        raise ScenarioParseError(f"a {A.div.kind} element needs {D.dim} coordinates", where)
    return tuple(parse_ring_element(A.base, c, f"{where}[{k}]") for k, c in enumerate(v))


def dump_d_element(A: InvolutiveAlgebra, x):
    if A.D.dim == 1:
        return dump_ring_element(A.base, x[0])
    return [dump_ring_element(A.base, c) for c in x]


def parse_alg_element(A: InvolutiveAlgebra, v, where: str):
    if _is_scalar(v):
        return A.scalar(parse_ring_element(A.base, v, where))
    if not isinstance(v, dict) or len(v) != 1:
        raise ScenarioParseError(
            "an algebra element is a number or a table with one of scalar, d, matrix", where
        )
    ((key, val),) = v.items()
    if key == "scalar":
        return A.scalar(parse_ring_element(A.base, val, f"{where}.scalar"))
    if key == "d":
        return A.from_d(parse_d_element(A, val, f"{where}.d"))
    if key == "matrix":
        return _parse_matrix(A, val, A.n, f"{where}.matrix")
    raise ScenarioParseError(f"unknown algebra element key {key!r}", where)


def _parse_matrix(A: InvolutiveAlgebra, val, n: int, where: str):
    if not isinstance(val, list) or len(val) != n or any(
        not isinstance(r, list) or len(r) != n for r in val
    ):
        raise ScenarioParseError(f"expected a {n} x {n} matrix", where)
    return tuple(
        tuple(parse_d_element(A, x, f"{where}[{i}][{j}]") for j, x in enumerate(row))
        for i, row in enumerate(val)
    )


def dump_alg_element(A: InvolutiveAlgebra, X):
    return {"matrix": [[dump_d_element(A, x) for x in row] for row in X]}


# ---------------------------------------------------------------------------
# loading


def _section_line(text: str, header: str) -> str:
    pat = re.compile(r"^[ \t]*\[\s*" + re.escape(header) + r"\s*\]", re.M)
    m = pat.search(text)
    if not m:
        return header
    line = text.count("\n", 0, m.start()) + 1
    return f"[{header}] (line {line})"


def _parse_algebra(R: EtaleAlgebra, tab: dict, where: str) -> InvolutiveAlgebra:
    try:
        n = tab.get("n", 1)
        if not isinstance(n, int) or n < 1:
            raise ScenarioParseError("n must be a positive integer", where)
        div = tab.get("division", {"kind": "base"})
        kind = div.get("kind", "base") if isinstance(div, dict) else div
        if kind == BASE:
            spec = DivisionSpec.base()
        elif kind == QUADRATIC:
            spec = DivisionSpec.quadratic(parse_ring_element(R, div["d"], f"{where}.division.d"))
        elif kind == QUATERNION:
            spec = DivisionSpec.quaternion(
                parse_ring_element(R, div["a"], f"{where}.division.a"),
                parse_ring_element(R, div["b"], f"{where}.division.b"),
            )
        else:
            raise ScenarioParseError(f"unknown division kind {kind!r}", where)
        standard = tab.get("standard", TRANSPOSE if kind == BASE else CONJ_TRANSPOSE)
        twist_raw = tab.get("twist", "identity")
        if twist_raw == "identity":
            twist = None
        else:
            probe = InvolutiveAlgebra(R, n, spec, standard)
            twist = _parse_matrix(probe, twist_raw, n, f"{where}.twist")
        return InvolutiveAlgebra(R, n, spec, standard, twist)
    except KeyError as exc:
        raise ScenarioParseError(f"missing key {exc.args[0]!r}", where) from None
    except (DomainError, NotAUnit) as exc:
        raise ScenarioInvariantError(str(exc), where) from None


def _dump_algebra(A: InvolutiveAlgebra) -> dict:
    div: dict[str, Any] = {"kind": A.div.kind}
    if A.div.kind == QUADRATIC:
        div["d"] = dump_ring_element(A.base, A.div.params[0])
    elif A.div.kind == QUATERNION:
        div["a"] = dump_ring_element(A.base, A.div.params[0])
        div["b"] = dump_ring_element(A.base, A.div.params[1])
    out: dict[str, Any] = {"n": A.n, "division": div, "standard": A.standard}
    if A.eq(A.twist, A.one):
        out["twist"] = "identity"
    else:
        out["twist"] = [[dump_d_element(A, x) for x in row] for row in A.twist]
    return out


def loads_scenario(text: str, origin: str = "<string>") -> Scenario:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioParseError(str(exc), origin) from None
    known = {"base", "extension", "algebra", "target", "form", "quadform", "params"}
    for key in data:
        if key not in known:
            raise ScenarioParseError(f"unknown section [{key}]", _section_line(text, key))
    if "base" not in data:
        raise ScenarioParseError("missing [base] section", origin)
    where = _section_line(text, "base")
    try:
        factors = data["base"]["factors"]
        polys = [UniPoly([_rational(c, where) for c in f]) for f in factors]
        base = EtaleAlgebra.from_polys(polys)
    except KeyError:
        raise ScenarioParseError("missing key 'factors'", where) from None
    except TypeError:
        raise ScenarioParseError("factors must be a list of coefficient lists", where) from None
    except DomainError as exc:
        raise ScenarioInvariantError(str(exc), where) from None
    sc = Scenario(base)
    if "extension" in data:
        where = _section_line(text, "extension")
        try:
            poly = [
                parse_ring_element(base, c, f"{where}.poly[{k}]")
                for k, c in enumerate(data["extension"]["poly"])
            ]
            sc.extension = RelativeEtale(base, poly)
        except KeyError:
            raise ScenarioParseError("missing key 'poly'", where) from None
        except (DomainError, NotAUnit) as exc:
            raise ScenarioInvariantError(str(exc), where) from None
    for name in ("algebra", "target"):
        if name in data:
            setattr(sc, name, _parse_algebra(base, data[name], _section_line(text, name)))
    params = data.get("params", {})
    for key in params:
        if key not in PARAM_KEYS:
            raise ScenarioParseError(f"unknown parameter {key!r}", _section_line(text, "params"))
    sc.params = dict(params)
    for fname, tab in data.get("form", {}).items():
        where = _section_line(text, f"form.{fname}")
        sc.forms[fname] = _parse_form(sc, tab, where)
    for qname, tab in data.get("quadform", {}).items():
        where = _section_line(text, f"quadform.{qname}")
        sc.quadforms[qname] = _parse_quadform(sc, tab, where)
    eta = sc.params.get("eta")
    if eta is not None and eta not in sc.forms:
        raise ScenarioReferenceError(f"params.eta names unknown form {eta!r}", _section_line(text, "params"))
    return sc


def _parse_form(sc: Scenario, tab: dict, where: str):
    over = tab.get("over", "algebra")
    if over not in FORM_TARGETS:
        raise ScenarioParseError(f"'over' must be one of {FORM_TARGETS}", where)
    needs = {"algebra": ["algebra"], "target": ["target"],
             "extended": ["algebra", "extension"], "target-extended": ["target", "extension"]}[over]
    for block in needs:
        if getattr(sc, block) is None:
            raise ScenarioReferenceError(f"form over {over!r} needs a [{block}] section", where)
    A = sc.algebra_for(over)
    eps = tab.get("epsilon", 1)
    if eps not in (1, -1):
        raise ScenarioParseError("epsilon must be 1 or -1", where)
    try:
        if "diagonal" in tab:
            entries = [parse_alg_element(A, v, f"{where}.diagonal[{k}]") for k, v in enumerate(tab["diagonal"])]
            m = len(entries)
            gram = tuple(tuple(entries[i] if i == j else A.zero for j in range(m)) for i in range(m))
        elif "gram" in tab:
            rows = tab["gram"]
            gram = tuple(
                tuple(parse_alg_element(A, v, f"{where}.gram[{i}][{j}]") for j, v in enumerate(row))
                for i, row in enumerate(rows)
            )
        else:
            raise ScenarioParseError("a form needs 'diagonal' or 'gram'", where)
        return over, HermForm(A, eps, gram)
    except DomainError as exc:
        raise ScenarioInvariantError(str(exc), where) from None


def _parse_quadform(sc: Scenario, tab: dict, where: str):
    over = tab.get("over", "base")
    if over not in QUAD_TARGETS:
        raise ScenarioParseError(f"'over' must be one of {QUAD_TARGETS}", where)
    if over == "total" and sc.extension is None:
        raise ScenarioReferenceError("quadratic form over 'total' needs an [extension]", where)
    R = sc.base if over == "base" else sc.extension.total
    try:
        if "diagonal" in tab:
            entries = [parse_ring_element(R, v, f"{where}.diagonal[{k}]") for k, v in enumerate(tab["diagonal"])]
            m = len(entries)
            gram = tuple(tuple(entries[i] if i == j else R.zero for j in range(m)) for i in range(m))
        elif "gram" in tab:
            gram = tuple(
                tuple(parse_ring_element(R, v, f"{where}.gram[{i}][{j}]") for j, v in enumerate(row))
                for i, row in enumerate(tab["gram"])
            )
        else:
            raise ScenarioParseError("a quadratic form needs 'diagonal' or 'gram'", where)
        return over, QuadForm(R, gram)
    except DomainError as exc:
        raise ScenarioInvariantError(str(exc), where) from None


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read file: {exc}", str(p)) from None
    return loads_scenario(text, str(p))


# ---------------------------------------------------------------------------
# serialisation


def _scenario_dict(sc: Scenario) -> dict:
    out: dict[str, Any] = {
        "base": {
            "factors": [[_dump_rational(c) for c in F.modulus] for F in sc.base.factors]
        }
    }
    if sc.extension is not None:
        out["extension"] = {
            "poly": [dump_ring_element(sc.base, c) for c in sc.extension.rel_poly]
        }
    if sc.algebra is not None:
        out["algebra"] = _dump_algebra(sc.algebra)
    if sc.target is not None:
        out["target"] = _dump_algebra(sc.target)
    if sc.forms:
        out["form"] = {}
        for name, (over, h) in sc.forms.items():
            A = h.algebra
            out["form"][name] = {
                "over": over,
                "epsilon": h.epsilon,
                "gram": [[dump_alg_element(A, x) for x in row] for row in h.gram],
            }
    if sc.quadforms:
        out["quadform"] = {}
        for name, (over, q) in sc.quadforms.items():
            out["quadform"][name] = {
                "over": over,
                "gram": [[dump_ring_element(q.base, x) for x in row] for row in q.gram],
            }
    if sc.params:
        out["params"] = dict(sc.params)
    return out


def dump_scenario(sc: Scenario) -> str:
    return tomli_w.dumps(_scenario_dict(sc))


# ---------------------------------------------------------------------------
# corpus


def corpus_generate(seed: int, size: int, *, max_degree: int = 4, rank: int = 2, height: int = 5) -> list[Scenario]:
    """Deterministic hermitian trace-formula instances over QQ: a template
    algebra, a random squarefree extension and a diagonal form over the
    extended algebra (entries are symmetric units of height at most
    ``height``)."""
    from .corpus import TEMPLATES, random_diagonal_form, random_extension, template
    from .etale import RATIONALS

    rng = random.Random(seed)
    out = []
    for k in range(size):
        name = TEMPLATES[k % len(TEMPLATES)]
        A = template(name)
        E = random_extension(rng, RATIONALS, max_degree)
        AT = A.extend(E)
        h = random_diagonal_form(rng, AT, rng.randint(1, rank), min(height, 3))
        sc = Scenario(RATIONALS, E, A)
        sc.forms["h"] = ("extended", h)
        sc.params = {"seed": seed, "template": name}
        out.append(sc)
    return out
