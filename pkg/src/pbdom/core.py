"""Pseudo-Boolean constraint algebra.

Variables are interned to dense positive integers by a :class:`Vocabulary`;
a literal is the signed variable id (``-v`` is the negation of ``v``).
Constraints are kept in normalized form ``sum a_i l_i >= A`` with positive
coefficients, one term per variable, terms sorted by variable id and
``0 <= A <= sum a_i + 1``.  Coefficients are plain Python integers, so there
is no overflow anywhere.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Term = tuple[int, int]


class Vocabulary:
    """Bijection between variable names and ids ``1, 2, ...``."""

    def __init__(self, names: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._names: list[str] = [""]
        for name in names:
            self.intern(name)

    def __len__(self) -> int:
        return len(self._names) - 1

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def intern(self, name: str) -> int:
        var = self._ids.get(name)
        if var is None:
            if not NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            var = len(self._names)
            self._ids[name] = var
            self._names.append(name)
        return var

    def lookup(self, name: str) -> int | None:
        return self._ids.get(name)

    def name(self, var: int) -> str:
        return self._names[var]

    def names(self) -> list[str]:
        return self._names[1:]

    def literal(self, token: str) -> int:
        """Parse ``x`` or ``~x``, interning the variable if needed."""
        if token.startswith("~"):
            return -self.intern(token[1:])
        return self.intern(token)

    def copy(self) -> "Vocabulary":
        return Vocabulary(self._names[1:])

    def render_literal(self, lit: int) -> str:
        return ("~" if lit < 0 else "") + self._names[abs(lit)]


class Bit:
    """A truth constant used as a substitution image."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        self.value = value

    def __repr__(self) -> str:
        return str(self.value)

    def __invert__(self) -> "Bit":
        return ONE if self.value == 0 else ZERO


ZERO = Bit(0)
ONE = Bit(1)

Image = int | Bit


def negate_image(img: Image) -> Image:
    return ~img if isinstance(img, Bit) else -img


class Constraint:
    """A normalized pseudo-Boolean constraint ``sum a_i l_i >= degree``.

    Use :func:`geq` or :func:`normalize` to build one from raw terms.
    """

    __slots__ = ("terms", "degree", "total", "maxcoef", "_hash")

    def __init__(self, terms: tuple[Term, ...], degree: int):
        self.terms = terms
        total = 0
        maxcoef = 0
        for a, _ in terms:
            total += a
            if a > maxcoef:
                maxcoef = a
        self.total = total
        self.maxcoef = maxcoef
        self.degree = min(max(degree, 0), total + 1)
        self._hash = hash((terms, self.degree))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Constraint):
            return NotImplemented
        return (self._hash == other._hash and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = " ".join(f"{a} {'~' if l < 0 else ''}x{abs(l)}" for a, l in self.terms)
        return f"<{body} >= {self.degree}>"

    @property
    def slack0(self) -> int:
        """Slack under the empty assignment."""
        return self.total - self.degree

    def is_trivial(self) -> bool:
        return self.degree == 0

    def is_conflicting(self) -> bool:
        return self.total < self.degree

    def variables(self) -> list[int]:
        return [abs(l) for _, l in self.terms]

    def signed(self) -> tuple[dict[int, int], int]:
        """Return ``(coefficients over positive literals, rhs)``."""
        coefs = {}
        rhs = self.degree
        for a, l in self.terms:
            if l > 0:
                coefs[l] = a
            else:
                coefs[-l] = -a
                rhs -= a
        return coefs, rhs


TRUE = Constraint((), 0)
FALSE = Constraint((), 1)


def geq(terms: Iterable[Term], rhs: int) -> Constraint:
    """Normalize ``sum a_i l_i >= rhs`` where the ``a_i`` may have any sign."""
    acc: dict[int, int] = {}
    for a, lit in terms:
        if not a:
            continue
        if lit > 0:
            acc[lit] = acc.get(lit, 0) + a
        else:
            acc[-lit] = acc.get(-lit, 0) - a
            rhs -= a
    out = []
    for var in sorted(acc):
        c = acc[var]
        if c > 0:
            out.append((c, var))
        elif c < 0:
            out.append((-c, -var))
            rhs -= c
    return Constraint(tuple(out), rhs)


def normalize(raw: Iterable[Term], relation: str, rhs: int) -> list[Constraint]:
    """Normalize a relation over signed terms; ``=`` gives two constraints."""
    raw = list(raw)
    if relation == ">=":
        return [geq(raw, rhs)]
    if relation == "<=":
        return [geq([(-a, l) for a, l in raw], -rhs)]
    if relation == "=":
        return [geq(raw, rhs), geq([(-a, l) for a, l in raw], -rhs)]
    raise ValueError(f"unknown relation {relation!r}")


def negate(c: Constraint) -> Constraint:
    return Constraint(tuple((a, -l) for a, l in c.terms), c.total - c.degree + 1)


def add(c1: Constraint, c2: Constraint) -> Constraint:
    return geq(c1.terms + c2.terms, c1.degree + c2.degree)


def multiply(c: Constraint, k: int) -> Constraint:
    if k <= 0:
        raise ValueError("multiplier must be positive")
    return Constraint(tuple((a * k, l) for a, l in c.terms), c.degree * k)


def divide(c: Constraint, d: int) -> Constraint:
    if d <= 0:
        raise ValueError("divisor must be positive")
    return Constraint(tuple((-(-a // d), l) for a, l in c.terms), -(-c.degree // d))


def saturate(c: Constraint) -> Constraint:
    deg = c.degree
    return Constraint(tuple((min(a, deg), l) for a, l in c.terms if deg), deg)


def literal_axiom(lit: int) -> Constraint:
    return Constraint(((1, lit),), 0)


def literal_axiom_implies(c: Constraint, target: Constraint) -> bool:
    """Decide whether ``target`` follows from ``c`` by adding literal axioms.

    Raising a signed coefficient costs nothing (add ``x >= 0``), lowering it
    by ``k`` costs ``k`` on the right-hand side (add ``k * ~x >= 0``).
    """
    if target.degree == 0:
        return True
    sc, rc = c.signed()
    st, rt = target.signed()
    cost = 0
    for var, s in sc.items():
        t = st.get(var, 0)
        if s > t:
            cost += s - t
    for var, t in st.items():
        if var not in sc and t < 0:
            cost -= t
    return rc - cost >= rt


class Substitution:
    """Map from variables to ``ZERO``, ``ONE`` or a literal.

    Variables outside the domain map to themselves.
    """

    __slots__ = ("map",)

    def __init__(self, mapping: Mapping[int, Image] | Iterable[tuple[int, Image]] = ()):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        self.map: dict[int, Image] = {}
        for var, img in items:
            if var <= 0:
                raise ValueError("substitution domain must be variables")
            if isinstance(img, int) and img == 0:
                raise ValueError("literal 0 does not exist")
            if isinstance(img, Bit) or img != var:
                self.map[var] = img

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.map == other.map

    def __hash__(self) -> int:
        return hash(frozenset((v, repr(i) if isinstance(i, Bit) else i)
                              for v, i in self.map.items()))

    def __repr__(self) -> str:
        return f"Substitution({self.map})"

    def __bool__(self) -> bool:
        return bool(self.map)

    def domain(self) -> set[int]:
        return set(self.map)

    def image(self, lit: int) -> Image:
        img = self.map.get(abs(lit))
        if img is None:
            return lit
        return img if lit > 0 else negate_image(img)

    def then(self, other: "Substitution") -> "Substitution":
        return compose(self, other)


IDENTITY = Substitution()


def compose(w1: Substitution, w2: Substitution) -> Substitution:
    """Apply ``w1`` first, then ``w2``: ``x -> w2(w1(x))``."""
    out: dict[int, Image] = {}
    for var, img in w1.map.items():
        out[var] = img if isinstance(img, Bit) else w2.image(img)
    for var, img in w2.map.items():
        if var not in w1.map:
            out[var] = img
    return Substitution(out)


def substitute(c: Constraint, w: Substitution) -> Constraint:
    m = w.map
    if not m:
        return c
    rhs = c.degree
    terms = []
    touched = False
    for a, l in c.terms:
        img = m.get(abs(l))
        if img is None:
            terms.append((a, l))
            continue
        touched = True
        if l < 0:
            img = negate_image(img)
        if isinstance(img, Bit):
            if img.value:
                rhs -= a
        else:
            terms.append((a, img))
    if not touched:
        return c
    return geq(terms, rhs)


def evaluate(c: Constraint, a: Mapping[int, bool | int]) -> bool:
    total = 0
    for coef, l in c.terms:
        val = a[abs(l)]
        if bool(val) == (l > 0):
            total += coef
    return total >= c.degree


class Objective:
    """Linear objective ``sum w_i l_i + constant`` to be minimized."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Sequence[Term] = (), constant: int = 0):
        self.terms = tuple(terms)
        self.constant = constant

    def __repr__(self) -> str:
        return f"Objective({list(self.terms)}, {self.constant})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Objective):
            return NotImplemented
        return self.terms == other.terms and self.constant == other.constant

    def is_zero(self) -> bool:
        return not self.terms and self.constant == 0

    def variables(self) -> set[int]:
        return {abs(l) for _, l in self.terms}


def evaluate_objective(f: Objective, a: Mapping[int, bool | int]) -> int:
    total = f.constant
    for w, l in f.terms:
        if bool(a[abs(l)]) == (l > 0):
            total += w
    return total


def objective_goal(f: Objective, w: Substitution) -> Constraint:
    """Normalized ``f restricted by w <= f``."""
    terms: list[Term] = []
    rhs = 0
    for a, l in f.terms:
        img = w.image(l)
        if isinstance(img, Bit):
            rhs += a * img.value
        elif img != l:
            terms.append((a, l))
            terms.append((-a, img))
    return geq(terms, rhs)


def bound_constraint(f: Objective, v: int) -> Constraint:
    """Normalized ``f <= v - 1``."""
    return geq([(-a, l) for a, l in f.terms], f.constant - v + 1)
