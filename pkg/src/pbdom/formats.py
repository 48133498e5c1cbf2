"""OPB instances and the proof dialect: parsing and rendering.

The proof parser is streaming: :func:`parse_proof` pulls lines from any
iterable and yields one command at a time.  Multi-line blocks (``pre_order``
definitions and ``begin`` subproofs) are collected into a single command.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import (ONE, ZERO, Constraint, Image, Objective, Substitution,
                   Vocabulary, normalize)

PROOF_HEADER = "pseudo-Boolean proof version 2.0"
PROOF_FOOTER = "end pseudo-Boolean proof"
RELATIONS = (">=", "<=", "=")

_TOKEN_RE = re.compile(r";|[^\s;]+")
_INT_RE = re.compile(r"[+-]?\d+\Z")
_LIT_RE = re.compile(r"~?[A-Za-z_][A-Za-z0-9_]*\Z")


class FormatError(Exception):
    """Syntax error with a 1-based source position."""

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line} col {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


@dataclass
class Token:
    text: str
    line: int
    column: int


def tokenize(text: str, line: int) -> list[Token]:
    return [Token(m.group(), line, m.start() + 1) for m in _TOKEN_RE.finditer(text)]


def _int(tok: Token, what: str = "integer") -> int:
    if not _INT_RE.match(tok.text):
        raise FormatError(tok.line, tok.column, f"expected {what}, got {tok.text!r}")
    return int(tok.text)


def _literal(tok: Token, vocab: Vocabulary) -> int:
    if not _LIT_RE.match(tok.text):
        raise FormatError(tok.line, tok.column, f"expected literal, got {tok.text!r}")
    return vocab.literal(tok.text)


def _end_pos(toks: list[Token], line: int) -> tuple[int, int]:
    if toks:
        return toks[-1].line, toks[-1].column + len(toks[-1].text)
    return line, 1


# ---------------------------------------------------------------- OPB

@dataclass
class ParsedInstance:
    vocab: Vocabulary
    constraints: list[Constraint]
    objective: Objective = field(default_factory=Objective)
    declared_vars: int | None = None
    declared_constraints: int | None = None
    source_count: int = 0

    @property
    def formula_count(self) -> int:
        """Number of constraints as written, before ``=`` expansion."""
        return self.source_count


def _terms(toks: list[Token], vocab: Vocabulary) -> list[tuple[int, int]]:
    if len(toks) % 2:
        t = toks[-1]
        raise FormatError(t.line, t.column, "expected coefficient-literal pairs")
    out = []
    for i in range(0, len(toks), 2):
        out.append((_int(toks[i], "coefficient"), _literal(toks[i + 1], vocab)))
    return out


_HEADER_RE = re.compile(r"#variable=\s*(\d+)\s+#constraint=\s*(\d+)")


def parse_opb(text: str | Iterable[str], vocab: Vocabulary | None = None) -> ParsedInstance:
    """Parse an OPB instance (linear constraints, optional ``min:`` objective)."""
    vocab = vocab if vocab is not None else Vocabulary()
    lines = text.splitlines() if isinstance(text, str) else text
    inst = ParsedInstance(vocab, [])
    pending: list[Token] = []
    for lineno, raw in enumerate(lines, 1):
        stripped = raw.strip()
        if stripped.startswith("*"):
            m = _HEADER_RE.search(stripped)
            if m and inst.declared_vars is None:
                inst.declared_vars = int(m.group(1))
                inst.declared_constraints = int(m.group(2))
            continue
        for tok in tokenize(raw, lineno):
            if tok.text != ";":
                pending.append(tok)
                continue
            _opb_statement(pending, tok, inst)
            pending = []
    if pending:
        line, col = _end_pos(pending, 0)
        raise FormatError(line, col, "missing ';'")
    return inst


def _opb_statement(toks: list[Token], semi: Token, inst: ParsedInstance) -> None:
    vocab = inst.vocab
    if toks and toks[0].text in ("min:", "min"):
        body = toks[1:]
        if toks[0].text == "min":
            if not body or body[0].text != ":":
                raise FormatError(toks[0].line, toks[0].column, "expected 'min:'")
            body = body[1:]
        if inst.objective.terms or inst.source_count:
            raise FormatError(toks[0].line, toks[0].column, "objective must come first")
        inst.objective = Objective(_terms(body, vocab))
        return
    if toks and toks[0].text.startswith("max"):
        raise FormatError(toks[0].line, toks[0].column, "only minimization is supported")
    rel_at = [i for i, t in enumerate(toks) if t.text in RELATIONS]
    if len(rel_at) != 1:
        t = toks[0] if toks else semi
        if not rel_at:
            raise FormatError(t.line, t.column, "missing or unknown relation")
        t = toks[rel_at[1]]
        raise FormatError(t.line, t.column, "more than one relation")
    i = rel_at[0]
    if i != len(toks) - 2:
        t = toks[i + 1] if i + 1 < len(toks) else semi
        raise FormatError(t.line, t.column, "expected a single right-hand side")
    terms = _terms(toks[:i], vocab)
    rhs = _int(toks[i + 1], "right-hand side")
    inst.constraints.extend(normalize(terms, toks[i].text, rhs))
    inst.source_count += 1


def render_literal(lit: int, vocab: Vocabulary) -> str:
    return vocab.render_literal(lit)


def render_terms(c: Constraint, vocab: Vocabulary) -> str:
    return " ".join(f"{a} {vocab.render_literal(l)}" for a, l in c.terms)


def render_constraint(c: Constraint, vocab: Vocabulary) -> str:
    body = render_terms(c, vocab)
    return f"{body} >= {c.degree} ;" if body else f">= {c.degree} ;"


def render_opb(inst: ParsedInstance) -> str:
    out = [f"* #variable= {len(inst.vocab)} #constraint= {len(inst.constraints)}"]
    if inst.objective.terms:
        terms = " ".join(f"{a} {inst.vocab.render_literal(l)}" for a, l in inst.objective.terms)
        out.append(f"min: {terms} ;")
    out.extend(render_constraint(c, inst.vocab) for c in inst.constraints)
    return "\n".join(out) + "\n"


def render_witness(w: Substitution, vocab: Vocabulary) -> str:
    parts = []
    for var in sorted(w.map):
        img = w.map[var]
        shown = str(img.value) if img is ZERO or img is ONE else vocab.render_literal(img)
        parts.append(f"{vocab.name(var)} -> {shown}")
    return " ".join(parts)


# ---------------------------------------------------------------- proof commands

@dataclass
class Command:
    line: int


@dataclass
class LoadFormula(Command):
    count: int | None


@dataclass
class PolToken:
    kind: str  # "id", "lit", "num" or "op"
    value: int | str
    column: int


@dataclass
class Pol(Command):
    tokens: list[PolToken]


@dataclass
class Rup(Command):
    constraint: Constraint


@dataclass
class Subproof:
    goal: int
    line: int
    steps: list[Pol | Rup]
    close_ref: int
    close_line: int


@dataclass
class Red(Command):
    constraint: Constraint
    witness: Substitution
    subproofs: list[Subproof] | None = None
    end_line: int | None = None


@dataclass
class Dom(Red):
    pass


@dataclass
class DelDerived(Command):
    ids: list[int]


@dataclass
class DelCore(Command):
    ids: list[int]
    witness: Substitution | None = None
    subproofs: list[Subproof] | None = None
    end_line: int | None = None


@dataclass
class CoreTransfer(Command):
    ids: list[int]


@dataclass
class Sol(Command):
    literals: list[int]


@dataclass
class PreOrder(Command):
    name: str
    left: list[str]
    right: list[str]
    aux: list[str]
    vocab: Vocabulary
    constraints: list[Constraint]
    fresh_right: list[str]
    transitivity: list[Subproof]
    reflexivity: list[Subproof]
    end_line: int = 0


@dataclass
class LoadOrder(Command):
    name: str | None
    variables: list[int]


@dataclass
class Output(Command):
    kind: str
    ids: list[int] = field(default_factory=list)
    declared_vars: int | None = None
    declared_constraints: int | None = None


@dataclass
class Conclusion(Command):
    claim: str
    value: int | None = None


@dataclass
class End(Command):
    pass


class _Lines:
    """Line source with one line of lookahead, skipping blanks and comments."""

    def __init__(self, stream: Iterable[str]):
        self._it = iter(stream)
        self.lineno = 0
        self._peeked: tuple[int, str] | None = None

    def next_raw(self) -> tuple[int, str] | None:
        if self._peeked is not None:
            item, self._peeked = self._peeked, None
            return item
        for raw in self._it:
            self.lineno += 1
            return self.lineno, raw.rstrip("\r\n")
        return None

    def next(self) -> tuple[int, str] | None:
        while True:
            item = self.next_raw()
            if item is None:
                return None
            stripped = item[1].strip()
            if stripped and not stripped.startswith("*"):
                return item

    def push_back(self, item: tuple[int, str]) -> None:
        self._peeked = item


def _split(toks: list[Token], line: int) -> list[list[Token]]:
    parts: list[list[Token]] = [[]]
    for t in toks:
        if t.text == ";":
            parts.append([])
        else:
            parts[-1].append(t)
    return parts


def parse_constraint(toks: list[Token], vocab: Vocabulary, line: int) -> Constraint:
    """Parse ``<coef> <lit> ... >= <degree>`` (``<=`` also accepted)."""
    if len(toks) < 2 or toks[-2].text not in (">=", "<="):
        t = toks[-2] if len(toks) >= 2 else (toks[0] if toks else Token("", line, 1))
        raise FormatError(t.line, t.column, "expected '<terms> >= <degree>'")
    terms = _terms(toks[:-2], vocab)
    rhs = _int(toks[-1], "degree")
    return normalize(terms, toks[-2].text, rhs)[0]


def parse_witness(toks: list[Token], vocab: Vocabulary) -> Substitution:
    if len(toks) % 3:
        t = toks[-1]
        raise FormatError(t.line, t.column, "witness entries must have the form 'x -> image'")
    mapping: dict[int, Image] = {}
    for i in range(0, len(toks), 3):
        var_tok, arrow, img_tok = toks[i:i + 3]
        if arrow.text != "->":
            raise FormatError(arrow.line, arrow.column, "expected '->'")
        if var_tok.text.startswith("~"):
            raise FormatError(var_tok.line, var_tok.column, "witness domain must be a variable")
        var = _literal(var_tok, vocab)
        if var in mapping:
            raise FormatError(var_tok.line, var_tok.column, f"variable {var_tok.text} mapped twice")
        if img_tok.text == "0":
            mapping[var] = ZERO
        elif img_tok.text == "1":
            mapping[var] = ONE
        else:
            mapping[var] = _literal(img_tok, vocab)
    return Substitution(mapping)


def parse_pol(toks: list[Token], vocab: Vocabulary) -> list[PolToken]:
    out = []
    for i, t in enumerate(toks):
        text = t.text
        if text in ("+", "*", "d", "s"):
            out.append(PolToken("op", text, t.column))
        elif _INT_RE.match(text):
            nxt = toks[i + 1].text if i + 1 < len(toks) else None
            if nxt in ("*", "d"):
                out.append(PolToken("num", int(text), t.column))
            else:
                if int(text) == 0:
                    raise FormatError(t.line, t.column, "constraint id 0 does not exist")
                out.append(PolToken("id", int(text), t.column))
        elif _LIT_RE.match(text):
            out.append(PolToken("lit", vocab.literal(text), t.column))
        else:
            raise FormatError(t.line, t.column, f"unexpected token {text!r} in pol")
    if not out:
        raise FormatError(toks[0].line if toks else 0, 1, "empty pol")
    return out


def _ids(toks: list[Token]) -> list[int]:
    return [_int(t, "constraint id") for t in toks]


def _parse_step(line: int, toks: list[Token], vocab: Vocabulary) -> Pol | Rup:
    head = toks[0].text
    if head == "pol":
        body = [t for t in toks[1:] if t.text != ";"]
        if not body:
            raise FormatError(line, toks[0].column, "empty pol")
        return Pol(line, parse_pol(body, vocab))
    if head == "rup":
        parts = _split(toks[1:], line)
        return Rup(line, parse_constraint(parts[0], vocab, line))
    raise FormatError(line, toks[0].column, f"command {head!r} not allowed in a subproof")


def _parse_subproofs(lines: _Lines, vocab: Vocabulary, closers: tuple[str, ...],
                     open_line: int) -> tuple[list[Subproof], int]:
    """Parse ``proofgoal`` blocks up to one of ``closers``; return them and the closing line."""
    subs: list[Subproof] = []
    while True:
        item = lines.next()
        if item is None:
            raise FormatError(open_line, 1, "unterminated subproof block")
        line, text = item
        toks = tokenize(text, line)
        head = toks[0].text
        if head in closers and len(toks) == 1:
            return subs, line
        if head != "proofgoal":
            raise FormatError(line, toks[0].column, f"expected 'proofgoal', got {head!r}")
        if len(toks) != 2 or not re.fullmatch(r"#\d+", toks[1].text):
            raise FormatError(line, toks[0].column, "expected 'proofgoal #<k>'")
        goal = int(toks[1].text[1:])
        steps: list[Pol | Rup] = []
        while True:
            inner = lines.next()
            if inner is None:
                raise FormatError(line, 1, "unterminated proofgoal")
            iline, itext = inner
            itoks = tokenize(itext, iline)
            if itoks[0].text in ("qed", "end"):
                if len(itoks) > 2:
                    raise FormatError(iline, itoks[2].column, "unexpected token after qed")
                ref = _int(itoks[1], "constraint reference") if len(itoks) == 2 else -1
                subs.append(Subproof(goal, line, steps, ref, iline))
                break
            steps.append(_parse_step(iline, itoks, vocab))


def _parse_names(toks: list[Token], keyword: str, line: int) -> list[str]:
    if not toks or toks[0].text != keyword:
        raise FormatError(line, toks[0].column if toks else 1, f"expected {keyword!r}")
    for t in toks[1:]:
        if not _LIT_RE.match(t.text) or t.text.startswith("~"):
            raise FormatError(t.line, t.column, f"invalid placeholder name {t.text!r}")
    return [t.text for t in toks[1:]]


def _expect(lines: _Lines, keyword: str, open_line: int) -> tuple[int, list[Token]]:
    item = lines.next()
    if item is None:
        raise FormatError(open_line, 1, f"unterminated block, expected {keyword!r}")
    line, text = item
    toks = tokenize(text, line)
    if toks[0].text != keyword:
        raise FormatError(line, toks[0].column, f"expected {keyword!r}, got {toks[0].text!r}")
    return line, toks


def _parse_pre_order(line: int, toks: list[Token], lines: _Lines) -> PreOrder:
    if len(toks) != 2:
        raise FormatError(line, toks[0].column, "expected 'pre_order <name>'")
    name = toks[1].text
    local = Vocabulary()
    _expect(lines, "vars", line)
    l, t = _expect(lines, "left", line)
    left = _parse_names(t, "left", l)
    l, t = _expect(lines, "right", line)
    right = _parse_names(t, "right", l)
    l, t = _expect(lines, "aux", line)
    aux = _parse_names(t, "aux", l)
    _expect(lines, "end", line)
    for n in left + right + aux:
        if n in local:
            raise FormatError(l, 1, f"placeholder {n!r} declared twice")
        local.intern(n)
    declared = len(local)
    _expect(lines, "def", line)
    constraints: list[Constraint] = []
    while True:
        item = lines.next()
        if item is None:
            raise FormatError(line, 1, "unterminated def block")
        dline, dtext = item
        dtoks = tokenize(dtext, dline)
        if dtoks[0].text == "end" and len(dtoks) == 1:
            break
        for part in _split(dtoks, dline):
            if part:
                constraints.append(parse_constraint(part, local, dline))
        if len(local) != declared:
            raise FormatError(dline, 1, "order definition mentions an undeclared variable")
    fresh: list[str] = []
    transitivity: list[Subproof] = []
    reflexivity: list[Subproof] = []
    seen: set[str] = set()
    while True:
        item = lines.next()
        if item is None:
            raise FormatError(line, 1, "unterminated pre_order block")
        bline, btext = item
        btoks = tokenize(btext, bline)
        head = btoks[0].text
        if head == "end" and len(btoks) == 1:
            return PreOrder(line, name, left, right, aux, local, constraints, fresh,
                            transitivity, reflexivity, bline)
        if head not in ("transitivity", "reflexivity") or len(btoks) != 1 or head in seen:
            raise FormatError(bline, btoks[0].column, f"unexpected {head!r} in pre_order block")
        seen.add(head)
        if head == "transitivity":
            _expect(lines, "vars", bline)
            l, t = _expect(lines, "fresh_right", bline)
            fresh = _parse_names(t, "fresh_right", l)
            for n in fresh:
                if n in local:
                    raise FormatError(l, 1, f"placeholder {n!r} declared twice")
                local.intern(n)
            _expect(lines, "end", bline)
        _expect(lines, "proof", bline)
        subs, _ = _parse_subproofs(lines, local, ("qed",), bline)
        _expect(lines, "end", bline)
        if head == "transitivity":
            transitivity = subs
        else:
            reflexivity = subs


def _parse_output(line: int, toks: list[Token], lines: _Lines) -> Output:
    if len(toks) < 2:
        raise FormatError(line, toks[0].column, "expected output kind")
    kind = toks[1].text
    if kind == "NONE":
        if len(toks) != 2:
            raise FormatError(line, toks[2].column, "unexpected token")
        return Output(line, kind)
    if kind != "EQUISATISFIABLE":
        raise FormatError(line, toks[1].column, f"unsupported output kind {kind!r}")
    if len(toks) > 3 or (len(toks) == 3 and toks[2].text != "PERMUTATION"):
        raise FormatError(line, toks[-1].column, "unexpected token")
    out = Output(line, kind)
    while True:
        item = lines.next_raw()
        if item is None:
            raise FormatError(line, 1, "missing output constraint list")
        oline, otext = item
        stripped = otext.strip()
        if not stripped:
            continue
        if stripped.startswith("*"):
            m = _HEADER_RE.search(stripped)
            if m:
                out.declared_vars = int(m.group(1))
                out.declared_constraints = int(m.group(2))
            continue
        out.ids = _ids(tokenize(otext, oline))
        return out


def parse_proof(stream: Iterable[str], vocab: Vocabulary) -> Iterator[Command]:
    """Lazily parse a proof; the first non-empty line must be the version header."""
    lines = _Lines(stream)
    first = lines.next()
    if first is None or first[1].strip() != PROOF_HEADER:
        line = first[0] if first else 1
        raise FormatError(line, 1, f"expected {PROOF_HEADER!r}")
    ended = False
    while True:
        item = lines.next()
        if item is None:
            break
        line, text = item
        if ended:
            raise FormatError(line, 1, "content after end of proof")
        toks = tokenize(text, line)
        head = toks[0].text
        if text.strip() == PROOF_FOOTER:
            ended = True
            yield End(line)
            continue
        yield _parse_command(line, head, toks, lines, vocab)
    if not ended:
        raise FormatError(lines.lineno + 1, 1, f"missing {PROOF_FOOTER!r}")


def _parse_red_like(line: int, toks: list[Token], lines: _Lines, vocab: Vocabulary,
                    cls: type) -> Red:
    parts = _split(toks[1:], line)
    if len(parts) < 2:
        raise FormatError(line, toks[-1].column, "expected '<constraint> ; <witness>'")
    if len(parts) > 3 or (len(parts) == 3 and [t.text for t in parts[2]] != ["begin"]):
        t = parts[2][0] if len(parts) > 2 and parts[2] else toks[-1]
        raise FormatError(t.line, t.column, "expected 'begin' after the witness")
    c = parse_constraint(parts[0], vocab, line)
    w = parse_witness(parts[1], vocab)
    cmd = cls(line, c, w)
    if len(parts) == 3:
        cmd.subproofs, cmd.end_line = _parse_subproofs(lines, vocab, ("end", "qed"), line)
    return cmd


def _parse_command(line: int, head: str, toks: list[Token], lines: _Lines,
                   vocab: Vocabulary) -> Command:
    if head == "f":
        if len(toks) > 2:
            raise FormatError(line, toks[2].column, "unexpected token")
        return LoadFormula(line, _int(toks[1], "constraint count") if len(toks) == 2 else None)
    if head in ("pol", "rup"):
        return _parse_step(line, toks, vocab)
    if head == "red":
        return _parse_red_like(line, toks, lines, vocab, Red)
    if head == "dom":
        return _parse_red_like(line, toks, lines, vocab, Dom)
    if head in ("del", "core"):
        if len(toks) < 2 or toks[1].text != "id":
            raise FormatError(line, toks[1].column if len(toks) > 1 else 1,
                              f"expected '{head} id <ids>'")
        ids = _ids([t for t in toks[2:] if t.text != ";"])
        return DelDerived(line, ids) if head == "del" else CoreTransfer(line, ids)
    if head == "delc":
        parts = _split(toks[1:], line)
        ids = _ids(parts[0])
        if len(parts) == 1 or (len(parts) == 2 and not parts[1]):
            return DelCore(line, ids)
        if len(ids) != 1:
            raise FormatError(line, toks[1].column, "a witness needs exactly one constraint id")
        if len(parts) > 3 or (len(parts) == 3 and [t.text for t in parts[2]] != ["begin"]):
            raise FormatError(line, toks[-1].column, "expected 'begin' after the witness")
        cmd = DelCore(line, ids, parse_witness(parts[1], vocab))
        if len(parts) == 3:
            cmd.subproofs, cmd.end_line = _parse_subproofs(lines, vocab, ("end", "qed"), line)
        return cmd
    if head == "sol":
        return Sol(line, [_literal(t, vocab) for t in toks[1:] if t.text != ";"])
    if head == "pre_order":
        return _parse_pre_order(line, toks, lines)
    if head == "load_order":
        if len(toks) == 1:
            return LoadOrder(line, None, [])
        variables = []
        for t in toks[2:]:
            if t.text.startswith("~"):
                raise FormatError(t.line, t.column, "order variables must be positive")
            variables.append(_literal(t, vocab))
        return LoadOrder(line, toks[1].text, variables)
    if head == "output":
        return _parse_output(line, toks, lines)
    if head == "conclusion":
        if len(toks) < 2:
            raise FormatError(line, toks[0].column, "expected conclusion claim")
        claim = toks[1].text
        if claim in ("NONE", "UNSAT"):
            if len(toks) != 2:
                raise FormatError(line, toks[2].column, "unexpected token")
            return Conclusion(line, claim)
        if claim in ("OPTIMAL", "BOUND-GE"):
            if len(toks) != 3:
                raise FormatError(line, toks[-1].column, f"expected '{claim} <value>'")
            return Conclusion(line, claim, _int(toks[2], "objective value"))
        raise FormatError(line, toks[1].column, f"unknown conclusion {claim!r}")
    raise FormatError(line, toks[0].column, f"unknown command {head!r}")
