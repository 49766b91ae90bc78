"""Effect inference and the policy check.

Phase one computes, for every procedure, the classes of its terminating
traces as a least fixpoint. Phase two writes the non-terminating traces of
each procedure as a linear expression over procedure variables and
eliminates the variables one by one with

    X = A·X ∪ R   ~>   X = A*·R ∪ A^ω

so no greatest fixpoint is ever iterated on the abstract domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .automaton import Automaton
from .lang import Call, Choice, Emit, Expr, Program, ProgramError, Seq, validate
from .classes import EPSILON
from .lattice import BuchiDomain, FinAbs, InfAbs

EMPTY: frozenset = frozenset()


@dataclass(frozen=True)
class EffectExpr:
    """``⋃ coeffs[f]·X_f ∪ constant``; zero coefficients are never stored."""

    coeffs: Mapping[str, FinAbs] = field(default_factory=dict)
    constant: InfAbs = EMPTY

    @classmethod
    def var(cls, name: str) -> "EffectExpr":
        return cls({name: frozenset([EPSILON])}, EMPTY)

    def union(self, other: "EffectExpr", dom: BuchiDomain) -> "EffectExpr":
        coeffs = dict(self.coeffs)
        for x, a in other.coeffs.items():
            coeffs[x] = coeffs.get(x, EMPTY) | a
        return EffectExpr(coeffs, dom.inf_union(self.constant, other.constant))

    def scale(self, u: FinAbs, dom: BuchiDomain) -> "EffectExpr":
        """Left-multiply every coefficient and the constant by ``u``."""
        coeffs = {}
        for x, a in self.coeffs.items():
            b = dom.fin_concat(u, a)
            if b:
                coeffs[x] = b
        return EffectExpr(coeffs, dom.mixed_concat(u, self.constant))

    def without(self, name: str) -> "EffectExpr":
        return EffectExpr({x: a for x, a in self.coeffs.items() if x != name}, self.constant)

    @property
    def closed_form(self) -> bool:
        return not self.coeffs

    def check_linear(self) -> None:
        assert isinstance(self.constant, frozenset)
        for x, a in self.coeffs.items():
            assert isinstance(x, str) and isinstance(a, frozenset) and a, (x, a)


ZERO = EffectExpr()


def finite_step(program: Program, dom: BuchiDomain, current: Mapping[str, FinAbs]) -> Dict[str, FinAbs]:
    """One application of the abstract operator to all procedures simultaneously."""
    return {f: _finite(program.body(f), dom, current) for f in program.names}


def _finite(e: Expr, dom: BuchiDomain, env: Mapping[str, FinAbs]) -> FinAbs:
    if isinstance(e, Emit):
        return frozenset([dom.table.letter[e.symbol]])
    if isinstance(e, Call):
        return env[e.name]
    if isinstance(e, Seq):
        left = _finite(e.first, dom, env)
        if not left:
            return EMPTY
        return dom.fin_concat(left, _finite(e.second, dom, env))
    return _finite(e.left, dom, env) | _finite(e.right, dom, env)


def finite_iterates(program: Program, dom: BuchiDomain) -> Iterator[Dict[str, FinAbs]]:
    """Kleene iterates from the bottom element, ending with the least fixpoint."""
    current = {f: EMPTY for f in program.names}
    yield current
    while True:
        nxt = finite_step(program, dom, current)
        if nxt == current:
            return
        current = nxt
        yield current


def infer_finite(program: Program, dom: BuchiDomain) -> Dict[str, FinAbs]:
    last = None
    for last in finite_iterates(program, dom):
        pass
    return last


def body_effect(e: Expr, dom: BuchiDomain, fin: Mapping[str, FinAbs]) -> Tuple[FinAbs, EffectExpr]:
    """Finite effect and infinite effect expression of an expression.

    Calls contribute their solved finite part and the variable of the callee.
    """
    if isinstance(e, Emit):
        return frozenset([dom.table.letter[e.symbol]]), ZERO
    if isinstance(e, Call):
        if e.name not in fin:
            raise ProgramError(f"undefined procedure {e.name}")
        return fin[e.name], EffectExpr.var(e.name)
    if isinstance(e, Seq):
        u1, v1 = body_effect(e.first, dom, fin)
        u2, v2 = body_effect(e.second, dom, fin)
        out = dom.fin_concat(u1, u2), v1.union(v2.scale(u1, dom), dom)
    else:
        u1, v1 = body_effect(e.left, dom, fin)
        u2, v2 = body_effect(e.right, dom, fin)
        out = u1 | u2, v1.union(v2, dom)
    out[1].check_linear()
    return out


def solve_infinite(
    program: Program,
    dom: BuchiDomain,
    fin: Mapping[str, FinAbs],
    order: Optional[Sequence[str]] = None,
) -> Dict[str, InfAbs]:
    """Eliminate procedure variables in ``order`` (declaration order by default)."""
    eqs: Dict[str, EffectExpr] = {f: body_effect(program.body(f), dom, fin)[1] for f in program.names}
    for f in order if order is not None else program.names:
        expr = eqs[f]
        a = expr.coeffs.get(f, EMPTY)
        rest = expr.without(f)
        sol = rest.scale(dom.fin_star(a), dom)
        sol = EffectExpr(sol.coeffs, dom.inf_union(sol.constant, dom.omega(a)))
        eqs[f] = sol
        for g, other in eqs.items():
            k = other.coeffs.get(f)
            if g != f and k is not None:
                eqs[g] = other.without(f).union(sol.scale(k, dom), dom)
    for f, expr in eqs.items():
        assert expr.closed_form, f"variables left in solution of {f}: {sorted(expr.coeffs)}"
    return {f: expr.constant for f, expr in eqs.items()}


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "class" or "pair"
    ident: int
    prefix: Tuple[str, ...]
    period: Tuple[str, ...]  # empty for finite witnesses


@dataclass(frozen=True)
class ProcedureResult:
    name: str
    finite: FinAbs
    infinite: InfAbs
    finite_ok: bool
    infinite_ok: bool
    diagnostics: Tuple[Diagnostic, ...]

    @property
    def passed(self) -> bool:
        return self.finite_ok and self.infinite_ok


@dataclass
class Verdict:
    """Analysis of a program against one policy."""

    domain: BuchiDomain
    results: Dict[str, ProcedureResult]
    entry: str

    @property
    def passed(self) -> bool:
        return self.results[self.entry].passed

    @property
    def finite(self) -> FinAbs:
        return self.results[self.entry].finite

    @property
    def infinite(self) -> InfAbs:
        return self.results[self.entry].infinite

    @property
    def diagnostics(self) -> Tuple[Diagnostic, ...]:
        return self.results[self.entry].diagnostics


def _judge(name: str, dom: BuchiDomain, u: FinAbs, v: InfAbs) -> ProcedureResult:
    diags: List[Diagnostic] = []
    for c in sorted(u):
        if not dom.class_accepted(c):
            diags.append(Diagnostic("class", c, dom.table.representatives[c], ()))
    for p in sorted(v):
        if not dom.pair_accepted(p):
            pre, per = dom.pair_witness(p)
            diags.append(Diagnostic("pair", p, pre, per))
    finite_ok = not any(d.kind == "class" for d in diags)
    infinite_ok = not any(d.kind == "pair" for d in diags)
    return ProcedureResult(name, u, v, finite_ok, infinite_ok, tuple(diags))


def analyze(program: Program, aut: Automaton, dom: Optional[BuchiDomain] = None) -> Dict[str, ProcedureResult]:
    validate(program, aut)
    dom = dom if dom is not None else BuchiDomain(aut)
    fin = infer_finite(program, dom)
    inf = solve_infinite(program, dom, fin)
    return {f: _judge(f, dom, fin[f], inf[f]) for f in program.names}


def check_policy(
    program: Program,
    aut: Automaton,
    entry: Optional[str] = None,
    dom: Optional[BuchiDomain] = None,
) -> Verdict:
    """Decide whether every trace of ``entry`` is accepted by ``aut``."""
    entry = entry if entry is not None else program.names[0]
    if entry not in program.procedures:
        raise ProgramError(f"unknown entry procedure {entry}")
    dom = dom if dom is not None else BuchiDomain(aut)
    return Verdict(dom, analyze(program, aut, dom), entry)
