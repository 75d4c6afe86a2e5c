"""Axis-parallel recovery sets R_{p,i} and recovery of f(p) by interpolation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, TYPE_CHECKING

from .code import CartesianCode, EvaluationDomain, Point
from .errors import DegreeTooLarge, DomainError

if TYPE_CHECKING:
    from .batch import QueryRecoverySet


@dataclass(frozen=True)
class RecoverySet:
    """R_{anchor, direction}; direction 0 is direct access."""

    anchor: Point
    direction: int
    members: tuple[Point, ...]

    @property
    def is_direct(self) -> bool:
        return self.direction == 0


def recovery_set(domain: EvaluationDomain, p: Sequence[int], i: int) -> RecoverySet:
    p = tuple(p)
    if p not in domain:
        raise DomainError(f"point {p} is not in X")
    if not 0 <= i <= domain.mu:
        raise DomainError(f"direction {i} outside 0..{domain.mu}")
    if i == 0:
        return RecoverySet(p, 0, (p,))
    return RecoverySet(p, i, domain.line(p, i))


def lagrange_recover(
    domain: EvaluationDomain,
    p: Sequence[int],
    i: int,
    values: Mapping[Sequence[int], int],
    rho: int,
) -> int:
    """Value at p of the interpolant through ``values`` along coordinate i.

    ``values`` must cover R_{p,i} exactly.  With values taken from some f of
    total degree <= rho < |A_i| - 1 the result is f(p).
    """
    p = tuple(p)
    if p not in domain:
        raise DomainError(f"point {p} is not in X")
    if not 1 <= i <= domain.mu:
        raise DomainError(f"interpolation needs a direction in 1..{domain.mu}, got {i}")
    size = domain.sizes[i - 1]
    if not rho + 1 < size:
        raise DegreeTooLarge(f"degree too large for this direction: rho={rho}, |A_{i}|={size}")
    members = domain.line(p, i)
    given = {tuple(k): v for k, v in values.items()}
    if set(given) != set(members):
        missing = sorted(set(members) - set(given))
        extra = sorted(set(given) - set(members))
        raise DomainError(f"evaluations do not match R_{{p,{i}}}: missing {missing}, extra {extra}")

    F = domain.field
    j = i - 1
    target = p[j]
    xs = [m[j] for m in members]
    acc = 0
    for a, m in zip(xs, members):
        num, den = 1, 1
        for b in xs:
            if b != a:
                num = F.mul(num, F.sub(target, b))
                den = F.mul(den, F.sub(a, b))
        acc = F.add(acc, F.mul(given[m], F.div(num, den)))
    return acc


def recover_query_values(code: CartesianCode, codeword: Sequence[int], qrs: "QueryRecoverySet") -> list[int]:
    """Read or interpolate the codeword coordinate of every query position."""
    dom = code.domain
    if len(codeword) != dom.n:
        raise DomainError(f"codeword length {len(codeword)} != n = {dom.n}")
    out = []
    for r in qrs.sets:
        if r.direction == 0:
            out.append(codeword[dom.index(r.anchor)])
        else:
            vals = {m: codeword[dom.index(m)] for m in r.members}
            out.append(lagrange_recover(dom, r.anchor, r.direction, vals, code.rho))
    return out
