"""Twist operations, virtual-state data, and multi-index bookkeeping.

A twist is a parameter involution producing non-normalizable negative-energy
solutions of the original system. Their polynomial parts seed the Casoratian
construction. Continuous Hahn has two twist types (I acts on a1, II on a2);
Meixner-Pollaczek has a single one, encoded here as type I throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (DegreeOutOfRange, DuplicateDegree, InvalidParams,
                     OutOfRange, UnsupportedFamily)
from .polyalg import CPoly, CScalar
from .systems import CH, MP, ParamSet, classical_poly, validate_params

TYPE_I = "I"
TYPE_II = "II"


def twist(lam: ParamSet, ttype: str = TYPE_I) -> ParamSet:
    """The parameter involution producing virtual states."""
    if lam.family == CH:
        a1, a2 = lam.a
        if ttype == TYPE_I:
            return ParamSet(CH, (CScalar(1) - a1.conj(), a2))
        if ttype == TYPE_II:
            return ParamSet(CH, (a1, CScalar(1) - a2.conj()))
        raise UnsupportedFamily(f"continuous Hahn twist type {ttype!r}")
    if lam.family == MP:
        if ttype != TYPE_I:
            raise UnsupportedFamily("Meixner-Pollaczek has a single twist type")
        return ParamSet(MP, (CScalar(1) - lam.a[0],), lam.phi)
    raise UnsupportedFamily(f"no twist for family {lam.family!r}")


def tilde_shift(lam: ParamSet, ttype: str, beta=1) -> ParamSet:
    """lam + beta * delta-tilde, the shift conjugate to the twist."""
    half = CScalar.of(beta) * CScalar(Fraction(1, 2))
    if lam.family == CH:
        a1, a2 = lam.a
        if ttype == TYPE_I:
            return ParamSet(CH, (a1 - half, a2 + half))
        if ttype == TYPE_II:
            return ParamSet(CH, (a1 + half, a2 - half))
        raise UnsupportedFamily(f"continuous Hahn twist type {ttype!r}")
    if lam.family == MP:
        if ttype != TYPE_I:
            raise UnsupportedFamily("Meixner-Pollaczek has a single twist type")
        return ParamSet(MP, (lam.a[0] - half,), lam.phi)
    raise UnsupportedFamily(f"no twist shift for family {lam.family!r}")


def alpha_prime(lam: ParamSet, ttype: str = TYPE_I) -> CScalar:
    """The additive constant linking the twisted and original Hamiltonians."""
    if lam.family == CH:
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        if ttype == TYPE_I:
            return -(p - 1) * q
        if ttype == TYPE_II:
            return -(q - 1) * p
        raise UnsupportedFamily(f"continuous Hahn twist type {ttype!r}")
    if lam.family == MP:
        return (CScalar(1) - lam.a[0] - lam.a[0]) * lam.phi.sin * 2
    raise UnsupportedFamily(lam.family)


def virtual_energy(lam: ParamSet, ttype: str, v: int) -> CScalar:
    """Energy of the degree-v virtual state; negative throughout the range."""
    if lam.family == CH:
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        if ttype == TYPE_I:
            return -(p - (v + 1)) * (q + v)
        if ttype == TYPE_II:
            return -(q - (v + 1)) * (p + v)
        raise UnsupportedFamily(f"continuous Hahn twist type {ttype!r}")
    if lam.family == MP:
        return (CScalar(v + 1) - lam.a[0] - lam.a[0]) * lam.phi.sin * 2
    raise UnsupportedFamily(lam.family)


def strict_floor(x) -> int:
    """Greatest integer strictly less than x (so strict_floor(3) == 2)."""
    n = math.floor(x)
    return n - 1 if n == x else n


def admissible_range(lam: ParamSet, ttype: str = TYPE_I) -> range:
    """Allowed virtual degrees 0..vmax for the given twist type."""
    validate_params(lam, deformable=True)
    if lam.family == CH:
        if ttype == TYPE_I:
            top = 2 * lam.a[0].re - 1
        elif ttype == TYPE_II:
            top = 2 * lam.a[1].re - 1
        else:
            raise UnsupportedFamily(f"continuous Hahn twist type {ttype!r}")
    elif lam.family == MP:
        if ttype != TYPE_I:
            raise UnsupportedFamily("Meixner-Pollaczek has a single twist type")
        top = 2 * lam.a[0].re - 1
    else:
        raise UnsupportedFamily(lam.family)
    return range(0, strict_floor(top) + 1)


def virtual_poly(lam: ParamSet, ttype: str, v: int) -> CPoly:
    """Polynomial part of the degree-v virtual state: P_v at twisted parameters."""
    if v not in admissible_range(lam, ttype):
        raise OutOfRange(f"virtual degree {v} outside {admissible_range(lam, ttype)}")
    return classical_poly(twist(lam, ttype), v)


# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------

def _perm_sign(seq) -> int:
    """Sign of the permutation sorting seq ascending (entries distinct)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[j] < seq[i]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class IndexSet:
    """Ordered multi-index of (type, degree) pairs labelling a deformation.

    ``entries`` fixes the Casoratian column order (type-I block first, each
    block in listed order); permuting entries within a block only flips the
    sign of the constructed polynomials. ``sign`` records the parity applied
    if the set was canonicalized relative to the order it was given in.
    """

    entries: tuple
    sign: int = 1

    @cached_property
    def degrees_I(self):
        return tuple(d for t, d in self.entries if t == TYPE_I)

    @cached_property
    def degrees_II(self):
        return tuple(d for t, d in self.entries if t == TYPE_II)

    @property
    def m1(self) -> int:
        return len(self.degrees_I)

    @property
    def m2(self) -> int:
        return len(self.degrees_II)

    @property
    def m(self) -> int:
        return len(self.entries)

    @cached_property
    def ell(self) -> int:
        """Degree of the denominator polynomial."""
        m = self.m
        return sum(d for _, d in self.entries) - m * (m - 1) // 2 + 2 * self.m1 * self.m2

    @property
    def even_degree(self) -> bool:
        """Whether ell is even, a necessary condition for hermiticity."""
        return self.ell % 2 == 0

    def label(self) -> str:
        return "{" + ",".join(f"{t}:{d}" for t, d in self.entries) + "}"


def parse_index_tokens(spec) -> list:
    """Turn "I:2,II:0", ["I:2", "II:0"], "0,1", or (type, degree) pairs
    into a list of (type, degree) entries; bare degrees mean type I."""
    if isinstance(spec, str):
        spec = [tok for tok in spec.split(",") if tok.strip()]
    out = []
    for item in spec:
        if isinstance(item, tuple):
            t, d = item
            out.append((str(t).upper(), int(d)))
        elif isinstance(item, int):
            out.append((TYPE_I, item))
        else:
            tok = str(item).strip()
            if ":" in tok:
                t, d = tok.split(":")
                out.append((t.strip().upper(), int(d)))
            else:
                out.append((TYPE_I, int(tok)))
    return out


def validate_index_set(spec, lam: ParamSet, canonicalize: bool = True) -> IndexSet:
    """Check degrees and ranges, then fix the block order.

    Canonical order sorts each type block ascending and records the sign of
    the permutation applied; pass canonicalize=False to keep the given
    in-block order (the reduction identities are stated for specific orders).
    """
    entries = parse_index_tokens(spec)
    for t, d in entries:
        if t not in (TYPE_I, TYPE_II):
            raise InvalidParams(f"unknown virtual-state type {t!r}")
        if t == TYPE_II and lam.family == MP:
            raise UnsupportedFamily("Meixner-Pollaczek index sets are single-type")
        if d < 0:
            raise DegreeOutOfRange(f"negative degree {d}")
    by_type = {TYPE_I: [d for t, d in entries if t == TYPE_I],
               TYPE_II: [d for t, d in entries if t == TYPE_II]}
    for t, ds in by_type.items():
        if len(set(ds)) != len(ds):
            raise DuplicateDegree(f"type {t} degrees {ds} repeat")
        if ds:
            rng = admissible_range(lam, t)
            for d in ds:
                if d not in rng:
                    raise DegreeOutOfRange(
                        f"type {t} degree {d} outside admissible {rng}")
    sign = 1
    ordered = [(TYPE_I, d) for d in by_type[TYPE_I]] + \
              [(TYPE_II, d) for d in by_type[TYPE_II]]
    if canonicalize:
        sign = _perm_sign(by_type[TYPE_I]) * _perm_sign(by_type[TYPE_II])
        ordered = [(TYPE_I, d) for d in sorted(by_type[TYPE_I])] + \
                  [(TYPE_II, d) for d in sorted(by_type[TYPE_II])]
    return IndexSet(tuple(ordered), sign)
