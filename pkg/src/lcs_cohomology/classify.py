"""Extension classes of a trivial cyclic p-group by a cyclic p-group with yleft = 0.

For H = Z_{p^eta} and I = Z_{p^r}, the action is multiplication by powers
of a unit root a.  Each a falls in one case of a closed-form case analysis
that lists a parameter set of seeds (gamma, f0).  Every case is computed
numerically and checked against that list: the counts must agree, every
listed seed must be a cocycle seed, and the list must hit every class
exactly once.  The f of every listed seed is also compared with
f(h, h') = h' * (1 + a + ... + a^(h-1)) * f0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .abelian import FiniteAbelianGroup, Homomorphism
from .actions import EndoActionSpec, action_from_endos, unit_roots
from .builder import CocycleSeed, cocycle_from_seed, compute_h2
from .cycleset import trivial_lcs

# listed seeds whose f table is compared with the closed form
F_CHECK_LIMIT = 16


@dataclass(frozen=True)
class CaseRule:
    label: str
    k: int
    u: int | None
    s: int | None
    pairs: tuple[tuple[int, int], ...]  # (gamma, f0) mod p^r, as listed


@dataclass
class ClassificationCase:
    a: int
    rule: CaseRule
    h2_order: int
    invariant_factors: tuple[int, ...]
    listed_in_kernel: bool
    listed_bijective: bool
    f_formula_agrees: bool
    diamond_multipliers: tuple[int, ...]  # h <> y = m_h y
    f_multipliers: tuple[int, ...]  # f(h, h') = c_h f0 h'

    @property
    def stated_count(self) -> int:
        return len(self.rule.pairs)

    @property
    def ok(self) -> bool:
        return (self.h2_order == self.stated_count and self.listed_in_kernel
                and self.listed_bijective and self.f_formula_agrees)

    def to_json_dict(self) -> dict:
        return {
            "a": self.a,
            "case": self.rule.label,
            "k": self.rule.k,
            "u": self.rule.u,
            "s": self.rule.s,
            "parameter_set": [list(p) for p in self.rule.pairs],
            "stated_count": self.stated_count,
            "h2_order": self.h2_order,
            "invariant_factors": list(self.invariant_factors),
            "listed_in_kernel": self.listed_in_kernel,
            "listed_bijective": self.listed_bijective,
            "f_formula_agrees": self.f_formula_agrees,
            "diamond_multipliers": list(self.diamond_multipliers),
            "f_multipliers": list(self.f_multipliers),
        }


@dataclass
class ClassificationReport:
    p: int
    eta: int
    r: int
    regime: str
    stated_roots: tuple[int, ...]
    roots: tuple[int, ...]
    cases: list[ClassificationCase]

    @property
    def roots_agree(self) -> bool:
        return self.stated_roots == self.roots

    @property
    def ok(self) -> bool:
        return self.roots_agree and all(c.ok for c in self.cases)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "eta": self.eta,
            "r": self.r,
            "regime": self.regime,
            "unit_roots": list(self.roots),
            "stated_unit_roots": list(self.stated_roots),
            "cases": [c.to_json_dict() for c in self.cases],
        }


def _split(p: int, k: int) -> tuple[int, int]:
    """k = p^u s with p not dividing s."""
    u = 0
    while k % p == 0:
        k //= p
        u += 1
    return u, k


def _pairs(mod: int, ranges: tuple[int, int], fn: Callable[[int, int], tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out = {tuple(v % mod for v in fn(z1, z2)) for z1 in range(ranges[0]) for z2 in range(ranges[1])}
    return tuple(sorted(out))


def regime(p: int, eta: int, r: int) -> str:
    if p != 2:
        return "r <= eta" if r <= eta else "eta < r"
    if r <= min(2, eta):
        return "r <= eta"
    if (eta, r) == (1, 2):
        return "eta < r"
    if 3 <= r <= eta + 1:
        return "p = 2, 3 <= r <= eta + 1"
    return "p = 2, r > eta + 1"


def stated_roots(p: int, eta: int, r: int) -> tuple[int, ...]:
    """The admissible multipliers a as parametrized in each regime."""
    mod = p**r
    reg = regime(p, eta, r)
    if reg == "r <= eta":
        vals = [1 + p * k for k in range(p ** (r - 1))]
    elif reg == "eta < r":
        vals = [1 + p ** (r - eta) * k for k in range(p**eta)]
    elif reg == "p = 2, 3 <= r <= eta + 1":
        vals = [sg * (1 + 4 * k) for k in range(2 ** (r - 2)) for sg in (1, -1)]
    else:
        vals = [sg * (1 + 2 ** (r - eta) * k) for k in range(2**eta) for sg in (1, -1)]
    return tuple(sorted({v % mod for v in vals}))


def case_rule(p: int, eta: int, r: int, a: int) -> CaseRule:
    """The case containing a and its listed parameter set of seeds (gamma, f0)."""
    mod = p**r
    a %= mod
    reg = regime(p, eta, r)
    P = lambda e: p**e

    if reg == "r <= eta":
        k = (a - 1) // p
        if k == 0:
            return CaseRule("k = 0", 0, None, None, _pairs(mod, (mod, mod), lambda z1, z2: (z1, z2)))
        u, s = _split(p, k)
        return CaseRule("k != 0", k, u, s, _pairs(mod, (P(u + 1), P(u + 1)), lambda z1, z2: (P(r - u - 1) * z1, z2)))

    if reg == "eta < r":
        k = (a - 1) // P(r - eta)
        if k == 0:
            return CaseRule("k = 0", 0, None, None,
                            _pairs(mod, (P(eta), P(eta)), lambda z1, z2: (z1, P(r - eta) * z2)))
        u, s = _split(p, k)
        if r + u >= 2 * eta and p != 2:
            return CaseRule("p odd, k != 0, r + u >= 2 eta", k, u, s,
                            _pairs(mod, (P(u), P(eta)), lambda z1, z2: (P(eta - u) * z1, P(r - eta) * (z2 + s * z1))))
        if r + u >= 2 * eta:
            return CaseRule("p = 2, k != 0, r + u >= 2 eta", k, u, s,
                            _pairs(mod, (2, 2), lambda z1, z2: (z1, 2 * z2 + z1)))
        return CaseRule("k != 0, r + u < 2 eta", k, u, s,
                        _pairs(mod, (P(r - eta + u), P(u)), lambda z1, z2: (P(eta - u) * (z1 + z2), P(r - eta) * s * z2)))

    minus_one = lambda z1, z2: (2 ** (r - 1) * z1 - 2 ** (eta - 1) * z2, z2)
    if reg == "p = 2, 3 <= r <= eta + 1":
        plus = a % 4 == 1
        k = ((a if plus else mod - a) - 1) // 4
        if k == 0 and plus:
            if r <= eta:
                return CaseRule("a = 1", 0, None, None, _pairs(mod, (mod, mod), lambda z1, z2: (z1, z2)))
            return CaseRule("a = 1", 0, None, None,
                            _pairs(mod, (2 ** (r - 1), 2 ** (r - 1)), lambda z1, z2: (z1, 2 * z2)))
        if k == 0:
            return CaseRule("a = -1", 0, None, None, _pairs(mod, (2, 2), minus_one))
        u, s = _split(2, k)
        if plus:
            if r <= eta:
                return CaseRule("a = 1 + 4k, k != 0", k, u, s,
                                _pairs(mod, (2 ** (u + 2), 2 ** (u + 2)), lambda z1, z2: (2 ** (r - u - 2) * z1, z2)))
            return CaseRule("a = 1 + 4k, k != 0", k, u, s,
                            _pairs(mod, (2 ** (u + 2), 2 ** (u + 1)),
                                   lambda z1, z2: (2 ** (r - u - 2) * z1 + 2 ** (eta - u - 1) * z2, 2 * z2)))
        return CaseRule("a = -1 - 4k, k != 0", k, u, s, _pairs(mod, (2, 2), minus_one))

    step = 2 ** (r - eta)
    plus = (a - 1) % step == 0
    k = ((a if plus else mod - a) - 1) // step
    if k == 0:
        if plus:
            return CaseRule("a = 1", 0, None, None,
                            _pairs(mod, (2**eta, 2**eta), lambda z1, z2: (z1, step * z2)))
        return CaseRule("a = -1", 0, None, None, _pairs(mod, (2, 2), minus_one))
    u, s = _split(2, k)
    if plus and r + u < 2 * eta:
        return CaseRule("a = 1 + 2^(r-eta) k, k != 0, r + u < 2 eta", k, u, s,
                        _pairs(mod, (2 ** (r + u - eta), 2**u), lambda z1, z2: (2 ** (eta - u) * (z1 + z2), step * s * z2)))
    if plus:
        return CaseRule("a = 1 + 2^(r-eta) k, k != 0, r + u >= 2 eta", k, u, s,
                        _pairs(mod, (2**u, 2**eta), lambda z1, z2: (2 ** (eta - u) * z1, step * (s * z1 + z2))))
    if k % 2 == 0:
        return CaseRule("a = -1 - 2^(r-eta) k, k != 0 even", k, u, s, _pairs(mod, (2, 2), minus_one))
    return CaseRule("a = -1 - 2^(r-eta) k, k odd", k, u, s, _pairs(mod, (2, 1), lambda z1, z2: (2 ** (r - 1) * z1, 0)))


def classify_case(p: int, eta: int, r: int, a: int, seed_order: str = "lex") -> ClassificationCase:
    d, mod = p**eta, p**r
    H = trivial_lcs(FiniteAbelianGroup([d]))
    I = FiniteAbelianGroup([mod])
    spec = EndoActionSpec((Homomorphism.scalar(I, a),), (Homomorphism.zero(I, I),))
    action = action_from_endos(H, I, spec)
    h2 = compute_h2(H, I, action, seed_order=seed_order)
    rule = case_rule(p, eta, r, a)
    T = h2.bundle.T
    seeds = [CocycleSeed.from_vector(I, 1, 1, [g, f0]) for g, f0 in rule.pairs]
    in_kernel = all(not any(T(s.to_vector())) for s in seeds)
    bijective = False
    if in_kernel:
        coords = {h2.coordinates(s) for s in seeds}
        bijective = len(coords) == len(seeds) == h2.order
    mult = [pow(a, h, mod) for h in range(d)]
    csum = np.concatenate([[0], np.cumsum(mult)[:-1]]) % mod  # c_h = 1 + a + ... + a^(h-1)
    f_ok = True
    if in_kernel:
        hh, ll = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
        for s, (_, f0) in zip(seeds[:F_CHECK_LIMIT], rule.pairs[:F_CHECK_LIMIT]):
            expected = (csum[hh] * f0 * ll) % mod
            if not np.array_equal(cocycle_from_seed(s, H, I, action).f_table, expected):
                f_ok = False
                break
    else:
        f_ok = False
    return ClassificationCase(
        a, rule, h2.order, h2.invariant_factors, in_kernel, bijective, f_ok,
        tuple(mult), tuple(int(c) for c in csum),
    )


def classify(p: int, eta: int, r: int, seed_order: str = "lex", threads: int = 1) -> ClassificationReport:
    """All extension classes for H = Z_{p^eta} (trivial), I = Z_{p^r}, yleft = 0."""
    roots = tuple(unit_roots(p, r, eta))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            cases = list(pool.map(lambda a: classify_case(p, eta, r, a, seed_order), roots))
    else:
        cases = [classify_case(p, eta, r, a, seed_order) for a in roots]
    return ClassificationReport(p, eta, r, regime(p, eta, r), stated_roots(p, eta, r), roots, cases)
