"""Differential test: brute-force classes against the seed-based H^2.

Kept apart from :mod:`oracle` so the oracle itself never imports the
structured machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import FiniteAbelianGroup
from .actions import ActionPair
from .builder import cocycle_from_seed, compute_h2
from .cycleset import LinearCycleSet
from .extension import ExtensionBatch, build_extension, build_extension_tables, equivalence_witnesses
from .oracle import DEFAULT_BUDGET, classify_raw


@dataclass
class CrossCheckReport:
    oracle_count: int
    structured_order: int
    invariant_factors: tuple[int, ...]
    # matches[c] = structured representatives equivalent to oracle class c
    matches: list[list[int]] = field(repr=False)
    # oracle class found for each representative by direct table lookup
    lookup: list[int | None] = field(repr=False)
    problems: list[str]

    @property
    def counts_agree(self) -> bool:
        return self.oracle_count == self.structured_order

    @property
    def bijective(self) -> bool:
        hit = [m[0] for m in self.matches if len(m) == 1]
        return (
            len(hit) == len(self.matches) == self.structured_order
            and len(set(hit)) == len(hit)
        )

    @property
    def ok(self) -> bool:
        return self.counts_agree and self.bijective and not self.problems

    def to_json_dict(self) -> dict:
        return {
            "oracle_count": self.oracle_count,
            "h2_order": self.structured_order,
            "invariant_factors": list(self.invariant_factors),
            "counts_agree": self.counts_agree,
            "bijective": self.bijective,
            "problems": list(self.problems),
        }


def cross_check(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair,
                budget: int = DEFAULT_BUDGET, seed_order: str = "lex") -> CrossCheckReport:
    """Compare the oracle with compute_h2 and match classes to representatives.

    Every oracle class is represented by its smallest raw cocycle; the
    extension built from it is tested with the equivalence search against
    every extension built from a structured representative.
    """
    classes = classify_raw(H, I, action, budget)
    h2 = compute_h2(H, I, action, seed_order=seed_order)
    problems: list[str] = []
    reps = [cocycle_from_seed(seed, H, I, action) for _, seed in h2.representatives()]
    structured = ExtensionBatch([build_extension(H, I, action, p) for p in reps])

    labels = classes.labels
    class_ids = np.unique(labels)
    label_pos = {int(c): k for k, c in enumerate(class_ids)}
    lookup: list[int | None] = []
    for p in reps:
        row = classes.index_of(classes.space.vector(p.alpha.table, p.f_table))
        if row is None:
            problems.append(f"representative {p.seed} is not among the raw cocycles")
            lookup.append(None)
        else:
            lookup.append(label_pos[int(labels[row])])

    matches: list[list[int]] = []
    for k, c in enumerate(class_ids):
        beta, f = classes.space.tables(classes.rows[c])
        E = build_extension_tables(H, I, action, beta, f)
        found = [j for j, w in enumerate(equivalence_witnesses(E, structured)) if w is not None]
        matches.append(found)
        for j in found:
            if lookup[j] is not None and lookup[j] != k:
                problems.append(f"representative {j} matched class {k} but lies in class {lookup[j]}")
    return CrossCheckReport(
        len(class_ids), h2.order, h2.invariant_factors, matches, lookup, problems
    )
