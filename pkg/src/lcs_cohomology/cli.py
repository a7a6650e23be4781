"""Command-line front end.

Exit codes: 0 success, 1 invalid input or a failed check, 2 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Any, Callable, Sequence

import jsonschema
import numpy as np

from .abelian import FiniteAbelianGroup, GroupError, Homomorphism
from .actions import (
    ActionError,
    ActionPair,
    BudgetExceeded,
    EndoActionSpec,
    action_from_endos,
    enumerate_actions_trivial,
    trivial_action,
    validate_action,
)
from .builder import BuilderError, CocycleSeed, cocycle_from_seed, compute_h2
from .classify import classify
from .crosscheck import cross_check
from .cycleset import LCSError, LinearCycleSet, center, socle, trivial_lcs, validate_lcs
from .extension import ExtensionError, build_extension
from .oracle import DEFAULT_BUDGET, OracleBudgetExceeded, RawSpace

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2
DEFAULT_MAX_REPRESENTATIVES = 64


class ProblemError(ValueError):
    """Invalid input; ``errors`` holds (JSON pointer, message) pairs."""

    def __init__(self, errors: list[tuple[str, str]]):
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in errors))
        self.errors = errors


class CheckFailed(RuntimeError):
    """A computed report did not pass its own consistency checks."""

    def __init__(self, payload: dict, text: str):
        super().__init__("check failed")
        self.payload = payload
        self.text = text


def _pointer(path: Sequence) -> str:
    return "".join(f"/{str(p).replace('~', '~0').replace('/', '~1')}" for p in path)


def load_schema() -> dict:
    return json.loads(resources.files("lcs_cohomology").joinpath("schemas/problem.schema.json").read_text())


def _closest_alternative(error: jsonschema.ValidationError) -> jsonschema.ValidationError:
    """For a oneOf failure, the sub-error from the branch the input most resembles."""
    inst = error.instance
    keys = set(inst) if isinstance(inst, dict) else set()

    def score(e: jsonschema.ValidationError) -> tuple:
        shallow = e.validator in ("enum", "const", "type") and not e.relative_path
        branch = error.schema.get("oneOf", [])[e.schema_path[0]] if e.schema_path else {}
        overlap = len(keys & set(branch.get("properties", {}))) if isinstance(branch, dict) else 0
        return (shallow, -overlap, -len(e.absolute_path), e.message)

    return min(error.context, key=score)


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    found = []
    for e in validator.iter_errors(doc):
        if e.context:
            e = _closest_alternative(e)
        found.append((_pointer(e.absolute_path), e.message))
    if found:
        raise ProblemError(sorted(set(found)))


# --------------------------------------------------------------------------
# problem assembly


@dataclass
class Problem:
    H: LinearCycleSet
    I: FiniteAbelianGroup
    actions: list[ActionPair]
    task: dict


def _group(doc: dict) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(doc["orders"])


def _cycle_set(doc: dict) -> LinearCycleSet:
    G = _group(doc)
    dot = doc.get("dot", "trivial")
    if dot == "trivial":
        return trivial_lcs(G)
    table = np.array(dot, dtype=object)
    if table.shape != (G.order, G.order):
        raise ProblemError([("/H/dot", f"expected a {G.order} x {G.order} table")])
    try:
        return validate_lcs(G, np.array(dot, dtype=np.int64))
    except LCSError as exc:
        raise ProblemError([("/H/dot", str(exc))]) from exc


def _endo(I: FiniteAbelianGroup, M, where: str) -> Homomorphism:
    arr = np.array(M, dtype=object)
    if arr.shape != (I.rank, I.rank) and not (I.rank == 0 and arr.size == 0):
        raise ProblemError([(where, f"expected a {I.rank} x {I.rank} matrix")])
    try:
        return Homomorphism(I, I, np.array(M, dtype=np.int64).reshape(I.rank, I.rank))
    except GroupError as exc:
        raise ProblemError([(where, str(exc))]) from exc


def _actions(doc: Any, H: LinearCycleSet, I: FiniteAbelianGroup, task: dict, budget: int) -> list[ActionPair]:
    if doc is None or doc == "trivial":
        return [trivial_action(H, I)]
    if doc == "enumerate":
        if not H.is_trivial:
            raise ProblemError([("/action", "enumeration needs a trivial H; give explicit tables instead")])
        specs = enumerate_actions_trivial(H, I, task.get("restrict_yleft_zero", False), budget)
        return [action_from_endos(H, I, s) for s in specs]
    try:
        if "A" in doc:
            n = H.additive.rank
            if not H.is_trivial:
                raise ProblemError([("/action", "A/B matrices describe actions of a trivial H only")])
            for key in ("A", "B"):
                if len(doc[key]) != n:
                    raise ProblemError([(f"/action/{key}", f"expected {n} matrices, one per cyclic factor of H")])
            A = tuple(_endo(I, M, f"/action/A/{i}") for i, M in enumerate(doc["A"]))
            B = tuple(_endo(I, M, f"/action/B/{i}") for i, M in enumerate(doc["B"]))
            return [action_from_endos(H, I, EndoActionSpec(A, B))]
        return [validate_action(H, I, np.array(doc["diamond"], dtype=np.int64), np.array(doc["yleft"], dtype=np.int64))]
    except ActionError as exc:
        raise ProblemError([("/action", f"{exc} (identity: {exc.identity}, witness: {list(exc.witness)})")]) from exc


def load_problem(doc: Any, budget: int = DEFAULT_BUDGET) -> Problem:
    validate_document(doc)
    H = _cycle_set(doc["H"])
    I = _group(doc["I"])
    task = doc.get("task", {})
    return Problem(H, I, _actions(doc.get("action"), H, I, task, budget), task)


# --------------------------------------------------------------------------
# descriptions


def _group_name(G: FiniteAbelianGroup) -> str:
    return " + ".join(f"Z{d}" for d in G.orders) if G.rank else "0"


def describe_action(action: ActionPair) -> dict:
    if action.H.is_trivial:
        spec = action.endo_spec()
        return {
            "A": [M.matrix.tolist() for M in spec.A],
            "B": [M.matrix.tolist() for M in spec.B],
        }
    return {"diamond": action.diamond_tab.tolist(), "yleft": action.yleft_tab.tolist()}


def _action_cell(action: ActionPair) -> str:
    d = describe_action(action)
    if "A" in d:
        return f"A={d['A']} B={d['B']}"
    return "tables"


def seed_json(seed: CocycleSeed) -> dict:
    return {
        "vector": list(seed.to_vector()),
        "gamma": [list(g) for g in seed.gamma],
        "f": [[list(v) for v in row] for row in seed.f_gen],
    }


def _header(title: str, H: LinearCycleSet, I: FiniteAbelianGroup) -> list[str]:
    kind = "trivial" if H.is_trivial else "non-trivial"
    return [f"# {title}", "", f"H = {_group_name(H.additive)} ({kind}), I = {_group_name(I)}", ""]


def _md_table(head: list[str], rows: list[list[Any]]) -> list[str]:
    out = ["| " + " | ".join(head) + " |", "|" + "|".join("---" for _ in head) + "|"]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return out


def _map(fn: Callable, items: list, threads: int) -> list:
    # results in input order regardless of completion order
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# --------------------------------------------------------------------------
# commands; each returns (payload, markdown text)


def cmd_validate(problem: Problem, opts) -> tuple[dict, str]:
    H, I = problem.H, problem.I
    soc, cen = socle(H), center(H)
    payload = {
        "H": {
            "orders": list(H.additive.orders),
            "trivial": bool(H.is_trivial),
            "adjoint_invariant_factors": list(H.adjoint_orders),
            "socle_order": len(soc.members),
            "center_order": len(cen.members),
        },
        "I": {"orders": list(I.orders)},
        "actions": [describe_action(a) for a in problem.actions],
        "valid": True,
    }
    lines = _header("validate", H, I)
    lines += [
        "- cycle set axioms: ok",
        f"- adjoint group: {' x '.join(f'Z{d}' for d in H.adjoint_orders) or '0'}",
        f"- socle order: {len(soc.members)}, center order: {len(cen.members)}",
        f"- admissible actions given: {len(problem.actions)}",
    ]
    return payload, "\n".join(lines) + "\n"


def cmd_actions(problem: Problem, opts) -> tuple[dict, str]:
    acts = [describe_action(a) for a in problem.actions]
    lines = _header("actions", problem.H, problem.I)
    lines += _md_table(["#", "action", "yleft = 0"], [
        [i + 1, _action_cell(a), "yes" if not a.yleft_tab.any() else "no"] for i, a in enumerate(problem.actions)
    ])
    return {"count": len(acts), "actions": acts}, "\n".join(lines) + "\n"


def _h2_entry(problem: Problem, action: ActionPair, opts) -> dict:
    h2 = compute_h2(problem.H, problem.I, action, seed_order=opts.seed_order)
    limit = problem.task.get("max_representatives", DEFAULT_MAX_REPRESENTATIVES)
    reps = []
    for k, (coords, seed) in enumerate(h2.representatives()):
        if k >= limit:
            break
        reps.append({"coordinates": list(coords), "seed": seed_json(seed)})
    entry = {
        "action": describe_action(action),
        "order": h2.order,
        "invariant_factors": list(h2.invariant_factors),
        "representatives": reps,
        "representatives_truncated": h2.order > len(reps),
    }
    if opts.oracle:
        entry["oracle"] = _oracle_entry(problem, action, opts)
    return entry


def _oracle_entry(problem: Problem, action: ActionPair, opts) -> dict:
    space = RawSpace.of(problem.H.order)
    if problem.I.order ** space.n_vars > opts.budget:
        return {"skipped": "beyond the oracle budget"}
    return cross_check(problem.H, problem.I, action, budget=opts.budget, seed_order=opts.seed_order).to_json_dict()


def cmd_h2(problem: Problem, opts) -> tuple[dict, str]:
    entries = _map(lambda a: _h2_entry(problem, a, opts), problem.actions, opts.threads)
    lines = _header("H^2", problem.H, problem.I)
    head = ["#", "action", "invariant factors", "order"]
    if opts.oracle:
        head.append("oracle")
    rows = []
    for i, (a, e) in enumerate(zip(problem.actions, entries)):
        row = [i + 1, _action_cell(a), " x ".join(f"Z{d}" for d in e["invariant_factors"]) or "0", e["order"]]
        if opts.oracle:
            o = e["oracle"]
            row.append(o.get("skipped") or ("agrees" if o["counts_agree"] and o["bijective"] else "MISMATCH"))
        rows.append(row)
    lines += _md_table(head, rows)
    for i, e in enumerate(entries):
        lines += ["", f"## action {i + 1}: representative seeds", ""]
        lines += _md_table(["class", "seed vector"], [
            [tuple(r["coordinates"]), tuple(r["seed"]["vector"])] for r in e["representatives"]
        ])
        if e["representatives_truncated"]:
            lines.append(f"\n({e['order'] - len(e['representatives'])} more classes not listed)")
    payload = {"H": problem.H.additive.orders, "I": problem.I.orders, "results": entries}
    text = "\n".join(lines) + "\n"
    if opts.oracle and any(not e["oracle"].get("skipped") and not (e["oracle"]["counts_agree"] and e["oracle"]["bijective"])
                           for e in entries):
        raise CheckFailed(_jsonable(payload), text)
    return _jsonable(payload), text


def _seeds_for(problem: Problem, action: ActionPair, opts) -> list[CocycleSeed]:
    I = problem.I
    n = problem.H.additive.rank
    s = len(problem.H.adjoint_orders)
    given = problem.task.get("seeds")
    if given is not None:
        width = I.rank * (n + n * s)
        out = []
        for k, vec in enumerate(given):
            if len(vec) != width:
                raise ProblemError([(f"/task/seeds/{k}", f"expected {width} coordinates")])
            out.append(CocycleSeed.from_vector(I, n, s, vec))
        return out
    h2 = compute_h2(problem.H, I, action, seed_order=opts.seed_order)
    limit = problem.task.get("max_representatives", DEFAULT_MAX_REPRESENTATIVES)
    return [seed for k, (_, seed) in zip(range(limit), h2.representatives())]


def cmd_extensions(problem: Problem, opts) -> tuple[dict, str]:
    H, I = problem.H, problem.I
    results = []
    lines = _header("extensions", H, I)
    for i, action in enumerate(problem.actions):
        for k, seed in enumerate(_seeds_for(problem, action, opts)):
            try:
                pair = cocycle_from_seed(seed, H, I, action)
            except BuilderError as exc:
                raise ProblemError([(f"/task/seeds/{k}", str(exc))]) from exc
            ext = build_extension(H, I, action, pair)
            data = ext.to_json_dict()
            results.append({"action": describe_action(action), "seed": seed_json(seed), "extension": data})
            lines += [f"## action {i + 1}, seed {tuple(seed.to_vector())}", "",
                      f"additive group: {' x '.join(f'Z{d}' for d in data['additive_invariant_factors'])}", ""]
            carrier = [f"({','.join(map(str, y))}; {','.join(map(str, h))})" for y, h in data["carrier"]]
            lines += ["dot table on carrier pairs (y; h):", ""]
            lines += _md_table(["."] + carrier, [[carrier[r]] + [carrier[c] for c in row] for r, row in enumerate(data["dot"])])
            lines.append("")
    return {"extensions": results}, "\n".join(lines)


def cmd_oracle(problem: Problem, opts) -> tuple[dict, str]:
    def one(action):
        return cross_check(problem.H, problem.I, action, budget=opts.budget, seed_order=opts.seed_order)

    reports = _map(one, problem.actions, opts.threads)
    lines = _header("oracle cross-check", problem.H, problem.I)
    lines += _md_table(["#", "action", "oracle classes", "H^2 order", "bijection"], [
        [i + 1, _action_cell(a), r.oracle_count, r.structured_order, "yes" if r.bijective else "NO"]
        for i, (a, r) in enumerate(zip(problem.actions, reports))
    ])
    payload = {"results": [dict(action=describe_action(a), **r.to_json_dict()) for a, r in zip(problem.actions, reports)]}
    text = "\n".join(lines) + "\n"
    if not all(r.ok for r in reports):
        raise CheckFailed(payload, text)
    return payload, text


def cmd_classify(p: int, eta: int, r: int, yleft_zero: bool, opts) -> tuple[dict, str]:
    if not yleft_zero:
        raise ProblemError([("", "the classification covers yleft = 0 only")])
    rep = classify(p, eta, r, seed_order=opts.seed_order, threads=opts.threads)
    lines = [f"# classification: H = Z{p ** eta} (trivial), I = Z{p ** r}, yleft = 0", "",
             f"regime: {rep.regime}", f"unit roots a: {list(rep.roots)}", ""]
    lines += _md_table(["a", "case", "k", "parameter set size", "H^2 order", "invariant factors", "agrees"], [
        [c.a, c.rule.label, c.rule.k, c.stated_count, c.h2_order,
         " x ".join(f"Z{d}" for d in c.invariant_factors) or "0", "yes" if c.ok else "NO"]
        for c in rep.cases
    ])
    for c in rep.cases:
        lines += ["", f"## a = {c.a}", "",
                  f"(gamma, f0) in {{{', '.join(str(tuple(x)) for x in c.rule.pairs)}}}", "",
                  "h <> y = m_h y and f(h, h') = c_h f0 h' with", ""]
        lines += _md_table(["h"] + [str(h) for h in range(len(c.diamond_multipliers))],
                           [["m_h"] + list(c.diamond_multipliers), ["c_h"] + list(c.f_multipliers)])
    text = "\n".join(lines) + "\n"
    payload = rep.to_json_dict()
    if not rep.ok:
        raise CheckFailed(payload, text)
    return payload, text


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


# --------------------------------------------------------------------------
# entry point

COMMANDS = {
    "validate": cmd_validate,
    "actions": cmd_actions,
    "h2": cmd_h2,
    "extensions": cmd_extensions,
    "oracle": cmd_oracle,
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("md", "json"), default="md")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle and enumeration budget")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed-order", choices=("lex", "snf"), default="lex")
    common.add_argument("--oracle", action="store_true", help="cross-check H^2 by brute force when feasible")
    ap = argparse.ArgumentParser(prog="lcs-cohomology", description="Extensions of linear cycle sets by trivial ones.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=f"{name} for a problem file ('-' reads stdin)")
        sp.add_argument("problem")
    run = sub.add_parser("run", parents=[common], help="dispatch on the problem's task.kind")
    run.add_argument("problem")
    cl = sub.add_parser("classify", parents=[common], help="cyclic p-group classification table")
    cl.add_argument("p", type=int)
    cl.add_argument("eta", type=int)
    cl.add_argument("r", type=int)
    cl.add_argument("--yleft-zero", dest="yleft_zero", action="store_true", default=True)
    cl.add_argument("--no-yleft-zero", dest="yleft_zero", action="store_false")
    return ap


def _read(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError([("", f"not valid JSON: {exc}")]) from exc


def _emit(payload: dict, text: str, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    else:
        stream.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "classify":
            if args.p < 2 or args.eta < 1 or args.r < 1:
                raise ProblemError([("", "need p >= 2, eta >= 1, r >= 1")])
            payload, text = cmd_classify(args.p, args.eta, args.r, args.yleft_zero, args)
        else:
            problem = load_problem(_read(args.problem), args.budget)
            kind = problem.task.get("kind", "h2") if args.command == "run" else args.command
            payload, text = COMMANDS[kind](problem, args)
    except ProblemError as exc:
        for ptr, msg in exc.errors:
            print(f"error: {ptr or '/'}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, OracleBudgetExceeded) as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (LCSError, ActionError, BuilderError, ExtensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CheckFailed as exc:
        _emit(exc.payload, exc.text, args.format, sys.stdout)
        print("error: consistency check failed", file=sys.stderr)
        return EXIT_INVALID
    _emit(payload, text, args.format, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
