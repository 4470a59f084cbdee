"""``posetmap`` command-line front end.

Exit codes: 0 success / holds / valid, 1 fails / invalid, 2 usage or format
error, 3 a theorem-backed guarantee failed (or the window oracle disagrees
with a symbolic verdict).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import algebra, oracle, pmap, regions
from .errors import (
    DimensionMismatch,
    InvalidElement,
    PreconditionError,
    TheoremViolation,
    UnsupportedDimension,
)
from .serialize import SCHEMA_VERSION, FormatError, dump, dumps, load, to_document

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_THEOREM = 0, 1, 2, 3
DEFAULT_SELFTEST_SEED = 20240101


@dataclass
class Outcome:
    """Exit code, JSON payload and human-readable text of one command."""

    code: int
    payload: dict
    text: str = ""


def _perm1(p) -> list:
    return [t + 1 for t in p]


def _points(pts) -> list:
    return [list(p) for p in pts]


def _load(args, path):
    alpha = load(path)
    if args.dim is not None and alpha.dim != args.dim:
        raise DimensionMismatch(f"{path} has dimension {alpha.dim}, expected {args.dim}")
    return alpha


def _cross_check(args, alpha, report=None) -> dict:
    if args.window is None:
        return {}
    report = report or pmap.validate(alpha)
    bad = oracle.disagreements(alpha, report, args.window)
    if bad:
        raise TheoremViolation(f"window oracle disagrees on: {', '.join(bad)}")
    return {"window": args.window, "oracle_agrees": True}


def _require_valid(alpha, name="input"):
    rep = pmap.validate(alpha)
    if not rep.valid:
        raise InvalidElement(f"{name} is not a member: fails {', '.join(rep.failures())}")
    return rep


# ---------------------------------------------------------------- commands


def cmd_validate(args):
    alpha = _load(args, args.file)
    rep = pmap.validate(alpha)
    payload = {"valid": rep.valid, "bound": rep.bound,
               **{k: getattr(rep, k) for k in oracle.VERDICTS},
               "witnesses": {k: _points(v) for k, v in rep.witnesses.items()}}
    payload.update(_cross_check(args, alpha, rep))
    lines = [f"{k}: {'yes' if getattr(rep, k) else 'NO'}" for k in oracle.VERDICTS]
    if rep.valid:
        return Outcome(EXIT_OK, payload, "\n".join(lines + ["valid"]))
    for k, w in rep.witnesses.items():
        print(f"{k} witness: {' '.join(map(str, w))}", file=sys.stderr)
    return Outcome(EXIT_FAIL, payload, "\n".join(lines + ["invalid"]))


def cmd_compose(args):
    a, b = _load(args, args.first), _load(args, args.second)
    out = pmap.compose(a, b)
    extra = {}
    if args.window is not None:
        extra = _cross_check(args, out)
        M = args.window
        ta, tb = oracle.materialize(a, M).entries, oracle.materialize(b, M).entries
        tab = oracle.materialize(out, M).entries
        for x, y in ta.items():
            if y in tb and tab.get(x) != tb[y]:
                raise TheoremViolation(f"composition disagrees with tables at {x}")
    if args.output:
        dump(out, args.output)
    return Outcome(EXIT_OK, {"result": to_document(out), **extra},
                   "" if args.output else dumps(out).rstrip())


def cmd_equals(args):
    a, b = _load(args, args.first), _load(args, args.second)
    w = pmap.difference_witness(a, b)
    payload = {"equal": w is None, "witness": None if w is None else list(w)}
    if args.window is not None:
        match = oracle.brute_checks(oracle.materialize(a, args.window)).pointwise_match(b)
        if w is None and not match:
            raise TheoremViolation("maps equal symbolically but differ on the window")
        if w is not None and max(w) <= args.window and match:
            raise TheoremViolation("difference witness not confirmed on the window")
        payload.update(window=args.window, oracle_agrees=True)
    if w is None:
        return Outcome(EXIT_OK, payload, "equal")
    print(f"differ at {w}: {pmap.evaluate(a, w)} vs {pmap.evaluate(b, w)}", file=sys.stderr)
    return Outcome(EXIT_FAIL, payload, "not equal")


def cmd_normalize(args):
    alpha = _load(args, args.file)
    _require_valid(alpha)
    sigma, normal = algebra.normalize(alpha)
    p = algebra.unit_perm(sigma)
    return Outcome(EXIT_OK, {"sigma": _perm1(p), "normalized": to_document(normal)},
                   f"sigma: {_perm1(p)}\n{dumps(normal).rstrip()}")


def cmd_n_alpha(args):
    alpha = _load(args, args.file)
    _require_valid(alpha)
    _, normal = algebra.normalize(alpha)
    n, w = algebra.n_alpha_witness(normal)
    return Outcome(EXIT_OK, {"n_alpha": n, "moved_below": None if w is None else list(w)},
                   f"n_alpha: {n}" + ("" if w is None else f"\nmoved point: {w}"))


def cmd_axis_perm(args):
    alpha = _load(args, args.file)
    _require_valid(alpha)
    p = algebra.axis_permutation(alpha).perm
    return Outcome(EXIT_OK, {"perm": _perm1(p)},
                   "axis permutation: " + " ".join(f"{i + 1}->{t + 1}" for i, t in enumerate(p)))


def cmd_idempotent(args):
    alpha = _load(args, args.file)
    _require_valid(alpha)
    if algebra.is_idempotent(alpha):
        comp = sorted(algebra.semilattice_iso(alpha))
        return Outcome(EXIT_OK, {"idempotent": True, "complement": _points(comp)},
                       f"idempotent; identity off {comp}")
    return Outcome(EXIT_FAIL, {"idempotent": False}, "not idempotent")


def cmd_green(args):
    a, b = _load(args, args.first), _load(args, args.second)
    _require_valid(a, args.first)
    _require_valid(b, args.second)
    w = algebra.green(args.relation, a, b)
    if w is None:
        return Outcome(EXIT_FAIL, {"relation": args.relation, "related": False},
                       f"not {args.relation}-related")
    payload = {"relation": args.relation, "related": True,
               "mu": None if w.mu is None else _perm1(w.mu),
               "nu": None if w.nu is None else _perm1(w.nu)}
    parts = [f"{k} = {payload[k]}" for k in ("mu", "nu") if payload[k] is not None]
    return Outcome(EXIT_OK, payload, f"{args.relation}-related; " + ", ".join(parts))


def cmd_class(args):
    alpha = _load(args, args.file)
    _require_valid(alpha)
    members = algebra.green_class(args.relation, alpha)
    docs = [to_document(m) for m in members]
    return Outcome(EXIT_OK, {"relation": args.relation, "size": len(members), "members": docs},
                   f"{args.relation}-class size {len(members)}\n"
                   + "\n".join(dumps(m).rstrip() for m in members))


def cmd_complements(args):
    alpha = _load(args, args.file)
    dc, rc = pmap.dom_complement(alpha), pmap.ran_complement(alpha)
    payload = {}
    lines = []
    for name, r in (("dom", dc), ("ran", rc)):
        if r.is_finite():
            pts = list(r.enumerate())
            payload[name] = _points(pts)
            lines.append(f"{name} complement ({len(pts)}): {' '.join(map(str, pts))}")
        else:
            payload[name] = None
            lines.append(f"{name} complement: infinite")
    code = EXIT_OK if dc.is_finite() and rc.is_finite() else EXIT_FAIL
    return Outcome(code, payload, "\n".join(lines))


def cmd_chain_cover(args):
    chains = regions.chain_cover((args.y1, args.y2, 1), [(1, 1, args.x3)])
    docs = [{"kind": c.kind, "fixed": {str(i + 1): v for i, v in c.fixed}, "free": c.free + 1}
            for c in chains]
    text = "\n".join(
        f"{c.kind}: " + ", ".join(f"x{i + 1}={v}" for i, v in c.fixed) + f"; x{c.free + 1} free"
        for c in chains)
    return Outcome(EXIT_OK, {"chains": docs, "count": len(chains)},
                   f"{len(chains)} chains\n{text}")


_POINT = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)")


def parse_points(text: str) -> list[tuple]:
    pts = [tuple(int(c) for c in m.group(1).split(",")) for m in _POINT.finditer(text)]
    if not pts or _POINT.sub("", text).strip(" ,;"):
        raise FormatError("POINTS", f"expected points like '(2,1,1) (1,3,1)', got {text!r}")
    return pts


def cmd_upset_cofinite(args):
    pts = parse_points(args.points)
    dim = len(pts[0])
    if any(len(p) != dim for p in pts) or (args.dim is not None and dim != args.dim):
        raise DimensionMismatch("points of inconsistent dimension")
    comp = regions.upset_union_complement(pts)
    if regions.upset_union_cofinite(pts):
        size = comp.cardinality()
        return Outcome(EXIT_OK, {"cofinite": True, "complement_size": size},
                       f"cofinite; complement size {size}")
    return Outcome(EXIT_FAIL, {"cofinite": False, "complement_size": None},
                   "not cofinite; complement infinite")


def _partition(items, related) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, m in enumerate(items):
        g = next((g for g in groups if related(m, items[g[0]])), None)
        if g is None:
            groups.append([i])
        else:
            g.append(i)
    return groups


def _layout(alpha) -> dict:
    # mu alpha nu lies in the R-class of mu alpha and the L-class of alpha nu
    us = algebra.units(3)
    left = [pmap.compose(u, alpha) for u in us]
    right = [pmap.compose(alpha, u) for u in us]
    rows = _partition(left, lambda a, b: algebra.green("R", a, b) is not None)
    cols = _partition(right, lambda a, b: algebra.green("L", a, b) is not None)
    grid = []
    for r in rows:
        line = []
        for c in cols:
            cell = [pmap.compose(left[i], us[j]) for i in r for j in c]
            line.append(len(algebra.dedup(cell)))
        grid.append(line)
    return {"size": sum(map(sum, grid)), "rows": len(rows), "cols": len(cols), "grid": grid}


def eggbox(count: int, base_seed: int = 0):
    """Group generated elements into D-classes and lay each out as an R x L grid."""
    classes = []
    for s in range(base_seed, base_seed + count):
        alpha = oracle.generate(s)
        home = next((c for c in classes if algebra.green("D", alpha, c["rep"])), None)
        if home is not None:
            home["seeds"].append(s)
            continue
        classes.append({"rep": alpha, "seeds": [s], **_layout(alpha),
                        "idempotent": algebra.is_idempotent(alpha)})
    return classes


def _dot(classes) -> str:
    out = ["digraph eggbox {", "  node [shape=box];"]
    for k, c in enumerate(classes):
        out.append(f"  subgraph cluster_{k} {{")
        out.append(f'    label="D{k} seeds {c["seeds"][0]}.. size {c["size"]}";')
        for i, row in enumerate(c["grid"]):
            for j, h in enumerate(row):
                if h:
                    out.append(f'    d{k}_{i}_{j} [label="H {h}"];')
            cells = [f"d{k}_{i}_{j}" for j, h in enumerate(row) if h]
            if len(cells) > 1:
                out.append(f'    {{ rank=same; {" ".join(cells)} }}')
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_eggbox(args):
    if args.seedcount < 1:
        raise PreconditionError("SEEDCOUNT must be positive")
    classes = eggbox(args.seedcount)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(_dot(classes))
    summary = [{k: v for k, v in c.items() if k != "rep"} for c in classes]
    text = "\n".join(f"D{k}: size {c['size']} ({c['rows']} R x {c['cols']} L), "
                     f"seeds {c['seeds']}" for k, c in enumerate(classes))
    return Outcome(EXIT_OK, {"classes": summary, "count": len(classes)}, text)


def selftest(seeds: int, base: int) -> dict:
    """Quick randomized run of the core properties; raises TheoremViolation."""
    checks = {"closure": 0, "oracle": 0, "classes": 0, "decrease": 0, "idempotent": 0}
    for s in range(base, base + seeds):
        alpha = oracle.generate(s)
        rep = pmap.validate(alpha)
        if not rep.valid:
            raise TheoremViolation(f"seed {s}: generated element invalid ({rep.failures()})")
        checks["closure"] += 1
        if oracle.disagreements(alpha, rep, rep.bound + 3):
            raise TheoremViolation(f"seed {s}: window oracle disagrees")
        checks["oracle"] += 1
        for rel in "LR":
            algebra.green_class(rel, alpha)
        checks["classes"] += 1
        _, normal = algebra.normalize(alpha)
        if not algebra.pointwise_decrease_check(normal):
            raise TheoremViolation(f"seed {s}: normalized element moves a point up")
        checks["decrease"] += 1
        if algebra.is_idempotent(alpha) != pmap.equals(pmap.compose(alpha, alpha), alpha):
            raise TheoremViolation(f"seed {s}: idempotent test inconsistent")
        checks["idempotent"] += 1
    return checks


def cmd_selftest(args):
    base = int(os.environ.get("POSETMAP_SEED", DEFAULT_SELFTEST_SEED))
    checks = selftest(args.seeds, base)
    return Outcome(EXIT_OK, {"seed": base, "seeds": args.seeds, "checks": checks},
                   f"selftest ok: {args.seeds} seeds from {base}; "
                   + ", ".join(f"{k} {v}" for k, v in checks.items()))


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--window", type=int, metavar="M", default=argparse.SUPPRESS,
                        help="cross-check against the brute-force window oracle")
    common.add_argument("--dim", type=int, metavar="N", default=argparse.SUPPRESS,
                        help="require inputs of this dimension")
    p = argparse.ArgumentParser(prog="posetmap", parents=[common],
                                description="Monotone cofinite partial bijections of N^n.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *spec, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for args, opts in spec:
            sp.add_argument(*args, **opts)
        sp.set_defaults(func=func)
        return sp

    one = ((["file"], {}),)
    two = ((["first"], {}), (["second"], {}))
    add("validate", cmd_validate, *one, help="decide membership")
    add("compose", cmd_compose, *two, (["-o", "--output"], {}), help="left-to-right product")
    add("equals", cmd_equals, *two, help="equality as partial maps")
    add("normalize", cmd_normalize, *one, help="unit making the axis action trivial")
    add("n-alpha", cmd_n_alpha, *one, help="identity threshold of the normalized element")
    add("axis-perm", cmd_axis_perm, *one, help="induced permutation of the axes")
    add("idempotent", cmd_idempotent, *one, help="idempotency test")
    add("green", cmd_green, (["relation"], {"choices": algebra.RELATIONS}), *two,
        help="Green's relation witness")
    add("class", cmd_class, (["relation"], {"choices": ("L", "R")}), *one,
        help="list an L- or R-class")
    add("complements", cmd_complements, *one, help="domain and range complements")
    add("chain-cover", cmd_chain_cover, (["y1"], {"type": int}), (["y2"], {"type": int}),
        (["x3"], {"type": int}), help="chains covering the complement of three up-sets")
    add("upset-cofinite", cmd_upset_cofinite, (["points"], {}),
        help="is the union of up-sets cofinite")
    add("eggbox", cmd_eggbox, (["seedcount"], {"type": int}), (["--dot"], {"metavar": "OUT"}),
        help="egg-box layout of generated elements")
    add("selftest", cmd_selftest, (["--seeds"], {"type": int, "default": 20}),
        help="randomized property run")
    return p


def _emit(args, command: str, code: int, payload: dict, text: str) -> None:
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "exit_code": code}
        doc.update(payload)
        print(json.dumps(doc, sort_keys=True))
    elif text:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name, default in (("json", False), ("window", None), ("dim", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        if args.window is not None and args.window < 1:
            raise PreconditionError("--window must be >= 1")
        out = args.func(args)
    except TheoremViolation as exc:
        out = Outcome(EXIT_THEOREM, {"error": "THEOREM_VIOLATION", "message": str(exc)})
        print(f"THEOREM_VIOLATION: {exc}", file=sys.stderr)
    except InvalidElement as exc:
        out = Outcome(EXIT_FAIL, {"error": "INVALID", "message": str(exc)})
        print(f"invalid: {exc}", file=sys.stderr)
    except (FormatError, DimensionMismatch, UnsupportedDimension, PreconditionError,
            OSError) as exc:
        out = Outcome(EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
    _emit(args, args.command, out.code, out.payload, out.text)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
