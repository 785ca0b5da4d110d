"""Command-line front end.

    pcanon canon    --field q2 --prime 2
    pcanon check    --field f3_s_t --prime 3 --criterion psi
    pcanon eval     --field q2 --formula "exists y. y*y = x" --assign x=17
    pcanon topology --field q2 --basis '{"kind": "ufa", "f": "X^2-5", "a": "1"}'
    pcanon job      job.json

``--field`` takes a bundled zoo name or a path to a JSON descriptor.  The
report goes to stdout as JSON with sorted keys (and to ``--json`` if given);
a short summary goes to stderr.  Exit codes: 0 success or match, 1 mismatch
or counterexample, 2 dominated by Unknown, 3 usage error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import zoo
from .definable import (
    PreconditionError, cor42_criterion, lemma43_criterion, lemma44_equiv, lemma45_criterion, obs34_eta,
    phensel_clause, psi_dispatch,
)
from .fields import load_field
from .fields.base import FieldError
from .formula import FormulaSyntaxError, UnboundVariable, evaluate, parse
from .topology import TopologyError, ball_basis, basis_from_descriptor, check_axioms, topologies_equivalent
from .tri import Tri
from .valuation import (
    HClass, Valuation, ValuationError, canonical_2_star, canonical_p_henselian, chain, classify_H,
    is_p_henselian,
)

EXIT_OK, EXIT_MISMATCH, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
CRITERIA = ("psi", "lemma43", "lemma44", "lemma45", "cor42", "obs34", "phensel")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def resolve_field(source: str, precision: int | None):
    """A zoo name or a descriptor path; returns (field, expected ground truth or None)."""
    if source in zoo.names():
        e = zoo.entry(source)
        return zoo.load(source, precision), e.get("expected")
    if not Path(source).exists() and not source.lstrip().startswith("{"):
        raise UsageError(f"no zoo entry or file named {source!r}")
    text = Path(source).read_text() if Path(source).exists() else source
    data = json.loads(text)
    return load_field(data, precision), data.get("expected") if "field" in data else None


def _member_json(v: Valuation, p: int, budget: int) -> dict:
    t = is_p_henselian(v, p, budget)
    d = {"depth": v.depth, "label": v.label(), "value_group": str(v.value_group),
         "residue_field": v.residue_field.name(), "p_henselian": t.to_json()}
    if t.is_true:
        d["class"] = classify_H(v, p).value
    return d


def _inclusion_witness(fine: Valuation, coarse: Valuation):
    """An element of O_coarse outside O_fine."""
    x = fine.monomial(-fine.value_group.basis(coarse.depth))
    assert coarse.in_ring(x) and not fine.in_ring(x)
    return x


def cmd_canon(K, p: int, budget: int, **_) -> tuple[dict, int]:
    members = chain(K)
    canon = canonical_p_henselian(K, p)
    report = {"command": "canon", "field": K.name(), "prime": p,
              "chain": [_member_json(v, p, budget) for v in members],
              "canonical": {"depth": canon.depth, "label": canon.label()}}
    if p == 2 and canon.residue_field.is_euclidean():
        star = canonical_2_star(K)
        report["star"] = {"depth": star.depth, "label": star.label()}
        if star.depth < canon.depth:
            report["strict_inclusion_witness"] = str(_inclusion_witness(canon, star))
    return report, EXIT_OK


def _truth_depths(K, p: int, expected) -> dict:
    exp = (expected or {}).get(str(p))
    if exp is not None:
        return exp
    canon = canonical_p_henselian(K, p)
    out = {"canonical_depth": canon.depth}
    if p == 2 and canon.residue_field.is_euclidean():
        out["star_depth"] = canonical_2_star(K).depth
    return out


def _lemma44_samples(v: Valuation, n: int, seed: int) -> list:
    import random

    K = v.field
    rng = random.Random(seed)
    pool = [x for x in itertools.islice(K.graded_elements(), 4 * n) if v.in_ring(x)]
    pool += [x for x in K.sample(rng, 4 * n) if v.in_ring(x)]
    return pool[:n]


def cmd_check(K, p: int, criterion: str, budget: int, seed: int, expected=None, **_) -> tuple[dict, int]:
    if criterion not in CRITERIA:
        raise UsageError(f"unknown criterion {criterion!r}; choose from {', '.join(CRITERIA)}")
    truth = _truth_depths(K, p, expected)
    report = {"command": "check", "criterion": criterion, "field": K.name(), "prime": p, "ground_truth": truth}
    members = chain(K)
    rows = []
    status = []
    if criterion == "obs34":
        if p != 2:
            raise UsageError("obs34 concerns p = 2")
        try:
            eta = obs34_eta(K)
        except PreconditionError as e:
            raise UsageError(f"obs34 not applicable: {e}") from None
        ok = "star_depth" in truth and eta.valuation.depth == truth["star_depth"]
        report["eta"] = {"depth": eta.valuation.depth, "label": eta.valuation.label(), "trace": eta.trace}
        report["match"] = ok
        return report, EXIT_OK if ok else EXIT_MISMATCH
    euclid = "star_depth" in truth
    for v in members:
        row = {"depth": v.depth, "label": v.label()}
        try:
            if criterion == "lemma44":
                samples = _lemma44_samples(v, budget, seed)
                pairs = [lemma44_equiv(v, p, a) for a in samples]
                agree = sum(1 for l, r in pairs if l.definite and r.definite and l.is_true == r.is_true)
                row["equivalences"] = f"{agree}/{len(pairs)} equivalences hold"
                row["match"] = agree == len(pairs)
                status.append(Tri.of(row["match"]) if all(l.definite and r.definite for l, r in pairs)
                              else Tri.unknown("indefinite side"))
                rows.append(row)
                continue
            rep = {"psi": lambda: psi_dispatch(v, p, seed=seed),
                   "phensel": lambda: phensel_clause(v, p, seed=seed),
                   "lemma43": lambda: lemma43_criterion(v, p, seed=seed),
                   "lemma45": lambda: lemma45_criterion(v, p, seed=seed),
                   "cor42": lambda: cor42_criterion(v, p)}[criterion]()
        except PreconditionError as e:
            row["applicable"] = False
            row["reason"] = str(e)
            rows.append(row)
            continue
        row.update(rep.to_json())
        row.pop("valuation", None)
        if criterion == "phensel":
            want = is_p_henselian(v, p, budget)
        elif criterion == "psi" and euclid:
            want = None  # routed to obs34 below
        else:
            want = Tri.of(v.depth == truth["canonical_depth"])
        if want is not None and want.definite and rep.verdict.definite:
            row["match"] = want.is_true == rep.verdict.is_true
            status.append(Tri.of(row["match"]))
        elif want is not None:
            status.append(Tri.unknown("undecided verdict"))
        rows.append(row)
    if criterion == "psi" and euclid:
        eta = obs34_eta(K)
        report["routed_to"] = "obs34"
        report["eta"] = {"depth": eta.valuation.depth, "label": eta.valuation.label()}
        status.append(Tri.of(eta.valuation.depth == truth["star_depth"]))
    report["members"] = rows
    if not any(r.get("applicable", True) for r in rows) and criterion != "psi":
        raise UsageError(f"{criterion} is not applicable to any member of the chain of {K.name()}: "
                         f"{rows[0].get('reason', '')}")
    if criterion == "psi" and not euclid:
        true_at = [r["depth"] for r in rows if r.get("verdict", {}).get("verdict") is True]
        report["true_at"] = true_at
    verdict = Tri.of(True)
    for s in status:
        verdict = verdict & s
    report["match"] = verdict.to_json()
    return report, _exit_for(verdict)


def _exit_for(t: Tri) -> int:
    if t.is_true:
        return EXIT_OK
    if t.is_false:
        return EXIT_MISMATCH
    return EXIT_UNKNOWN


def _parse_assignment(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"assignment {item!r} is not of the form name=value")
        k, val = item.split("=", 1)
        out[k.strip()] = val.strip()
    return out


def cmd_eval(K, formula: str, assignment: dict, budget: int, **_) -> tuple[dict, int]:
    try:
        phi = parse(formula)
    except FormulaSyntaxError as e:
        raise UsageError(f"syntax error: {e}") from None
    try:
        verdict = evaluate(K, phi, assignment, budget)
    except UnboundVariable as e:
        raise UsageError(f"unbound variable: {e.args[0]}") from None
    report = {"command": "eval", "field": K.name(), "formula": str(phi), "assignment": assignment,
              "verdict": verdict.to_json()}
    return report, EXIT_OK if verdict.definite else EXIT_UNKNOWN


def cmd_topology(K, bases: list, depth: int, seed: int, samples: int = 1000, **_) -> tuple[dict, int]:
    try:
        built = [basis_from_descriptor(K, b) for b in bases] if bases else []
    except (TopologyError, KeyError) as e:
        raise UsageError(f"bad basis descriptor: {e}") from None
    if not built:
        built = [ball_basis(chain(K)[0])]
    report = {"command": "topology", "field": K.name(), "axioms": []}
    verdict = Tri.of(True)
    for b in built:
        ax = check_axioms(b, samples=samples, seed=seed)
        report["axioms"].append(ax.to_json())
        for r in ax.results:
            verdict = verdict & r.verdict
    if len(built) >= 2:
        eq = topologies_equivalent(built[0], built[1], depth, seed=seed)
        report["equivalence"] = eq.to_json()
        verdict = verdict & eq.verdict
    report["verdict"] = verdict.to_json()
    return report, _exit_for(verdict)


def _dispatch(command: str, K, expected, opts: dict) -> tuple[dict, int]:
    if command == "canon":
        return cmd_canon(K, **opts)
    if command == "check":
        return cmd_check(K, expected=expected, **opts)
    if command == "eval":
        return cmd_eval(K, **opts)
    if command == "topology":
        return cmd_topology(K, **opts)
    raise UsageError(f"unknown command {command!r}")


def _needs(opts, *names):
    for n in names:
        if opts.get(n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


def run_job(job: dict) -> tuple[dict, int]:
    """A JSON job: {"command", "field", "prime", "criterion", "formula", ...}."""
    command = job.get("command")
    field = job.get("field")
    if field is None:
        raise UsageError("job needs a field")
    if isinstance(field, dict):
        K, expected = load_field(field, job.get("precision")), job.get("expected")
    else:
        K, expected = resolve_field(field, job.get("precision"))
    opts = {"p": job.get("prime"), "criterion": job.get("criterion"), "formula": job.get("formula"),
            "assignment": {k: str(v) for k, v in (job.get("assignment") or {}).items()},
            "budget": job.get("budget", 200), "seed": job.get("seed", 0), "depth": job.get("depth", 8),
            "bases": job.get("bases", [])}
    _check_opts(command, opts)
    return _dispatch(command, K, expected, opts)


def _check_opts(command, opts):
    if command in ("canon", "check"):
        _needs(opts, "p")
    if command == "check":
        _needs(opts, "criterion")
    if command == "eval":
        _needs(opts, "formula")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pcanon", description="Canonical p-henselian valuations: compute, check, evaluate.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("canon", "check", "eval", "topology"):
        sp = sub.add_parser(name)
        sp.add_argument("--field", required=True, help="zoo name or path to a JSON field descriptor")
        sp.add_argument("--prime", type=int)
        sp.add_argument("--precision", type=int)
        sp.add_argument("--budget", type=int, default=200)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--depth", type=int, default=8)
        sp.add_argument("--json", help="also write the report to this path")
        if name == "check":
            sp.add_argument("--criterion", choices=CRITERIA, required=True)
        if name == "eval":
            sp.add_argument("--formula", required=True)
            sp.add_argument("--assign", action="append", metavar="NAME=VALUE")
        if name == "topology":
            sp.add_argument("--basis", action="append", metavar="JSON", help="basis descriptor, up to two")
            sp.add_argument("--samples", type=int, default=1000)
    jp = sub.add_parser("job")
    jp.add_argument("path")
    jp.add_argument("--json")
    sub.add_parser("zoo")
    return ap


def _summary(report: dict) -> str:
    cmd = report.get("command")
    if cmd == "canon":
        s = f"canonical: {report['canonical']['label']}"
        if "star" in report:
            s += f"; 2*: {report['star']['label']}"
        if "strict_inclusion_witness" in report:
            s += f"; witness {report['strict_inclusion_witness']}"
        return s
    if cmd == "check":
        return f"{report['criterion']}: match = {report['match']}"
    if cmd == "eval":
        return f"{report['formula']}: {report['verdict']}"
    if cmd == "topology":
        return f"topology: {report['verdict']}"
    return ""


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "zoo":
            report, code = {"zoo": {n: zoo.entry(n)["description"] for n in zoo.names()}}, EXIT_OK
        elif args.command == "job":
            report, code = run_job(json.loads(Path(args.path).read_text()))
        else:
            K, expected = resolve_field(args.field, args.precision)
            opts = {"p": args.prime, "budget": args.budget, "seed": args.seed, "depth": args.depth,
                    "criterion": getattr(args, "criterion", None), "formula": getattr(args, "formula", None),
                    "assignment": _parse_assignment(getattr(args, "assign", None)),
                    "bases": [json.loads(b) for b in (getattr(args, "basis", None) or [])],
                    "samples": getattr(args, "samples", 1000)}
            if len(opts["bases"]) > 2:
                raise UsageError("at most two --basis descriptors")
            _check_opts(args.command, opts)
            report, code = _dispatch(args.command, K, expected, opts)
    except (UsageError, FieldError, ValuationError, json.JSONDecodeError) as e:
        print(f"pcanon: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    print(text)
    if getattr(args, "json", None):
        Path(args.json).write_text(text + "\n")
    summary = _summary(report)
    if summary:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
