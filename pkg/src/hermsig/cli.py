"""Command-line interface.

``hermsig <command> --scenario FILE [--seed N] [--json] [--budget-height N]``

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
scenario errors.  Output is a plain table or JSON lines (``--json``).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Iterable, Optional

from . import __version__
from .etale import extensions_of_ordering
from .knebusch import TransferContext, verify_extend_nil, verify_ktf_commutative, verify_ktf_hermitian
from .morita import MoritaContext, functor_F, transportable
from .quadratic import diagonal, signature_at, transfer_quadratic
from .scenario import Scenario, ScenarioError, corpus_generate, load_scenario
from .signatures import (
    Budget,
    ReferenceForm,
    SearchExhausted,
    eta_signature,
    find_reference_form,
    find_two_power_form,
    total_signature,
    two_power_multiple_match,
)

COMMANDS = (
    "orderings",
    "sign",
    "total",
    "transfer-check",
    "ktf-verify",
    "morita-check",
    "nil",
    "find-ref",
    "two-power",
    "selftest",
)


class UsageError(Exception):
    pass


class Reporter:
    """Collects records; prints a table or JSON lines."""

    def __init__(self, as_json: bool, out=None):
        self.as_json = as_json
        self.out = out or sys.stdout
        self.failures = 0
        self.checks = 0

    def row(self, record: dict) -> None:
        if "ok" in record:
            self.checks += 1
            if not record["ok"]:
                self.failures += 1
        if self.as_json:
            self.out.write(json.dumps(record, sort_keys=True) + "\n")
        else:
            self.out.write(
                "  ".join(f"{k}={_verdict(v) if k == 'ok' else _fmt(v)}" for k, v in record.items()) + "\n"
            )

    def summary(self) -> None:
        rec = {"summary": True, "checks": self.checks, "failures": self.failures}
        if self.as_json:
            self.out.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            self.out.write(f"-- {self.checks} checks, {self.failures} failed\n")


def _verdict(v) -> str:
    return "PASS" if v else "FAIL"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    return str(v)


def _budget(sc: Optional[Scenario], args) -> Budget:
    p = sc.params if sc else {}
    height = args.budget_height if args.budget_height is not None else p.get("height", 8)
    return Budget(
        height=height,
        pfister_length=p.get("pfister_length", 3),
        max_m=p.get("max_m", 6),
        max_candidates=p.get("max_candidates", 400),
    )


def _need(sc: Scenario, *blocks: str) -> None:
    for b in blocks:
        if getattr(sc, b) is None:
            raise UsageError(f"command needs a [{b}] section in the scenario")


def _reference(sc: Scenario, budget: Budget) -> ReferenceForm:
    name = sc.params.get("eta")
    if name is not None:
        return ReferenceForm(sc.forms[name][1])
    return find_reference_form(sc.algebra, budget)


# ---------------------------------------------------------------------------
# commands


def cmd_orderings(sc: Scenario, args, rep: Reporter) -> None:
    for k, a in enumerate(sc.base.orderings):
        rep.row({"level": "base", "ordering": k, "label": a.label(), "approx": round(a.approx(), 12)})
    if sc.extension is not None:
        for k, g in enumerate(sc.extension.total.orderings):
            rep.row({"level": "total", "ordering": k, "label": g.label(), "approx": round(g.approx(), 12)})


def cmd_sign(sc: Scenario, args, rep: Reporter) -> None:
    for name, (over, q) in sc.quadforms.items():
        for k, a in enumerate(q.base.orderings):
            rep.row({"form": name, "ordering": k, "value": signature_at(q, a)})
    if sc.forms:
        _need(sc, "algebra")
        eta = _reference(sc, _budget(sc, args))
        eta_by_over = {"algebra": eta}
        for name, (over, h) in sc.forms.items():
            ref = _reference_for(sc, over, eta, eta_by_over)
            if ref is None:
                continue
            for k, a in enumerate(h.algebra.base.orderings):
                rep.row({"form": name, "ordering": k, "value": eta_signature(h, a, ref)})


def _reference_for(sc, over, eta, cache):
    if over in cache:
        return cache[over]
    if over == "extended":
        ref = TransferContext(sc.algebra, sc.extension).extended_reference(eta)
    else:
        A = sc.algebra_for(over)
        ref = find_reference_form(A)
    cache[over] = ref
    return ref


def cmd_total(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "algebra")
    eta = _reference(sc, _budget(sc, args))
    for name, (over, h) in sc.forms.items():
        if over != "algebra":
            continue
        tot = total_signature(h, eta)
        rep.row({"form": name, "values": list(tot.values)})


def cmd_transfer_check(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "extension")
    E = sc.extension
    T = E.total
    unit = diagonal(T, [T.one])
    for k, a in enumerate(sc.base.orderings):
        r = len(extensions_of_ordering(E, a))
        s = signature_at(transfer_quadratic(E, unit), a)
        rep.row({"check": "extension-count", "ordering": k, "lhs": s, "rhs": r, "ok": s == r})
    for name, (over, q) in sc.quadforms.items():
        if over != "total":
            continue
        for k, a in enumerate(sc.base.orderings):
            res = verify_ktf_commutative(E, q, a)
            rep.row({"check": "ktf-commutative", "form": name, "ordering": k, "lhs": res.lhs,
                     "rhs": res.rhs, "ok": res.ok})
    if sc.algebra is not None:
        ctx = TransferContext(sc.algebra, E)
        for k, a in enumerate(sc.base.orderings):
            res = verify_extend_nil(ctx, a)
            rep.row({"check": "nil-extends", "ordering": k, "nil_below": res.nil_below,
                     "nil_above": res.nil_above, "ok": res.nil_ok})


def _ktf_instances(sc: Scenario, args):
    forms = [(n, h) for n, (over, h) in sc.forms.items() if over == "extended"]
    if forms:
        _need(sc, "algebra", "extension")
        yield "scenario", sc, forms
        return
    size = sc.params.get("corpus_size", 0)
    seed = args.seed if args.seed is not None else sc.params.get("seed", 0)
    for k, inst in enumerate(corpus_generate(seed, size)):
        yield f"corpus[{k}]", inst, [(n, h) for n, (_, h) in inst.forms.items()]


def cmd_ktf_verify(sc: Scenario, args, rep: Reporter) -> None:
    budget = _budget(sc, args)
    any_instance = False
    for tag, inst, forms in _ktf_instances(sc, args):
        any_instance = True
        ctx = TransferContext(inst.algebra, inst.extension)
        eta = _reference(inst, budget)
        eta_t = ctx.extended_reference(eta)
        for name, h in forms:
            for k, a in enumerate(inst.base.orderings):
                res = verify_ktf_hermitian(ctx, h, a, eta, eta_t)
                rec = {"instance": tag, "form": name, "ordering": k}
                rec.update(res.as_dict())
                rec["per_gamma"] = [v for _, v in res.per_gamma]
                rep.row(rec)
    if not any_instance:
        raise UsageError("ktf-verify needs forms over 'extended' or params.corpus_size > 0")


def cmd_morita_check(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "algebra", "target")
    ctx = MoritaContext(sc.algebra, sc.target)
    eta = _reference(sc, _budget(sc, args))
    eta_f = ReferenceForm(functor_F(ctx, transportable(ctx, eta.form)))
    rep.row({"check": "delta-type-rule", "delta": ctx.delta, "ok": ctx.type_rule_holds()})
    for name, (over, h) in sc.forms.items():
        if over != "algebra":
            continue
        if (h.dim * ctx.source.n) % ctx.target.n:
            rep.row({"check": "morita", "form": name, "skipped": "rank not divisible by target size"})
            continue
        fh = functor_F(ctx, h)
        for k, a in enumerate(sc.base.orderings):
            lhs = eta_signature(h, a, eta)
            rhs = eta_signature(fh, a, eta_f)
            rep.row({"check": "morita", "form": name, "ordering": k, "lhs": lhs, "rhs": rhs,
                     "ok": lhs == rhs})


def cmd_nil(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "algebra")
    A = sc.algebra
    for k, a in enumerate(sc.base.orderings):
        rep.row({"ordering": k, "type": A.type_at(a).value, "split": A.is_split_at(a),
                 "nil": A.is_nil(a)})


def cmd_find_ref(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "algebra")
    eta = find_reference_form(sc.algebra, _budget(sc, args))
    from .signatures import m_signature

    for k, a in enumerate(sc.base.orderings):
        rep.row({"ordering": k, "rank": eta.form.dim, "value": m_signature(eta.form, a)})


def cmd_two_power(sc: Scenario, args, rep: Reporter) -> None:
    _need(sc, "algebra")
    budget = _budget(sc, args)
    eta = _reference(sc, budget)
    from .hermitian import nonsingular

    h0, m = find_two_power_form(sc.algebra, eta, budget)
    tot = total_signature(h0, eta)
    nonnil = [v for a, v in zip(tot.orderings, tot.values) if not sc.algebra.is_nil(a)]
    ok = nonsingular(h0) and all(abs(v) == 2**m for v in nonnil)
    rep.row({"check": "two-power-form", "m": m, "rank": h0.dim, "values": list(tot.values), "ok": ok})
    for k, f in enumerate(sc.params.get("targets", [])):
        target = dict(zip(sc.base.orderings, f))
        res = two_power_multiple_match(target, eta, budget)
        rec = {"check": "two-power-match", "target": k, "f": list(f), "m": res.m, "ok": res.ok}
        if not res.ok:
            rec["residual"] = list(res.residual or ())
        rep.row(rec)


def cmd_selftest(sc: Optional[Scenario], args, rep: Reporter) -> None:
    from .selftest import run_selftest

    for rec in run_selftest(seed=args.seed or 0):
        rep.row(rec)


HANDLERS: dict[str, Callable] = {
    "orderings": cmd_orderings,
    "sign": cmd_sign,
    "total": cmd_total,
    "transfer-check": cmd_transfer_check,
    "ktf-verify": cmd_ktf_verify,
    "morita-check": cmd_morita_check,
    "nil": cmd_nil,
    "find-ref": cmd_find_ref,
    "two-power": cmd_two_power,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermsig", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hermsig {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", help="scenario file (TOML)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true", help="emit JSON lines")
    p.add_argument("--budget-height", type=int, default=None)
    return p


def main(argv: Optional[Iterable[str]] = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Reporter(args.json, out)
    err = sys.stderr
    try:
        if args.command == "selftest":
            sc = load_scenario(args.scenario) if args.scenario else None
        else:
            if not args.scenario:
                raise UsageError(f"{args.command} needs --scenario")
            sc = load_scenario(args.scenario)
        HANDLERS[args.command](sc, args, rep)
    except (UsageError, ScenarioError) as exc:
        err.write(f"hermsig: {exc}\n")
        return 2
    except SearchExhausted as exc:
        rep.row({"check": "search", "detail": str(exc), "ok": False})
    rep.summary()
    return 1 if rep.failures else 0


def main_exit() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
