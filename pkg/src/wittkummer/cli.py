"""Command line front end.

    wittkummer run problem.toml [--json] [--bound N] [--task T] [--seedless]
    wittkummer corpus [--filter S] [--json]

Exit status: 0 on success, 1 on a negative verdict (unless
--allow-negative), 2 on input errors and exceeded bounds.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import random
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .algebra import (_matpow, action_from_generators, frobenius_endomorphism,
                      galois_action, make_finite_field, make_product, make_truncated_poly,
                      prime_field, trivial_action)
from .cohomology import cohomology_group, is_cocycle
from .corpus import kummer_instances, run_corpus
from .gmodule import Character, twisted_module
from .groups import BoundExceeded, FiniteGroup, cyclic_group, direct_product, trivial_group
from .kummer import (CyclotomicData, cyclothymic_witness, fit_factorization,
                     is_cyclotomic_pair, kummer_identity_check, laurent_model,
                     lift_cocycle_rank1, smooth_instance_check, witt_module)

TASKS = ("cohomology", "cyclotomic-check", "cyclothymic-search", "fit", "lift",
         "smooth-check", "laurent", "kummer-identity")


class InputError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _need(table, key, where):
    if key not in table:
        raise InputError(f"{where}.{key}", "missing")
    return table[key]


def _int(value, field):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(field, f"expected an integer, got {value!r}")
    return value


# -- parsing --------------------------------------------------------------------

def parse_group(cfg, where="group"):
    if not isinstance(cfg, dict):
        raise InputError(where, "expected a table")
    kind = cfg.get("kind", "cyclic")
    try:
        if kind == "trivial":
            return trivial_group()
        if kind == "cyclic":
            n = _int(_need(cfg, "n", where), f"{where}.n")
            if n < 1:
                raise InputError(f"{where}.n", "must be positive")
            return cyclic_group(n)
        if kind == "table":
            return FiniteGroup(_need(cfg, "table", where), name=cfg.get("name"))
        if kind == "product":
            factors = _need(cfg, "factors", where)
            if len(factors) != 2:
                raise InputError(f"{where}.factors", "expected exactly two factors")
            return direct_product(parse_group(factors[0], f"{where}.factors[0]"),
                                  parse_group(factors[1], f"{where}.factors[1]"))
    except InputError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise InputError(where, str(exc)) from exc
    raise InputError(f"{where}.kind", f"unknown group kind {kind!r}")


def parse_algebra(cfg, where="algebra"):
    if not isinstance(cfg, dict):
        raise InputError(where, "expected a table")
    kind = _need(cfg, "kind", where)
    try:
        if kind == "prime_field":
            return prime_field(_int(_need(cfg, "p", where), f"{where}.p"))
        if kind == "finite_field":
            return make_finite_field(_int(_need(cfg, "p", where), f"{where}.p"),
                                     list(_need(cfg, "poly", where)))
        if kind == "truncated_poly":
            return make_truncated_poly(_int(_need(cfg, "p", where), f"{where}.p"),
                                       _int(_need(cfg, "k", where), f"{where}.k"))
        if kind == "product":
            facs = [parse_algebra(f, f"{where}.factors[{i}]")
                    for i, f in enumerate(_need(cfg, "factors", where))]
            return make_product(facs)
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(where, str(exc)) from exc
    raise InputError(f"{where}.kind", f"unknown algebra kind {kind!r}")


def _product_factors(cfg):
    if cfg.get("kind") == "product":
        return [parse_algebra(f) for f in cfg["factors"]]
    return None


def parse_action(cfg, group, algebra, algebra_cfg, where="action"):
    cfg = cfg or {"kind": "trivial"}
    kind = cfg.get("kind", "trivial")
    try:
        if kind == "trivial":
            return trivial_action(group, algebra)
        if kind == "galois":
            return galois_action(group, algebra, cfg.get("power", 1))
        if kind == "generators":
            images = {int(g): np.array(m) for g, m in _need(cfg, "images", where).items()}
            return action_from_generators(group, algebra, images)
        if kind == "permutation":
            factors = _product_factors(algebra_cfg)
            if factors is None:
                raise InputError(where, "permutation actions need a product algebra")
            offs = np.cumsum([0] + [f.dim for f in factors])
            powers = cfg.get("powers", {})
            images = {}
            for g, perm in _need(cfg, "perms", where).items():
                m = np.zeros((algebra.dim, algebra.dim), dtype=np.int64)
                pw = powers.get(g, [0] * len(factors))
                for i, j in enumerate(perm):
                    if factors[i].dim != factors[j].dim:
                        raise InputError(f"{where}.perms.{g}", "factors of different size")
                    fr = _matpow(frobenius_endomorphism(factors[i]), int(pw[i]), algebra.p)
                    m[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = fr
                images[int(g)] = m
            return action_from_generators(group, algebra, images)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(where, str(exc)) from exc
    raise InputError(f"{where}.kind", f"unknown action kind {kind!r}")


def parse_character(cfg, group, modulus, where="character"):
    if cfg is None:
        return Character.trivial(group, modulus)
    q = _int(cfg.get("modulus", modulus), f"{where}.modulus")
    try:
        if "values" in cfg:
            chi = Character(group, q, cfg["values"])
        elif "generators" in cfg:
            vals = {group.identity: 1}
            gens = {int(g): int(v) for g, v in cfg["generators"].items()}
            frontier = [group.identity]
            while frontier:
                x = frontier.pop(0)
                for s, v in gens.items():
                    y = group.mul(x, s)
                    if y not in vals:
                        vals[y] = vals[x] * v % q
                        frontier.append(y)
            if len(vals) != group.order:
                raise InputError(f"{where}.generators", "do not generate the group")
            chi = Character(group, q, [vals[g] for g in group.elements()])
        else:
            raise InputError(where, "need 'values' or 'generators'")
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(where, str(exc)) from exc
    if q != modulus:
        if q % modulus:
            raise InputError(f"{where}.modulus", f"expected a multiple of {modulus}")
        chi = chi.reduce(modulus)
    return chi


# -- task handlers ----------------------------------------------------------------

def _cocycle_rows(cls):
    return np.asarray(cls.cocycle).tolist()


def _select(classes, selector, field):
    classes = list(classes)
    if selector in (None, "all"):
        return classes
    idx = _int(selector, field)
    if not 0 <= idx < len(classes):
        raise InputError(field, f"index {idx} out of range (0..{len(classes) - 1})")
    return [classes[idx]]


def task_cohomology(prob, params, bound):
    G = prob["group"]
    n = _int(params.get("n", 1), "params.n")
    coeff = params.get("coefficients", "twisted")
    if coeff == "twisted":
        q = _int(params.get("q", prob["raw"].get("character", {}).get("modulus", 2)), "params.q")
        chi = parse_character(prob["raw"].get("character"), G, q)
        M = twisted_module(G, q, chi, params.get("twist", 1))
    elif coeff == "witt":
        A, act = prob["algebra"], prob["action"]
        r = _int(params.get("r", 1), "params.r")
        chi = parse_character(prob["raw"].get("character"), G, A.p ** r)
        M = witt_module(A, act, r, chi)
    else:
        raise InputError("params.coefficients", f"unknown coefficients {coeff!r}")
    H = cohomology_group(M, n)
    basis = [{"cocycle": _cocycle_rows(c), "order": int(o)} for c, o in H.basis()]
    return True, {"module": M.name, "degree": n, "order": int(H.order),
                  "invariants": [int(x) for x in H.invariants.factors], "generators": basis}


def _cyc_data(prob, params):
    G = prob["group"]
    p = _int(_need(params, "p", "params"), "params.p")
    e = _int(params.get("e", 1), "params.e")
    n = _int(params.get("n", 1), "params.n")
    chi = parse_character(prob["raw"].get("character"), G, p ** (e + 1))
    return CyclotomicData(G, p, e, n, chi)


def task_cyclotomic(prob, params, bound):
    data = _cyc_data(prob, params)
    rep = is_cyclotomic_pair(data, bound=bound or 64)
    rows = [{"subgroup": list(r[0]), "big": r[1], "small": r[2], "image": r[3], "surjective": r[4]}
            for r in rep.rows]
    witness = None
    if rep.witness is not None:
        witness = {"subgroup": list(rep.witness[0]), "cocycle": _cocycle_rows(rep.witness[1])}
    return rep.verdict, {"character": list(data.chi.values), "subgroups": rows, "witness": witness}


def task_cyclothymic(prob, params, bound):
    G = prob["group"]
    p = _int(_need(params, "p", "params"), "params.p")
    e = _int(params.get("e", 1), "params.e")
    psi = parse_character(prob["raw"].get("character"), G, p)
    pairs = []
    for i, item in enumerate(params.get("classes", [])):
        where = f"params.classes[{i}]"
        elems = sorted(int(x) for x in _need(item, "subgroup", where))
        if not G.is_subgroup(elems):
            raise InputError(f"{where}.subgroup", "not a subgroup")
        H, sub = G.subgroup(elems)
        L = twisted_module(H, p, psi.restrict(sub, H), 1)
        for cls in _select(cohomology_group(L, 1).classes(), item.get("class", "all"), f"{where}.class"):
            pairs.append((tuple(sub), cls))
    chi = cyclothymic_witness(G, p, 1, e, psi, pairs)
    return chi is not None, {"classes": len(pairs),
                             "character": None if chi is None else list(chi.values)}


def task_fit(prob, params, bound):
    fit = fit_factorization(prob["algebra"], prob["action"])
    ok = fit.check(prob["action"])
    return ok, {"m": fit.m, "nilpotency_index": fit.nilpotency_index, "X": fit.X.perms,
                "f": fit.f.tolist(), "g": fit.g.tolist()}


def task_lift(prob, params, bound):
    data = _cyc_data(prob, params)
    A, act = prob["algebra"], prob["action"]
    r = _int(params.get("r", 1), "params.r")
    if not 1 <= r <= data.e:
        raise InputError("params.r", f"need 1 <= r <= e = {data.e}")
    rep = is_cyclotomic_pair(data, bound=bound or 64)
    if not rep.verdict:
        return False, {"error": "pair is not cyclotomic", "witness_subgroup": list(rep.witness[0])}
    W = witt_module(A, act, r, data.chi)
    out, ok = [], True
    for c in _select(cohomology_group(W, 1).classes(), params.get("class", "all"), "params.class"):
        lr = lift_cocycle_rank1(data, A, act, c, check_cyclotomic=False)
        top = lr.algorithmic_lift.module
        valid = bool(is_cocycle(top, lr.algorithmic_lift.cocycle, 1))
        ok &= valid
        out.append({"class": _cocycle_rows(c), "m": lr.m, "algorithmic_m": lr.algorithmic_m,
                    "m_A": lr.m_A, "lift": _cocycle_rows(lr.algorithmic_lift),
                    "minimal_lift": _cocycle_rows(lr.lift), "steps": len(lr.chain)})
    return ok, {"length": r, "target_length": data.e + 1, "lifts": out}


def task_smooth(prob, params, bound):
    res = smooth_instance_check(prob["algebra"], prob["action"], params.get("e", 1),
                                bound=bound or 200_000)
    big, small = res["big"], res["small"]
    wit = []
    for rep, w in res["witnesses"]:
        wit.append({"class": [[small.labels[x] for x in m] for m in rep.table],
                    "witness": None if w is None else [[big.labels[x] for x in m] for m in w.table]})
    return res["verdict"], {"perfect": res["perfect"], "classes": wit}


def task_laurent(prob, params, bound):
    data = _cyc_data(prob, params)
    k = _int(params.get("k", 1), "params.k")
    model = laurent_model(data, k, bound=bound or 4096)
    law = bool(is_cocycle(model.module, model.t_cocycle, 1))
    G = data.group
    kernel_id = all(int(model.t_cocycle[x * G.order][0]) == x for x in range(data.p ** k))
    return law and kernel_id, {"order": model.group.order, "t": model.t_cocycle[:, 0].tolist(),
                               "cocycle_law": law, "identity_on_kernel": kernel_id}


def task_kummer(prob, params, bound):
    G = prob["group"]
    rows, ok = [], True
    for H, chi, e1, lifts in kummer_instances([G]):
        held = [bool(kummer_identity_check(e1, chi, E2)[0]) for E2 in lifts]
        ok &= all(held)
        rows.append({"chi": list(chi.values), "e1": e1.vector.tolist(), "lifts": len(lifts),
                     "holds": all(held) if held else None})
    return ok, {"instances": rows}


HANDLERS = {
    "cohomology": task_cohomology, "cyclotomic-check": task_cyclotomic,
    "cyclothymic-search": task_cyclothymic, "fit": task_fit, "lift": task_lift,
    "smooth-check": task_smooth, "laurent": task_laurent, "kummer-identity": task_kummer,
}


def load_problem(text, task_override=None):
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InputError("file", f"parse error: {exc}") from exc
    task = task_override or raw.get("task")
    if task not in TASKS:
        raise InputError("task", f"expected one of {', '.join(TASKS)}, got {task!r}")
    prob = {"raw": raw, "task": task}
    prob["group"] = parse_group(raw.get("group", {"kind": "trivial"}))
    if "algebra" in raw:
        prob["algebra"] = parse_algebra(raw["algebra"])
        prob["action"] = parse_action(raw.get("action"), prob["group"], prob["algebra"], raw["algebra"])
    elif task in ("fit", "lift", "smooth-check"):
        raise InputError("algebra", f"task {task} needs an [algebra] table")
    return prob


def _hash(report):
    blob = json.dumps(report, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def build_report(prob, verdict, result):
    report = {"tool": "wittkummer", "version": __version__, "task": prob["task"],
              "input": prob["raw"], "verdict": bool(verdict), "result": result}
    report["run_hash"] = _hash(report)
    return report


@contextlib.contextmanager
def _no_randomness():
    """Make any call into the random number generators fail loudly."""
    def refuse(*args, **kwargs):
        raise RuntimeError("randomness used during a --seedless run")
    saved = {}
    targets = [(random, name) for name in ("random", "randint", "choice", "shuffle", "seed", "sample")]
    targets += [(np.random, name) for name in ("default_rng", "seed", "random", "randint")]
    for mod, name in targets:
        saved[(mod, name)] = getattr(mod, name)
        setattr(mod, name, refuse)
    try:
        yield
    finally:
        for (mod, name), fn in saved.items():
            setattr(mod, name, fn)


def _print_human(report, out, elapsed=None):
    print(f"task: {report['task']}", file=out)
    print(f"verdict: {'true' if report['verdict'] else 'false'}", file=out)
    for key, val in report["result"].items():
        text = json.dumps(val, sort_keys=True)
        if len(text) > 200:
            text = text[:197] + "..."
        print(f"  {key}: {text}", file=out)
    print(f"run hash: {report['run_hash']}", file=out)
    if elapsed is not None:
        print(f"time: {elapsed:.2f} s", file=out)


def cmd_run(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"input error: {exc}", file=err)
        return 2
    guard = _no_randomness() if args.seedless else contextlib.nullcontext()
    start = time.perf_counter()
    try:
        with guard:
            prob = load_problem(text, args.task)
            verdict, result = HANDLERS[prob["task"]](prob, prob["raw"].get("params", {}), args.bound)
    except InputError as exc:
        print(f"input error: {exc}", file=err)
        return 2
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=err)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=err)
        return 2
    report = build_report(prob, verdict, result)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2), file=out)
    else:
        _print_human(report, out, time.perf_counter() - start)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
    return 0 if verdict or args.allow_negative else 1


def cmd_corpus(args, out=None):
    out = out or sys.stdout
    results = run_corpus(args.filter)
    report = {"tool": "wittkummer", "version": __version__, "filter": args.filter,
              "passed": all(r["passed"] for r in results), "results": results}
    report["run_hash"] = _hash(report)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2), file=out)
    else:
        for r in results:
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']:<26} criterion {r['criterion']}",
                  file=out)
        n = sum(r["passed"] for r in results)
        print(f"{n}/{len(results)} checks passed", file=out)
    return 0 if report["passed"] else 1


def make_parser():
    ap = argparse.ArgumentParser(prog="wittkummer",
                                 description="Witt vector cohomology and Kummer-type lifting checks")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="solve one problem file")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="print the structured report")
    r.add_argument("--bound", type=int, default=None, help="enumeration cap")
    r.add_argument("--task", choices=TASKS, default=None, help="override the task in the file")
    r.add_argument("--seedless", action="store_true", help="fail if any randomness is used")
    r.add_argument("--output", default=None, help="also write the JSON report here")
    r.add_argument("--allow-negative", action="store_true",
                   help="exit 0 even when the verdict is negative")
    c = sub.add_parser("corpus", help="run the built-in instance corpus")
    c.add_argument("--filter", default=None, help="only checks whose name contains this")
    c.add_argument("--json", action="store_true")
    return ap


def main(argv=None):
    args = make_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_corpus(args)


if __name__ == "__main__":
    sys.exit(main())
