"""Command-line front end.

Every command prints a JSON report (or a plain table with ``--table``).
Commands that build a module write it to ``--out`` when given; otherwise the
module document is embedded in the report under ``"module"``.  Errors go to
stderr as JSON with a distinct exit code per kind.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from . import checks as CK
from . import corpus as C
from . import homology as Hm
from . import io
from . import modules as M
from . import shift as S
from . import torsion as T
from .errors import FimodError, ParseError, ValidationError
from .fi import free_module
from .generation import generation_degree, h0
from .rings import parse_coeff


def _default_seed():
    env = os.environ.get("FIMOD_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ParseError(f"FIMOD_SEED must be an integer, got {env!r}") from None


def _level_table(V):
    return {"levelDims": [list(L.dims()) for L in V.levels],
            "levelInvariants": [[{"torsion": list(t), "rank": r} for t, r in M.invariants(L)]
                                for L in V.levels]}


def _load(args):
    if not args.input:
        raise ValidationError("this command needs --in FILE (or --in corpus:NAME)")
    if args.input.startswith("corpus:"):
        try:
            return C.get(args.input.split(":", 1)[1])
        except KeyError as e:
            raise ValidationError(str(e.args[0])) from None
    return io.read_module(args.input)


def _need(args, *names):
    for n in names:
        v = getattr(args, n)
        if v is None:
            raise ValidationError(f"--{n} is required for {args.command}")
        if isinstance(v, int) and v < 0:
            raise ValidationError(f"--{n} must be non-negative")


def _window(V, k, what):
    if k > V.N:
        raise ValidationError(f"{what} {k} exceeds truncation {V.N}")


def _theory(args, V):
    _need(args, "theory")
    return T.parse_theory(args.theory, V.coeff)


def _emit_module(args, V, result):
    result.update(_level_table(V))
    if args.out:
        io.write_json(args.out, io.module_to_json(V))
        result["written"] = args.out
    else:
        result["module"] = io.module_to_json(V)
    return result


# ------------------------------------------------------------ commands

def cmd_free(args):
    _need(args, "d", "N")
    coeff = parse_coeff(args.coeff)
    obj = args.obj if args.obj is not None else 0
    try:
        V = free_module(coeff, args.d, obj, args.N)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    return _emit_module(args, V, {"coeff": coeff.label(), "d": args.d, "N": args.N})


def cmd_shift(args):
    V = _load(args)
    _need(args, "a")
    _window(V, args.a, "shift")
    return _emit_module(args, S.shift(V, args.a), {"a": args.a})


def cmd_tadj(args):
    V = _load(args)
    _need(args, "a")
    _window(V, args.a, "shift")
    return _emit_module(args, S.t_adjoint(V, args.a), {"a": args.a})


def cmd_h0(args):
    return _emit_module(args, h0(_load(args)), {})


def cmd_gen_degree(args):
    return generation_degree(_load(args)).to_json()


def cmd_homology(args):
    V = _load(args)
    a = args.a if args.a is not None else 0
    _window(V, a, "homological degree")
    return _emit_module(args, Hm.homology_a(V, a), {"a": a})


def cmd_stable_range(args):
    return Hm.stable_range(_load(args)).to_json()


def cmd_extend(args):
    V = _load(args)
    _need(args, "N")
    if args.N < V.N:
        raise ValidationError(f"--N {args.N} is below the current truncation {V.N}")
    bound = Hm.stable_bound(V)[0]
    return _emit_module(args, Hm.extend(V, args.N), {"from": V.N, "to": args.N, "bound": bound})


def cmd_torsion_sub(args):
    V = _load(args)
    tau = _theory(args, V)
    ts = T.torsion_subobject(V, tau)
    res = ts.to_json()
    res["theory"] = tau.name
    return _emit_module(args, ts.sub, res)


def cmd_membership(args):
    V = _load(args)
    tau = _theory(args, V)
    ts = T.torsion_subobject(V, tau)
    member = all(M.is_epi(m) for m in ts.inclusion.maps)
    return {"theory": tau.name, "member": member, "stabilizedAt": ts.stabilized_at,
            "certificateLevel": ts.certificate_level,
            "nonTorsionLevels": T.eventually_torsion_levels(V, tau)}


def cmd_filtration(args):
    V = _load(args)
    tau = _theory(args, V)
    _need(args, "n")
    F, _ = T.filtration_F(V, tau, args.n)
    return _emit_module(args, F, {"theory": tau.name, "n": args.n})


def cmd_envelope(args):
    V = _load(args)
    tau = _theory(args, V)
    E, unit = T.envelope_fi(V, tau)
    res = {"theory": tau.name,
           "unitKernelDims": [list(M.kernel(m)[0].dims()) for m in unit.maps],
           "unitCokernelDims": [list(M.cokernel(m)[0].dims()) for m in unit.maps]}
    return _emit_module(args, E, res)


def cmd_lk(args):
    V = _load(args)
    tau = _theory(args, V)
    k = args.k if args.k is not None else 2
    _window(V, k, "stage")
    return T.l_truncated(V, tau, k)


def cmd_closed_check(args):
    V = _load(args)
    tau = _theory(args, V)
    a = args.a if args.a is not None else 0
    res = T.is_closed(V, tau, args.cls, a, trials=args.trials, seed=args.seed).to_json()
    res.update({"theory": tau.name, "class": args.cls, "a": a})
    return res


def cmd_check(args):
    only = None
    if args.suite not in ("all", None):
        try:
            only = {int(x) for x in args.suite.split(",")}
        except ValueError:
            raise ValidationError("--suite takes 'all' or a comma list of criterion numbers") from None
        if not only <= set(range(1, len(CK.CRITERIA) + 1)):
            raise ValidationError(f"criteria are numbered 1..{len(CK.CRITERIA)}")
    cfg = CK.CheckConfig(seed=args.seed)
    if args.trials is not None:
        cfg.closed_trials = args.trials
    results = CK.run_all(cfg, only)
    return {"suite": args.suite, "results": [r.to_json() for r in results],
            "pass": all(r.passed for r in results),
            "passed": sum(r.passed for r in results), "total": len(results)}


def cmd_corpus(args):
    if args.name:
        try:
            V = C.get(args.name)
        except KeyError as e:
            raise ValidationError(str(e.args[0])) from None
        return _emit_module(args, V, {"name": args.name, "description": C.describe(args.name)})
    return {"entries": [{"name": n, "description": C.describe(n)} for n in C.names()]}


COMMANDS = {
    "free": (cmd_free, "free module on one generator of degree --d"),
    "shift": (cmd_shift, "shift by --a"),
    "tadj": (cmd_tadj, "right adjoint of the shift by --a"),
    "h0": (cmd_h0, "degreewise cokernel of the images from lower levels"),
    "gen-degree": (cmd_gen_degree, "generation degree inside the window"),
    "homology": (cmd_homology, "homology of the subset complex in degree --a"),
    "stable-range": (cmd_stable_range, "presentation bound from H0/H1 and the verified colimit identity"),
    "extend": (cmd_extend, "extend to truncation --N by bounded colimits"),
    "torsion-sub": (cmd_torsion_sub, "largest eventually torsion subobject"),
    "membership": (cmd_membership, "is the module eventually torsion"),
    "filtration": (cmd_filtration, "subobject of elements torsion from level --n on"),
    "envelope": (cmd_envelope, "levelwise envelope with its unit"),
    "lk": (cmd_lk, "localization stages up to --k and the triangle identity"),
    "closed-check": (cmd_closed_check, "randomized closedness test"),
    "check": (cmd_check, "run the acceptance suite"),
    "corpus": (cmd_corpus, "list corpus entries, or export one with --name"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", help="module JSON file, or corpus:NAME")
    common.add_argument("--out", help="write the resulting module here")
    for flag in ("a", "k", "n", "d", "N"):
        common.add_argument(f"--{flag}", type=int)
    common.add_argument("--obj", help="object of a discrete coefficient category")
    common.add_argument("--coeff", default="f2", help="f<p> | q | z | discrete:<field>:<objs>")
    common.add_argument("--theory", help="zero | full | ztorsion | p-primary:<p> | support:<objs>")
    common.add_argument("--class", dest="cls", default="T-hat-a", choices=["T-hat-a", "T-hat", "T-tilde"])
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--suite", default="all")
    common.add_argument("--name", help="corpus entry")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    p = argparse.ArgumentParser(prog="fimod", description="Exact computations with truncated FI-modules.")
    p.add_argument("--version", action="version", version=f"fimod {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=helptext)
    return p


def _table(report) -> str:
    lines = [f"# fimod {report['engine']} {' '.join(report['command'])} (seed {report['seed']})"]
    res = report["result"]
    if "results" in res:
        for r in res["results"]:
            lines.append(f"[{'PASS' if r['pass'] else 'FAIL'}] {r['criterion']:2d} {r['title']}")
        lines.append(f"{res['passed']}/{res['total']} passed")
        return "\n".join(lines) + "\n"
    if "entries" in res:
        lines += [f"{e['name']:16s} {e['description']}" for e in res["entries"]]
        return "\n".join(lines) + "\n"
    dims = res.get("levelDims")
    if dims is not None:
        lines.append("level  dims  invariants")
        for n, d in enumerate(dims):
            inv = res.get("levelInvariants", [[]] * len(dims))[n]
            txt = "; ".join(
                "+".join([f"Z/{t}" for t in x["torsion"]] + ([f"R^{x['rank']}"] if x["rank"] else [])) or "0"
                for x in inv)
            lines.append(f"{n:5d}  {','.join(map(str, d)):4s}  {txt}")
    for k, v in res.items():
        if k in ("levelDims", "levelInvariants", "module"):
            continue
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def run(argv):
    """Parse argv and return (report, exit_code)."""
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    if args.trials is not None and args.trials <= 0:
        raise ValidationError("--trials must be positive")
    if args.trials is None and args.command == "closed-check":
        args.trials = 20
    t = time.time()
    result = COMMANDS[args.command][0](args)
    report = {"command": [args.command] + [a for a in argv if a != args.command],
              "engine": __version__, "seed": args.seed,
              "result": io.to_jsonable(result), "seconds": round(time.time() - t, 3)}
    code = 0
    if args.command == "check" and not result["pass"]:
        code = 1
    return report, code, args.fmt or "json"


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        report, code, fmt = run(argv)
    except FimodError as e:
        sys.stderr.write(io.dumps(e.to_json() | {"detail": io.to_jsonable(e.detail)}))
        return e.exit_code
    sys.stdout.write(_table(report) if fmt == "table" else io.dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
