"""Command-line interface.

Every command builds one report dictionary; ``--format text`` and
``--format json`` are two renderings of that same dictionary.  Exit codes:
0 success, 1 a checked property failed (or ``--expect`` did not match),
2 usage or parse error, 3 size budget exhausted or an Unknown answer.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .checks import run_verify, verify_names
from .complexes import (
    DEFAULT_BUDGET,
    FreeComplex,
    ann_complex,
    homology,
    koszul,
    parse_complex,
    parse_map,
    render_complex,
    render_homotopy,
    supp_complex,
    tensor,
)
from .errors import ParseError, RingMismatch, SizeBudgetExceeded, ThickIdealsError
from .formal import (
    FormalComplex,
    WindowTail,
    formal_ann,
    formal_support,
    loewy_profile,
    minimal_c,
    parse_formal,
    render_formal,
    tensor_formal,
)
from .ideals import dvr_fiber_report, enumerate_artinian, join, meet, member, parse_descriptor
from .nilpotence import BUDGET_EXHAUSTED, HYPOTHESIS_FAILS, VANISHES, find_nilpotence_index
from .rings import Ring, dvr, parse_ring
from .spectra import Prime, artinian_spc_report, parse_spcl, s_of_support

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

DEFAULT_WINDOW = 32


class UnknownAnswer(Exception):
    """An answer the artifact cannot determine; reported with exit code 3."""


# -- input loading --------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _is_formal(text: str) -> bool:
    return any(line.split()[:1] == ["tail"] or " torsion " in f" {line} " for line in text.splitlines())


def load_object(path: str):
    """A FreeComplex or a FormalComplex, decided by the file contents."""
    text = _read(path)
    return parse_formal(text) if _is_formal(text) else parse_complex(text)


def _ring(args) -> Optional[Ring]:
    return parse_ring(args.ring) if getattr(args, "ring", None) else None


def _check_ring(r: Optional[Ring], X):
    ring = X.ring if isinstance(X, FreeComplex) else dvr()
    if r is not None and r != ring:
        raise RingMismatch(f"--ring {r} but the input lives over {ring}")
    return ring


def _parse_elems(r: Ring, text: str):
    return [r.parse_elem(x.strip()) for x in text.split(",") if x.strip()]


def _objects(args, required: int = 1):
    """Objects named by --koszul, --complex and --formal, in that order."""
    r = _ring(args)
    out = []
    if getattr(args, "koszul", None):
        if r is None:
            raise ParseError("--koszul needs --ring")
        out.append(koszul(r, _parse_elems(r, args.koszul)))
    for path in getattr(args, "complex", None) or []:
        X = parse_complex(_read(path))
        _check_ring(r, X)
        out.append(X)
    for path in getattr(args, "formal", None) or []:
        X = parse_formal(_read(path))
        _check_ring(r, X)
        out.append(X)
    if len(out) < required:
        raise ParseError(f"expected {required} input object(s) from --koszul/--complex/--formal")
    return out


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("TT_SIZE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"TT_SIZE_BUDGET must be an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


def _env_budget() -> int:
    env = os.environ.get("TT_SIZE_BUDGET")
    return int(env) if env and env.isdigit() else DEFAULT_BUDGET


# -- reports -----------------------------------------------------------------------


def _homology_report(X, window: int) -> dict:
    if isinstance(X, FormalComplex):
        hi = X.start if X.is_bounded else max(window, X.lo)
        if isinstance(X.tail, WindowTail):
            hi = min(hi, X.start)
        return {str(i): str(X.module(i)) for i in range(X.lo, hi)}
    return {str(i): str(H) for i, H in homology(X).items()}


def cmd_supp(args) -> dict:
    (X,) = _objects(args)[:1]
    if isinstance(X, FormalComplex):
        S = formal_support(X)
        if S is None:
            raise UnknownAnswer("support beyond the window is not determined")
        return {"command": "supp", "ring": "DVR", "result": str(S)}
    return {"command": "supp", "ring": str(X.ring), "result": str(supp_complex(X)),
            "homology": _homology_report(X, args.window)}


def cmd_ann(args) -> dict:
    (X,) = _objects(args)[:1]
    if isinstance(X, FormalComplex):
        k = formal_ann(X)
        if k == "unknown":
            raise UnknownAnswer("annihilator beyond the window is not determined")
        return {"command": "ann", "ring": "DVR", "result": str(dvr().dvr_ideal(k))}
    return {"command": "ann", "ring": str(X.ring), "result": str(ann_complex(X))}


def cmd_homology(args) -> dict:
    (X,) = _objects(args)[:1]
    ring = "DVR" if isinstance(X, FormalComplex) else str(X.ring)
    return {"command": "homology", "ring": ring, "result": _homology_report(X, args.window)}


def cmd_koszul(args) -> dict:
    r = _ring(args)
    if r is None or not args.koszul:
        raise ParseError("koszul needs --ring and --koszul")
    K = koszul(r, _parse_elems(r, args.koszul))
    text = render_complex(K)
    _write_out(args, text)
    return {"command": "koszul", "ring": str(r), "ranks": list(K.ranks), "result": text}


def _write_out(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)


def cmd_tensor(args) -> dict:
    objs = _objects(args, 2)
    X, Y = objs[0], objs[1]
    if isinstance(X, FormalComplex) != isinstance(Y, FormalComplex):
        raise ParseError("tensor needs two free complexes or two formal complexes")
    if isinstance(X, FormalComplex):
        T = tensor_formal(X, Y, args.window)
        text = render_formal(T)
        _write_out(args, text)
        return {"command": "tensor", "ring": "DVR", "window": args.window,
                "homology": _homology_report(T, args.window), "result": text}
    T = tensor(X, Y, _budget(args))
    text = render_complex(T)
    _write_out(args, text)
    return {"command": "tensor", "ring": str(T.ring), "ranks": list(T.ranks), "lo": T.lo,
            "homology": _homology_report(T, args.window), "support": str(supp_complex(T)), "result": text}


def cmd_member(args) -> dict:
    (X,) = _objects(args)[:1]
    r = _ring(args) or (X.ring if isinstance(X, FreeComplex) else dvr())
    if not args.ideal:
        raise ParseError("member needs --ideal")
    d = parse_descriptor(r, args.ideal[0], load_object)
    ans = member(d, X)
    report = {"command": "member", "ring": str(r), "ideal": str(d), "result": ans.value}
    if ans.reason:
        report["reason"] = ans.reason
    report["evidence"] = {k: v for k, v in ans.evidence}
    if ans.value == "Unknown":
        args._unknown = True
    return report


def cmd_lattice(args) -> dict:
    r = _ring(args)
    if r is None or not args.ideal or len(args.ideal) != 2:
        raise ParseError("lattice needs --ring and two --ideal descriptors")
    d1, d2 = (parse_descriptor(r, t, load_object) for t in args.ideal)
    return {"command": "lattice", "ring": str(r), "ideals": [str(d1), str(d2)],
            "meet": str(meet(d1, d2)), "join": str(join(d1, d2)),
            "result": f"meet {meet(d1, d2)}, join {join(d1, d2)}"}


def cmd_classify_artinian(args) -> dict:
    r = _ring(args)
    if r is None:
        raise ParseError("classify-artinian needs --ring")
    rep = enumerate_artinian(r, args.samples, args.seed)
    rep = {"command": "classify-artinian", **rep, "result": rep["count"]}
    if not (rep["lattice_ok"] and rep["membership_ok"]):
        args._failed = True
    return rep


def cmd_spc_report(args) -> dict:
    r = _ring(args)
    if r is None:
        raise ParseError("spc-report needs --ring")
    rep = artinian_spc_report(r)
    if not rep["s_of_S_identity"]:
        args._failed = True
    return {"command": "spc-report", **rep, "result": "s∘S = 1" if rep["s_of_S_identity"] else "s∘S ≠ 1"}


def cmd_minimal_c(args) -> dict:
    objs = _objects(args)
    X = objs[0]
    if not isinstance(X, FormalComplex):
        raise ParseError("minimal-c needs a formal DVR complex (--formal)")
    mc = minimal_c(X)
    prof = loewy_profile(X, args.window)
    if mc.kind == "UnknownWindow":
        args._unknown = True
    return {"command": "minimal-c", "ring": "DVR", "window": args.window,
            "loewy_lengths": {str(prof.lo + k): str(v) for k, v in enumerate(prof.values)},
            "tail_bound": prof.tail_bound,
            "result": str(mc)}


def cmd_nilpotence(args) -> dict:
    if not args.map:
        raise ParseError("nilpotence needs --map")
    f = parse_map(_read(args.map))
    _check_ring(_ring(args), f.source)
    t_max = args.budget if args.budget is not None else 8
    res = find_nilpotence_index(f, t_max, _env_budget())
    report = {"command": "nilpotence", "ring": str(f.ring), "t_max": t_max, "result": str(res),
              "ann_chain": [str(I) for I in res.ann_chain]}
    if res.outcome == VANISHES:
        report["minimal"] = res.minimal
        report["witness_verified"] = True
        if args.witness_out:
            Path(args.witness_out).write_text(render_homotopy(res.power, res.witness))
            report["witness_file"] = args.witness_out
    elif res.outcome == HYPOTHESIS_FAILS:
        report["evidence"] = res.evidence
    elif res.outcome == BUDGET_EXHAUSTED:
        report["evidence"] = res.evidence
        args._unknown = True
    return report


def cmd_fiber_report(args) -> dict:
    rep = dvr_fiber_report(args.cmax)
    if not rep["separations_verified"]:
        args._failed = True
    return {"command": "fiber-report", **rep, "result": f"{len(rep['fiber_over_(0)'])} primes over (0)"}


def cmd_verify(args) -> dict:
    if args.name == "list":
        return {"command": "verify", "result": verify_names()}
    names = verify_names() if args.name == "all" else [args.name]
    reports = []
    for n in names:
        w = 16 if n == "lemma7.20" and args.name == "all" else args.window
        rep = run_verify(n, {"seed": args.seed}, w)
        reports.append(rep.as_dict())
    ok = all(r["passed"] for r in reports)
    if not ok:
        args._failed = True
    return {"command": "verify", "suites": reports, "result": "pass" if ok else "fail"}


def cmd_s_of_supp(args) -> dict:
    r = _ring(args)
    if r is None or not args.spcl:
        raise ParseError("s-of-supp needs --ring and --spcl")
    W = parse_spcl(r, args.spcl)
    s = s_of_support(W)
    out = {"command": "s-of-supp", "ring": str(r), "support": str(W)}
    if isinstance(s, Prime):
        out["result"] = str(s.prime)
    else:
        out["result"] = "NotPrime"
        out["witness"] = [str(p) for p in s.witness] if isinstance(s.witness, (list, tuple)) else str(s.witness)
        out["reason"] = s.reason
    return out


COMMANDS = {
    "supp": cmd_supp,
    "ann": cmd_ann,
    "homology": cmd_homology,
    "koszul": cmd_koszul,
    "tensor": cmd_tensor,
    "member": cmd_member,
    "lattice": cmd_lattice,
    "classify-artinian": cmd_classify_artinian,
    "spc-report": cmd_spc_report,
    "minimal-c": cmd_minimal_c,
    "nilpotence": cmd_nilpotence,
    "fiber-report": cmd_fiber_report,
    "verify": cmd_verify,
    "s-of-supp": cmd_s_of_supp,
}


# -- rendering -----------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)


def _text_lines(value, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            elif isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}:")
                lines.extend(f"{pad}  {line}" for line in v.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                sub = _text_lines(item, indent + 1)
                lines.append(f"{pad}- " + sub[0].strip())
                lines.extend(sub[1:])
            elif isinstance(item, list):
                lines.append(f"{pad}- [" + ", ".join(_scalar(x) for x in item) + "]")
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def render_report(report: dict, fmt: str) -> str:
    data = _jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text_lines(data)) + "\n"


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thickideals", description="Thick tensor ideals of D⁻(R) over a ring catalog.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--ring")
        sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--expect", help="expected result; a mismatch exits with 1")
        return sp

    def objects(sp):
        sp.add_argument("--complex", action="append", metavar="FILE")
        sp.add_argument("--formal", action="append", metavar="FILE")
        sp.add_argument("--koszul", metavar="X1,X2,...")
        return sp

    for name in ("supp", "ann", "homology", "member", "minimal-c"):
        objects(common(sub.add_parser(name)))
    sub.choices["member"].add_argument("--ideal", action="append")
    t = objects(common(sub.add_parser("tensor")))
    t.add_argument("--out", metavar="FILE")
    k = common(sub.add_parser("koszul"))
    k.add_argument("--koszul", metavar="X1,X2,...")
    k.add_argument("--out", metavar="FILE")
    la = common(sub.add_parser("lattice"))
    la.add_argument("--ideal", action="append")
    ca = common(sub.add_parser("classify-artinian"))
    ca.add_argument("--samples", type=int, default=30)
    ca.add_argument("--seed", type=int, default=0)
    common(sub.add_parser("spc-report"))
    n = common(sub.add_parser("nilpotence", description="--budget is the largest tensor power tried"))
    n.add_argument("--map", metavar="FILE")
    n.add_argument("--witness-out", metavar="FILE")
    fr = common(sub.add_parser("fiber-report"))
    fr.add_argument("--cmax", type=int, default=3)
    v = common(sub.add_parser("verify"))
    v.add_argument("name", help="suite name, 'all' or 'list'")
    v.add_argument("--seed", type=int, default=0)
    s = common(sub.add_parser("s-of-supp"))
    s.add_argument("--spcl")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args._failed = False
    args._unknown = False
    try:
        report = COMMANDS[args.command](args)
    except UnknownAnswer as exc:
        stdout.write(render_report({"command": args.command, "result": "Unknown", "reason": str(exc)}, args.format))
        return EXIT_UNKNOWN
    except SizeBudgetExceeded as exc:
        stdout.write(render_report({"command": args.command, "result": "BudgetExceeded", "reason": str(exc)}, args.format))
        return EXIT_UNKNOWN
    except (ThickIdealsError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    stdout.write(render_report(report, args.format))
    if args.expect is not None and str(report.get("result")).strip().lower() != args.expect.strip().lower():
        stderr.write(f"expected {args.expect}, got {report.get('result')}\n")
        return EXIT_CHECK_FAILED
    if args._failed:
        return EXIT_CHECK_FAILED
    if args._unknown:
        return EXIT_UNKNOWN
    return EXIT_OK


def main() -> None:
    sys.exit(run())
