"""Command line: classify, decompose, atlas and sweep.

Exit codes: 0 ok, 1 internal failure, 2 invalid input, 3 transition parameter,
4 not decomposable within the requested length, 5 open case.
"""

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import atlas as atlas_mod
from ._numerics import OMEGAS
from .decomposer import (RES_TOL, UNKNOWN, decompose1, decompose2, decompose3, decompose4)
from .errors import (CxReflectError, NotDecomposable, NotFormPreserving, NotUnitary,
                     ParameterOutOfRange, SearchExhausted, TransitionParameter, Unknown)
from .isometry import Parameter, classify, deltoid_f, normalize_lift

SCHEMA = 1
GRAY = "#cccccc"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TRANSITION, EXIT_NOTDEC, EXIT_UNKNOWN = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def parse_pi(text):
    """'p/q' (a rational multiple of pi) as a Fraction; decimals are rejected."""
    s = str(text).strip()
    if any(c in s.lower() for c in ".e") or not s:
        raise InputError(f"angle must be a rational p/q (multiple of pi), got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"angle must be a rational p/q (multiple of pi), got {text!r}") from None


def load_matrix(source):
    """Matrix JSON {"re": 3x3, "im": 3x3} from a path or '-' for stdin."""
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    try:
        data = json.loads(text)
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros((3, 3))), dtype=float)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"matrix JSON must hold 3x3 arrays 're' and 'im': {e}") from None
    if re.shape != (3, 3) or im.shape != (3, 3):
        raise InputError("matrix JSON must hold 3x3 arrays 're' and 'im'")
    try:
        F, k = normalize_lift(re + 1j * im)
    except (NotFormPreserving, NotUnitary) as e:
        raise InputError(f"not form preserving up to scale: {e}") from None
    return F, k


def _cplx(z):
    return [float(z.real), float(z.imag)]


def _frac(v):
    v = Fraction(v)
    return [v.numerator, v.denominator]


# ---------------------------------------------------------------- classify

def classify_report(F):
    key = classify(F)
    out = key.to_dict()
    out["trace"] = _cplx(F.trace)
    out["eigenvalues"] = [_cplx(l) for l in F.eigenvalues]
    out["deltoid_f"] = float(deltoid_f(F.trace))
    return out


def cmd_classify(args):
    F, _ = load_matrix(args.matrix)
    _emit(classify_report(F))
    return EXIT_OK


# ---------------------------------------------------------------- decompose

def reverify(target, alpha, centers):
    """Independent rebuild from the centers: min over Omega of the relative Frobenius residual."""
    a = complex(alpha)
    J = np.diag([1.0, 1.0, -1.0])
    M = np.eye(3, dtype=complex)
    for c in centers:
        p = np.asarray(c, dtype=complex)
        R = a * np.eye(3) + (a ** -2 - a) * np.outer(p, p.conj() @ J) / (p.conj() @ J @ p)
        M = R @ M
    scale = max(1.0, float(np.linalg.norm(target)))
    return min(float(np.linalg.norm(target - d * M)) / scale for d in OMEGAS)


def decompose_report(F, alpha, max_length=4, budget=10000, seed=0, tol=RES_TOL):
    """(exit code, report) for the shortest decomposition up to max_length."""
    unknown = False
    steps = [
        lambda: decompose1(F, alpha, tol),
        lambda: decompose2(F, alpha, alpha, tol),
        lambda: decompose3(F, alpha, budget, seed, tol),
        lambda: decompose4(F, alpha, budget, seed, tol),
    ]
    for n, step in enumerate(steps[:max_length], start=1):
        try:
            dec = step()
        except NotDecomposable:
            continue
        except Unknown:
            unknown = True
            continue
        centers = [c.coords for c in dec.centers]
        res = reverify(F.m, alpha.value, centers)
        if res > tol:
            raise SearchExhausted(f"independent re-verification failed ({res:.3g})")
        out = dec.to_dict()
        out["alpha"] = str(alpha)
        out["reverified_residual"] = res
        if unknown and n == 4:
            out["n"] = UNKNOWN
            out["upper_bound"] = 4
            return EXIT_UNKNOWN, out
        return EXIT_OK, out
    if unknown:
        return EXIT_UNKNOWN, {"n": UNKNOWN, "reason": "length 3 is an open case for this parameter"}
    return EXIT_NOTDEC, {"n": None, "reason": f"not decomposable with at most {max_length} factors"}


def cmd_decompose(args):
    F, _ = load_matrix(args.matrix)
    alpha = Parameter.from_pi(parse_pi(args.a))
    if not 1 <= args.max_length <= 4:
        raise InputError("max-length must be between 1 and 4")
    code, out = decompose_report(F, alpha, args.max_length, args.budget, args.seed, args.tol)
    _emit(out)
    return code


# ---------------------------------------------------------------- atlas

def atlas_to_dict(at, a):
    return {
        "schema": SCHEMA,
        "alpha": _frac(a),
        "chambers": [
            {
                "id": i,
                "vertices": [_frac(x) + _frac(y) for x, y in c.polygon],
                "status": c.status,
                "witness": (_frac(c.witness[0]) + _frac(c.witness[1])) if c.witness else None,
                "reason": c.reason,
            }
            for i, c in enumerate(at.chambers)
        ],
        "walls": [
            {
                "seg_id": i,
                "line_label": w.label,
                "chain": w.chain,
                "start": _frac(w.start.x) + _frac(w.start.y),
                "end": _frac(w.end.x) + _frac(w.end.y),
            }
            for i, w in enumerate(at.walls)
        ],
    }


def _pt(v):
    return (Fraction(v[0], v[1]), Fraction(v[2], v[3]))


def atlas_from_dict(d):
    """Inverse of atlas_to_dict, with rational coordinates restored."""
    if d.get("schema") != SCHEMA:
        raise InputError("unsupported atlas schema")
    return {
        "alpha": Fraction(*d["alpha"]),
        "chambers": [
            {"vertices": [_pt(v) for v in c["vertices"]], "status": c["status"],
             "witness": _pt(c["witness"]) if c["witness"] else None, "reason": c["reason"]}
            for c in d["chambers"]
        ],
        "walls": [
            {"line_label": w["line_label"], "chain": w["chain"], "start": _pt(w["start"]),
             "end": _pt(w["end"])}
            for w in d["walls"]
        ],
    }


def write_walls_csv(at, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seg_id", "line_label", "x1_num", "x1_den", "y1_num", "y1_den",
                    "x2_num", "x2_den", "y2_num", "y2_den"])
        for i, s in enumerate(at.walls):
            w.writerow([i, s.label] + _frac(s.start.x) + _frac(s.start.y)
                       + _frac(s.end.x) + _frac(s.end.y))


def render_atlas_svg(at, a, path):
    """T with theta1 horizontal, full chambers gray, walls labeled by line index."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Polygon

    with matplotlib.rc_context({"svg.hashsalt": "cxreflect", "svg.fonttype": "none",
                                "path.simplify": False}):
        fig, ax = plt.subplots(figsize=(5, 5))
        for c in at.chambers:
            poly = [(float(x), float(y)) for x, y in c.polygon]
            face = GRAY if c.status == "full" else ("#ffffff" if c.status == "empty" else "#f4d0d0")
            ax.add_patch(Polygon(poly, closed=True, facecolor=face, edgecolor="none"))
        colors = ("#1f4e9a", "#a02020", "#207040")
        for w in at.walls:
            xs = [float(w.start.x), float(w.end.x)]
            ys = [float(w.start.y), float(w.end.y)]
            ax.plot(xs, ys, color=colors[w.label % 3], linewidth=1.2)
            m = w.midpoint()
            ax.annotate(str(w.label), (float(m.x), float(m.y)), fontsize=7,
                        color=colors[w.label % 3], xytext=(2, 2), textcoords="offset points")
        ax.plot([0, 2, 2, 0], [0, 0, 2, 0], color="black", linewidth=1.0)
        ax.set_xlim(-0.05, 2.05)
        ax.set_ylim(-0.05, 2.05)
        ax.set_aspect("equal")
        ax.set_xticks([0, 0.5, 1, 1.5, 2])
        ax.set_xticklabels(["0", "π/2", "π", "3π/2", "2π"])
        ax.set_yticks([0, 0.5, 1, 1.5, 2])
        ax.set_yticklabels(["0", "π/2", "π", "3π/2", "2π"])
        ax.set_xlabel("θ1")
        ax.set_ylabel("θ2")
        ax.set_title(f"a = {a}π")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def render_sweep_svg(rep, path):
    """Empty-chamber count against a, with the multiples of 2pi/27 marked."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pts = [r for r in rep["points"] if not r["transition_parameter"]]
    xs = [r["a"][0] / r["a"][1] for r in pts]
    with matplotlib.rc_context({"svg.hashsalt": "cxreflect", "svg.fonttype": "none",
                                "path.simplify": False}):
        fig, ax = plt.subplots(figsize=(6, 3))
        for k in range(1, 9):
            ax.axvline(2 * k / 27, color="#dddddd", linewidth=0.8)
        ax.step(xs, [r["empty"] for r in pts], where="mid", color="#a02020", label="empty")
        ax.step(xs, [r["unknown"] for r in pts], where="mid", color="#1f4e9a", label="unknown")
        ax.set_xlim(0, 2 / 3)
        ax.set_xlabel("a / π")
        ax.set_ylabel("chambers")
        ax.legend(loc="upper right", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def cmd_atlas(args):
    a = parse_pi(args.a)
    if not 0 < a < Fraction(2, 3):
        raise ParameterOutOfRange("atlas needs 0 < a < 2/3 (multiples of pi)")
    at = atlas_mod.chambers(Parameter.from_pi(a), budget=args.budget, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = atlas_to_dict(at, a)
    (out / "atlas.json").write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    write_walls_csv(at, out / "walls.csv")
    render_atlas_svg(at, a, out / "atlas.svg")
    summary = {"alpha": _frac(a), "counts": at.counts(),
               "files": sorted(p.name for p in out.iterdir() if p.suffix in (".json", ".csv", ".svg"))}
    _emit(summary)
    return EXIT_OK


# ---------------------------------------------------------------- sweep

def sweep_report(a_from, a_to, steps):
    points, transitions = atlas_mod.sweep(a_from, a_to, steps)
    rows = []
    for p in points:
        c = p.counts
        rows.append({"a": _frac(p.a), "transition_parameter": p.transition,
                     "chambers": p.fingerprint[0] if p.fingerprint else None,
                     "full": c.get("full"), "empty": c.get("empty"), "unknown": c.get("unknown")})
    trans = [{"between": [_frac(x), _frac(y)],
              "nearest_multiple_of_2pi_27": _frac(atlas_mod.nearest_transition((x + y) / 2))}
             for x, y in transitions]
    empties = [p.a for p in points if p.counts.get("empty")]
    window = [_frac(min(empties)), _frac(max(empties))] if empties else None
    return {"schema": SCHEMA, "points": rows, "transitions": trans, "empty_window": window}


def cmd_sweep(args):
    a_from, a_to = parse_pi(args.a_from), parse_pi(args.a_to)
    if not 0 <= a_from < a_to <= Fraction(2, 3):
        raise ParameterOutOfRange("sweep range must lie in [0, 2/3] (multiples of pi)")
    rep = sweep_report(a_from, a_to, args.steps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.json").write_text(json.dumps(rep, indent=1, sort_keys=True) + "\n")
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a_num", "a_den", "transition_parameter", "chambers", "full", "empty", "unknown"])
        for r in rep["points"]:
            w.writerow(r["a"] + [int(r["transition_parameter"]), r["chambers"], r["full"],
                                 r["empty"], r["unknown"]])
    render_sweep_svg(rep, out / "sweep.svg")
    _emit({"transitions": rep["transitions"], "empty_window": rep["empty_window"]})
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def build_parser():
    p = argparse.ArgumentParser(prog="cxreflect", description=(
        "Products of complex reflections in PU(2,1): classification, decompositions, atlases."))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=RES_TOL, help="residual bound")
    common.add_argument("--budget", type=int, default=10000, help="search samples")
    common.add_argument("--seed", type=int, default=0, help="search seed")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="conjugacy class report of a matrix")
    c.add_argument("matrix", help="matrix JSON path, or - for stdin")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("decompose", parents=[common], help="shortest product of complex reflections")
    d.add_argument("matrix", help="matrix JSON path, or - for stdin")
    d.add_argument("--a", required=True, help="parameter angle as p/q (multiple of pi)")
    d.add_argument("--max-length", type=int, default=4)
    d.set_defaults(func=cmd_decompose)

    a = sub.add_parser("atlas", parents=[common], help="chambers of T with full/empty status (SVG, JSON, CSV)")
    a.add_argument("--a", required=True, help="parameter angle as p/q (multiple of pi)")
    a.add_argument("--out", default=".", help="output directory")
    a.set_defaults(func=cmd_atlas)

    s = sub.add_parser("sweep", parents=[common], help="chamber status over a grid of parameters")
    s.add_argument("--from", dest="a_from", default="0")
    s.add_argument("--to", dest="a_to", default="2/3")
    s.add_argument("--steps", type=int, default=144)
    s.add_argument("--out", default=".", help="output directory")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParameterOutOfRange, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TransitionParameter as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TRANSITION
    except CxReflectError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
