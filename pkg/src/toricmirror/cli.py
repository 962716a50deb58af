"""Command-line front end: ``toricmirror <command> polytope.poly [options]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import io
from .divisors import (
    anticanonical,
    build_divisor_lattice,
    canonical_section_count,
    kahler_cone,
    section_space,
)
from .exactlin import primitive
from .mirror import (
    classify_degeneration,
    deformation_dim,
    degeneration_cone,
    flop_mirror_report,
    mirror_check,
    picard_dim,
)
from .polytope import dual_polytope, is_reflexive
from .triangulation import (
    apply_flop,
    boundary_skeleton_points,
    build_triangulation,
    check_spanning,
    flop_candidates,
)

COMMANDS = ("dual", "reflexive", "points", "triangulate", "hodge", "kahler", "degeneration", "mirror", "flops", "sections")


@dataclass
class Report:
    command: str
    digest: str
    payload: dict
    warnings: list = field(default_factory=list)
    text: Optional[str] = None  # preferred human rendering, if any

    def machine(self) -> str:
        doc = {"command": self.command, "input_sha256": self.digest, "payload": self.payload, "warnings": self.warnings}
        return json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n"

    def human(self) -> str:
        lines = [f"# {w}" for w in self.warnings]
        if self.text is not None:
            return "\n".join(lines + [self.text.rstrip("\n")]) + "\n"
        lines += _render(self.payload)
        return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


def _render(payload: dict, indent: str = "") -> list:
    out = []
    for k, v in payload.items():
        if isinstance(v, dict):
            out.append(f"{indent}{k}:")
            out += _render(v, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{indent}{k}: {len(v)}")
            cols = list(v[0].keys())
            out.append(indent + "  " + "\t".join(cols))
            for row in v:
                out.append(indent + "  " + "\t".join(_fmt(row[c]) for c in cols))
        elif isinstance(v, list) and v and isinstance(v[0], (list, tuple)):
            out.append(f"{indent}{k}: {len(v)}")
            for row in v:
                out.append(indent + "  " + " ".join(_fmt(x) for x in row))
        else:
            out.append(f"{indent}{k}: {_fmt(v)}")
    return out


# ---------------------------------------------------------------- helpers


def _parse_int_list(text: str, what: str) -> list:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated list of numbers") from None


def _ints(v):
    return [int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in v]


def _triangulation(args, P, option: str):
    path = getattr(args, option)
    if path:
        return io.read_triangulation(path, host=P)
    return build_triangulation(P)


def _hodge_payload(rep) -> dict:
    return {
        "d": rep.d,
        "n": rep.n,
        "base": rep.base,
        "total": rep.total,
        "corrections": [
            {"face": list(c.face), "dual_face": list(c.dual_face), "interior": c.interior,
             "dual_interior": c.dual_interior, "product": c.product}
            for c in rep.nonzero_corrections
        ],
    }


def _cone_payload(K, T, rays: bool) -> dict:
    out = {
        "points": [list(p) for p in T.points],
        "simplices": len(T.simplices),
        "kernel_basis": [list(v) for v in K.lattice.basis_vectors],
        "relation_generators": len(K.relation_generators),
        "normals": [list(h) for h in K.normals],
        "dimension": K.dimension,
        "interior_nonempty": K.interior_nonempty,
    }
    if rays:
        out["extreme_rays"] = [list(r) for r in K.extreme_rays]
        out["lineality"] = [list(r) for r in K.lineality]
    return out


# --------------------------------------------------------------- commands


def _cmd_dual(args, P):
    D = dual_polytope(P)
    payload = {"rank": D.n, "integral": D.is_integral(), "vertices": [_ints(v) for v in D.vertices]}
    text = io.format_polytope(D.vertices) if D.is_integral() else None
    return payload, text


def _cmd_reflexive(args, P):
    return {"reflexive": is_reflexive(P)}, None


def _cmd_points(args, P):
    info = P.lattice_point_info
    dims = {}
    for dim, faces in P.faces.items():
        for f in faces:
            dims[f.id] = dim
    rows = [{"point": list(i.point), "face_dim": (P.n if i.face is None else dims[i.face])} for i in info]
    payload = {
        "count": len(info),
        "interior": len(P.interior_points()),
        "boundary": len(P.boundary_points()),
        "points": rows,
    }
    if is_reflexive(P):
        payload["skeleton"] = len(boundary_skeleton_points(P))
    return payload, None


def _cmd_triangulate(args, P):
    T = _triangulation(args, P, "triangulation")
    payload = {
        "points": [list(p) for p in T.points],
        "simplices": [list(s) for s in T.simplices],
        "spanning_index": check_spanning(T),
        "volume": T.volume(),
    }
    return payload, io.format_triangulation(T)


def _cmd_hodge(args, P):
    T = _triangulation(args, P, "triangulation") if args.triangulation else None
    return {"picard": _hodge_payload(picard_dim(P, T)), "deformation": _hodge_payload(deformation_dim(P))}, None


def _cmd_kahler(args, P):
    T = _triangulation(args, P, "triangulation")
    K = kahler_cone(T, build_divisor_lattice(T))
    return _cone_payload(K, T, args.rays), None


def _cmd_degeneration(args, P):
    D = dual_polytope(P)
    Ts = _triangulation(args, D, "dual_triangulation")
    K = degeneration_cone(D, Ts)
    payload = _cone_payload(K, Ts, args.rays)
    if args.mu:
        fam = classify_degeneration(_parse_int_list(args.mu, "--mu"), Ts)
        payload["mu"] = list(fam.mu)
        payload["classification"] = fam.classification
        payload["min_pairing"] = min(fam.pairings) if fam.pairings else None
    return payload, None


def _cmd_mirror(args, P):
    T = _triangulation(args, P, "triangulation") if args.triangulation else None
    Ts = _triangulation(args, dual_polytope(P), "dual_triangulation")
    r = mirror_check(P, T, Ts)
    payload = {
        "pic": r.pic,
        "def": r.defo,
        "mirror_pic": r.pic_mirror,
        "mirror_def": r.def_mirror,
        "pic_equals_mirror_def": r.picard_matches,
        "def_equals_mirror_pic": r.deformation_matches,
        "corrections_swap": r.corrections_swap,
        "cones_identified": r.cones_identified,
        "k3_sum_20": r.k3,
        "ok": r.all_ok,
    }
    return payload, None


def _cmd_flops(args, P):
    T = _triangulation(args, P, "triangulation")
    cands = flop_candidates(T)
    rows = [
        {"index": k, "removed": [list(s) for s in c.removed], "added": [list(s) for s in c.added],
         "circuit": [list(T.points[i]) for i in (c.d1, c.d2, c.d3, c.d4)]}
        for k, c in enumerate(cands)
    ]
    payload = {"count": len(cands), "circuits": rows}
    text = None
    if args.apply is not None:
        if not 0 <= args.apply < len(cands):
            raise ValueError(f"--apply {args.apply}: there are {len(cands)} circuits")
        c = cands[args.apply]
        Tf = apply_flop(T, c)
        rep = flop_mirror_report(T, Tf, P)
        d = len(T.points)
        circuit = [0] * d
        circuit[c.d1] += 1
        circuit[c.d4] += 1
        circuit[c.d2] -= 1
        circuit[c.d3] -= 1
        sep = list(primitive(rep.cone.lattice.kernel_coordinates(circuit)))
        payload["applied"] = {
            "index": args.apply,
            "simplices": [list(s) for s in Tf.simplices],
            "picard": rep.picard.total,
            "picard_flopped": rep.picard_flopped.total,
            "interiors_disjoint": rep.disjoint,
            "first_interior_nonempty": rep.disjointness.first_interior_nonempty,
            "second_interior_nonempty": rep.disjointness.second_interior_nonempty,
            # <x, sep> >= 0 on the first cone and <= 0 on the second
            "separating_normal": sep,
            "separates": tuple(sep) in set(rep.cone.normals)
            and tuple(-x for x in sep) in set(rep.cone_flopped.normals),
        }
    return payload, text


def _cmd_sections(args, P):
    T = _triangulation(args, P, "triangulation")
    DL = build_divisor_lattice(T)
    if args.rho is None or args.rho == "anticanonical":
        rho = list(anticanonical(DL))
    else:
        rho = _parse_int_list(args.rho, "--rho")
        if any(x.denominator != 1 for x in rho):
            raise ValueError("--rho entries must be integers")
        rho = [int(x) for x in rho]
    S = section_space(T, DL, rho)
    count, lower = canonical_section_count(T, DL, rho)
    payload = {
        "rho": rho,
        "count": len(S),
        "canonical_count": count,
        "lower_dimensional": lower,
        "sections": [{"point": list(p), "exponents": list(e)} for p, e in zip(S.points, S.exponents)],
    }
    return payload, None


HANDLERS = {
    "dual": _cmd_dual,
    "reflexive": _cmd_reflexive,
    "points": _cmd_points,
    "triangulate": _cmd_triangulate,
    "hodge": _cmd_hodge,
    "kahler": _cmd_kahler,
    "degeneration": _cmd_degeneration,
    "mirror": _cmd_mirror,
    "flops": _cmd_flops,
    "sections": _cmd_sections,
}


def run(command: str, args: argparse.Namespace) -> Report:
    """Execute one command and return its report (errors propagate)."""
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    h = hashlib.sha256()
    for path in (args.polytope, getattr(args, "triangulation", None), getattr(args, "dual_triangulation", None)):
        if path:
            h.update(Path(path).read_bytes())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        P = io.read_polytope(args.polytope)
        payload, text = HANDLERS[command](args, P)
    return Report(command, h.hexdigest(), payload, [str(w.message) for w in caught], text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricmirror", description="Reflexive polytope and toric mirror computations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("polytope", help="polytope file: header 'n d' then d vertex rows")
    p.add_argument("--triangulation", help="triangulation file for the polytope")
    p.add_argument("--dual-triangulation", dest="dual_triangulation", help="triangulation file for the dual polytope")
    p.add_argument("--rho", help="comma-separated divisor coefficients, or 'anticanonical'")
    p.add_argument("--apply", type=int, help="index of the flop circuit to apply")
    p.add_argument("--mu", help="degeneration direction over the dual skeleton points (comma-separated)")
    p.add_argument("--rays", action="store_true", help="also compute extreme rays of the cone")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = run(args.command, args)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(rep.machine() if args.format == "machine" else rep.human())
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
