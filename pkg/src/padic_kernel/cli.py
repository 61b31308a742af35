"""Command-line entry point ``pdk``.

Exit status: 0 on success, 1 when a checked property fails (the witness is
printed), 2 on unreadable or inconsistent input.
"""

from __future__ import annotations

import argparse
import os
import json
import sys
from typing import Sequence

from . import acceptance
from .distribution import Custom, DepthLimitExceeded, Distribution, modulated_pair, pair
from .geometry import product_split
from .io import (
    GridSpec,
    ParseError,
    emit,
    encode_ball,
    encode_point,
    encode_sb,
    load,
)
from .kernel import Kernel, converse_roundtrip, independence_check, kernel_apply, kernel_roundtrip
from .padic import PAdicPoint, check_coordinate
from .sampling import default_seed
from .scalar import Cyc
from .schwartz import SBFunction, convolve, eval_at, fourier, integrate, tensor, tensor_decompose
from .wavefront import (
    InconclusiveBounded,
    MicrolocalQuery,
    NotSmoothWitness,
    SmoothCertificate,
    check_wf_inclusion,
    is_smooth_at,
)

OK, VIOLATED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# -- helpers -----------------------------------------------------------------


def _load(path: str, *kinds: str):
    try:
        f = load(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None
    if kinds and f.kind not in kinds:
        raise InputError(f"{path}: expected a {' or '.join(kinds)} payload, found {f.kind}")
    return f.payload


def _point(p: int, text: str) -> PAdicPoint:
    try:
        return PAdicPoint(p, tuple(check_coordinate(p, part.strip()) for part in text.split(",")))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad point {text!r}: {exc}") from None


def _split(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--split expects 'n1,n2', got {text!r}") from None
    return a, b


def _scalar(c: Cyc, approx: bool) -> str:
    if not approx:
        return str(c)
    z = c.to_complex()
    return f"{c}    ~ {z.real:.12g}{z.imag:+.12g}i"


def _scalar_json(c: Cyc, approx: bool) -> dict:
    out = {"exact": str(c)}
    if approx:
        z = c.to_complex()
        out["approx"] = [round(z.real, 12), round(z.imag, 12)]
    return out


def _kernel(args, obj) -> Kernel:
    if isinstance(obj, Kernel):
        if args.split and _split(args.split) != obj.split:
            raise InputError(f"--split {args.split} disagrees with the file's split {obj.split}")
        return obj
    if not args.split:
        raise InputError("a distribution file needs --split n1,n2 to be read as a kernel")
    try:
        return Kernel(obj, _split(args.split))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _tabulate(v: Distribution, source: Kernel) -> Distribution:
    """Replace lazy custom atoms by tables over the first-factor shadows of the source tables."""
    shadows: dict[int, set] = {}
    for _, atom in source.u.atoms:
        if isinstance(atom, Custom) and atom.table is not None:
            shadows.setdefault(atom.depth_limit, set()).update(product_split(b, source.split[0])[0] for b, _ in atom.table)
    atoms = []
    for w, atom in v.atoms:
        if isinstance(atom, Custom) and atom.table is None:
            if atom.depth_limit is None or atom.depth_limit not in shadows:
                raise InputError("result has an untabulated custom atom and cannot be written")
            table = [(c, atom.value(c)) for c in sorted(shadows[atom.depth_limit])]
            atom = Custom.from_table(v.p, [(c, x) for c, x in table if not x.is_zero()], atom.depth_limit)
        atoms.append((w, atom))
    return Distribution(v.p, v.dim, tuple(atoms))


def _verdict_json(x0: PAdicPoint, xi0: PAdicPoint, v, approx: bool) -> dict:
    row = {"x0": encode_point(x0), "xi0": encode_point(xi0), "verdict": v.kind}
    row["U"] = encode_ball(v.U)
    row["Ucheck"] = encode_ball(v.Ucheck)
    if isinstance(v, SmoothCertificate):
        row.update(N=v.N, proved=v.proved, probe_depth=v.probe_depth)
    elif isinstance(v, NotSmoothWitness):
        row.update(
            phi=encode_sb(v.phi), lam=str(v.lam), xi=encode_point(v.xi), value=_scalar_json(v.value, approx)
        )
    elif isinstance(v, InconclusiveBounded):
        row.update(probe_depth=v.probe_depth, ord_floor=v.ord_floor, probes=v.probes, skipped=v.skipped, note=v.note)
    return row


def _jsonl(row: dict) -> str:
    return json.dumps(row, sort_keys=False)


# -- commands ----------------------------------------------------------------


def cmd_canon(args, out) -> int:
    out.write(emit(_load(args.file, "sb")))
    return OK


def cmd_eval(args, out) -> int:
    f: SBFunction = _load(args.file, "sb")
    x = _point(f.p, args.at)
    if x.dim != f.dim:
        raise InputError(f"--at has dimension {x.dim}, the function lives on dimension {f.dim}")
    out.write(_scalar(eval_at(f, x), args.approx) + "\n")
    return OK


def cmd_integrate(args, out) -> int:
    out.write(_scalar(integrate(_load(args.file, "sb")), args.approx) + "\n")
    return OK


def cmd_fourier(args, out) -> int:
    out.write(emit(fourier(_load(args.file, "sb"))))
    return OK


def _two_sb(args) -> tuple[SBFunction, SBFunction]:
    f, g = _load(args.f, "sb"), _load(args.g, "sb")
    if f.p != g.p:
        raise InputError(f"mismatched primes {f.p} and {g.p}")
    return f, g


def cmd_convolve(args, out) -> int:
    f, g = _two_sb(args)
    if f.dim != g.dim:
        raise InputError(f"dimension mismatch: {f.dim} vs {g.dim}")
    out.write(emit(convolve(f, g)))
    return OK


def cmd_tensor(args, out) -> int:
    f, g = _two_sb(args)
    out.write(emit(tensor(f, g)))
    return OK


def cmd_tensor_decompose(args, out) -> int:
    h: SBFunction = _load(args.file, "sb")
    if not 0 < args.split < h.dim:
        raise InputError(f"--split must lie strictly between 0 and {h.dim}")
    for c, C, D in tensor_decompose(h, args.split):
        out.write(_jsonl({"coef": _scalar_json(c, args.approx), "C": encode_ball(C), "D": encode_ball(D)}) + "\n")
    return OK


def _dist_and_sb(args) -> tuple[Distribution, SBFunction]:
    u, phi = _load(args.dist, "distribution"), _load(args.sb, "sb")
    if (u.p, u.dim) != (phi.p, phi.dim):
        raise InputError(f"distribution on Q_{u.p}^{u.dim} cannot be paired with a function on Q_{phi.p}^{phi.dim}")
    return u, phi


def cmd_pair(args, out) -> int:
    u, phi = _dist_and_sb(args)
    out.write(_scalar(pair(u, phi), args.approx) + "\n")
    return OK


def cmd_modulated_pair(args, out) -> int:
    u, phi = _dist_and_sb(args)
    eta = _point(u.p, args.eta)
    if eta.dim != u.dim:
        raise InputError(f"--eta has dimension {eta.dim}, expected {u.dim}")
    out.write(_scalar(modulated_pair(u, phi, eta), args.approx) + "\n")
    return OK


def cmd_kernel_apply(args, out) -> int:
    K = _kernel(args, _load(args.kernel, "kernel", "distribution"))
    psi = _load(args.psi, "sb")
    if (psi.p, psi.dim) != (K.p, K.split[1]):
        raise InputError(f"psi must live on Q_{K.p}^{K.split[1]}")
    out.write(emit(_tabulate(kernel_apply(K, psi), K)))
    return OK


def cmd_kernel_roundtrip(args, out) -> int:
    K = _kernel(args, _load(args.kernel, "kernel", "distribution"))
    reports = [
        kernel_roundtrip(K, args.depth, args.alpha_lo),
        converse_roundtrip(lambda psi: kernel_apply(K, psi), K.p, *K.split, args.depth, args.alpha_lo),
    ]
    for rep in reports:
        out.write(str(rep) + "\n")
    return OK if all(r.ok for r in reports) else VIOLATED


def cmd_independence(args, out) -> int:
    K = _kernel(args, _load(args.kernel, "kernel", "distribution"))
    phi = _load(args.phi, "sb")
    if (phi.p, phi.dim) != (K.p, K.u.dim):
        raise InputError(f"phi must live on Q_{K.p}^{K.u.dim}")
    seed = default_seed() if args.seed is None else args.seed
    rep = independence_check(K.u, phi, K.split[0], args.trials, seed)
    out.write(f"seed: {seed}\n{rep}\n")
    return OK if rep.passed else VIOLATED


def _query_overrides(args, q: MicrolocalQuery) -> MicrolocalQuery:
    return MicrolocalQuery(
        q.u, q.x0, q.xi0, q.lam,
        q.nbhd_radius,
        q.probe_depth,
        q.ord_floor if args.ord_floor is None else args.ord_floor,
    )


def cmd_wf_check(args, out) -> int:
    q = _query_overrides(args, _load(args.query, "query"))
    out.write(_jsonl(_verdict_json(q.x0, q.xi0, is_smooth_at(q), args.approx)) + "\n")
    return OK


def cmd_wf_grid(args, out) -> int:
    u: Distribution = _load(args.dist, "distribution")
    g: GridSpec = _load(args.grid, "grid")
    floor = g.ord_floor if args.ord_floor is None else args.ord_floor
    for x0, xi0 in g.points:
        if (x0.dim, xi0.dim) != (u.dim, u.dim) or g.lam.p != u.p:
            raise InputError(f"grid point ({x0}, {xi0}) does not match the distribution")
        q = MicrolocalQuery(u, x0, xi0, g.lam, g.nbhd_radius, g.probe_depth, floor)
        out.write(_jsonl(_verdict_json(x0, xi0, is_smooth_at(q), args.approx)) + "\n")
    return OK


def cmd_wf_kernel_inclusion(args, out) -> int:
    K = _kernel(args, _load(args.kernel, "kernel", "distribution"))
    psi = _load(args.psi, "sb")
    g: GridSpec = _load(args.grid, "grid")
    if (psi.p, psi.dim) != (K.p, K.split[1]):
        raise InputError(f"psi must live on Q_{K.p}^{K.split[1]}")
    floor = g.ord_floor if args.ord_floor is None else args.ord_floor
    rep = check_wf_inclusion(K.u, K.split, psi, g.points, g.lam, g.nbhd_radius, g.probe_depth, floor, g.y_depth)
    for row in rep.rows:
        rec = {"x0": encode_point(row["x0"]), "xi0": encode_point(row["xi0"]), "left": row["left"]}
        rec["y"] = None if row["y"] is None else encode_point(row["y"])
        rec["status"] = row["status"]
        out.write(_jsonl(rec) + "\n")
    out.write(_jsonl({"summary": {"points": len(rep.rows), "violations": len(rep.violations)}}) + "\n")
    return OK if rep.ok else VIOLATED


def cmd_verify_all(args, out) -> int:
    seed = default_seed() if args.seed is None else args.seed
    only = [int(x) for x in args.only.split(",")] if args.only else None
    out.write(f"seed: {seed}\n")
    ok = True
    for number in only or [n for n, *_ in acceptance.CRITERIA]:
        res = acceptance.run_one(number, seed, args.depth)
        out.write(res.line() + "\n")
        out.flush()
        ok = ok and res.passed
    return OK if ok else VIOLATED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--approx", action="store_true", help="also print floating-point renderings of scalars")

    parser = argparse.ArgumentParser(prog="pdk", description="Exact p-adic distributions, kernels and wave fronts.",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    add("canon", cmd_canon, "coarsest canonical form").add_argument("file")
    sp = add("eval", cmd_eval, "evaluate at a point")
    sp.add_argument("file")
    sp.add_argument("--at", required=True, help="comma-separated coordinates, e.g. 1/3,2")
    add("integrate", cmd_integrate, "Haar integral").add_argument("file")
    add("fourier", cmd_fourier, "Fourier transform").add_argument("file")
    for name, fn in (("convolve", cmd_convolve), ("tensor", cmd_tensor)):
        sp = add(name, fn, f"{name} two functions")
        sp.add_argument("f")
        sp.add_argument("g")
    sp = add("tensor-decompose", cmd_tensor_decompose, "sum of c 1_C (x) 1_D")
    sp.add_argument("file")
    sp.add_argument("--split", type=int, required=True)
    sp = add("pair", cmd_pair, "<u, phi>")
    sp.add_argument("dist")
    sp.add_argument("sb")
    sp = add("modulated-pair", cmd_modulated_pair, "<u, phi psi(<., eta>)>")
    sp.add_argument("dist")
    sp.add_argument("sb")
    sp.add_argument("--eta", required=True)

    sp = add("kernel-apply", cmd_kernel_apply, "the distribution K psi")
    sp.add_argument("kernel")
    sp.add_argument("psi")
    sp.add_argument("--split")
    sp = add("kernel-roundtrip", cmd_kernel_roundtrip, "reconstruct u from its kernel and compare")
    sp.add_argument("kernel")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--alpha-lo", type=int, default=0)
    sp.add_argument("--split")
    sp = add("independence", cmd_independence, "reconstruction sum over random decompositions")
    sp.add_argument("kernel")
    sp.add_argument("phi")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--split")

    wf = sub.add_parser("wf", help="wave front queries", parents=[common])
    wsub = wf.add_subparsers(dest="wf_command", required=True)
    sp = wsub.add_parser("check", help="one microlocal query", parents=[common])
    sp.set_defaults(fn=cmd_wf_check)
    sp.add_argument("query")
    sp.add_argument("--ord-floor", type=int)
    sp = wsub.add_parser("grid", help="verdicts over a grid", parents=[common])
    sp.set_defaults(fn=cmd_wf_grid)
    sp.add_argument("dist")
    sp.add_argument("grid")
    sp.add_argument("--ord-floor", type=int)
    sp = wsub.add_parser("kernel-inclusion", help="WF(K psi) inside the projected WF(u)", parents=[common])
    sp.set_defaults(fn=cmd_wf_kernel_inclusion)
    sp.add_argument("kernel")
    sp.add_argument("psi")
    sp.add_argument("grid")
    sp.add_argument("--split")
    sp.add_argument("--ord-floor", type=int)

    sp = add("verify-all", cmd_verify_all, "run the acceptance criteria")
    sp.add_argument("--depth", type=int, default=0, help="raise the depths used by the round-trip checks")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        code = args.fn(args, out)
        out.flush()
        return code
    except InputError as exc:
        sys.stderr.write(f"pdk: error: {exc}\n")
        return INPUT_ERROR
    except (ValueError, DepthLimitExceeded, ZeroDivisionError) as exc:
        sys.stderr.write(f"pdk: error: {exc}\n")
        return INPUT_ERROR
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return OK


if __name__ == "__main__":
    sys.exit(main())
