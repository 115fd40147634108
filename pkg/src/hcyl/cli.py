"""Command line front end.

Inputs are .hcy files, or presets given either with --preset or as a
positional ``preset:NAME`` (``preset:NAME:GENUS`` for presets that take a
genus).  Reports go to stdout, diagnostics to stderr.  Exit status: 0 on
success, 2 for bad input, 3 for internal failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .cylinder import (AdmissiblePresentation, ValidationError, direct_magnus, from_mapping_class,
                       magnus, stack, validate)
from .fileformats import AUT_VERSION, HCY_VERSION, ParseError, parse_aut, parse_hcy, serialize_hcy
from .fixtures import PRESETS, preset
from .invariants import (INF, IntegralityError, InvariantError, alexander_rational, closing_alexander, closing_degree,
                         dbar_magnus, kernel_identities, mapping_torus, torsion_n2,
                         torsion_n2_degree)
from .laurent import check_primitive, psi_degree_frac
from .linalg import FracMatrix, det

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class InputError(Exception):
    pass


def _fmt(d):
    return "inf" if d is INF else d


def parse_psi(text: str) -> tuple[int, ...]:
    try:
        psi = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse cocharacter {text!r}") from None
    try:
        return check_primitive(psi)
    except ValueError as e:
        raise InputError(str(e)) from None


def load(source: str | None, preset_name: str | None, genus: int | None) -> AdmissiblePresentation:
    if preset_name is not None:
        if source is not None:
            raise InputError("give either a file or --preset, not both")
        return _preset(preset_name, genus)
    if source is None:
        raise InputError("no input: give a .hcy file or --preset")
    if source.startswith("preset:"):
        parts = source.split(":")
        g = int(parts[2]) if len(parts) > 2 else genus
        return _preset(parts[1], g)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{source}: {e.strerror}") from None
    try:
        return parse_hcy(text)
    except ParseError as e:
        raise InputError(f"{source}: {e}") from None


def _preset(name: str, genus: int | None) -> AdmissiblePresentation:
    try:
        return preset(name, genus)
    except (KeyError, ValueError) as e:
        raise InputError(str(e.args[0]) if e.args else str(e)) from None


def _reduced(M: FracMatrix) -> FracMatrix:
    return M.map(lambda f: f.reduced())


def _emit(args, obj, text: str) -> None:
    if args.json:
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _check_len(P: AdmissiblePresentation, psi, extra: int = 0) -> None:
    if len(psi) != 2 * P.genus + extra:
        raise InputError(f"cocharacter needs {2 * P.genus + extra} entries, got {len(psi)}")


def _run_cells(args, fn, cells):
    if args.jobs and args.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            return list(ex.map(fn, *zip(*cells)))
    return [fn(*c) for c in cells]


# ---------------------------------------------------------------------------
# subcommands


def cmd_magnus(args) -> int:
    P = load(args.file, args.preset, args.genus)
    r = _reduced(magnus(P))
    _emit(args, {"magnus": r.to_json_obj(), "vars": list(P.vars)}, r.to_text())
    return EXIT_OK


def _degree_cell(P, what, psi):
    if what == "magnus":
        d = psi_degree_frac(det(magnus(P)), psi)
        return {"invariant": "magnus", "psi": list(psi), "value": _fmt(d)}
    if what == "torsion":
        return {"invariant": "torsion", "psi": list(psi), "value": torsion_n2_degree(P, psi)}
    if what == "alex":
        return {"invariant": "alex", "psi": list(psi), "value": _fmt(dbar_magnus(P, psi))}
    return closing_degree(P, psi).to_json_obj()


def cmd_degree(args) -> int:
    P = load(args.file, args.preset, args.genus)
    psis = [parse_psi(p) for p in args.psi]
    for psi in psis:
        _check_len(P, psi)
    reports = _run_cells(args, _degree_cell, [(P, args.what, psi) for psi in psis])
    for rep in reports:
        if args.json:
            print(json.dumps(rep, sort_keys=True))
        elif "value" in rep:
            print(f"{rep['invariant']} psi={','.join(map(str, rep['psi']))}: {rep['value']}")
        else:
            print(_report_text(rep))
    return EXIT_OK


def _report_text(rep: dict) -> str:
    c = rep["components"]
    return (f"{rep['invariant']} psi={','.join(map(str, rep['psi']))}: lhs={rep['lhs']} "
            f"torsion={c['torsion_part']} magnus={c['magnus_part']} extra={c['extra']} "
            f"consistent={'true' if rep['consistent'] else 'false'}")


def cmd_stack(args) -> int:
    P1 = load(args.top, None, args.genus)
    P2 = load(args.bottom, None, args.genus)
    try:
        P = stack(P1, P2)
    except ValidationError as e:
        raise InputError(str(e)) from None
    text = serialize_hcy(P)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mcg(args) -> int:
    try:
        with open(args.autfile, encoding="utf-8") as fh:
            phi = parse_aut(fh.read())
    except OSError as e:
        raise InputError(f"{args.autfile}: {e.strerror}") from None
    except ParseError as e:
        raise InputError(f"{args.autfile}: {e}") from None
    try:
        P = from_mapping_class(phi)
        direct = _reduced(direct_magnus(phi))
    except ValidationError as e:
        raise InputError(str(e)) from None
    via = magnus(P)
    agrees = via == direct
    if not agrees:
        raise AssertionError("Magnus matrix of the mapping cylinder disagrees with the Jacobian")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_hcy(P))
    _emit(args, {"magnus": direct.to_json_obj(), "vars": list(P.vars), "presentation_agrees": agrees},
          direct.to_text())
    return EXIT_OK


def _torus_cell(P, psi):
    return mapping_torus(P, psi).to_json_obj()


def cmd_torus(args) -> int:
    P = load(args.file, args.preset, args.genus)
    psis = [parse_psi(p) for p in args.psi]
    for psi in psis:
        _check_len(P, psi, 1)
    for rep in _run_cells(args, _torus_cell, [(P, psi) for psi in psis]):
        print(json.dumps(rep, sort_keys=True) if args.json else _report_text(rep))
    return EXIT_OK


def cmd_alex(args) -> int:
    P = load(args.file, args.preset, args.genus)
    delta = alexander_rational(P)
    tau = torsion_n2(P)
    ca = closing_alexander(P)
    obj = {"alexander_rational": delta.to_json_obj(), "torsion": tau.to_json_obj(),
           "closing": ca.to_json_obj()}
    lines = [f"Delta(M) = {delta}", f"tau = {tau}",
             f"closing (gcd route) = {ca.gcd_route if ca.gcd_route is not None else 'n/a: ' + ca.note}",
             f"closing (product route) = {ca.product_route}",
             f"equal up to unit: {ca.equal_up_to_unit}"]
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    P = load(args.file, args.preset, args.genus)
    M = validate(P)
    results: dict[str, object] = {"valid": True}
    g2 = 2 * P.genus
    r = magnus(P, M)
    dr = det(r)
    basis = [tuple(int(i == j) for j in range(g2)) for i in range(g2)]
    mixed = tuple(range(1, g2 + 1))
    results["det_degree_zero"] = all(psi_degree_frac(dr, psi) == 0 for psi in basis + [mixed])
    in_c2 = all(M.sigma2[i][j] == int(i == j) for i in range(g2) for j in range(g2))
    if in_c2:
        row, col = kernel_identities(P)
        results["kernel_row"] = row
        results["kernel_column"] = col
        closing_degree(P, basis[0], smith_check=False)  # asserts integrality of mu
        results["mu_integral"] = True
    else:
        results["kernel_row"] = results["kernel_column"] = "skipped: not in C[2]"
    ok = all(v is True for v in results.values() if not isinstance(v, str))
    results["ok"] = ok
    _emit(args, results, "\n".join(f"{k}: {v}" for k, v in results.items()))
    return EXIT_OK if ok else EXIT_INTERNAL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hcyl", description="Invariants of homology cylinders.")
    p.add_argument("--version", action="store_true", help="print file format versions")
    sub = p.add_subparsers(dest="command")

    def common(sp, single=True):
        if single:
            sp.add_argument("file", nargs="?", help=".hcy file or preset:NAME")
            sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--genus", type=int)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("magnus", help="print the Magnus matrix")
    common(sp)
    sp.set_defaults(func=cmd_magnus)

    sp = sub.add_parser("degree", help="degree invariants along a cocharacter")
    common(sp)
    sp.add_argument("--psi", action="append", required=True, help="comma separated integers")
    sp.add_argument("--what", choices=["magnus", "torsion", "alex", "closing"], default="magnus")
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("stack", help="stack two cylinders (first on top)")
    sp.add_argument("top")
    sp.add_argument("bottom")
    sp.add_argument("-o", "--output")
    common(sp, single=False)
    sp.set_defaults(func=cmd_stack)

    sp = sub.add_parser("mcg", help="mapping cylinder of an automorphism file")
    sp.add_argument("autfile")
    sp.add_argument("-o", "--output")
    common(sp, single=False)
    sp.set_defaults(func=cmd_mcg)

    sp = sub.add_parser("torus", help="mapping torus factorization")
    common(sp)
    sp.add_argument("--psi", action="append", required=True,
                    help="2g+1 comma separated integers, the last one on lambda")
    sp.set_defaults(func=cmd_torus)

    sp = sub.add_parser("alex", help="Alexander rational function and closing polynomial")
    common(sp)
    sp.set_defaults(func=cmd_alex)

    sp = sub.add_parser("check", help="validate and run the identity checks")
    common(sp)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    if args.version:
        print(f"hcyl {__version__}\n{HCY_VERSION}\n{AUT_VERSION}")
        return EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ParseError, ValidationError, InvariantError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except IntegralityError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # anything else is a bug
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
