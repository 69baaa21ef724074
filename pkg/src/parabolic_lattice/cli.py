"""``parabolic-lattice`` command line front end.

Every subcommand reads JSON, writes a JSON report, and exits with 0 on
success, 1 on a domain error (``{"error": code, "detail": ...}`` on stderr)
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from .catalog import catalog as catalog_lookup, catalog_names
from .discriminant import (
    discriminant_group,
    isotropic_subgroups,
    stably_equivalent_check,
    verify_nikulin,
)
from .errors import InputParseError, LatticeError
from .fujiki import fujiki_recover_q, normalize_form, symmetric_power_form
from .lattice import Lattice, parse_lattice
from .parabolic import (
    lemma_alpha_divides,
    orbit_census,
    orthogonal_group_bruteforce,
    reflection_generators,
    thread_cap,
)
from .periods import (
    PeriodLine,
    default_density_vectors,
    density_hypothesis_check,
    period_eta_slice,
    period_membership,
)

COMMANDS = (
    "catalog", "info", "discr", "overlattices", "lemma-check", "orbits",
    "fujiki-recover", "period-check", "stable-check", "density-check",
)


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InputParseError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputParseError(f"not a rational: {x!r}") from exc
    raise InputParseError(f"not a rational: {x!r}")


def _int_vector(doc: dict, key: str, rank: int) -> tuple[int, ...]:
    v = doc.get(key)
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InputParseError(f"'{key}' must be a list of integers")
    if len(v) != rank:
        raise InputParseError(f"'{key}' has length {len(v)}, lattice rank is {rank}")
    return tuple(v)


def _read(path: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"{path}: {exc.msg} at line {exc.lineno}") from exc


def _lattice_input(args) -> tuple[Lattice, dict]:
    if args.name:
        entry = catalog_lookup(args.name, args.n)
        return entry.lattice, {}
    if not args.input:
        raise _Usage("--input (or --name) is required")
    doc = _read(args.input[0])
    return parse_lattice(doc), doc


class _Usage(Exception):
    pass


# --- commands --------------------------------------------------------------------

def cmd_catalog(args) -> dict:
    if not args.name:
        return {"names": catalog_names()}
    return catalog_lookup(args.name, args.n).to_json()


def cmd_info(args) -> dict:
    L, _ = _lattice_input(args)
    sig = L.signature
    return {
        "rank": L.rank,
        "gram": [list(r) for r in L.gram],
        "signature": [sig.s_plus, sig.s_minus],
        "discriminant": L.discriminant,
        "even": L.is_even,
    }


def cmd_discr(args) -> dict:
    L, _ = _lattice_input(args)
    A = discriminant_group(L)
    doc = A.to_json()
    doc["order"] = A.order
    doc["generators"] = [[_frac(t) for t in g] for g in A.generators]
    return doc


def cmd_overlattices(args) -> dict:
    L, _ = _lattice_input(args)
    A = discriminant_group(L)
    out = []
    for H in isotropic_subgroups(A, args.budget):
        report = verify_nikulin(L, H, args.budget)
        L2 = report.overlattice
        out.append({
            "subgroup_order": H.order,
            "subgroup": [[_frac(t) for t in x] for x in H.element_list],
            "gram": [list(r) for r in L2.gram],
            "discriminant": L2.discriminant,
            "even": L2.is_even,
            "nikulin_pass": report.passed,
        })
    return {"discriminant": L.discriminant, "group_order": A.order, "overlattices": out}


def cmd_lemma_check(args) -> dict:
    L, _ = _lattice_input(args)
    report = lemma_alpha_divides(L, args.height)
    return {"pass": report.passed, "alphas": sorted(report.alphas), "discriminant": report.discriminant}


def cmd_orbits(args) -> dict:
    L, doc = _lattice_input(args)
    if "generators" in doc:
        gens = doc["generators"]
        source = "input"
    elif args.generators == "bruteforce" or (args.generators == "auto" and L.rank <= 4):
        gens = orthogonal_group_bruteforce(L, args.entry_bound).matrices
        source = "bruteforce"
    else:
        gens = reflection_generators(L)
        source = "reflections"
    report = orbit_census(L, args.height, gens)
    out = report.to_json()
    out["generator_source"] = source
    out["generator_count"] = len(gens)
    return out


def cmd_fujiki_recover(args) -> dict:
    L, doc = _lattice_input(args)
    n = doc.get("n", args.n or 1)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputParseError("'n' must be a positive integer")
    c = _parse_rational(doc.get("c", 1))
    T = symmetric_power_form(L.gram, n, c)
    rec = fujiki_recover_q(lambda x: T(*([x] * (2 * n))), L.rank, n)
    expected = normalize_form(L.gram)
    return {
        "n": n,
        "gram": [list(r) for r in rec.gram],
        "c": _frac(rec.c),
        "anchor": list(rec.anchor),
        "matches_input": rec.gram == expected or rec.gram == tuple(tuple(-x for x in r) for r in expected),
    }


def cmd_period_check(args) -> dict:
    L, doc = _lattice_input(args)
    for key in ("re", "im"):
        if not isinstance(doc.get(key), list) or len(doc[key]) != L.rank:
            raise InputParseError(f"'{key}' must be a list of length {L.rank}")
    l = PeriodLine(tuple(map(_parse_rational, doc["re"])), tuple(map(_parse_rational, doc["im"])))
    out = {"member": period_membership(L, l)}
    if "eta" in doc:
        eta = tuple(map(_parse_rational, doc["eta"]))
        if len(eta) != L.rank:
            raise InputParseError(f"'eta' must have length {L.rank}")
        out["in_slice"] = period_eta_slice(L, eta, l)
    return out


def cmd_stable_check(args) -> dict:
    if args.input and len(args.input) == 2:
        L1, L2 = (parse_lattice(_read(p)) for p in args.input)
    elif args.input and len(args.input) == 1:
        doc = _read(args.input[0])
        lats = doc.get("lattices") if isinstance(doc, dict) else None
        if not isinstance(lats, list) or len(lats) != 2:
            raise InputParseError("expected {'lattices': [L1, L2]}")
        L1, L2 = (parse_lattice(d) for d in lats)
    else:
        raise _Usage("stable-check needs two --input files or one with a 'lattices' pair")
    return stably_equivalent_check(L1, L2, args.budget).to_json()


def cmd_density_check(args) -> dict:
    L, doc = _lattice_input(args)
    if "v" in doc and "v_prime" in doc:
        v, w = _int_vector(doc, "v", L.rank), _int_vector(doc, "v_prime", L.rank)
    else:
        v, w = default_density_vectors(L)
    out = density_hypothesis_check(L, v, w).to_json()
    out["v"], out["v_prime"] = list(v), list(w)
    return out


HANDLERS = {
    "catalog": cmd_catalog,
    "info": cmd_info,
    "discr": cmd_discr,
    "overlattices": cmd_overlattices,
    "lemma-check": cmd_lemma_check,
    "orbits": cmd_orbits,
    "fujiki-recover": cmd_fujiki_recover,
    "period-check": cmd_period_check,
    "stable-check": cmd_stable_check,
    "density-check": cmd_density_check,
}


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parabolic-lattice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", action="append", help="JSON input file, or - for stdin")
        p.add_argument("--output", default="-", help="output file (default stdout)")
        p.add_argument("--height", type=_positive, default=5)
        p.add_argument("--entry-bound", type=_positive, default=2)
        p.add_argument("--budget", type=_positive, default=2**12)
        p.add_argument("--name", help="catalog entry: K3, HilbK3, Kummer, OG6, OG10")
        p.add_argument("--n", type=_positive)
        if name == "orbits":
            p.add_argument("--generators", choices=("auto", "bruteforce", "reflections"), default="auto")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    thread_cap()
    try:
        result = HANDLERS[args.command](args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"parabolic-lattice: error: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}), file=sys.stderr)
        return 1
    text = json.dumps(result, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
