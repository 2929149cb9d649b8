"""Command-line front end.

Emits human-readable tables, JSON and CSV data, and simple SVG figures.
Identical invocations produce byte-identical output: precision is fixed
(overridable through ORBIT_INTEGRA_PRECISION), every collection is emitted
in a canonical order, and floats are printed with repr.

Exit codes: 0 success, 1 bound-suite assertion failure (verify), 2 input
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import mpmath as mp

from .arith import Place, default_precision, weil_height
from .binomial import capelli_irreducible, factor_binomial, galois_orbits
from .errors import OrbitError
from .gaussian import GaussianRational
from .harness import az_pairing_curve, bound_suite, discrepancy, s_integral_census
from .integrality import normalize_place_set
from .localheights import truncation_constants
from .orbits import embed, point_height, preimages
from .padic import cluster_count, distance_profile
from .primes import is_prime

__all__ = ["main"]


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise OrbitError(f"cannot parse rational {text!r}") from exc


def _parse_point(text: str):
    value = GaussianRational.parse(text)
    return value.re if value.is_rational else value


def _parse_places(text: str | None) -> list:
    places: list = ["inf"]
    if text:
        for token in text.split(","):
            token = token.strip()
            if not token or token == "inf":
                continue
            try:
                p = int(token)
            except ValueError as exc:
                raise OrbitError(f"cannot parse prime {token!r} in S") from exc
            if not is_prime(p):
                raise OrbitError(f"S may contain only primes, got {token!r}")
            places.append(p)
    return places


def _emit(payload: dict, fmt: str, table_lines: list[str], csv_rows: list[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2))
        out.write("\n")
    elif fmt == "csv":
        out.write("\n".join(csv_rows))
        out.write("\n")
    else:
        out.write("\n".join(table_lines))
        out.write("\n")


def _write_svg(path: str, body: str, width: int = 640, height: int = 640) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
        )
        handle.write(body)
        handle.write("</svg>\n")


def _scatter_svg(points: list[complex]) -> str:
    # Unit circle plus the level points, scaled to a 640x640 canvas.
    size = 640
    radius_max = max([abs(z) for z in points] + [1.0]) * 1.15
    scale = size / (2 * radius_max)
    cx = cy = size / 2
    parts = [
        f'<rect width="{size}" height="{size}" fill="white"/>\n',
        f'<circle cx="{cx:.6f}" cy="{cy:.6f}" r="{scale:.6f}" '
        'fill="none" stroke="#888888" stroke-width="1"/>\n',
    ]
    for z in points:
        x = cx + z.real * scale
        y = cy - z.imag * scale
        parts.append(
            f'<circle cx="{x:.6f}" cy="{y:.6f}" r="3" fill="#1f5fbf"/>\n'
        )
    return "".join(parts)


def _decay_svg(series: list[tuple[int, float]]) -> str:
    width, height, margin = 640, 400, 48
    parts = [f'<rect width="{width}" height="{height}" fill="white"/>\n']
    finite = [(m, v) for m, v in series if v > 0]
    if not finite:
        return "".join(parts)
    xs = [m for m, _ in finite]
    logs = [math.log10(v) for _, v in finite]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(logs), max(logs)
    x_span = max(x_hi - x_lo, 1)
    y_span = max(y_hi - y_lo, 1e-9)
    coords = []
    for m, v in finite:
        x = margin + (m - x_lo) / x_span * (width - 2 * margin)
        y = height - margin - (math.log10(v) - y_lo) / y_span * (height - 2 * margin)
        coords.append(f"{x:.6f},{y:.6f}")
    parts.append(
        '<polyline fill="none" stroke="#1f5fbf" stroke-width="2" points="'
        + " ".join(coords)
        + '"/>\n'
    )
    for c in coords:
        x, y = c.split(",")
        parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#bf3f1f"/>\n')
    parts.append(
        f'<text x="{margin}" y="{height - 12}" font-size="12" fill="#444444">'
        "depth (log10 value vertical)</text>\n"
    )
    return "".join(parts)


def _cmd_orbit(args, out) -> int:
    beta = _parse_rational(args.beta)
    level = preimages(beta, args.d, args.depth)
    n = level.n
    payload: dict = {
        "beta": str(beta),
        "d": args.d,
        "depth": args.depth,
        "n": n,
        "points": [pt.to_json() for pt in level.points],
        "point_height": point_height(level.points[0]).to_json(),
    }
    table = [f"level x^{n} = {beta}: {n} points, height h(beta)/{n}"]
    csv_rows = ["depth,n,class_index,class_size,place,value"]
    if n <= 256:
        partition = galois_orbits(level)
        payload["classes"] = partition.to_json()["classes"]
        sizes = partition.sizes
        table.append(
            f"{len(partition.classes)} Galois class(es) of sizes {list(sizes)}"
        )
        for idx, cls in enumerate(partition.classes):
            csv_rows.append(f"{args.depth},{n},{idx},{cls.size},,")
    else:
        irreducible = capelli_irreducible(n, beta)
        payload["irreducible"] = irreducible
        table.append(
            "level is irreducible: 1 class of size " + str(n)
            if irreducible
            else "level is reducible (factorization above desk ceiling)"
        )
        csv_rows.append(f"{args.depth},{n},0,{n if irreducible else ''},,")
    for pt in level.points[: min(n, 8)]:
        z = complex(embed(pt, default_precision()))
        table.append(f"  j={pt.j}: {z.real:+.12f} {z.imag:+.12f}i")
    if args.svg:
        points = [complex(embed(pt, default_precision())) for pt in level.points]
        _write_svg(args.svg, _scatter_svg(points))
        table.append(f"scatter written to {args.svg}")
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def _cmd_factor(args, out) -> int:
    beta = _parse_rational(args.beta)
    factors = factor_binomial(args.n, beta)
    payload = {
        "beta": str(beta),
        "n": args.n,
        "irreducible": len(factors) == 1,
        "factors": [f.to_json() for f in factors],
    }
    table = [f"x^{args.n} - ({beta}) factors into {len(factors)} irreducible piece(s):"]
    table.extend(f"  {f}" for f in factors)
    csv_rows = ["index,degree,coefficients"]
    for i, f in enumerate(factors):
        csv_rows.append(f"{i},{f.degree},\"{list(f.coeffs)}\"")
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def _cmd_newton(args, out) -> int:
    alpha = _parse_rational(args.alpha)
    beta = _parse_rational(args.beta)
    profile = distance_profile(alpha, beta, args.n, args.p)
    threshold = Fraction(args.threshold) if args.threshold else Fraction(1, args.p - 1)
    count = cluster_count(profile, threshold)
    payload = {
        "alpha": str(alpha),
        "beta": str(beta),
        "n": args.n,
        "p": args.p,
        "profile": [f"{w.numerator}/{w.denominator}" for w in profile],
        "threshold": str(threshold),
        "cluster_count": count,
    }
    table = [
        f"valuations v_{args.p}(z - {alpha}) over x^{args.n} = {beta}:",
        "  " + ", ".join(str(w) for w in profile),
        f"entries above {threshold}: {count}",
    ]
    csv_rows = ["index,valuation"] + [
        f"{i},{w.numerator}/{w.denominator}" for i, w in enumerate(profile)
    ]
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def _cmd_integral(args, out) -> int:
    alpha = _parse_rational(args.alpha)
    beta = _parse_rational(args.beta)
    S = _parse_places(args.S)
    census = s_integral_census(alpha, beta, args.d, S, args.depth)
    payload = census.to_json()
    table = [
        f"S-integral census for O^-({beta}) under z^{args.d} relative to {alpha}, "
        f"S = {{inf{',' if census.s_primes else ''}{','.join(map(str, census.s_primes))}}}"
    ]
    csv_rows = ["depth,n,class_index,class_size,place,value"]
    for record in census.depths:
        for idx, verdict in enumerate(record.verdicts or []):
            mark = "integral" if verdict.verdict else "not integral"
            wit = (
                " witnesses " + ",".join(str(w.prime) for w in verdict.witnesses)
                if verdict.witnesses
                else ""
            )
            table.append(
                f"  depth {record.depth} (n={record.n}) class {idx} "
                f"size {verdict.class_size}: {mark}{wit}"
            )
            csv_rows.append(
                f"{record.depth},{record.n},{idx},{verdict.class_size},,{int(verdict.verdict)}"
            )
    table.append(
        f"max integral class size: {census.max_integral_class_size}; "
        f"stabilization depth: {census.stabilization_depth}"
    )
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def _cmd_discrepancy(args, out) -> int:
    alpha = _parse_point(args.alpha)
    beta = _parse_rational(args.beta)
    place = Place.infinity() if args.place == "inf" else Place.finite(int(args.place))
    depths = range(args.min_depth, args.depth + 1)
    series = []
    for m in depths:
        value = discrepancy(alpha, beta, args.d, m, place)
        series.append((m, value))
    payload = {
        "alpha": str(alpha),
        "beta": str(beta),
        "d": args.d,
        "place": args.place,
        "series": [[m, v] for m, v in series],
    }
    table = [f"discrepancy of O^-({beta}) vs {alpha} at place {args.place}:"]
    table.extend(f"  depth {m} (n={args.d ** m}): {v!r}" for m, v in series)
    csv_rows = ["depth,n,class_index,class_size,place,value"]
    csv_rows.extend(f"{m},{args.d ** m},,,{args.place},{v!r}" for m, v in series)
    if args.svg:
        _write_svg(args.svg, _decay_svg(series), width=640, height=400)
        table.append(f"decay curve written to {args.svg}")
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def _cmd_pairing(args, out) -> int:
    alpha = _parse_rational(args.alpha)
    beta = _parse_rational(args.beta)
    records = az_pairing_curve(alpha, beta, args.d, args.depth)
    h_alpha = float(weil_height(alpha).numeric())
    payload = {
        "alpha": str(alpha),
        "beta": str(beta),
        "d": args.d,
        "target": h_alpha,
        "records": [r.to_json() for r in records],
    }
    table = [
        f"pairing curve for alpha={alpha}, beta={beta}, d={args.d}; "
        f"target h(alpha) = {h_alpha!r}"
    ]
    csv_rows = ["depth,n,class_index,class_size,place,value"]
    for r in records:
        mean = float(r.mean_height_sum.numeric()) if r.mean_height_sum else float("nan")
        ok = "exact" if r.identity_holds else "MISMATCH"
        table.append(
            f"  depth {r.depth} (n={r.n}): mean sum = {mean!r} [{ok}], "
            f"per-root drift {r.float_agreement!r}"
        )
        csv_rows.append(f"{r.depth},{r.n},,,all,{mean!r}")
    all_exact = all(r.identity_holds for r in records)
    table.append("identity exact at every depth" if all_exact else "IDENTITY FAILED")
    _emit(payload, args.format, table, csv_rows, out)
    return 0 if all_exact else 1


def _cmd_verify(args, out) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    else:
        import importlib.resources

        resource = importlib.resources.files("orbitintegra").joinpath(
            "data/bound_suite_default.json"
        )
        config = json.loads(resource.read_text(encoding="utf-8"))
    report = bound_suite(config)
    payload = report.to_json()
    table = []
    for cell in report.cells:
        status = "pass" if cell.passed else "FAIL"
        table.append(
            f"cell {cell.index} [{cell.kind}]: {status} "
            f"(lhs {cell.lhs!r}, rhs {cell.rhs!r}, implied {cell.implied_constant!r})"
        )
    table.append("all cells passed" if report.all_passed else "SUITE FAILED")
    _emit(payload, args.format, table, report.to_csv_rows(), out)
    return 0 if report.all_passed else 1


def _cmd_constants(args, out) -> int:
    tau = Fraction(args.tau)
    arch = truncation_constants(tau, Place.infinity())
    fin = truncation_constants(tau, Place.finite(2))
    payload = {
        "tau": str(tau),
        "archimedean": arch.to_json(),
        "non_archimedean": fin.to_json(),
    }
    table = [
        f"truncation constants at tau = {tau}:",
        f"  archimedean:     Lipschitz {arch.lipschitz}, Dirichlet {arch.dirichlet!r}"
        " (= -4*pi*log tau)",
        f"  non-archimedean: Lipschitz {fin.lipschitz}, Dirichlet {fin.dirichlet!r}"
        " (= -log tau)",
    ]
    csv_rows = [
        "place,lipschitz,dirichlet",
        f"inf,{arch.lipschitz},{arch.dirichlet!r}",
        f"finite,{fin.lipschitz},{fin.dirichlet!r}",
    ]
    _emit(payload, args.format, table, csv_rows, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitintegra",
        description="Backward orbits of power maps: Galois classes, "
        "S-integrality, local heights, and quantitative bound checks.",
    )
    parser.add_argument(
        "--format", choices=("table", "json", "csv"), default="table",
        help="output format (default table)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_orbit = sub.add_parser("orbit", help="enumerate a level and its Galois classes")
    p_orbit.add_argument("--beta", required=True)
    p_orbit.add_argument("--d", type=int, default=2)
    p_orbit.add_argument("--depth", type=int, required=True)
    p_orbit.add_argument("--svg", default=None, help="write a root scatter SVG")
    p_orbit.set_defaults(func=_cmd_orbit)

    p_factor = sub.add_parser("factor", help="factor x^n - beta over Q")
    p_factor.add_argument("--beta", required=True)
    p_factor.add_argument("--n", type=int, required=True)
    p_factor.set_defaults(func=_cmd_factor)

    p_newton = sub.add_parser("newton", help="p-adic distance profile of a level")
    p_newton.add_argument("--alpha", required=True)
    p_newton.add_argument("--beta", required=True)
    p_newton.add_argument("--n", type=int, required=True)
    p_newton.add_argument("--p", type=int, required=True)
    p_newton.add_argument("--threshold", default=None)
    p_newton.set_defaults(func=_cmd_newton)

    p_integral = sub.add_parser("integral", help="S-integrality census")
    p_integral.add_argument("--alpha", required=True)
    p_integral.add_argument("--beta", required=True)
    p_integral.add_argument("--d", type=int, default=2)
    p_integral.add_argument("--S", default="", help="comma-separated primes (inf implicit)")
    p_integral.add_argument("--depth", type=int, required=True)
    p_integral.set_defaults(func=_cmd_integral)

    p_disc = sub.add_parser("discrepancy", help="equidistribution discrepancy by depth")
    p_disc.add_argument("--alpha", required=True, help="rational or Gaussian rational")
    p_disc.add_argument("--beta", required=True)
    p_disc.add_argument("--d", type=int, default=2)
    p_disc.add_argument("--min-depth", type=int, default=1, dest="min_depth")
    p_disc.add_argument("--depth", type=int, required=True)
    p_disc.add_argument("--place", default="inf")
    p_disc.add_argument("--svg", default=None, help="write a decay curve SVG")
    p_disc.set_defaults(func=_cmd_discrepancy)

    p_pair = sub.add_parser("pairing", help="pairing curve with exact identity check")
    p_pair.add_argument("--alpha", required=True)
    p_pair.add_argument("--beta", required=True)
    p_pair.add_argument("--d", type=int, default=2)
    p_pair.add_argument("--depth", type=int, required=True)
    p_pair.set_defaults(func=_cmd_pairing)

    p_verify = sub.add_parser("verify", help="run the frozen bound suite")
    p_verify.add_argument("--config", default=None, help="bound suite JSON config")
    p_verify.set_defaults(func=_cmd_verify)

    p_const = sub.add_parser("constants", help="truncation constants table")
    p_const.add_argument("--tau", required=True)
    p_const.set_defaults(func=_cmd_constants)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, sys.stdout)
    except OrbitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
