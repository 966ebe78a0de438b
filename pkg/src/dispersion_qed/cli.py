"""Command-line front end.

Every subcommand prints one table (CSV with '#' metadata lines, or JSON).
Inputs are always in natural units; ``--units`` only changes what is shown.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
from scipy import optimize

from . import __version__
from .boundary import BREAKDOWN_COLUMNS, atom_wall, pair_near_plate
from .core import ATOMIC, NATURAL, SI, TriangleGeometry, convert_units, make_triangle
from .exceptions import DomainError, NoCrossoverError, NumericalError
from .field_kernels import vacuum_e_correlation
from .noninertial import AcceleratedPair, ScalarAtomPair, resonance_accelerated, scalar_cp_accelerated
from .polarizability import PolarizabilityModel, TwoLevelAtom, model_from_dict
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .resonance import BellPairSpec, resonance_energy
from .three_body import TripleSpec, three_body_far, three_body_full
from .two_body import PairSpec, classify_regime, cp_full, cp_via_correlation, london_near
from .vacuum_density import density_around_atom, plate_density

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

UNIT_SYSTEMS = {"natural": NATURAL, "atomic": ATOMIC, "si": SI}

# physical dimension of each column as powers of the convertible kinds
LENGTH = {"length": 1}
ENERGY = {"energy": 1}
FORCE = {"energy": 1, "length": -1}
DENSITY = {"energy": 1, "length": -3}
TEMPERATURE = {"temperature": 1}
ACCELERATION = {"acceleration": 1}
DIMENSIONLESS: dict = {}


class ConfigError(DomainError):
    """Bad command-line configuration."""


@dataclass
class ResultTable:
    columns: list[str]
    dims: list[dict]
    rows: list[list] = field(default_factory=list)
    metadata: list[tuple[str, str]] = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError("row length does not match the header")
        self.rows.append(list(row))

    def _display(self, units: str) -> list[list]:
        target = UNIT_SYSTEMS[units]
        out = []
        for row in self.rows:
            shown = []
            for value, dim in zip(row, self.dims):
                if isinstance(value, float) and dim and math.isfinite(value):
                    for kind, power in dim.items():
                        value = value * convert_units(1.0, kind, NATURAL, target) ** power
                shown.append(value)
            out.append(shown)
        return out

    @staticmethod
    def _fmt(value) -> str:
        if isinstance(value, float):
            return f"{value + 0.0:.17g}"  # + 0.0 turns -0 into 0
        return str(value)

    def to_csv(self, units: str) -> str:
        lines = [f"# {k}: {v}" for k, v in self.metadata]
        lines.append(",".join(self.columns))
        lines += [",".join(self._fmt(v) for v in row) for row in self._display(units)]
        return "\n".join(lines) + "\n"

    def to_json(self, units: str) -> str:
        def clean(v):
            return v if not isinstance(v, float) or math.isfinite(v) else None
        doc = {
            "metadata": dict(self.metadata),
            "columns": self.columns,
            "rows": [[clean(v) for v in row] for row in self._display(units)],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------- argument helpers

def _vector(text: str) -> tuple[float, float, float]:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return tuple(parts)


def _load_atom_source(source: str) -> dict:
    """Atom description from a JSON file path or an inline JSON object."""
    text = source.strip()
    if text.startswith("{"):
        origin = "inline atom"
    else:
        path = Path(source)
        if not path.is_file():
            raise ConfigError(f"atom file not found: {source}")
        text = path.read_text(encoding="utf-8")
        origin = str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{origin}: malformed JSON ({exc.msg} at line {exc.lineno})")


def _model(data: dict) -> PolarizabilityModel:
    try:
        return model_from_dict(data)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"atom description invalid at {exc.json_path}: {exc.message}")


def _quad(args) -> QuadratureSpec:
    if args.rel_tol is None:
        return DEFAULT_QUADRATURE
    return QuadratureSpec(rel_tol=args.rel_tol)


def _semantic_config(args, atoms: dict) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("output", "func") and not k.startswith("atom_")}
    config["atoms"] = atoms
    return config


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _lambda_min(*models: PolarizabilityModel) -> float | None:
    lams = [m.min_wavelength for m in models if m.has_transitions]
    return min(lams) if lams else None


def _sweep(args, scale: float = 1.0) -> np.ndarray:
    if not args.start < args.stop:
        raise ConfigError("sweep start must be smaller than stop")
    if args.points < 2:
        raise ConfigError("a sweep needs at least two points")
    if args.spacing == "log":
        if args.start <= 0:
            raise ConfigError("log spacing needs a positive start")
        return scale * np.geomspace(args.start, args.stop, args.points)
    return scale * np.linspace(args.start, args.stop, args.points)


def _log_slopes(r: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Centered differences of ln|E| against ln r (one-sided at the ends)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        lr, le = np.log(r), np.log(np.abs(e))
    n = len(r)
    out = np.full(n, np.nan)
    for i in range(n):
        lo, hi = max(i - 1, 0), min(i + 1, n - 1)
        if np.isfinite(le[lo]) and np.isfinite(le[hi]) and hi > lo:
            out[i] = (le[hi] - le[lo]) / (lr[hi] - lr[lo])
    return out


def _sign_note(value: float) -> str:
    return "attractive" if value < 0 else "repulsive" if value > 0 else "null"


# ---------------------------------------------------------------- subcommands
# each returns (table, exit_code)

def cmd_two_body(args, atoms):
    ma, mb = _model(atoms["a"]), _model(atoms["b"])
    pair = PairSpec(ma, mb, args.r)
    report = classify_regime(ma, mb, args.r, args.temperature)
    res = cp_full(pair, _quad(args))
    table = ResultTable(["r", "energy", "abs_error", "regime"], [LENGTH, ENERGY, ENERGY, DIMENSIONLESS])
    table.add(args.r, res.value, res.abs_error_estimate, str(report.regime))
    table.metadata += [("regime", str(report.regime)), ("annotation", _sign_note(res.value))]
    if report.scaling:
        table.metadata.append(("scaling", report.scaling))
    return table, EXIT_OK


def cmd_three_body(args, atoms):
    if args.side is not None:
        geometry = TriangleGeometry.equilateral(args.side)
    elif None not in (args.pos_a, args.pos_b, args.pos_c):
        geometry = make_triangle(args.pos_a, args.pos_b, args.pos_c)
    else:
        raise ConfigError("give --side or all of --pos-a, --pos-b, --pos-c")
    models = [_model(atoms[k]) for k in ("a", "b", "c")]
    if args.mode == "far":
        res = three_body_far([m.alpha_static for m in models], geometry)
    else:
        res = three_body_full(TripleSpec(*models, geometry), _quad(args))
    table = ResultTable(["alpha", "beta", "gamma", "energy", "abs_error", "regime"],
                        [LENGTH, LENGTH, LENGTH, ENERGY, ENERGY, DIMENSIONLESS])
    table.add(*geometry.sides, res.value, res.abs_error_estimate, str(res.regime))
    table.metadata += [("regime", str(res.regime)), ("annotation", _sign_note(res.value))]
    return table, EXIT_OK


def cmd_atom_wall(args, atoms):
    out = atom_wall(args.alpha, args.z, args.lambda_min)
    table = ResultTable(["z", "energy", "force"], [LENGTH, ENERGY, FORCE])
    table.add(args.z, out["energy"], out["force"])
    table.metadata.append(("annotation", _sign_note(out["energy"])))
    table.metadata += [("flag", f) for f in out["flags"]]
    return table, EXIT_OK


def cmd_pair_near_plate(args, atoms):
    res = pair_near_plate(args.alpha_a, args.alpha_b, args.pos_a, args.pos_b, args.lambda_min)
    dims = [LENGTH, LENGTH, DIMENSIONLESS, DIMENSIONLESS, ENERGY, ENERGY, ENERGY, ENERGY]
    table = ResultTable(list(BREAKDOWN_COLUMNS), dims)
    table.add(*(float(res.terms[c]) for c in BREAKDOWN_COLUMNS))
    table.metadata.append(("annotation", _sign_note(res.value)))
    table.metadata += [("flag", f) for f in res.flags]
    return table, EXIT_OK


def cmd_energy_density(args, atoms):
    if args.plate:
        if args.z is None:
            raise ConfigError("--plate needs --z")
        table = ResultTable(["z", "electric_density", "magnetic_density"], [LENGTH, DENSITY, DENSITY])
        for z in args.z:
            table.add(z, plate_density(z, "electric"), plate_density(z, "magnetic"))
        return table, EXIT_OK
    if "a" not in atoms or args.r is None:
        raise ConfigError("give --atom-a and --r (or --plate and --z)")
    model = _model(atoms["a"])
    quad = _quad(args)
    rep = "rotated-single-integral" if model.has_transitions else "far-closed-form"
    table = ResultTable(["r", "electric_density", "magnetic_density", "representation"],
                        [LENGTH, DENSITY, DENSITY, DIMENSIONLESS])
    for r in args.r:
        table.add(r, density_around_atom(model, r, "electric", quad),
                  density_around_atom(model, r, "magnetic", quad), rep)
    return table, EXIT_OK


def cmd_correlation(args, atoms):
    if "a" in atoms:
        if "b" not in atoms or args.r is None:
            raise ConfigError("the energy route needs --atom-a, --atom-b and --r")
        pair = PairSpec(_model(atoms["a"]), _model(atoms["b"]), args.r)
        res = cp_via_correlation(pair, _quad(args))
        table = ResultTable(["r", "energy", "direct_energy", "relative_deviation"],
                            [LENGTH, ENERGY, ENERGY, DIMENSIONLESS])
        table.add(args.r, res.value, float(res.terms["reference"]), float(res.terms["deviation"]))
        table.metadata.append(("regime", str(res.regime)))
        return table, EXIT_OK
    if args.r_vec is None:
        raise ConfigError("give --r-vec for the vacuum correlation tensor")
    tensor = vacuum_e_correlation(args.r_vec)
    table = ResultTable(["i", "j", "correlation"], [DIMENSIONLESS, DIMENSIONLESS, DENSITY])
    for i in range(3):
        for j in range(3):
            table.add("xyz"[i], "xyz"[j], float(tensor[i, j]))
    return table, EXIT_OK


def _bell(args) -> BellPairSpec:
    a = TwoLevelAtom(args.k0, args.dipole_a)
    b = TwoLevelAtom(args.k0, args.dipole_b)
    return BellPairSpec(a, b, args.parity, args.r_vec)


def cmd_resonance(args, atoms):
    res = resonance_energy(_bell(args))
    table = ResultTable(["r", "energy", "regime"], [LENGTH, ENERGY, DIMENSIONLESS])
    table.add(float(np.linalg.norm(args.r_vec)), res.value, str(res.regime))
    table.metadata.append(("note", res.notes))
    return table, EXIT_OK


def cmd_accelerated(args, atoms):
    acc = AcceleratedPair(args.a, args.z)
    if args.kind == "scalar":
        rep = scalar_cp_accelerated(ScalarAtomPair(args.omega0, args.coupling), acc)
        value = math.nan if rep.value is None else rep.value
        table = ResultTable(["z", "z_a", "unruh_temperature", "energy", "regime"],
                            [LENGTH, LENGTH, TEMPERATURE, ENERGY, DIMENSIONLESS])
        table.add(args.z, rep.z_a, rep.unruh_temperature, value, str(rep.regime))
        table.metadata += [("scaling " + k, v) for k, v in rep.scaling.items()]
        return table, EXIT_OK
    args.r_vec = (0.0, 0.0, args.z)
    res = resonance_accelerated(_bell(args), acc)
    table = ResultTable(["z", "z_a", "unruh_temperature", "energy", "phase", "regime"],
                        [LENGTH, LENGTH, TEMPERATURE, ENERGY, DIMENSIONLESS, DIMENSIONLESS])
    table.add(args.z, acc.z_a, acc.unruh_temperature, res.value, float(res.terms["phase"]), str(res.regime))
    return table, EXIT_OK


def _scan_function(args, atoms):
    quad = _quad(args)
    ma = _model(atoms["a"])
    mb = _model(atoms.get("b", atoms["a"]))
    if args.quantity == "two-body":
        def fn(r):
            res = cp_full(PairSpec(ma, mb, r), quad)
            return res.value, str(res.regime)
        return fn, _lambda_min(ma, mb)
    if args.quantity == "london":
        return (lambda r: (london_near(ma, mb, r), str(classify_regime(ma, mb, r).regime))), _lambda_min(ma, mb)
    if args.quantity == "three-body":
        mc = _model(atoms.get("c", atoms["a"]))

        def fn(r):
            res = three_body_full(TripleSpec(ma, mb, mc, TriangleGeometry.equilateral(r)), quad)
            return res.value, str(res.regime)
        return fn, _lambda_min(ma, mb, mc)
    field_ = "electric" if args.quantity == "density-electric" else "magnetic"

    def fn(r):
        report = classify_regime(ma, ma, r)
        return density_around_atom(ma, r, field_, quad), str(report.regime)
    return fn, _lambda_min(ma)


def cmd_scan(args, atoms):
    fn, lam = _scan_function(args, atoms)
    scale = 1.0
    if args.in_wavelengths:
        if lam is None:
            raise ConfigError("--in-wavelengths needs transition-based atoms")
        scale = lam
    radii = _sweep(args, scale)
    energies, regimes, status = [], [], []
    for r in radii:
        try:
            e, reg = fn(float(r))
            energies.append(e)
            regimes.append(reg)
            status.append("ok")
        except NumericalError as exc:
            energies.append(math.nan)
            regimes.append("")
            status.append("failed: " + str(exc).replace(",", ";"))
    slopes = _log_slopes(radii, np.array(energies))
    dim = DENSITY if args.quantity.startswith("density") else ENERGY
    table = ResultTable(["r", "value", "regime", "log_slope", "status"],
                        [LENGTH, dim, DIMENSIONLESS, DIMENSIONLESS, DIMENSIONLESS])
    for row in zip(radii, energies, regimes, slopes, status):
        table.add(float(row[0]), float(row[1]), row[2], float(row[3]), row[4])
    if lam is not None:
        table.metadata.append(("lambda_min", f"{lam:.17g}"))
    failed = any(s != "ok" for s in status)
    return table, EXIT_NUMERICAL if failed else EXIT_OK


def crossover_distance(model_a: PolarizabilityModel, model_b: PolarizabilityModel, threshold: float = 0.1,
                       bracket: tuple[float, float] = (1e-3, 1e3), quad: QuadratureSpec | None = None) -> float:
    """Smallest r (bisection in ln r) where cp_full departs from the London
    limit by more than ``threshold``; ``bracket`` is in units of lambda_min."""
    if not 0.0 < threshold < 1.0:
        raise DomainError("threshold must lie strictly between 0 and 1")
    quad = quad or QuadratureSpec(rel_tol=1e-12)
    lam = _lambda_min(model_a, model_b)
    if lam is None:
        raise DomainError("crossover needs transition-based atoms")

    def excess(log_r):
        r = math.exp(log_r)
        london = london_near(model_a, model_b, r)
        return abs(cp_full(PairSpec(model_a, model_b, r), quad).value - london) / abs(london) - threshold

    lo, hi = (math.log(b * lam) for b in bracket)
    if excess(lo) > 0 or excess(hi) < 0:
        raise NoCrossoverError("the deviation threshold is not crossed inside the bracket")
    root = optimize.bisect(excess, lo, hi, xtol=1e-12, rtol=1e-13, maxiter=200)
    return math.exp(root)


def cmd_crossover(args, atoms):
    ma, mb = _model(atoms["a"]), _model(atoms["b"])
    r = crossover_distance(ma, mb, args.threshold, (args.lo, args.hi), _quad(args) if args.rel_tol else None)
    lam = _lambda_min(ma, mb)
    table = ResultTable(["threshold", "r_crossover", "lambda_min", "r_over_lambda"],
                        [DIMENSIONLESS, LENGTH, LENGTH, DIMENSIONLESS])
    table.add(args.threshold, r, lam, r / lam)
    return table, EXIT_OK


# ---------------------------------------------------------------- parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write the table here instead of stdout")
    p.add_argument("--units", choices=tuple(UNIT_SYSTEMS), default="natural",
                   help="display units (inputs are always natural units)")
    p.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")


def _add_atoms(p: argparse.ArgumentParser, names: str, required: bool = True) -> None:
    for n in names:
        p.add_argument(f"--atom-{n}", required=required, help="JSON atom file or inline JSON object")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dispersion-qed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("two-body", help="dispersion energy of two atoms")
    _add_atoms(p, "ab")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--temperature", type=float, default=None)
    p.set_defaults(func=cmd_two_body)

    p = sub.add_parser("three-body", help="non-additive three-body energy")
    _add_atoms(p, "abc")
    p.add_argument("--side", type=float, help="equilateral triangle of this side")
    p.add_argument("--pos-a", type=_vector)
    p.add_argument("--pos-b", type=_vector)
    p.add_argument("--pos-c", type=_vector)
    p.add_argument("--mode", choices=("full", "far"), default="full")
    p.set_defaults(func=cmd_three_body)

    p = sub.add_parser("atom-wall", help="atom in front of a perfect mirror")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--lambda-min", type=float, default=None)
    p.set_defaults(func=cmd_atom_wall)

    p = sub.add_parser("pair-near-plate", help="two atoms near a perfect mirror")
    p.add_argument("--alpha-a", type=float, required=True)
    p.add_argument("--alpha-b", type=float, required=True)
    p.add_argument("--pos-a", type=_vector, required=True)
    p.add_argument("--pos-b", type=_vector, required=True)
    p.add_argument("--lambda-min", type=float, default=None)
    p.set_defaults(func=cmd_pair_near_plate)

    p = sub.add_parser("energy-density", help="vacuum energy densities around an atom or near a plate")
    _add_atoms(p, "a", required=False)
    p.add_argument("--r", type=float, nargs="+")
    p.add_argument("--plate", action="store_true")
    p.add_argument("--z", type=float, nargs="+")
    p.set_defaults(func=cmd_energy_density)

    p = sub.add_parser("correlation", help="vacuum field correlation tensor or correlation-route energy")
    _add_atoms(p, "ab", required=False)
    p.add_argument("--r", type=float)
    p.add_argument("--r-vec", type=_vector)
    p.set_defaults(func=cmd_correlation)

    for name, helptext in (("resonance", "resonance energy of a Bell pair at rest"),
                           ("accelerated", "coaccelerated atom pair")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--k0", type=float, default=1.0)
        p.add_argument("--dipole-a", type=_vector, default=(1.0, 0.0, 0.0))
        p.add_argument("--dipole-b", type=_vector, default=(1.0, 0.0, 0.0))
        p.add_argument("--parity", choices=("symmetric", "antisymmetric"), default="symmetric")
        if name == "resonance":
            p.add_argument("--r-vec", type=_vector, required=True)
            p.set_defaults(func=cmd_resonance)
        else:
            p.add_argument("--kind", choices=("scalar", "resonance"), default="scalar")
            p.add_argument("--a", type=float, required=True, help="proper acceleration")
            p.add_argument("--z", type=float, required=True, help="separation")
            p.add_argument("--omega0", type=float, default=1.0)
            p.add_argument("--coupling", type=float, default=1.0)
            p.set_defaults(func=cmd_accelerated)

    p = sub.add_parser("scan", help="sweep the separation and tabulate log-log slopes")
    _add_atoms(p, "a")
    _add_atoms(p, "bc", required=False)
    p.add_argument("--quantity", choices=("two-body", "london", "three-body", "density-electric",
                                          "density-magnetic"), default="two-body")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")
    p.add_argument("--in-wavelengths", action="store_true", help="start/stop in units of lambda_min")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("crossover", help="onset of retardation relative to the London law")
    _add_atoms(p, "ab")
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--lo", type=float, default=1e-3, help="bracket start in units of lambda_min")
    p.add_argument("--hi", type=float, default=1e3, help="bracket end in units of lambda_min")
    p.set_defaults(func=cmd_crossover)

    for sp in sub.choices.values():
        _add_common(sp)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        atoms = {n: _load_atom_source(getattr(args, f"atom_{n}"))
                 for n in "abc" if getattr(args, f"atom_{n}", None) is not None}
        table, code = args.func(args, atoms)
    except (DomainError, jsonschema.ValidationError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        if exc.best_estimate is not None:
            print(f"best estimate: {exc.best_estimate!r}", file=stderr)
        return EXIT_NUMERICAL
    table.metadata[:0] = [
        ("dispersion-qed", __version__),
        ("command", args.command),
        ("config-hash", _config_hash(_semantic_config(args, atoms))),
        ("units", args.units),
    ]
    text = table.to_json(args.units) if args.format == "json" else table.to_csv(args.units)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == EXIT_NUMERICAL:
        print("numerical failure in at least one row", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
